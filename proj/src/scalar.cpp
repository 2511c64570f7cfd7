#include "ebethe/scalar.hpp"

#include <algorithm>
#include <numeric>

namespace ebethe {

namespace {

cplx fourier_phase(int l, int index, const ModelParams& mp, double sign) {
    return std::exp(sign * 2.0 * kPi * kI * static_cast<double>(l) *
                    static_cast<double>(mp.p()) * static_cast<double>(index) /
                    static_cast<double>(mp.q()));
}

cplx f_product(std::span<const cplx> left, cplx right, const ModelParams& mp) {
    cplx acc = 1.0;
    for (const cplx& v : left) acc *= f_fun(v, right, mp);
    return acc;
}

cplx f_product_rev(cplx left, std::span<const cplx> right, const ModelParams& mp) {
    cplx acc = 1.0;
    for (const cplx& v : right) acc *= f_fun(left, v, mp);
    return acc;
}

double hadamard_scale(const Matrix& m) {
    double scale = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) scale *= m.row(i).norm();
    return std::max(scale, 1e-300);
}

}  // namespace

cplx g_fun(cplx u, cplx v, const ModelParams& mp) {
    return theta(1, mp.eta(), mp.tau()) / theta(1, u - v, mp.tau());
}

cplx f_fun(cplx u, cplx v, const ModelParams& mp) {
    return theta(1, u - v + mp.eta(), mp.tau()) / theta(1, u - v, mp.tau());
}

cplx h_fun(cplx u, cplx v, const ModelParams& mp) {
    return theta(1, u - v + mp.eta(), mp.tau()) / theta(1, mp.eta(), mp.tau());
}

cplx w_n(std::span<const cplx> us, std::span<const cplx> vs, const ModularParam& tau) {
    if (us.size() != vs.size()) throw std::invalid_argument("w_n: size mismatch");
    const std::size_t n = us.size();
    cplx acc = 1.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            acc *= theta(1, us[a] - us[b], tau) * theta(1, vs[b] - vs[a], tau);
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) acc /= theta(1, us[p] - vs[q], tau);
    }
    return acc;
}

Matrix slavnov_matrix(int nu, int mu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                      const ModelParams& mp) {
    if (vs.size() != us.size() || vs.empty()) {
        throw std::invalid_argument("slavnov_matrix: need equally sized non-empty parameter sets");
    }
    const std::size_t n = vs.size();
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();

    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            for (const cplx shift : {cplx(0.0), eta, -eta}) {
                if (lattice_distance(us[k] - vs[j] + shift, tau) < 1e-10) {
                    throw degenerate_configuration_error(
                        "slavnov_matrix: u_" + std::to_string(k + 1) + " collides with v_" +
                        std::to_string(j + 1) + (shift == cplx(0.0) ? "" : " -+ eta"));
                }
            }
        }
    }

    const cplx d0 = theta1_deriv(0.0, tau);
    const cplx ph_nu = std::exp(kI * kPi * eta * static_cast<double>(nu));
    const cplx ph_mu = std::exp(kI * kPi * eta * static_cast<double>(mu));
    const cplx th_r = theta(1, r, tau);

    Matrix t(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx afk = mp.a_of(us[k]) * f_product(vs, us[k], mp);
        const cplx dfk = mp.d_of(us[k]) * f_product_rev(us[k], vs, mp);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d = us[k] - vs[j];
            const cplx r0 = theta(1, d + r, tau) / theta(1, d, tau);
            const cplx rm = theta(1, d - eta + r, tau) / theta(1, d - eta, tau);
            const cplx rp = theta(1, d + eta + r, tau) / theta(1, d + eta, tau);
            t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                d0 / th_r *
                (afk * (ph_nu * r0 - ph_mu * rm) + dfk * (r0 / ph_nu - rp / ph_mu));
        }
    }
    return t;
}

double slavnov_det_scale(int nu, int mu, std::span<const cplx> vs, std::span<const cplx> us,
                         cplx r, const ModelParams& mp) {
    const std::size_t n = vs.size();
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();
    const double d0 = std::abs(theta1_deriv(0.0, tau) / theta(1, r, tau));
    (void)nu;
    (void)mu;

    Matrix mags(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double afk = std::abs(mp.a_of(us[k]) * f_product(vs, us[k], mp));
        const double dfk = std::abs(mp.d_of(us[k]) * f_product_rev(us[k], vs, mp));
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d = us[k] - vs[j];
            const double r0 = std::abs(theta(1, d + r, tau) / theta(1, d, tau));
            const double rm = std::abs(theta(1, d - eta + r, tau) / theta(1, d - eta, tau));
            const double rp = std::abs(theta(1, d + eta + r, tau) / theta(1, d + eta, tau));
            mags(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                d0 * (afk * (r0 + rm) + dfk * (r0 + rp));
        }
    }
    double scale = 1.0;
    for (Eigen::Index i = 0; i < mags.rows(); ++i) scale *= mags.row(i).norm();
    return std::max(scale, 1e-300);
}

cplx slavnov_entry_phi_form(int nu, int mu, std::span<const cplx> vs, std::span<const cplx> us,
                            cplx r, int j, int k, const ModelParams& mp) {
    std::vector<cplx> shifted(vs.begin(), vs.end());
    shifted[static_cast<std::size_t>(j)] -= r;
    const cplx t_nu = transfer_eigenvalue(nu, us[static_cast<std::size_t>(k)], vs, mp);
    const cplx t_mu = transfer_eigenvalue(mu, us[static_cast<std::size_t>(k)], shifted, mp);
    return kronecker_phi(us[static_cast<std::size_t>(k)] - vs[static_cast<std::size_t>(j)], r,
                         mp.tau()) *
           (t_nu - t_mu);
}

Matrix slavnov_matrix_derivative_limit(int nu, std::span<const cplx> vs,
                                       std::span<const cplx> us, const ModelParams& mp) {
    const std::size_t n = vs.size();
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();
    const cplx ph_nu = std::exp(kI * kPi * eta * static_cast<double>(nu));

    Matrix t(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ta = ph_nu * mp.a_of(us[k]) * f_product(vs, us[k], mp);
        const cplx td = mp.d_of(us[k]) * f_product_rev(us[k], vs, mp) / ph_nu;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d = us[k] - vs[j];
            const cplx da = ta * (theta1_log_deriv(d, tau) - theta1_log_deriv(d - eta, tau));
            const cplx dd = td * (theta1_log_deriv(d, tau) - theta1_log_deriv(d + eta, tau));
            t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = da + dd;
        }
    }
    return t;
}

cplx phi1_factor(int nu, int mu, cplx r, cplx x, const ModelParams& mp) {
    const long q = mp.q();
    const ModularParam& tau = mp.tau();
    const int m = static_cast<int>((((mu - nu) % q) + q) % q);

    if (q % 2 == 0) {
        if (m % 2 != 0) return 0.0;  // parity selection rule
        const ModularParam half(static_cast<double>(q) / 2.0 * tau.tau());
        const cplx qx2 = static_cast<double>(q) * x / 2.0;
        const cplx mt2 = static_cast<double>(m) * tau.tau() / 2.0;
        if (std::abs(theta(1, qx2, half)) < 1e-12) {
            throw degenerate_configuration_error("phi1_factor: singular x");
        }
        if (m == 0 && std::abs(r.imag()) < 1e-10 * tau.tau().imag()) {
            const long j = std::lround(r.real());
            if (std::abs(r - static_cast<double>(j)) < 1e-10) {
                // 0/0 at integer r: the limit picks up (-1)^j from the half-tau factors
                return (j % 2 == 0 ? 1.0 : -1.0) * phi1_diagonal_limit(mp);
            }
        }
        return std::exp(kI * kPi * static_cast<double>(m) * x) * theta(1, r, tau) *
               theta(1, r + qx2 + mt2, half) / (theta(1, qx2, half) * theta(1, r + mt2, half));
    }

    const ModularParam big(static_cast<double>(q) * tau.tau());
    const int ell = m - ((1 - (m % 2 == 0 ? 1 : -1)) / 2) * static_cast<int>(q);
    const cplx qx = static_cast<double>(q) * x;
    const cplx lt2 = static_cast<double>(ell) * tau.tau() / 2.0;
    if (std::abs(theta(1, qx, big)) < 1e-12) {
        throw degenerate_configuration_error("phi1_factor: singular x");
    }
    if (ell == 0 && std::abs(r.imag()) < 1e-10 * tau.tau().imag()) {
        const long j = std::lround(r.real());
        if (std::abs(r - static_cast<double>(j)) < 1e-10) {
            return (j % 2 == 0 ? 1.0 : -1.0) * phi1_diagonal_limit(mp);
        }
    }
    return std::exp(kI * kPi * static_cast<double>(ell) * x) * theta(1, r, tau) *
           theta(1, r + qx + lt2, big) / (theta(1, qx, big) * theta(1, r + lt2, big));
}

cplx phi1_diagonal_limit(const ModelParams& mp) {
    const double q = static_cast<double>(mp.q());
    const ModularParam scaled(mp.q() % 2 == 0 ? q / 2.0 * mp.tau().tau() : q * mp.tau().tau());
    return theta1_deriv(0.0, mp.tau()) / theta1_deriv(0.0, scaled);
}

cplx gaudin_kernel(cplx u, const ModelParams& mp) {
    const ModularParam& tau = mp.tau();
    return theta1_log_deriv(u - mp.eta(), tau) - theta1_log_deriv(u + mp.eta(), tau);
}

cplx ad_log_derivative(cplx v, const ModelParams& mp) {
    cplx acc = 0.0;
    for (const cplx& xi : mp.xi()) {
        acc += theta1_log_deriv(v - xi + mp.eta(), mp.tau()) -
               theta1_log_deriv(v - xi, mp.tau());
    }
    return acc;
}

Matrix gaudin_matrix(std::span<const cplx> vs, const ModelParams& mp) {
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (lattice_distance(vs[i] - vs[j], mp.tau()) < 1e-10) {
                throw degenerate_configuration_error("gaudin_matrix: colliding roots");
            }
        }
        for (const cplx& xi : mp.xi()) {
            if (lattice_distance(vs[i] - xi, mp.tau()) < 1e-10 ||
                lattice_distance(vs[i] - xi + mp.eta(), mp.tau()) < 1e-10) {
                throw degenerate_configuration_error("gaudin_matrix: root on the xi locus");
            }
        }
    }

    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx diag = ad_log_derivative(vs[i], mp);
        for (std::size_t j = 0; j < n; ++j) diag += gaudin_kernel(vs[i] - vs[j], mp);
        for (std::size_t k = 0; k < n; ++k) {
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                gaudin_kernel(vs[i] - vs[k], mp);
        }
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= diag;
    }
    return g;
}

ScalarProductReport normalized_scalar_product(int nu, std::span<const cplx> vs, int mu,
                                              std::span<const cplx> us, const ModelParams& mp,
                                              const GaugeParams& gp) {
    if (vs.size() != us.size()) {
        throw std::invalid_argument("normalized_scalar_product: parameter counts differ");
    }
    const BetheSystem sys(mp, nu);
    const auto res = bethe_residuals(vs, sys);
    if (*std::max_element(res.begin(), res.end()) > 1e-9) {
        throw degenerate_configuration_error(
            "normalized_scalar_product: left roots are not on-shell");
    }

    const std::size_t n = vs.size();
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();

    ScalarProductReport rep;
    rep.nu = nu;
    rep.mu = mu;
    rep.vs.assign(vs.begin(), vs.end());
    rep.us.assign(us.begin(), us.end());
    rep.x = gp.x();
    rep.y = gp.y();
    cplx r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += vs[i] - us[i];
    rep.r = r;

    const Matrix g = gaudin_matrix(vs, mp);
    rep.gaudin_det = dense_determinant(g);
    if (std::abs(rep.gaudin_det) < 1e-12 * hadamard_scale(g)) {
        throw degenerate_configuration_error("normalized_scalar_product: degenerate Gaudin matrix");
    }

    cplx prefactor = std::exp(kI * kPi * eta * static_cast<double>(n) * static_cast<double>(nu));
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            prefactor *= theta(1, us[p] - vs[q], tau) / theta(1, vs[p] - vs[q] + eta, tau);
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            prefactor *= theta(1, vs[a] - vs[b], tau) / theta(1, us[a] - us[b], tau);
        }
    }
    cplx d_bar = 1.0;
    for (const cplx& v : vs) d_bar *= mp.d_of(v);

    const bool same_class = ((mu - nu) % mp.q()) == 0;
    const double r_scale = std::abs(theta1_deriv(0.0, tau));
    const long m_shift = std::lround(r.imag() / tau.tau().imag());
    const long j_shift = std::lround((r - static_cast<double>(m_shift) * tau.tau()).real());
    if (same_class && m_shift == 0 && std::abs(theta(1, r, tau)) < 1e-8 * r_scale) {
        // r near an integer: the determinant is 1-periodic in r and tends to
        // the derivative matrix, while phi1(j)/phi1(0) contributes (-1)^j
        rep.det_value = dense_determinant(slavnov_matrix_derivative_limit(nu, vs, us, mp));
        rep.phi1 = phi1_diagonal_limit(mp);
        const double sign = (j_shift % 2 == 0) ? 1.0 : -1.0;
        rep.value = sign * prefactor * rep.det_value / (d_bar * rep.gaudin_det);
        return rep;
    }

    auto evaluate = [&](cplx rr) {
        const cplx det = dense_determinant(slavnov_matrix(nu, mu, vs, us, rr, mp));
        const cplx phi = phi1_factor(nu, mu, rr, gp.x(), mp);
        return std::make_pair(det, phi);
    };

    if (std::abs(theta(1, r, tau)) < 1e-6 * r_scale) {
        // entries carry a 1/theta1(r) pole; evaluate the product on both sides
        // and average (the combination is regular, and may vanish)
        const double h = 1e-5;
        const auto [det_p, phi_p] = evaluate(r + h);
        const auto [det_m, phi_m] = evaluate(r - h);
        rep.det_value = 0.5 * (det_p + det_m);
        rep.phi1 = 0.5 * (phi_p + phi_m);
        rep.value = prefactor * 0.5 * (det_p * phi_p + det_m * phi_m) /
                    (phi1_diagonal_limit(mp) * d_bar * rep.gaudin_det);
        return rep;
    }

    const auto [det, phi] = evaluate(r);
    rep.det_value = det;
    rep.phi1 = phi;
    rep.value = prefactor * phi / phi1_diagonal_limit(mp) * det / (d_bar * rep.gaudin_det);
    return rep;
}

namespace {

cplx free_fermion_common(int nu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                         const ModelParams& mp, bool shifted) {
    const std::size_t n = vs.size();
    const ModularParam& tau = mp.tau();
    const ModularParam tau2 = tau.scaled(2.0);
    const cplx half_phase = std::exp(kI * kPi * static_cast<double>(nu) / 2.0);
    const double sign_n = (n % 2 == 0) ? 1.0 : -1.0;

    cplx acc = std::pow(2.0 * theta1_deriv(0.0, tau2), static_cast<double>(n));
    if (!shifted) {
        acc *= theta(4, r + 2.0 * (std::accumulate(us.begin(), us.end(), cplx(0.0)) -
                                   std::accumulate(vs.begin(), vs.end(), cplx(0.0))),
                     tau2) /
               theta(4, r, tau2);
    } else {
        acc *= theta(1, r + 2.0 * (std::accumulate(us.begin(), us.end(), cplx(0.0)) -
                                   std::accumulate(vs.begin(), vs.end(), cplx(0.0))),
                     tau2) /
               theta(1, r, tau2);
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            acc *= theta(2, us[a] - vs[b], tau) / theta(1, us[a] - vs[b], tau);
        }
    }
    std::vector<cplx> us2, vs2;
    for (const cplx& u : us) us2.push_back(2.0 * u);
    for (const cplx& v : vs) vs2.push_back(2.0 * v);
    acc *= w_n(us2, vs2, tau2);
    for (const cplx& u : us) {
        // the d-coefficient keeps its sign in both parity classes; only the
        // theta4/theta1 kernel switches
        acc *= sign_n * half_phase * mp.a_of(u) + mp.d_of(u) / half_phase;
    }
    return acc;
}

}  // namespace

cplx free_fermion_det_diagonal(int nu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                               const ModelParams& mp) {
    if (mp.p() != 1 || mp.q() != 4) {
        throw std::invalid_argument("free_fermion forms require eta = 1/2");
    }
    return free_fermion_common(nu, vs, us, r, mp, false);
}

cplx free_fermion_det_shifted(int nu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                              const ModelParams& mp) {
    if (mp.p() != 1 || mp.q() != 4) {
        throw std::invalid_argument("free_fermion forms require eta = 1/2");
    }
    return free_fermion_common(nu, vs, us, r, mp, true);
}

cplx free_fermion_scalar(int nu, std::span<const cplx> vs, int mu, std::span<const cplx> us,
                         const ModelParams& mp, const GaugeParams& gp) {
    if (mp.p() != 1 || mp.q() != 4) {
        throw std::invalid_argument("free_fermion_scalar requires eta = 1/2");
    }
    const int diff = static_cast<int>((((mu - nu) % 4) + 4) % 4);
    if (diff % 2 != 0) return 0.0;  // selection rule
    const bool shifted = (diff == 2);

    const std::size_t n = vs.size();
    const ModularParam& tau = mp.tau();
    const ModularParam tau2 = tau.scaled(2.0);
    const double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx nu_phase = std::exp(kI * kPi * static_cast<double>(nu));

    cplx r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += vs[i] - us[i];

    cplx acc = (shifted ? -1.0 : 1.0) * sign_n * theta1_deriv(0.0, tau2) /
               theta1_deriv(0.0, tau);
    acc *= std::pow(2.0 * theta1_deriv(0.0, tau2) / theta(2, 0.0, tau), static_cast<double>(n));

    std::vector<cplx> us2, vs2;
    for (const cplx& u : us) us2.push_back(2.0 * u);
    for (const cplx& v : vs) vs2.push_back(2.0 * v);
    acc *= w_n(us2, vs2, tau2) / w_n(us, vs, tau);
    acc *= phi1_factor(nu, mu, r, gp.x(), mp);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            acc *= theta(2, us[a] - vs[b], tau) / theta(1, us[a] - vs[b], tau);
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            acc *= theta(1, vs[a] - vs[b], tau) / theta(2, vs[a] - vs[b], tau);
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        acc *= (sign_n * nu_phase * mp.a_of(us[p]) + mp.d_of(us[p])) /
               (mp.d_of(vs[p]) * ad_log_derivative(vs[p], mp));
    }
    return acc;
}

NullVectorReport null_vector_test(int p, std::span<const cplx> us_rest, int mu,
                                  std::span<const BetheState> states, const ModelParams& mp,
                                  const GaugeParams& gp) {
    const int n = mp.n_roots();
    if (static_cast<int>(us_rest.size()) != n - 2) {
        throw std::invalid_argument("null_vector_test: need n-2 additional parameters");
    }
    const cplx xi_p = mp.xi()[static_cast<std::size_t>(p - 1)];
    std::vector<cplx> us = {xi_p, xi_p - mp.eta()};
    us.insert(us.end(), us_rest.begin(), us_rest.end());

    NullVectorReport rep;
    for (const BetheState& st : states) {
        cplx r = 0.0;
        for (std::size_t i = 0; i < st.roots.size(); ++i) r += st.roots[i] - us[i];
        const Matrix t = slavnov_matrix(st.nu, mu, st.roots, us, r, mp);
        rep.det_ratios.push_back(std::abs(dense_determinant(t)) / hadamard_scale(t));
    }

    // generic control with a displaced second parameter
    std::vector<cplx> generic = us;
    generic[1] += cplx(0.213, 0.037);
    if (!states.empty()) {
        const BetheState& st = states[0];
        cplx r = 0.0;
        for (std::size_t i = 0; i < st.roots.size(); ++i) r += st.roots[i] - generic[i];
        const Matrix t = slavnov_matrix(st.nu, mu, st.roots, generic, r, mp);
        rep.generic_det_ratio = std::abs(dense_determinant(t)) / hadamard_scale(t);
    }

    const Vector null_candidate = bethe_vector(mu, us, Side::right, mp, gp);
    const Vector generic_vec = bethe_vector(mu, generic, Side::right, mp, gp);
    rep.vector_norm_ratio = null_candidate.norm() / std::max(generic_vec.norm(), 1e-300);
    return rep;
}

double homogeneous_system_residual(const Matrix& xtable, int nu, std::span<const cplx> vs,
                                   std::span<const cplx> us, const ModelParams& mp,
                                   const GaugeParams& gp) {
    const int n_plus_1 = static_cast<int>(us.size());
    const long q = mp.q();
    if (xtable.rows() != n_plus_1 || xtable.cols() != static_cast<Eigen::Index>(q)) {
        throw std::invalid_argument("homogeneous_system_residual: X table has wrong shape");
    }
    const ModularParam& tau = mp.tau();

    auto tau_l = [&](long l) { return gp.tau_k(static_cast<int>(l)); };
    auto wrap = [&](long l) { return ((l % q) + q) % q; };

    double worst = 0.0;
    for (int j = 0; j < n_plus_1; ++j) {
        for (long l = 0; l < q; ++l) {
            cplx acc = 0.0;
            double scale = 0.0;
            for (int k = 0; k < n_plus_1; ++k) {
                std::vector<cplx> others;
                for (int m = 0; m < n_plus_1; ++m) {
                    if (m != k) others.push_back(us[static_cast<std::size_t>(m)]);
                }
                const cplx term_a =
                    mp.a_of(us[static_cast<std::size_t>(k)]) *
                    f_product(others, us[static_cast<std::size_t>(k)], mp) *
                    theta(1, us[static_cast<std::size_t>(j)] - us[static_cast<std::size_t>(k)] +
                                 tau_l(l + 1) + 0.5,
                          tau) /
                    (h_fun(us[static_cast<std::size_t>(j)], us[static_cast<std::size_t>(k)], mp) *
                     theta(1, tau_l(l + 1) + 0.5, tau)) *
                    xtable(k, static_cast<Eigen::Index>(wrap(l + 1)));
                const cplx term_d =
                    mp.d_of(us[static_cast<std::size_t>(k)]) *
                    f_product_rev(us[static_cast<std::size_t>(k)], others, mp) *
                    theta(1, us[static_cast<std::size_t>(j)] - us[static_cast<std::size_t>(k)] +
                                 tau_l(l - 1) + 0.5,
                          tau) /
                    (h_fun(us[static_cast<std::size_t>(k)], us[static_cast<std::size_t>(j)], mp) *
                     theta(1, tau_l(l - 1) + 0.5, tau)) *
                    xtable(k, static_cast<Eigen::Index>(wrap(l - 1)));
                acc += term_a + term_d;
                scale = std::max({scale, std::abs(term_a), std::abs(term_d)});
                if (k == j) {
                    const cplx diag = transfer_eigenvalue(nu, us[static_cast<std::size_t>(j)], vs, mp) *
                                      xtable(k, static_cast<Eigen::Index>(l));
                    acc -= diag;
                    scale = std::max(scale, std::abs(diag));
                }
            }
            worst = std::max(worst, std::abs(acc) / std::max(scale, 1e-300));
        }
    }
    return worst;
}

cplx y_transform(const Matrix& xtable, int mu, int k, cplx w0, std::span<const cplx> us,
                 const ModelParams& mp, const GaugeParams& gp) {
    const long q = mp.q();
    const ModularParam& tau = mp.tau();
    cplx u_check = 0.0;
    for (const cplx& u : us) u_check += u;

    cplx acc = 0.0;
    for (long l = 0; l < q; ++l) {
        const cplx numer = theta(1, static_cast<double>(l) * mp.eta() + w0 + u_check -
                                        us[static_cast<std::size_t>(k)],
                                 tau);
        const cplx denom = theta(1, static_cast<double>(l) * mp.eta() + gp.x(), tau);
        if (std::abs(denom) < 1e-12) {
            throw degenerate_configuration_error("y_transform: singular x");
        }
        acc += numer / denom * fourier_phase(static_cast<int>(l), mu, mp, -1.0) *
               xtable(k, static_cast<Eigen::Index>(l));
    }
    return acc;
}

}  // namespace ebethe
