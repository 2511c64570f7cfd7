#include "ebethe/gauge.hpp"

#include <random>

namespace ebethe {

namespace {

constexpr double kGaugeWindowTol = 1e-6;
constexpr double kMuTol = 1e-12;

}  // namespace

GaugeParams::GaugeParams(cplx s, cplx t, const ModelParams& mp)
    : s_(s), t_(t), eta_(mp.eta()), tau_(mp.tau()), tau2_(mp.tau().scaled(2.0)) {
    const int window = 2 * static_cast<int>(mp.q());
    for (int k = -window; k <= window; ++k) {
        const cplx denom = theta(2, tau_k(k), tau2_) * theta(3, tau_k(k), tau2_);
        if (std::abs(denom) < kMuTol) {
            throw singular_gauge_error("GaugeParams: gamma_" + std::to_string(k) +
                                       " diverges for s=" + to_string(s) + ", t=" + to_string(t));
        }
    }
}

cplx GaugeParams::gamma_k(int k) const {
    return 1.0 / (theta(2, tau_k(k), tau2_) * theta(3, tau_k(k), tau2_));
}

GaugeParams GaugeParams::generic(const ModelParams& mp, uint64_t seed, std::span<const cplx> us) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    const double im_tau = mp.tau().im_tau();
    const int window = 2 * static_cast<int>(mp.q());

    for (int attempt = 0; attempt < 200; ++attempt) {
        const cplx s = 0.17 + 0.9 * unit(gen) + kI * im_tau * (0.31 + 0.2 * unit(gen));
        const cplx t = -0.29 + 0.9 * unit(gen) + kI * im_tau * (-0.23 + 0.2 * unit(gen));
        GaugeParams gp(s, t, mp);

        bool ok = true;
        for (int k = -window; k <= window && ok; ++k) {
            if (std::abs(theta(2, gp.tau_k(k), gp.tau_)) < kGaugeWindowTol) ok = false;
            if (std::abs(theta(2, gp.tau_k(k), gp.tau2_) * theta(3, gp.tau_k(k), gp.tau2_)) <
                kGaugeWindowTol) {
                ok = false;
            }
        }
        for (const cplx& u : us) {
            if (!ok) break;
            if (std::abs(gauge_matrix(0, u, gp).mu) < kGaugeWindowTol) ok = false;
        }
        if (ok) return gp;
    }
    throw singular_gauge_error("GaugeParams::generic: no admissible (s,t) found after 200 draws");
}

Vector2 intertwining_vector(cplx sarg, const ModularParam& tau) {
    const ModularParam tau2 = tau.scaled(2.0);
    Vector2 v;
    v << theta(1, sarg, tau2), theta(4, sarg, tau2);
    return v;
}

RowVector2 intertwining_covector(cplx sarg, const ModularParam& tau) {
    const ModularParam tau2 = tau.scaled(2.0);
    RowVector2 v;
    v << -theta(4, sarg, tau2), theta(1, sarg, tau2);
    return v;
}

cplx irf_weight(int k, int kp, int l, int kpp, cplx u, const GaugeParams& gp) {
    auto adm = [](int a, int b) { return std::abs(a - b) == 1; };
    if (!adm(k, kp) || !adm(kp, kpp) || !adm(l, kpp) || !adm(l, k)) return 0.0;

    const ModularParam& tau = gp.tau();
    const cplx eta = gp.eta();
    const cplx s = gp.s();

    if (kpp == k + 2 || kpp == k - 2) {
        // l == kp forced by admissibility
        return theta(1, u + eta, tau);
    }
    // kpp == k
    const int sign = kp - k;  // +-1
    const cplx ske = s + static_cast<double>(k) * eta;
    if (l == kp) {
        return theta(1, eta, tau) * theta(2, ske - static_cast<double>(sign) * u, tau) /
               theta(2, ske, tau);
    }
    // l == k - sign
    return theta(1, u, tau) * theta(2, ske + static_cast<double>(sign) * eta, tau) /
           theta(2, ske, tau);
}

GaugeMatrix gauge_matrix(int k, cplx u, const GaugeParams& gp, bool barred) {
    const ModularParam& tau2 = gp.tau2();
    const cplx gk = gp.gamma_k(k);
    const cplx th1s = theta(1, gp.s_k(k) + u, tau2);
    const cplx th4s = theta(4, gp.s_k(k) + u, tau2);
    const cplx th1t = theta(1, gp.t_k(k) - u, tau2);
    const cplx th4t = theta(4, gp.t_k(k) - u, tau2);

    const cplx mu = 2.0 * theta(1, gp.y() + u, tau2) * theta(4, gp.y() + u, tau2) /
                    (theta(2, 0.0, tau2) * theta(3, 0.0, tau2));
    if (std::abs(mu) < kMuTol) {
        throw singular_gauge_error("gauge_matrix: mu(u) vanishes at u = " + to_string(u));
    }

    GaugeMatrix g;
    g.mu = mu;
    if (!barred) {
        g.m << th1s, gk * th1t, th4s, gk * th4t;
    } else {
        g.m << gk * th1s, th1t, gk * th4s, th4t;
    }
    // adjugate / mu; det is the same mu(u) for both gaugings
    g.minv << g.m(1, 1) / mu, -g.m(0, 1) / mu, -g.m(1, 0) / mu, g.m(0, 0) / mu;
    return g;
}

GaugedMonodromy gauged_monodromy(int k, int l, cplx u, const ModelParams& mp,
                                 const GaugeParams& gp, bool barred) {
    const Monodromy t = monodromy(u, mp);
    const GaugeMatrix mk = gauge_matrix(k, u, gp, barred);
    const GaugeMatrix ml = gauge_matrix(l, u, gp, barred);

    GaugedMonodromy out;
    out.k = k;
    out.l = l;
    out.barred = barred;
    std::array<std::array<Matrix, 2>, 2> entry;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Matrix acc = Matrix::Zero(mp.dim(), mp.dim());
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    acc += mk.minv(i, a) * ml.m(b, j) * t.block(a, b);
                }
            }
            entry[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(acc);
        }
    }
    out.a = std::move(entry[0][0]);
    out.b = std::move(entry[0][1]);
    out.c = std::move(entry[1][0]);
    out.d = std::move(entry[1][1]);
    return out;
}

Vector vacuum_vector(int l, Side side, const ModelParams& mp, const GaugeParams& gp) {
    const int n = mp.num_sites();
    Vector out = Vector::Ones(1);
    for (int k = 1; k <= n; ++k) {
        Vector2 local;
        if (side == Side::right) {
            local = intertwining_vector(gp.s_k(k + l - 1) + mp.xi()[static_cast<std::size_t>(k - 1)],
                                        mp.tau());
        } else {
            local = intertwining_covector(gp.t_k(k + l) - mp.xi()[static_cast<std::size_t>(k - 1)],
                                          mp.tau())
                        .transpose();
        }
        Vector next(out.size() * 2);
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next(2 * i) = out(i) * local(0);
            next(2 * i + 1) = out(i) * local(1);
        }
        out = std::move(next);
    }
    return out;
}

Vector bethe_vector_term(int l, std::span<const cplx> params, Side side, const ModelParams& mp,
                         const GaugeParams& gp) {
    const int n = static_cast<int>(params.size());
    if (side == Side::right) {
        Vector v = vacuum_vector(l - n, Side::right, mp, gp);
        for (int j = n; j >= 1; --j) {
            const GaugedMonodromy g =
                gauged_monodromy(l - j, l + j, params[static_cast<std::size_t>(j - 1)], mp, gp, false);
            v = g.b * v;
        }
        return v;
    }
    RowVector v = vacuum_vector(l - n, Side::left, mp, gp).transpose();
    for (int j = n; j >= 1; --j) {
        const GaugedMonodromy g =
            gauged_monodromy(l - j, l + j, params[static_cast<std::size_t>(j - 1)], mp, gp, true);
        v = v * g.c;
    }
    return v.transpose();
}

Vector bethe_vector(int nu, std::span<const cplx> params, Side side, const ModelParams& mp,
                    const GaugeParams& gp) {
    const long q = mp.q();
    const double fourier_sign = (side == Side::right) ? -1.0 : 1.0;
    Vector acc = Vector::Zero(mp.dim());
    for (long l = 0; l < q; ++l) {
        const cplx phase = std::exp(fourier_sign * 2.0 * kPi * kI * static_cast<double>(l) *
                                    static_cast<double>(mp.p()) * static_cast<double>(nu) /
                                    static_cast<double>(q));
        acc += phase * bethe_vector_term(static_cast<int>(l), params, side, mp, gp);
    }
    return acc;
}

cplx transfer_eigenvalue_residue(int nu, int j, std::span<const cplx> roots,
                                 const ModelParams& mp) {
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();
    const cplx phase = std::exp(kI * kPi * eta * static_cast<double>(nu));
    const cplx uj = roots[static_cast<std::size_t>(j)];

    cplx prod_a = 1.0, prod_d = 1.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        if (static_cast<int>(k) == j) continue;
        prod_a *= theta(1, uj - roots[k] - eta, tau) / theta(1, uj - roots[k], tau);
        prod_d *= theta(1, uj - roots[k] + eta, tau) / theta(1, uj - roots[k], tau);
    }
    const cplx d0 = theta1_deriv(0.0, tau);
    return (phase * mp.a_of(uj) * theta(1, -eta, tau) * prod_a +
            mp.d_of(uj) / phase * theta(1, eta, tau) * prod_d) /
           d0;
}

cplx transfer_eigenvalue(int nu, cplx u, std::span<const cplx> roots, const ModelParams& mp) {
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();
    const cplx phase = std::exp(kI * kPi * eta * static_cast<double>(nu));

    int near = -1;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        if (lattice_distance(u - roots[k], tau) < 1e-12) {
            near = static_cast<int>(k);
            break;
        }
    }

    if (near < 0) {
        cplx term_a = phase * mp.a_of(u);
        cplx term_d = mp.d_of(u) / phase;
        for (const cplx& v : roots) {
            term_a *= theta(1, u - v - eta, tau) / theta(1, u - v, tau);
            term_d *= theta(1, u - v + eta, tau) / theta(1, u - v, tau);
        }
        return term_a + term_d;
    }

    // u collides with root `near`: the full expression is
    // [num(u)] / [prod_k theta1(u - v_k)] with a simple zero/zero; take the
    // derivative ratio, which is exact when the residue vanishes.
    const cplx res = transfer_eigenvalue_residue(nu, near, roots, mp);
    if (std::abs(res) > 1e-8) {
        throw pole_error("transfer_eigenvalue: pole at u = v_" + std::to_string(near + 1) +
                         " (roots off-shell, residue " + std::to_string(std::abs(res)) + ")");
    }
    auto numerator = [&](cplx z) {
        cplx na = phase * mp.a_of(z);
        cplx nd = mp.d_of(z) / phase;
        for (const cplx& v : roots) {
            na *= theta(1, z - v - eta, tau);
            nd *= theta(1, z - v + eta, tau);
        }
        return na + nd;
    };
    auto denominator_deriv = [&](cplx z) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < roots.size(); ++k) {
            cplx prod = theta1_deriv(z - roots[k], tau);
            for (std::size_t m = 0; m < roots.size(); ++m) {
                if (m != k) prod *= theta(1, z - roots[m], tau);
            }
            acc += prod;
        }
        return acc;
    };
    const double h = 1e-6;
    const cplx num_deriv = (numerator(u + h) - numerator(u - h)) / (2.0 * h);
    return num_deriv / denominator_deriv(u);
}

double u_action_check(int axis, int nu, std::span<const cplx> params, Side side,
                      const ModelParams& mp, const GaugeParams& gp) {
    if (axis != 1 && axis != 3) {
        throw std::invalid_argument("u_action_check: axis must be 1 or 3");
    }
    const int n = static_cast<int>(params.size());
    const Matrix ua = symmetry_operator(axis, mp.num_sites());
    const Vector psi = bethe_vector(nu, params, side, mp, gp);
    const double sign = (side == Side::right) ? 1.0 : -1.0;

    cplx phase;
    GaugeParams shifted = gp;
    if (axis == 3) {
        phase = (n % 2 == 0) ? 1.0 : -1.0;
        shifted = gp.shifted(1.0, 1.0, mp);
    } else {
        cplx sigma = -0.5 * mp.xi_sum() + 0.5 * static_cast<double>(n) * mp.eta();
        for (const cplx& u : params) sigma += u;
        phase = static_cast<double>((n % 2 == 0) ? 1 : -1) *
                std::exp(-sign * 2.0 * kPi * kI * sigma);
        shifted = gp.shifted(mp.tau().tau(), mp.tau().tau(), mp);
    }

    const Vector rhs = phase * bethe_vector(nu, params, side, mp, shifted);
    Vector lhs;
    if (side == Side::right) {
        lhs = ua * psi;
    } else {
        lhs = (psi.transpose() * ua).transpose();
    }
    const double scale = std::max(lhs.cwiseAbs().maxCoeff(), 1e-300);
    return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

}  // namespace ebethe
