#include "ebethe/bethe.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace ebethe {

namespace {

constexpr double kCollisionTol = 1e-10;

cplx bethe_lhs(cplx v, const BetheSystem& sys) {
    const ModularParam& tau = sys.mp.tau();
    const cplx eta = sys.mp.eta();
    cplx acc = std::exp(2.0 * kPi * kI * eta * static_cast<double>(sys.nu));
    for (const cplx& xi : sys.mp.xi()) {
        const cplx den = theta(1, v - xi, tau);
        if (std::abs(den) < 1e-300) {
            throw degenerate_configuration_error("bethe_residuals: root collides with xi");
        }
        acc *= theta(1, v - xi + eta, tau) / den;
    }
    return acc;
}

cplx bethe_rhs(std::size_t j, std::span<const cplx> roots, const BetheSystem& sys) {
    const ModularParam& tau = sys.mp.tau();
    const cplx eta = sys.mp.eta();
    cplx acc = 1.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        if (k == j) continue;
        acc *= theta(1, roots[j] - roots[k] + eta, tau) / theta(1, roots[j] - roots[k] - eta, tau);
    }
    return acc;
}

// Entire reformulation F_j = LHS-part - RHS-part used by the Newton solver.
struct EntireSystem {
    const BetheSystem& sys;

    // Analytic Jacobian via log-derivatives of the two entire products.
    void fill(std::span<const cplx> v, Vector& f, Matrix& jac) const {
        const ModularParam& tau = sys.mp.tau();
        const cplx eta = sys.mp.eta();
        const std::size_t n = v.size();
        for (std::size_t j = 0; j < n; ++j) {
            cplx t1 = std::exp(2.0 * kPi * kI * eta * static_cast<double>(sys.nu));
            cplx t2 = 1.0;
            for (const cplx& xi : sys.mp.xi()) {
                t1 *= theta(1, v[j] - xi + eta, tau);
                t2 *= theta(1, v[j] - xi, tau);
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                t1 *= theta(1, v[j] - v[k] - eta, tau);
                t2 *= theta(1, v[j] - v[k] + eta, tau);
            }
            f(static_cast<Eigen::Index>(j)) = t1 - t2;

            cplx ld1 = 0.0, ld2 = 0.0;
            for (const cplx& xi : sys.mp.xi()) {
                ld1 += theta1_log_deriv(v[j] - xi + eta, tau);
                ld2 += theta1_log_deriv(v[j] - xi, tau);
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                ld1 += theta1_log_deriv(v[j] - v[k] - eta, tau);
                ld2 += theta1_log_deriv(v[j] - v[k] + eta, tau);
            }
            jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = t1 * ld1 - t2 * ld2;
            for (std::size_t m = 0; m < n; ++m) {
                if (m == j) continue;
                const cplx d1 = -theta1_log_deriv(v[j] - v[m] - eta, tau);
                const cplx d2 = -theta1_log_deriv(v[j] - v[m] + eta, tau);
                jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = t1 * d1 - t2 * d2;
            }
        }
    }
};

double entire_residual_scale(std::span<const cplx> v, const BetheSystem& sys) {
    // scale against which F_j is compared: the larger of the two products
    const ModularParam& tau = sys.mp.tau();
    const cplx eta = sys.mp.eta();
    double scale = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        double t1 = 1.0, t2 = 1.0;
        for (const cplx& xi : sys.mp.xi()) {
            t1 *= std::abs(theta(1, v[j] - xi + eta, tau));
            t2 *= std::abs(theta(1, v[j] - xi, tau));
        }
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k == j) continue;
            t1 *= std::abs(theta(1, v[j] - v[k] - eta, tau));
            t2 *= std::abs(theta(1, v[j] - v[k] + eta, tau));
        }
        scale = std::max(scale, std::max(t1, t2));
    }
    return std::max(scale, 1e-300);
}

bool roots_collide(std::span<const cplx> roots, const ModularParam& tau) {
    for (std::size_t j = 0; j < roots.size(); ++j) {
        for (std::size_t k = j + 1; k < roots.size(); ++k) {
            if (lattice_distance(roots[j] - roots[k], tau) < kCollisionTol) return true;
        }
    }
    return false;
}

std::string state_key(const BetheState& st) {
    std::string key = std::to_string(st.nu);
    for (const cplx& v : st.roots) {
        key += "|" + std::to_string(std::llround(v.real() * 1e7)) + "," +
               std::to_string(std::llround(v.imag() * 1e7));
    }
    return key;
}

std::optional<BetheState> make_state(std::vector<cplx> roots, int nu, const ModelParams& mp,
                                     const SolveOptions& opts) {
    canonicalize_state(roots, nu, mp);
    if (roots_collide(roots, mp.tau())) return std::nullopt;
    const BetheSystem sys(mp, nu);
    BetheState st;
    st.nu = nu;
    st.roots = std::move(roots);
    st.residuals = bethe_residuals(st.roots, sys);
    const double worst = *std::max_element(st.residuals.begin(), st.residuals.end());
    if (worst > opts.residual_tol) return std::nullopt;
    const SumRuleReport sr = sum_rule_defect(st.roots, nu, mp);
    if (std::abs(sr.defect) > opts.sum_rule_tol) return std::nullopt;
    st.onshell = true;
    st.sumrule_ints = {sr.nu1, sr.nu3};
    return st;
}

void sort_states(std::vector<BetheState>& out) {
    std::sort(out.begin(), out.end(), [](const BetheState& a, const BetheState& b) {
        if (a.nu != b.nu) return a.nu < b.nu;
        for (std::size_t i = 0; i < std::min(a.roots.size(), b.roots.size()); ++i) {
            if (std::abs(a.roots[i].imag() - b.roots[i].imag()) > 1e-9) {
                return a.roots[i].imag() < b.roots[i].imag();
            }
            if (std::abs(a.roots[i].real() - b.roots[i].real()) > 1e-9) {
                return a.roots[i].real() < b.roots[i].real();
            }
        }
        return false;
    });
}

std::vector<BetheState> solve_free_fermion(const ModelParams& mp, const SolveOptions& opts);
std::vector<BetheState> solve_newton(const ModelParams& mp, const SolveOptions& opts);

}  // namespace

std::vector<double> bethe_residuals(std::span<const cplx> roots, const BetheSystem& sys) {
    if (roots_collide(roots, sys.mp.tau())) {
        throw degenerate_configuration_error("bethe_residuals: colliding roots");
    }
    std::vector<double> out;
    out.reserve(roots.size());
    for (std::size_t j = 0; j < roots.size(); ++j) {
        const cplx lhs = bethe_lhs(roots[j], sys);
        const cplx rhs = bethe_rhs(j, roots, sys);
        out.push_back(std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
    }
    return out;
}

cplx reduce_to_fundamental(cplx v, const ModularParam& tau) {
    // snap exact-boundary coefficients so v + tau reduces to v, not itself
    const double beta = v.imag() / tau.im_tau();
    const double kb = std::floor(beta + 1e-9);
    v -= kb * tau.tau();
    v -= std::floor(v.real() + 1e-9);
    return v;
}

SumRuleReport sum_rule_defect(std::span<const cplx> roots, int nu, const ModelParams& mp) {
    const long n = static_cast<long>(roots.size());
    const cplx tau = mp.tau().tau();
    cplx sum = 0.0;
    for (const cplx& v : roots) sum += v;

    // exact form: 2 sum(v) - sum(xi) + n eta - n = w + nu_exact * tau with
    // integer w; nu1 = w mod 2, and nu_exact is the integer lift of nu
    // constrained to nu modulo Q.
    const long q = mp.q();
    const cplx z = 2.0 * sum - mp.xi_sum() + static_cast<double>(n) * mp.eta() -
                   static_cast<double>(n);
    const double raw = z.imag() / tau.imag();
    const long nu_tilde =
        nu + q * std::lround((raw - static_cast<double>(nu)) / static_cast<double>(q));
    const long w = std::lround((z - static_cast<double>(nu_tilde) * tau).real());

    SumRuleReport rep;
    rep.defect = 0.5 * (z - static_cast<double>(w) - static_cast<double>(nu_tilde) * tau);
    rep.nu1 = static_cast<int>(((w % 2) + 2) % 2);
    rep.nu3 = static_cast<int>((((-n - nu_tilde) % 2) + 2) % 2);
    rep.nu_exact = static_cast<int>(nu_tilde);
    return rep;
}

void canonicalize_state(std::vector<cplx>& roots, int& nu, const ModelParams& mp) {
    const ModularParam& tau = mp.tau();
    long tau_shifts = 0;
    for (cplx& v : roots) {
        const double beta = v.imag() / tau.im_tau();
        const long kb = static_cast<long>(std::floor(beta + 1e-9));
        v -= static_cast<double>(kb) * tau.tau();
        v -= std::floor(v.real() + 1e-9);
        tau_shifts += kb;
    }
    // (nu, v + tau) represents the same state as (nu - 2, v)
    const long q = mp.q();
    long adjusted = (static_cast<long>(nu) - 2 * tau_shifts) % q;
    if (adjusted < 0) adjusted += q;
    nu = static_cast<int>(adjusted);

    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (std::abs(a.imag() - b.imag()) > 1e-11) return a.imag() < b.imag();
        return a.real() < b.real();
    });
}

std::vector<BetheState> solve_bethe_n2(const ModelParams& mp) {
    if (mp.num_sites() != 2) throw std::invalid_argument("solve_bethe_n2: requires N = 2");
    const cplx tau = mp.tau().tau();
    const cplx center = 0.5 * (mp.xi()[0] + mp.xi()[1] - mp.eta());
    const SolveOptions opts{.residual_tol = 1e-11, .sum_rule_tol = 1e-9};

    std::vector<BetheState> out;
    const std::vector<std::pair<cplx, int>> table = {
        {0.0, 0}, {0.5, 0}, {tau / 2.0, 1}, {(tau + 1.0) / 2.0, 1}};
    for (const auto& [omega, nu] : table) {
        auto st = make_state({center + omega}, nu, mp, opts);
        if (!st) {
            throw degenerate_configuration_error("solve_bethe_n2: closed-form state failed checks");
        }
        out.push_back(std::move(*st));
    }
    sort_states(out);
    return out;
}

namespace {

std::vector<BetheState> solve_free_fermion(const ModelParams& mp, const SolveOptions& opts) {
    if (mp.p() != 1 || mp.q() != 4) {
        throw std::invalid_argument("free-fermion solver requires eta = 1/2");
    }
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();
    const int n = mp.n_roots();

    std::vector<BetheState> out;
    std::vector<std::string> seen;
    for (int nu = 0; nu < 4; ++nu) {
        // e^{i pi nu} a(v)/d(v) = (-1)^{n-1}  =>  a/d = target
        const cplx target = static_cast<double>((n - 1) % 2 == 0 ? 1 : -1) *
                            std::exp(-kI * kPi * static_cast<double>(nu));

        // 1-D Newton on a(v) - target d(v) from a grid of starts
        std::vector<cplx> roots;
        const int grid = 8;
        for (int gi = 0; gi < grid; ++gi) {
            for (int gj = 0; gj < grid; ++gj) {
                cplx v = (gi + 0.37) / grid + tau.tau() * ((gj + 0.41) / grid);
                bool converged = false;
                for (int iter = 0; iter < 80; ++iter) {
                    cplx fa = 1.0, fd = 1.0, lda = 0.0, ldd = 0.0;
                    bool near_pole = false;
                    for (const cplx& xi : mp.xi()) {
                        if (lattice_distance(v - xi, tau) < 1e-9 ||
                            lattice_distance(v - xi + eta, tau) < 1e-9) {
                            near_pole = true;
                            break;
                        }
                        fa *= theta(1, v - xi + eta, tau);
                        fd *= theta(1, v - xi, tau);
                        lda += theta1_log_deriv(v - xi + eta, tau);
                        ldd += theta1_log_deriv(v - xi, tau);
                    }
                    if (near_pole) break;
                    const cplx f = fa - target * fd;
                    const cplx df = fa * lda - target * fd * ldd;
                    if (std::abs(f) < 1e-14 * (std::abs(fa) + std::abs(fd))) {
                        converged = true;
                        break;
                    }
                    if (std::abs(df) < 1e-280) break;
                    cplx step = f / df;
                    if (std::abs(step) > 0.45) step *= 0.45 / std::abs(step);
                    v -= step;
                }
                if (!converged) continue;
                v = reduce_to_fundamental(v, tau);
                bool dup = false;
                for (const cplx& w : roots) {
                    if (lattice_distance(v - w, tau) < 1e-8) dup = true;
                }
                if (!dup) roots.push_back(v);
            }
        }
        std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
            if (std::abs(a.imag() - b.imag()) > 1e-11) return a.imag() < b.imag();
            return a.real() < b.real();
        });

        // pick n-subsets passing the full residual and sum-rule filters
        const int cnt = static_cast<int>(roots.size());
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::function<void(int, int)> choose = [&](int start, int depth) {
            if (depth == n) {
                std::vector<cplx> subset;
                for (int i : idx) subset.push_back(roots[static_cast<std::size_t>(i)]);
                try {
                    auto st = make_state(std::move(subset), nu, mp, opts);
                    if (st) {
                        const std::string key = state_key(*st);
                        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                            seen.push_back(key);
                            out.push_back(std::move(*st));
                        }
                    }
                } catch (const degenerate_configuration_error&) {
                }
                return;
            }
            for (int i = start; i < cnt; ++i) {
                idx[static_cast<std::size_t>(depth)] = i;
                choose(i + 1, depth + 1);
            }
        };
        if (cnt >= n) choose(0, 0);
    }
    sort_states(out);
    return out;
}

std::vector<BetheState> solve_newton(const ModelParams& mp, const SolveOptions& opts) {
    const int n = mp.n_roots();
    const ModularParam& tau = mp.tau();
    std::vector<BetheState> out;
    std::vector<std::string> seen;

    std::mt19937_64 gen(opts.seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);

    for (int nu = 0; nu < static_cast<int>(mp.q()); ++nu) {
        const BetheSystem sys(mp, nu);
        const EntireSystem entire{sys};

        for (int attempt = 0; attempt < opts.multistart; ++attempt) {
            std::vector<cplx> v(static_cast<std::size_t>(n));
            for (cplx& z : v) z = unit(gen) + tau.tau() * unit(gen);

            Vector f(n);
            Matrix jac(n, n);
            bool ok = false;
            double fnorm = std::numeric_limits<double>::infinity();
            for (int iter = 0; iter < 120; ++iter) {
                try {
                    entire.fill(v, f, jac);
                } catch (const pole_error&) {
                    break;
                }
                fnorm = f.norm();
                const double scale = entire_residual_scale(v, sys);
                if (fnorm < 1e-12 * scale) {
                    ok = true;
                    break;
                }
                Vector step = jac.partialPivLu().solve(f);
                if (!step.allFinite()) break;
                // damped update with backtracking on |F|
                double lambda = 1.0;
                const double cap = 0.4;
                if (step.norm() > cap) step *= cap / step.norm();
                bool improved = false;
                for (int bt = 0; bt < 8; ++bt) {
                    std::vector<cplx> trial = v;
                    for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] -= lambda * step(i);
                    Vector ft(n);
                    Matrix jt(n, n);
                    try {
                        entire.fill(trial, ft, jt);
                    } catch (const pole_error&) {
                        lambda *= 0.5;
                        continue;
                    }
                    if (ft.norm() < fnorm) {
                        v = std::move(trial);
                        improved = true;
                        break;
                    }
                    lambda *= 0.5;
                }
                if (!improved) break;
            }
            if (!ok) continue;
            try {
                auto st = make_state(v, nu, mp, opts);
                if (st) {
                    const std::string key = state_key(*st);
                    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                        seen.push_back(key);
                        out.push_back(std::move(*st));
                    }
                }
            } catch (const degenerate_configuration_error&) {
            }
        }
    }
    sort_states(out);
    return out;
}

}  // namespace

std::vector<BetheState> solve_bethe(const ModelParams& mp, const SolveOptions& opts) {
    switch (opts.strategy) {
        case SolveStrategy::n2: return solve_bethe_n2(mp);
        case SolveStrategy::free_fermion: return solve_free_fermion(mp, opts);
        case SolveStrategy::newton: return solve_newton(mp, opts);
        case SolveStrategy::automatic: break;
    }
    if (mp.num_sites() == 2) return solve_bethe_n2(mp);
    if (mp.p() == 1 && mp.q() == 4) return solve_free_fermion(mp, opts);
    return solve_newton(mp, opts);
}

}  // namespace ebethe
