#include "ebethe/theta.hpp"

#include <cmath>

namespace ebethe {

namespace {

constexpr double kMinImTau = 0.05;
constexpr double kTermCutoff = 1e-20;
constexpr int kMaxTerms = 512;
constexpr double kMaxExponent = 700.0;

// theta_a(u+1) = sign1[a] theta_a(u); theta_a(u+tau) = signt[a] e^{-i pi tau - 2 pi i u} theta_a(u)
constexpr double kSign1[5] = {0, -1, -1, +1, +1};
constexpr double kSignT[5] = {0, -1, +1, +1, -1};

int canonical_index(int a) {
    int r = a % 4;
    if (r <= 0) r += 4;
    return r;
}

struct Reduction {
    cplx u_red;
    cplx prefactor;      // theta_a(u) = prefactor * theta_a(u_red)
    cplx dlog_prefactor; // d/du log prefactor  (= -2 pi i m)
    long m = 0, n = 0;
};

Reduction reduce(int a, cplx u, const ModularParam& mp) {
    const cplx tau = mp.tau();
    Reduction r;
    r.m = std::lround(std::floor(u.imag() / tau.imag() + 0.5));
    cplx u1 = u - static_cast<double>(r.m) * tau;
    r.n = std::lround(std::floor(u1.real() + 0.5));
    r.u_red = u1 - static_cast<double>(r.n);

    const double md = static_cast<double>(r.m);
    const cplx exponent = -kI * kPi * md * md * tau - 2.0 * kPi * kI * md * r.u_red;
    if (std::abs(exponent.real()) > kMaxExponent) {
        throw range_overflow_error("theta argument reduction prefactor overflows", exponent.real());
    }
    double sgn = 1.0;
    if (r.m % 2 != 0) sgn *= kSignT[a];
    if (r.n % 2 != 0) sgn *= kSign1[a];
    r.prefactor = sgn * std::exp(exponent);
    r.dlog_prefactor = -2.0 * kPi * kI * md;
    return r;
}

// Series over reduced arguments. nder = 0 or 1.
cplx theta_series(int a, cplx u, const ModularParam& mp, int nder) {
    const cplx ipitau = kI * kPi * mp.tau();
    const double abs_im_u = std::abs(u.imag());

    cplx acc = 0.0;
    if (a == 3 || a == 4) acc = (nder == 0) ? 1.0 : 0.0;

    for (int k = (a <= 2 ? 0 : 1); k < kMaxTerms; ++k) {
        const double half = (a <= 2) ? (k + 0.5) : static_cast<double>(k);
        const cplx qpow = std::exp(ipitau * half * half);
        const double freq = (a <= 2) ? (2 * k + 1) : 2 * k;
        const cplx phase = kPi * freq * u;
        cplx term;
        switch (a) {
            case 1:
                term = (nder == 0) ? std::sin(phase) : kPi * freq * std::cos(phase);
                if (k % 2 != 0) term = -term;
                break;
            case 2:
                term = (nder == 0) ? std::cos(phase) : -kPi * freq * std::sin(phase);
                break;
            case 3:
                term = (nder == 0) ? std::cos(phase) : -kPi * freq * std::sin(phase);
                break;
            case 4:
                term = (nder == 0) ? std::cos(phase) : -kPi * freq * std::sin(phase);
                if (k % 2 != 0) term = -term;
                break;
        }
        acc += 2.0 * qpow * term;
        const double bound = std::abs(qpow) * std::exp(kPi * freq * abs_im_u) * (nder ? kPi * freq : 1.0);
        if (bound < kTermCutoff) break;
    }
    return acc;
}

cplx theta_impl(int a_raw, cplx u, const ModularParam& mp, int nder) {
    if (!is_finite(u)) throw std::domain_error("theta: non-finite argument " + to_string(u));
    const int a = canonical_index(a_raw);
    const Reduction red = reduce(a, u, mp);
    if (nder == 0) return red.prefactor * theta_series(a, red.u_red, mp, 0);
    // theta_a(u) = pref(u) * theta_a(u_red(u)), d u_red/d u = 1
    return red.prefactor *
           (theta_series(a, red.u_red, mp, 1) + red.dlog_prefactor * theta_series(a, red.u_red, mp, 0));
}

}  // namespace

ModularParam::ModularParam(cplx tau) : tau_(tau) {
    if (!is_finite(tau)) throw std::domain_error("ModularParam: non-finite tau");
    if (tau.imag() < kMinImTau) {
        throw std::domain_error("ModularParam: Im(tau) = " + std::to_string(tau.imag()) +
                                " below the supported minimum " + std::to_string(kMinImTau));
    }
    q_ = std::exp(kI * kPi * tau_);
}

ReducedArgument reduce_argument(cplx u, const ModularParam& mp) {
    if (!is_finite(u)) throw std::domain_error("reduce_argument: non-finite argument");
    const Reduction red = reduce(1, u, mp);
    return ReducedArgument{red.u_red, red.prefactor, red.m, red.n};
}

cplx theta(int a, cplx u, const ModularParam& mp) { return theta_impl(a, u, mp, 0); }

cplx theta_deriv(int a, cplx u, const ModularParam& mp) { return theta_impl(a, u, mp, 1); }

cplx theta1_log_deriv(cplx u, const ModularParam& mp) {
    const Reduction red = reduce(1, u, mp);
    const cplx value = theta_series(1, red.u_red, mp, 0);
    if (std::abs(value) == 0.0) {
        throw pole_error("theta1_log_deriv: argument " + to_string(u) + " on the zero lattice");
    }
    return red.dlog_prefactor + theta_series(1, red.u_red, mp, 1) / value;
}

double lattice_distance(cplx u, const ModularParam& mp) {
    const ReducedArgument red = reduce_argument(u, mp);
    return std::abs(red.u_red);
}

cplx kronecker_phi(cplx u, cplx v, const ModularParam& mp) {
    constexpr double kPoleTol = 1e-12;
    if (lattice_distance(u, mp) < kPoleTol) {
        throw pole_error("kronecker_phi: first argument " + to_string(u) + " at a theta1 zero");
    }
    if (lattice_distance(v, mp) < kPoleTol) {
        throw pole_error("kronecker_phi: second argument " + to_string(v) + " at a theta1 zero");
    }
    return theta1_deriv(0.0, mp) * theta(1, u + v, mp) / (theta(1, u, mp) * theta(1, v, mp));
}

cplx elliptic_cauchy_det(std::span<const cplx> us, std::span<const cplx> ws, cplx lambda,
                         const ModularParam& mp) {
    if (us.size() != ws.size() || us.empty()) {
        throw std::invalid_argument("elliptic_cauchy_det: sequences must be non-empty and equal length");
    }
    const std::size_t m = us.size();
    cplx sum_diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum_diff += us[i] - ws[i];

    const cplx d0 = theta1_deriv(0.0, mp);
    cplx result = std::pow(d0, static_cast<double>(m)) * theta(1, lambda + sum_diff, mp) /
                  theta(1, lambda, mp);
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = p + 1; q < m; ++q) {
            result *= theta(1, us[p] - us[q], mp) * theta(1, ws[q] - ws[p], mp);
        }
    }
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t s = 0; s < m; ++s) {
            const cplx diff = us[r] - ws[s];
            if (lattice_distance(diff, mp) < 1e-12) {
                throw pole_error("elliptic_cauchy_det: u" + std::to_string(r + 1) + " - w" +
                                 std::to_string(s + 1) + " on the theta1 zero lattice");
            }
            result /= theta(1, diff, mp);
        }
    }
    return result;
}

}  // namespace ebethe
