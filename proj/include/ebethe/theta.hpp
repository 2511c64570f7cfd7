#pragma once

#include <span>

#include "ebethe/common.hpp"

namespace ebethe {

// Modular parameter tau, Im(tau) > 0, with the nome q = exp(i*pi*tau) cached.
// Doubled/halved parameters (2*tau, Q*tau/2, ...) are just new instances.
class ModularParam {
public:
    explicit ModularParam(cplx tau);

    cplx tau() const { return tau_; }
    cplx nome() const { return q_; }
    double im_tau() const { return tau_.imag(); }

    ModularParam scaled(double factor) const { return ModularParam(factor * tau_); }

private:
    cplx tau_;
    cplx q_;
};

struct ReducedArgument {
    cplx u_red;      // Im(u_red) in [-Im(tau)/2, Im(tau)/2), Re(u_red) in [-1/2, 1/2)
    cplx prefactor;  // theta1(u) = prefactor * theta1(u_red)
    long m = 0;      // u = u_red + m*tau + n
    long n = 0;
};

// Lattice reduction of u with the exact theta1 quasi-periodicity prefactor,
// theta1(u+1) = -theta1(u), theta1(u+tau) = -exp(-i*pi*tau - 2*pi*i*u) theta1(u).
ReducedArgument reduce_argument(cplx u, const ModularParam& mp);

// Jacobi theta_a(u|tau), a = 1..4 understood modulo 4 (5 == 1).
cplx theta(int a, cplx u, const ModularParam& mp);

// theta_a'(u|tau), term-wise differentiated series.
cplx theta_deriv(int a, cplx u, const ModularParam& mp);

inline cplx theta1_deriv(cplx u, const ModularParam& mp) { return theta_deriv(1, u, mp); }

// theta1'(u)/theta1(u), stable under lattice reduction.
cplx theta1_log_deriv(cplx u, const ModularParam& mp);

// Phi(u,v) = theta1'(0) theta1(u+v) / (theta1(u) theta1(v)).
// Simple pole with residue 1 at u = 0; arguments near the zero lattice of
// theta1 (within 1e-12) raise pole_error.
cplx kronecker_phi(cplx u, cplx v, const ModularParam& mp);

// Closed form of det_{ij} Phi(u_i - w_j, lambda) for equally long sequences.
cplx elliptic_cauchy_det(std::span<const cplx> us, std::span<const cplx> ws, cplx lambda,
                         const ModularParam& mp);

// Distance of u from the zero lattice Z + Z*tau of theta1.
double lattice_distance(cplx u, const ModularParam& mp);

}  // namespace ebethe
