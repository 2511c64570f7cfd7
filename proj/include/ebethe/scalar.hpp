#pragma once

#include <optional>

#include "ebethe/bethe.hpp"
#include "ebethe/gauge.hpp"

namespace ebethe {

// Rapidity function bundle: g(u,v) = theta1(eta)/theta1(u-v), f = g*h,
// h(u,v) = theta1(u-v+eta)/theta1(eta); h(u,u) = 1.
cplx g_fun(cplx u, cplx v, const ModelParams& mp);
cplx f_fun(cplx u, cplx v, const ModelParams& mp);
cplx h_fun(cplx u, cplx v, const ModelParams& mp);

// W_n of the scalar-product normalization; products over empty sets are 1,
// so n = 1 gives 1/theta1(u1 - v1).
cplx w_n(std::span<const cplx> us, std::span<const cplx> vs, const ModularParam& tau);

// n x n matrix T^{(nu mu)}_{jk}(r), rows j indexed by vs, columns k by us.
Matrix slavnov_matrix(int nu, int mu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                      const ModelParams& mp);

// Same entry through the Phi-form with eigenvalue differences.
cplx slavnov_entry_phi_form(int nu, int mu, std::span<const cplx> vs, std::span<const cplx> us,
                            cplx r, int j, int k, const ModelParams& mp);

// Magnitude scale of the additive parts of each entry: the natural yardstick
// for "the determinant vanishes" statements.
double slavnov_det_scale(int nu, int mu, std::span<const cplx> vs, std::span<const cplx> us,
                         cplx r, const ModelParams& mp);

// Entries of the r -> 0, mu = nu limit: d T_nu(u_k; vs) / d v_j.
Matrix slavnov_matrix_derivative_limit(int nu, std::span<const cplx> vs,
                                       std::span<const cplx> us, const ModelParams& mp);

// Normalization factor phi_1^{(nu mu)}(r, x); even and odd Q branches.
cplx phi1_factor(int nu, int mu, cplx r, cplx x, const ModelParams& mp);
// phi_1^{(nu nu)}(0, x), x-independent.
cplx phi1_diagonal_limit(const ModelParams& mp);

// Elliptic Gaudin matrix of the on-shell roots.
Matrix gaudin_matrix(std::span<const cplx> vs, const ModelParams& mp);
// Kernel K(u) entering the Gaudin matrix.
cplx gaudin_kernel(cplx u, const ModelParams& mp);
// d/dv log(a(v)/d(v)).
cplx ad_log_derivative(cplx v, const ModelParams& mp);

struct ScalarProductReport {
    int nu = 0, mu = 0;
    std::vector<cplx> vs, us;
    cplx r;
    cplx x, y;
    cplx det_value;
    cplx phi1;
    cplx gaudin_det;
    cplx value;                        // S_{nu mu}(vs, us) per the determinant formula
    std::optional<cplx> brute_force;   // filled by callers running the oracle
    std::optional<double> rel_error;
};

// Normalized scalar product of the on-shell left state (nu, vs) with the
// off-shell right vector (mu, us). The vs must pass the Bethe residual gate.
ScalarProductReport normalized_scalar_product(int nu, std::span<const cplx> vs, int mu,
                                              std::span<const cplx> us, const ModelParams& mp,
                                              const GaugeParams& gp);

// Free-fermion (eta = 1/2) closed forms.
cplx free_fermion_det_diagonal(int nu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                               const ModelParams& mp);
cplx free_fermion_det_shifted(int nu, std::span<const cplx> vs, std::span<const cplx> us, cplx r,
                              const ModelParams& mp);
// Normalized scalar product via the closed-form product expression;
// mu - nu odd returns exactly zero.
cplx free_fermion_scalar(int nu, std::span<const cplx> vs, int mu, std::span<const cplx> us,
                         const ModelParams& mp, const GaugeParams& gp);

struct NullVectorReport {
    std::vector<double> det_ratios;       // |det T| / scale per supplied state
    double vector_norm_ratio = 0.0;       // |Psi(u with xi_p, xi_p - eta)| / |Psi(generic)|
    double generic_det_ratio = 0.0;       // control value for a generic u set
};

NullVectorReport null_vector_test(int p, std::span<const cplx> us_rest, int mu,
                                  std::span<const BetheState> states, const ModelParams& mp,
                                  const GaugeParams& gp);

// X_k^l table: rows k = 1..n+1, columns l = 0..Q-1.
double homogeneous_system_residual(const Matrix& xtable, int nu, std::span<const cplx> vs,
                                   std::span<const cplx> us, const ModelParams& mp,
                                   const GaugeParams& gp);

// Y_k^{(mu)}(r) as the weighted Fourier sum of X_k^l over l with
// w = l eta + w0 + sum(us).
cplx y_transform(const Matrix& xtable, int mu, int k, cplx w0, std::span<const cplx> us,
                 const ModelParams& mp, const GaugeParams& gp);

}  // namespace ebethe
