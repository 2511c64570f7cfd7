#pragma once

#include "ebethe/bethe.hpp"
#include "ebethe/gauge.hpp"

namespace ebethe {

// Independent oracles built from the gauged-ABA primitives; no code shared
// with the determinant-formula module beyond theta/algebra.

// <Psi_nu(vs)|Psi_mu(us)> by direct construction and bilinear contraction.
cplx brute_force_scalar_product(int nu, std::span<const cplx> vs, int mu,
                                std::span<const cplx> us, const ModelParams& mp,
                                const GaugeParams& gp);

struct OnshellCheck {
    double max_residual = 0.0;  // worst of left and right action residuals
    double left_norm = 0.0;
    double right_norm = 0.0;
};

// ||<Psi|T(u) - T_nu(u)<Psi||| over the grid, plus the right-vector mirror;
// throws when the Fourier sum yields a null vector for this nu.
OnshellCheck onshell_action_check(const BetheState& state, std::span<const cplx> us_grid,
                                  const ModelParams& mp, const GaugeParams& gp);

struct FormFactorCheck {
    cplx lhs;  // <Psi| (1 - sigma3_m)/2 |Psi> / <Psi|Psi>
    cplx rhs;  // <Psi| D(xi_m) |Psi> / (T_nu(xi_m) <Psi|Psi>)
    double rel_error = 0.0;
};

FormFactorCheck magnetization_form_factor_check(const BetheState& state, int site,
                                                const ModelParams& mp, const GaugeParams& gp);

struct StDependenceReport {
    double max_projective_distance = 0.0;  // direction spread over the (s,t) grid
    std::vector<cplx> fitted_zeros;        // y-zeros of the scalar prefactor
    double max_zero_error = 0.0;           // distance of fitted zeros from -v_j
    double phase_shift_error = 0.0;        // phi(x+eta) = e^{-i pi nu eta} phi(x)
};

StDependenceReport st_dependence_experiment(int nu, std::span<const cplx> roots,
                                            std::span<const cplx> s_grid,
                                            std::span<const cplx> t_grid, const ModelParams& mp);

}  // namespace ebethe
