#pragma once

#include <optional>

#include "ebethe/vertex.hpp"

namespace ebethe {

struct BetheSystem {
    ModelParams mp;
    int nu;  // Fourier index modulo Q
    int n;   // number of roots

    BetheSystem(ModelParams model, int fourier_index)
        : mp(std::move(model)), nu(fourier_index), n(mp.n_roots()) {}
};

struct BetheState {
    int nu = 0;
    std::vector<cplx> roots;
    Side side = Side::left;
    bool onshell = false;
    std::vector<double> residuals;
    std::optional<std::pair<int, int>> sumrule_ints;  // (nu1, nu3)
};

// Normalized per-root defect of the Bethe equations.
std::vector<double> bethe_residuals(std::span<const cplx> roots, const BetheSystem& sys);

struct SumRuleReport {
    cplx defect;      // lattice-reduced
    int nu1 = 0;
    int nu3 = 0;      // -n - nu mod 2
    int nu_exact = 0; // exact integer lift of nu solving the rule, = -(n + nu3 lift)
};

SumRuleReport sum_rule_defect(std::span<const cplx> roots, int nu, const ModelParams& mp);

// Reduce a complex number to the fundamental cell spanned by 1 and tau,
// coefficients in [0,1).
cplx reduce_to_fundamental(cplx v, const ModularParam& tau);

// Reduce all roots to the fundamental domain, tracking the Fourier index
// shift nu -> nu - 2 per tau-period subtracted, and order them canonically.
void canonicalize_state(std::vector<cplx>& roots, int& nu, const ModelParams& mp);

enum class SolveStrategy { automatic, n2, free_fermion, newton };

struct SolveOptions {
    SolveStrategy strategy = SolveStrategy::automatic;
    uint64_t seed = 1;
    int multistart = 64;
    double residual_tol = 1e-9;
    double sum_rule_tol = 1e-8;
};

std::vector<BetheState> solve_bethe(const ModelParams& mp, const SolveOptions& opts = {});

// The four closed-form N=2 states (omega in {0, 1/2, tau/2, (tau+1)/2}).
std::vector<BetheState> solve_bethe_n2(const ModelParams& mp);

}  // namespace ebethe
