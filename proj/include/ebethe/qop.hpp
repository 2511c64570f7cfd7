#pragma once

#include <functional>

#include "ebethe/gauge.hpp"

namespace ebethe {

// Balanced sign path: eps_i in {+1,-1} with zero sum, e_m = partial sums.
struct EpsilonPath {
    std::vector<int> eps;
    std::vector<int> partial;  // partial[m] = e_m, m = 0..N, e_0 = e_N = 0

    explicit EpsilonPath(std::vector<int> signs);
};

std::vector<EpsilonPath> balanced_paths(int num_sites);

// Column |omega(u;eps)> built on the s-ladder starting at s_base.
Vector q_column(cplx u, const EpsilonPath& path, cplx s_base, const ModelParams& mp);
// Row <bar omega(u;eps)| on the t-ladder starting at t_base.
RowVector q_row(cplx u, const EpsilonPath& path, cplx t_base, const ModelParams& mp);

// Deterministic maximal-rank choice of 2^N (path, ladder-offset) labels,
// shared between the evaluation points of a TQ relation.
struct QColumnBasis {
    std::vector<std::pair<int, int>> labels;  // (path index, offset index)
    std::vector<EpsilonPath> paths;
    double offset_step = 0.137;
    cplx base;  // s (right) or t (left) ladder origin
};

QColumnBasis choose_q_basis(const ModelParams& mp, const GaugeParams& gp, Side side);

Matrix pre_q_right(cplx u, const ModelParams& mp, const QColumnBasis& basis);
Matrix pre_q_left(cplx u, const ModelParams& mp, const QColumnBasis& basis);

// Invertible normalization Q(u) = Q_R(u) Q_R(u0)^{-1}; u0 is scanned over a
// grid for the best-conditioned point.
struct QOperator {
    cplx u0;
    double rcond_at_u0;
    Matrix q_r_u0_inv;
};

QOperator normalize_q(const ModelParams& mp, const QColumnBasis& basis);

// Eigenvalue model Q(u) = e^{i pi (n+nu3) u} prod_i theta1(u - v_i).
std::function<cplx(cplx)> q_eigenvalue_model(int nu1, int nu3, std::vector<cplx> roots,
                                             const ModularParam& tau);

// Residual of the eigenvalue TQ relation at u for given roots and nu.
double tq_eigenvalue_residual(int nu, cplx u, std::span<const cplx> roots, const ModelParams& mp);

}  // namespace ebethe
