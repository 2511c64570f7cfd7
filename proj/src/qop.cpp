#include "ebethe/qop.hpp"

#include <algorithm>
#include <bit>

#include "ebethe/bethe.hpp"

namespace ebethe {

EpsilonPath::EpsilonPath(std::vector<int> signs) : eps(std::move(signs)) {
    partial.resize(eps.size() + 1, 0);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] != 1 && eps[i] != -1) {
            throw std::invalid_argument("EpsilonPath: entries must be +-1");
        }
        partial[i + 1] = partial[i] + eps[i];
    }
    if (partial.back() != 0) throw std::invalid_argument("EpsilonPath: signs must sum to zero");
}

std::vector<EpsilonPath> balanced_paths(int num_sites) {
    std::vector<EpsilonPath> out;
    for (int mask = 0; mask < (1 << num_sites); ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) != num_sites / 2) continue;
        std::vector<int> signs(static_cast<std::size_t>(num_sites));
        for (int i = 0; i < num_sites; ++i) signs[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
        out.emplace_back(std::move(signs));
    }
    return out;
}

Vector q_column(cplx u, const EpsilonPath& path, cplx s_base, const ModelParams& mp) {
    Vector out = Vector::Ones(1);
    for (int k = 1; k <= mp.num_sites(); ++k) {
        const double eps = path.eps[static_cast<std::size_t>(k - 1)];
        const cplx arg = s_base + static_cast<double>(path.partial[static_cast<std::size_t>(k - 1)]) * mp.eta() -
                         eps * (u - mp.xi()[static_cast<std::size_t>(k - 1)]);
        const Vector2 local = intertwining_vector(arg, mp.tau());
        Vector next(out.size() * 2);
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next(2 * i) = out(i) * local(0);
            next(2 * i + 1) = out(i) * local(1);
        }
        out = std::move(next);
    }
    return out;
}

RowVector q_row(cplx u, const EpsilonPath& path, cplx t_base, const ModelParams& mp) {
    RowVector out = RowVector::Ones(1);
    for (int k = 1; k <= mp.num_sites(); ++k) {
        const double eps = path.eps[static_cast<std::size_t>(k - 1)];
        const cplx arg = t_base + static_cast<double>(path.partial[static_cast<std::size_t>(k)]) * mp.eta() +
                         eps * (u - mp.xi()[static_cast<std::size_t>(k - 1)]);
        const RowVector2 local = intertwining_covector(arg, mp.tau());
        RowVector next(out.size() * 2);
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next(2 * i) = out(i) * local(0);
            next(2 * i + 1) = out(i) * local(1);
        }
        out = std::move(next);
    }
    return out;
}

QColumnBasis choose_q_basis(const ModelParams& mp, const GaugeParams& gp, Side side) {
    QColumnBasis basis;
    basis.paths = balanced_paths(mp.num_sites());
    basis.base = (side == Side::right) ? gp.s() : gp.t();
    const int dim = mp.dim();
    const int num_offsets = 1 << (mp.num_sites() - 1);
    const cplx u_ref(0.1379, 0.0211);

    for (int reseed = 0; reseed < 4; ++reseed) {
        Matrix candidates(dim, static_cast<Eigen::Index>(basis.paths.size()) * num_offsets);
        std::vector<std::pair<int, int>> all_labels;
        Eigen::Index col = 0;
        for (int pi = 0; pi < static_cast<int>(basis.paths.size()); ++pi) {
            for (int j = 0; j < num_offsets; ++j) {
                const cplx base = basis.base + static_cast<double>(j) * basis.offset_step;
                if (side == Side::right) {
                    candidates.col(col) = q_column(u_ref, basis.paths[static_cast<std::size_t>(pi)],
                                                   base, mp);
                } else {
                    candidates.col(col) = q_row(u_ref, basis.paths[static_cast<std::size_t>(pi)],
                                                base, mp)
                                              .transpose();
                }
                all_labels.emplace_back(pi, j);
                ++col;
            }
        }
        Eigen::ColPivHouseholderQR<Matrix> qr(candidates);
        if (qr.rank() >= dim) {
            const auto& perm = qr.colsPermutation().indices();
            for (int i = 0; i < dim; ++i) {
                basis.labels.push_back(all_labels[static_cast<std::size_t>(perm(i))]);
            }
            std::sort(basis.labels.begin(), basis.labels.end());
            return basis;
        }
        basis.offset_step *= 1.618;  // rank-deficient: reseed the ladder offsets
    }
    throw std::runtime_error("choose_q_basis: no full-rank column set found");
}

Matrix pre_q_right(cplx u, const ModelParams& mp, const QColumnBasis& basis) {
    Matrix q(mp.dim(), mp.dim());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(basis.labels.size()); ++i) {
        const auto& [pi, j] = basis.labels[static_cast<std::size_t>(i)];
        q.col(i) = q_column(u, basis.paths[static_cast<std::size_t>(pi)],
                            basis.base + static_cast<double>(j) * basis.offset_step, mp);
    }
    return q;
}

Matrix pre_q_left(cplx u, const ModelParams& mp, const QColumnBasis& basis) {
    Matrix q(mp.dim(), mp.dim());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(basis.labels.size()); ++i) {
        const auto& [pi, j] = basis.labels[static_cast<std::size_t>(i)];
        q.row(i) = q_row(u, basis.paths[static_cast<std::size_t>(pi)],
                         basis.base + static_cast<double>(j) * basis.offset_step, mp);
    }
    return q;
}

QOperator normalize_q(const ModelParams& mp, const QColumnBasis& basis) {
    QOperator out;
    out.rcond_at_u0 = -1.0;
    for (int i = 0; i < 24; ++i) {
        const cplx u0 = -0.5 + (i + 0.31) / 24.0 + kI * (0.015 + 0.01 * (i % 3));
        const Matrix q = pre_q_right(u0, mp, basis);
        const double rc = Eigen::PartialPivLU<Matrix>(q).rcond();
        if (rc > out.rcond_at_u0) {
            out.rcond_at_u0 = rc;
            out.u0 = u0;
        }
    }
    if (out.rcond_at_u0 < 1e-12) {
        throw std::runtime_error("normalize_q: Q_R not invertible anywhere on the scan grid");
    }
    const Matrix q0 = pre_q_right(out.u0, mp, basis);
    out.q_r_u0_inv = q0.partialPivLu().solve(Matrix::Identity(mp.dim(), mp.dim()));
    return out;
}

std::function<cplx(cplx)> q_eigenvalue_model(int /*nu1*/, int nu3, std::vector<cplx> roots,
                                             const ModularParam& tau) {
    const int n = static_cast<int>(roots.size());
    return [nu3, n, roots = std::move(roots), tau](cplx u) {
        cplx acc = std::exp(kI * kPi * static_cast<double>(n + nu3) * u);
        for (const cplx& v : roots) acc *= theta(1, u - v, tau);
        return acc;
    };
}

double tq_eigenvalue_residual(int nu, cplx u, std::span<const cplx> roots, const ModelParams& mp) {
    const int n = static_cast<int>(roots.size());
    // the exponent in Q(u) is the exact integer -nu_exact = n + nu3 lift
    const SumRuleReport sr = sum_rule_defect(roots, nu, mp);
    const int nu3_lift = -sr.nu_exact - n;
    const auto q = q_eigenvalue_model(sr.nu1, nu3_lift, std::vector<cplx>(roots.begin(), roots.end()),
                                      mp.tau());
    const cplx t = transfer_eigenvalue(nu, u, roots, mp);
    const cplx lhs = t * q(u);
    const cplx rhs = mp.a_of(u) * q(u - mp.eta()) + mp.d_of(u) * q(u + mp.eta());
    return std::abs(lhs - rhs) /
           std::max({std::abs(lhs), std::abs(rhs), std::abs(mp.a_of(u) * q(u - mp.eta())), 1e-300});
}

}  // namespace ebethe
