#include "ebethe/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace ebethe {

Matrix pauli(int a) {
    Matrix m(2, 2);
    switch (a) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -kI, kI, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli: index must be 0..3");
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

int site_bit(int site, int num_sites) { return num_sites - site; }

}  // namespace

Matrix embed_local(const Matrix& op, std::span<const int> sites, int num_sites) {
    if (num_sites < 1 || num_sites > kMaxSites + 1) {
        throw std::invalid_argument("embed_local: unsupported chain length");
    }
    const int k = static_cast<int>(sites.size());
    if (op.rows() != op.cols() || op.rows() != (1 << k)) {
        throw std::invalid_argument("embed_local: operator dimension does not match site count");
    }
    // Site index 0 addresses the auxiliary space, prepended as an extra
    // leftmost factor so the result acts on aux x H with dim 2^{N+1}.
    bool with_aux = false;
    for (int i = 0; i < k; ++i) {
        if (sites[i] < 0 || sites[i] > num_sites) {
            throw std::invalid_argument("embed_local: site index out of range");
        }
        if (sites[i] == 0) with_aux = true;
        for (int j = i + 1; j < k; ++j) {
            if (sites[i] == sites[j]) throw std::invalid_argument("embed_local: repeated site index");
        }
    }
    // Bit of site s is num_sites - s in either case; the aux label 0 lands on
    // the extra leading bit.
    const int factors = with_aux ? num_sites + 1 : num_sites;
    const int dim = 1 << factors;
    Matrix out = Matrix::Zero(dim, dim);
    for (int row = 0; row < dim; ++row) {
        int row_local = 0;
        for (int i = 0; i < k; ++i) {
            row_local = (row_local << 1) | ((row >> site_bit(sites[i], num_sites)) & 1);
        }
        for (int col_local = 0; col_local < (1 << k); ++col_local) {
            const cplx val = op(row_local, col_local);
            if (val == cplx(0.0)) continue;
            int col = row;
            for (int i = 0; i < k; ++i) {
                const int bit = site_bit(sites[i], num_sites);
                const int want = (col_local >> (k - 1 - i)) & 1;
                col = (col & ~(1 << bit)) | (want << bit);
            }
            out(row, col) += val;
        }
    }
    return out;
}

Matrix embed_local(const Matrix& op, std::initializer_list<int> sites, int num_sites) {
    std::vector<int> s(sites);
    return embed_local(op, std::span<const int>(s), num_sites);
}

Matrix trace_out_first(const Matrix& m) {
    const Eigen::Index dim = m.rows();
    if (dim % 2 != 0 || m.cols() != dim) {
        throw std::invalid_argument("trace_out_first: matrix must be square with even dimension");
    }
    const Eigen::Index half = dim / 2;
    return m.topLeftCorner(half, half) + m.bottomRightCorner(half, half);
}

cplx dense_determinant(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("dense_determinant: non-square matrix");
    if (m.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Matrix>(m).determinant();
}

EigenSystem dense_eigen(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("dense_eigen: non-square matrix");
    Eigen::ComplexEigenSolver<Matrix> right_solver(m, true);
    if (right_solver.info() != Eigen::Success) {
        throw std::runtime_error("dense_eigen: eigensolver failed to converge");
    }
    Eigen::ComplexEigenSolver<Matrix> left_solver(m.transpose(), true);
    if (left_solver.info() != Eigen::Success) {
        throw std::runtime_error("dense_eigen: transposed eigensolver failed to converge");
    }

    EigenSystem sys;
    sys.values = right_solver.eigenvalues();
    sys.right = right_solver.eigenvectors();

    const Eigen::Index n = m.rows();
    const double scale = std::max(frobenius(m), 1e-300);
    sys.left = Matrix::Zero(n, n);
    sys.defective = false;

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = -1;
        double best_gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double gap = std::abs(left_solver.eigenvalues()(j) - sys.values(i));
            if (gap < best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        sys.left.row(i) = left_solver.eigenvectors().col(best).transpose();
        if (best_gap > 1e-6 * scale) sys.defective = true;
    }

    sys.max_residual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double res = (m * sys.right.col(i) - sys.values(i) * sys.right.col(i)).norm();
        sys.max_residual = std::max(sys.max_residual, res / scale);
    }
    return sys;
}

double frobenius(const Matrix& m) { return m.norm(); }

double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).norm(); }

double projective_distance(const Vector& a, const Vector& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 1.0;
    const Vector ah = a / na;
    const Vector bh = b / nb;
    // norm of the component of ah orthogonal to bh; accurate near zero
    return (ah - bh.dot(ah) * bh).norm();
}

}  // namespace ebethe
