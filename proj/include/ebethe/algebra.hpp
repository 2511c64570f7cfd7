#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ebethe/common.hpp"

namespace ebethe {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;
using RowVector2 = Eigen::RowVector2cd;

// Left vectors pair with right vectors by plain bilinear contraction,
// without complex conjugation.
enum class Side { left, right };

inline constexpr int kMaxSites = 8;

inline cplx bilinear(const RowVector& left, const Vector& right) { return (left * right)(0); }
inline cplx bilinear(const Vector& left, const Vector& right) { return left.transpose() * right; }

Matrix pauli(int a);  // a = 0..3

Matrix kron(const Matrix& a, const Matrix& b);

// Kronecker embedding of a local operator into the chain of N sites.
// `op` acts on the listed sites in the given order (dim 2^{#sites});
// site 1 is the leftmost tensor factor. Site index 0 addresses the auxiliary
// space of an (N+1)-factor chain when callers embed monodromy factors.
Matrix embed_local(const Matrix& op, std::span<const int> sites, int num_sites);
Matrix embed_local(const Matrix& op, std::initializer_list<int> sites, int num_sites);

// Partial trace over the leading (auxiliary) 2-dimensional factor.
Matrix trace_out_first(const Matrix& m);

cplx dense_determinant(const Matrix& m);

struct EigenSystem {
    Vector values;       // eigenvalues, as returned by the solver
    Matrix right;        // columns: right eigenvectors
    Matrix left;         // rows: left eigenvectors, matched to `values` by eigenvalue
    double max_residual; // max_i |M x_i - lambda_i x_i| / |M|
    bool defective;      // left/right matching failed within tolerance
};

EigenSystem dense_eigen(const Matrix& m);

double frobenius(const Matrix& m);
double commutator_norm(const Matrix& a, const Matrix& b);

// sin of the principal angle between the complex lines spanned by a and b.
double projective_distance(const Vector& a, const Vector& b);

}  // namespace ebethe
