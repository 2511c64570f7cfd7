#pragma once

#include <array>
#include <numeric>
#include <span>
#include <vector>

#include "ebethe/algebra.hpp"
#include "ebethe/theta.hpp"

namespace ebethe {

// Chain data: even length N <= 8, inhomogeneities, rational anisotropy
// eta = 2P/Q with coprime P,Q, and the modular parameter.
class ModelParams {
public:
    ModelParams(int num_sites, std::vector<cplx> xi, long p, long q, ModularParam tau);

    static ModelParams homogeneous(int num_sites, long p, long q, ModularParam tau) {
        return ModelParams(num_sites, std::vector<cplx>(static_cast<std::size_t>(num_sites), 0.0),
                           p, q, tau);
    }

    int num_sites() const { return num_sites_; }
    int dim() const { return 1 << num_sites_; }
    const std::vector<cplx>& xi() const { return xi_; }
    long p() const { return p_; }
    long q() const { return q_; }
    double eta() const { return 2.0 * static_cast<double>(p_) / static_cast<double>(q_); }
    const ModularParam& tau() const { return tau_; }
    int n_roots() const { return n_; }
    void set_n_roots(int n);
    bool homogeneous_xi() const;

    cplx xi_sum() const { return std::accumulate(xi_.begin(), xi_.end(), cplx(0.0)); }
    // c(u) entering the tau-quasiperiodicity of the monodromy matrix.
    cplx quasi_exponent(cplx u) const {
        return static_cast<double>(num_sites_) * (2.0 * u + eta() + tau_.tau()) - 2.0 * xi_sum();
    }
    // a(u) and d(u): vacuum eigenvalue products over the chain.
    cplx a_of(cplx u) const;
    cplx d_of(cplx u) const;

private:
    int num_sites_;
    std::vector<cplx> xi_;
    long p_, q_;
    ModularParam tau_;
    int n_;
};

struct BoltzmannWeights {
    cplx w0, w1, w2, w3;          // W_a(u)
    cplx a8v, b8v, c8v, d8v;      // a = W0+W3, b = W0-W3, c = W1+W2, d = W1-W2
};

BoltzmannWeights boltzmann_weights(cplx u, cplx eta, const ModularParam& tau);

// The 4x4 eight-vertex R-matrix in elliptic parametrization; both the W_a sum
// and the doubled-tau product form are computed and cross-checked.
Matrix r_matrix(cplx u, cplx eta, const ModularParam& tau);
inline Matrix r_matrix(cplx u, const ModelParams& mp) { return r_matrix(u, mp.eta(), mp.tau()); }

// 2x2 quantum block (i,j) of the L-operator, which is the R-matrix re-blocked
// with the auxiliary index as the outer (first) tensor factor.
Matrix l_operator_block(const Matrix& r, int i, int j);

struct Monodromy {
    Matrix a, b, c, d;
    const Matrix& block(int i, int j) const {
        if (i == 0) return j == 0 ? a : b;
        return j == 0 ? c : d;
    }
};

Monodromy monodromy(cplx u, const ModelParams& mp);
Matrix transfer_matrix(cplx u, const ModelParams& mp);

// U_a = sigma_a^{otimes N}.
Matrix symmetry_operator(int axis, int num_sites);

// H^XYZ of the homogeneous chain with periodic boundary; throws on
// inhomogeneous input.
Matrix xyz_hamiltonian(const ModelParams& mp);
struct XyzCouplings { cplx j1, j2, j3, j0; };
XyzCouplings xyz_couplings(const ModelParams& mp);

// Reconstructs E^{ij}_m from monodromy entries via the inverse scattering
// problem and asserts agreement with the literal embedding to 1e-9.
Matrix local_operator_via_inverse_problem(int i, int j, int m, const ModelParams& mp);

}  // namespace ebethe
