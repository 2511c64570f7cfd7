#include "ebethe/vertex.hpp"

#include <numeric>

namespace ebethe {

namespace {

long gcd_abs(long a, long b) { return std::gcd(std::abs(a), std::abs(b)); }

}  // namespace

ModelParams::ModelParams(int num_sites, std::vector<cplx> xi, long p, long q, ModularParam tau)
    : num_sites_(num_sites), xi_(std::move(xi)), p_(p), q_(q), tau_(tau) {
    if (num_sites_ < 2 || num_sites_ % 2 != 0 || num_sites_ > kMaxSites) {
        throw std::invalid_argument("ModelParams: N must be even, 2 <= N <= 8");
    }
    if (static_cast<int>(xi_.size()) != num_sites_) {
        throw std::invalid_argument("ModelParams: need exactly N inhomogeneities");
    }
    if (q_ <= 0 || gcd_abs(p_, q_) != 1) {
        throw std::invalid_argument("ModelParams: eta = 2P/Q needs coprime P,Q with Q > 0");
    }
    n_ = num_sites_ / 2;
}

void ModelParams::set_n_roots(int n) {
    // 2n = N (mod Q) admits values other than N/2 for rational eta.
    if (n < 1 || ((2 * n - num_sites_) % static_cast<int>(q_)) != 0) {
        throw std::invalid_argument("ModelParams: n must satisfy 2n = N (mod Q)");
    }
    n_ = n;
}

bool ModelParams::homogeneous_xi() const {
    for (const cplx& x : xi_) {
        if (std::abs(x) != 0.0) return false;
    }
    return true;
}

cplx ModelParams::a_of(cplx u) const {
    cplx prod = 1.0;
    for (const cplx& x : xi_) prod *= theta(1, u - x + eta(), tau_);
    return prod;
}

cplx ModelParams::d_of(cplx u) const {
    cplx prod = 1.0;
    for (const cplx& x : xi_) prod *= theta(1, u - x, tau_);
    return prod;
}

BoltzmannWeights boltzmann_weights(cplx u, cplx eta, const ModularParam& tau) {
    BoltzmannWeights w;
    const cplx norm = theta(1, eta, tau);
    // W_a uses theta index 5-a, understood modulo 4.
    w.w0 = norm * theta(5, u + eta / 2.0, tau) / (2.0 * theta(5, eta / 2.0, tau));
    w.w1 = norm * theta(4, u + eta / 2.0, tau) / (2.0 * theta(4, eta / 2.0, tau));
    w.w2 = norm * theta(3, u + eta / 2.0, tau) / (2.0 * theta(3, eta / 2.0, tau));
    w.w3 = norm * theta(2, u + eta / 2.0, tau) / (2.0 * theta(2, eta / 2.0, tau));
    w.a8v = w.w0 + w.w3;
    w.b8v = w.w0 - w.w3;
    w.c8v = w.w1 + w.w2;
    w.d8v = w.w1 - w.w2;
    return w;
}

Matrix r_matrix(cplx u, cplx eta, const ModularParam& tau) {
    const BoltzmannWeights w = boltzmann_weights(u, eta, tau);

    // Doubled-tau product form of the same weights.
    const ModularParam tau2 = tau.scaled(2.0);
    const cplx denom = theta(2, 0.0, tau) * theta(4, 0.0, tau2);
    const cplx a2 = 2.0 * theta(4, eta, tau2) * theta(1, u + eta, tau2) * theta(4, u, tau2) / denom;
    const cplx b2 = 2.0 * theta(4, eta, tau2) * theta(4, u + eta, tau2) * theta(1, u, tau2) / denom;
    const cplx c2 = 2.0 * theta(1, eta, tau2) * theta(4, u + eta, tau2) * theta(4, u, tau2) / denom;
    const cplx d2 = 2.0 * theta(1, eta, tau2) * theta(1, u + eta, tau2) * theta(1, u, tau2) / denom;

    const double scale = std::max({std::abs(w.a8v), std::abs(w.b8v), std::abs(w.c8v),
                                   std::abs(w.d8v), 1e-300});
    if (std::abs(w.a8v - a2) + std::abs(w.b8v - b2) + std::abs(w.c8v - c2) +
            std::abs(w.d8v - d2) >
        1e-12 * 4.0 * scale) {
        throw std::runtime_error("r_matrix: W_a sum and doubled-tau product forms disagree");
    }

    Matrix r = Matrix::Zero(4, 4);
    r(0, 0) = w.a8v;
    r(0, 3) = w.d8v;
    r(1, 1) = w.b8v;
    r(1, 2) = w.c8v;
    r(2, 1) = w.c8v;
    r(2, 2) = w.b8v;
    r(3, 0) = w.d8v;
    r(3, 3) = w.a8v;
    return r;
}

Matrix l_operator_block(const Matrix& r, int i, int j) {
    Matrix block(2, 2);
    block(0, 0) = r(2 * i, 2 * j);
    block(0, 1) = r(2 * i, 2 * j + 1);
    block(1, 0) = r(2 * i + 1, 2 * j);
    block(1, 1) = r(2 * i + 1, 2 * j + 1);
    return block;
}

Monodromy monodromy(cplx u, const ModelParams& mp) {
    const int n = mp.num_sites();
    const int dim = mp.dim();
    std::array<std::array<Matrix, 2>, 2> acc;
    acc[0][0] = Matrix::Identity(dim, dim);
    acc[1][1] = Matrix::Identity(dim, dim);
    acc[0][1] = Matrix::Zero(dim, dim);
    acc[1][0] = Matrix::Zero(dim, dim);

    for (int site = 1; site <= n; ++site) {
        const Matrix r = r_matrix(u - mp.xi()[static_cast<std::size_t>(site - 1)], mp);
        std::array<std::array<Matrix, 2>, 2> local;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                local[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    embed_local(l_operator_block(r, i, j), {site}, n);
            }
        }
        std::array<std::array<Matrix, 2>, 2> next;
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 2; ++k) {
                next[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                    acc[static_cast<std::size_t>(i)][0] * local[0][static_cast<std::size_t>(k)] +
                    acc[static_cast<std::size_t>(i)][1] * local[1][static_cast<std::size_t>(k)];
            }
        }
        acc = std::move(next);
    }
    return Monodromy{std::move(acc[0][0]), std::move(acc[0][1]), std::move(acc[1][0]),
                     std::move(acc[1][1])};
}

Matrix transfer_matrix(cplx u, const ModelParams& mp) {
    const Monodromy t = monodromy(u, mp);
    return t.a + t.d;
}

Matrix symmetry_operator(int axis, int num_sites) {
    if (axis < 1 || axis > 3) throw std::invalid_argument("symmetry_operator: axis must be 1..3");
    const Matrix sigma = pauli(axis);
    Matrix out = sigma;
    for (int k = 1; k < num_sites; ++k) {
        Matrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                next.block(2 * i, 2 * j, 2, 2) = out(i, j) * sigma;
            }
        }
        out = std::move(next);
    }
    return out;
}

XyzCouplings xyz_couplings(const ModelParams& mp) {
    const ModularParam& tau = mp.tau();
    const cplx eta = mp.eta();
    XyzCouplings c;
    c.j1 = theta(4, eta, tau) / theta(4, 0.0, tau);
    c.j2 = theta(3, eta, tau) / theta(3, 0.0, tau);
    c.j3 = theta(2, eta, tau) / theta(2, 0.0, tau);
    c.j0 = 0.5 * theta1_deriv(eta, tau) / theta(1, eta, tau);
    return c;
}

Matrix xyz_hamiltonian(const ModelParams& mp) {
    if (!mp.homogeneous_xi()) {
        throw std::invalid_argument("xyz_hamiltonian: requires the homogeneous model (all xi = 0)");
    }
    const int n = mp.num_sites();
    const XyzCouplings c = xyz_couplings(mp);
    const std::array<cplx, 3> j = {c.j1, c.j2, c.j3};

    Matrix h = Matrix::Zero(mp.dim(), mp.dim());
    for (int site = 1; site <= n; ++site) {
        const int next = site % n + 1;  // periodic: site N+1 == 1
        for (int a = 1; a <= 3; ++a) {
            const Matrix pair = kron(pauli(a), pauli(a));
            h += j[static_cast<std::size_t>(a - 1)] * embed_local(pair, {site, next}, n);
        }
    }
    return h;
}

Matrix local_operator_via_inverse_problem(int i, int j, int m, const ModelParams& mp) {
    if (i < 1 || i > 2 || j < 1 || j > 2) {
        throw std::invalid_argument("inverse problem: matrix indices must be 1 or 2");
    }
    if (m < 1 || m > mp.num_sites()) {
        throw std::invalid_argument("inverse problem: site out of range");
    }

    const int dim = mp.dim();
    Matrix prefix = Matrix::Identity(dim, dim);
    Matrix full = Matrix::Identity(dim, dim);
    for (int k = 1; k <= m; ++k) {
        const Matrix tm = transfer_matrix(mp.xi()[static_cast<std::size_t>(k - 1)], mp);
        if (Eigen::PartialPivLU<Matrix>(tm).rcond() < 1e-13) {
            throw degenerate_configuration_error(
                "inverse problem: T(xi_" + std::to_string(k) + ") numerically singular");
        }
        if (k < m) prefix = prefix * tm;
        full = full * tm;
    }

    const Monodromy t = monodromy(mp.xi()[static_cast<std::size_t>(m - 1)], mp);
    // (ji) entry of the monodromy, 1-based. With the site-1-first monodromy
    // ordering the inverse transfer product acts from the left.
    const Matrix& entry = t.block(j - 1, i - 1);

    const Matrix reconstructed = full.partialPivLu().solve(entry * prefix);

    Matrix unit = Matrix::Zero(2, 2);
    unit(i - 1, j - 1) = 1.0;
    const Matrix literal = embed_local(unit, {m}, mp.num_sites());
    const double err = frobenius(reconstructed - literal) / std::max(1.0, frobenius(literal));
    if (err > 1e-9) {
        throw std::runtime_error("inverse problem: reconstruction error " + std::to_string(err) +
                                 " exceeds 1e-9");
    }
    return reconstructed;
}

}  // namespace ebethe
