#pragma once

#include <optional>

#include "ebethe/vertex.hpp"

namespace ebethe {

// Auxiliary gauge parameters (s,t) with the derived ladder quantities
// s_k = s + k*eta, t_k = t + k*eta, tau_k = (s_k+t_k)/2 and the gamma factors.
class GaugeParams {
public:
    GaugeParams(cplx s, cplx t, const ModelParams& mp);

    // Seeded draw rejected until the gauge stays away from its singular loci
    // over a window of 2Q ladder indices and the supplied spectral points.
    static GaugeParams generic(const ModelParams& mp, uint64_t seed,
                               std::span<const cplx> us = {});

    cplx s() const { return s_; }
    cplx t() const { return t_; }
    cplx s_k(int k) const { return s_ + static_cast<double>(k) * eta_; }
    cplx t_k(int k) const { return t_ + static_cast<double>(k) * eta_; }
    cplx tau_k(int k) const { return 0.5 * (s_k(k) + t_k(k)); }
    cplx gamma_k(int k) const;
    cplx x() const { return 0.5 * (s_ + t_ + 1.0); }
    cplx y() const { return 0.5 * (s_ - t_); }
    double eta() const { return eta_; }
    const ModularParam& tau() const { return tau_; }
    const ModularParam& tau2() const { return tau2_; }

    GaugeParams shifted(cplx ds, cplx dt, const ModelParams& mp) const {
        return GaugeParams(s_ + ds, t_ + dt, mp);
    }

private:
    cplx s_, t_;
    double eta_;
    ModularParam tau_;
    ModularParam tau2_;
};

// |phi(s)> = (theta1(s|2tau), theta4(s|2tau))^T.
Vector2 intertwining_vector(cplx sarg, const ModularParam& tau);
// <phi_perp(s)| = (-theta4(s|2tau), theta1(s|2tau)).
RowVector2 intertwining_covector(cplx sarg, const ModularParam& tau);

// IRF Boltzmann weight W[k, kp; l, kpp](u); zero unless the four heights are
// pairwise admissible.
cplx irf_weight(int k, int kp, int l, int kpp, cplx u, const GaugeParams& gp);

struct GaugeMatrix {
    Matrix2 m;
    Matrix2 minv;
    cplx mu;  // det M_k(u), independent of k
};

GaugeMatrix gauge_matrix(int k, cplx u, const GaugeParams& gp, bool barred = false);

struct GaugedMonodromy {
    int k = 0, l = 0;
    bool barred = false;
    Matrix a, b, c, d;
};

GaugedMonodromy gauged_monodromy(int k, int l, cplx u, const ModelParams& mp,
                                 const GaugeParams& gp, bool barred = false);

// Right vacuum |Omega^l> or left vacuum <bar Omega^l| (as a coefficient vector;
// left vectors contract bilinearly).
Vector vacuum_vector(int l, Side side, const ModelParams& mp, const GaugeParams& gp);

// |Psi^l(u_1..u_n)> (right) or <Psi^l(v_1..v_n)| (left): the fixed-l building
// block of the Bethe vector, before the Fourier sum over l.
Vector bethe_vector_term(int l, std::span<const cplx> params, Side side, const ModelParams& mp,
                         const GaugeParams& gp);

// Fourier-transformed off-shell Bethe vector, nu modulo Q.
Vector bethe_vector(int nu, std::span<const cplx> params, Side side, const ModelParams& mp,
                    const GaugeParams& gp);

// Transfer-matrix eigenvalue function T_nu(u; roots); regular at u = v_j when
// the roots are on-shell (evaluated there by the derivative limit).
cplx transfer_eigenvalue(int nu, cplx u, std::span<const cplx> roots, const ModelParams& mp);

// Residue of T_nu at u = u_j (vanishes exactly on-shell).
cplx transfer_eigenvalue_residue(int nu, int j, std::span<const cplx> roots,
                                 const ModelParams& mp);

// Checks U_a |Psi_nu(u; s,t)> = phase * |Psi_nu(u; shifted s,t)> for a = 1, 3;
// returns the relative residual.
double u_action_check(int axis, int nu, std::span<const cplx> params, Side side,
                      const ModelParams& mp, const GaugeParams& gp);

}  // namespace ebethe
