#include <doctest.h>

#include "ebethe/scalar.hpp"
#include "ebethe/verify.hpp"
#include "test_util.hpp"

using namespace ebethe;
using testutil::random_cplx;
using testutil::rel_err;

namespace {

const ModularParam kTau(cplx(0.0, 0.8));

ModelParams n2_params(long p = 1, long q = 4) {
    return ModelParams(2, {cplx(0.1, 0.0), cplx(-0.05, 0.0)}, p, q, kTau);
}

ModelParams n4_params() {
    return ModelParams(4, {cplx(0.07), cplx(-0.02), cplx(0.11), cplx(0.0)}, 1, 4, kTau);
}

std::vector<cplx> u_grid(int count) {
    std::vector<cplx> grid;
    for (int i = 0; i < count; ++i) {
        grid.push_back(-0.45 + 0.9 * static_cast<double>(i) / (count - 1) + cplx(0.0, 0.023));
    }
    return grid;
}

}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("oracle bilinearity and parameter symmetry") {
    auto gen = testutil::rng(801);
    const ModelParams mp = n4_params();
    const GaugeParams gp = GaugeParams::generic(mp, 803);
    const std::vector<cplx> vs = {random_cplx(gen, 0.3, 0.08), random_cplx(gen, 0.3, 0.08)};
    const std::vector<cplx> us = {random_cplx(gen, 0.3, 0.08), random_cplx(gen, 0.3, 0.08)};
    const std::vector<cplx> us_swapped = {us[1], us[0]};
    const std::vector<cplx> vs_swapped = {vs[1], vs[0]};

    const cplx base = brute_force_scalar_product(1, vs, 3, us, mp, gp);
    CHECK(rel_err(base, brute_force_scalar_product(1, vs, 3, us_swapped, mp, gp)) < 1e-10);
    CHECK(rel_err(base, brute_force_scalar_product(1, vs_swapped, 3, us, mp, gp)) < 1e-10);

    // bilinearity in each slot
    const Vector left = bethe_vector(1, vs, Side::left, mp, gp);
    const Vector right = bethe_vector(3, us, Side::right, mp, gp);
    const cplx lambda(0.7, -0.4);
    CHECK(rel_err(bilinear((lambda * left).eval(), right), lambda * base) < 1e-12);
    CHECK(rel_err(bilinear(left, (lambda * right).eval()), lambda * base) < 1e-12);
}

TEST_CASE("exact diagonalization matches the eigenvalue function at N=2") {
    const ModelParams mp = n2_params();
    const auto states = solve_bethe(mp);
    for (const cplx& u : u_grid(10)) {
        const EigenSystem es = dense_eigen(transfer_matrix(u, mp));
        const double scale = es.values.cwiseAbs().maxCoeff();
        for (const auto& st : states) {
            const cplx tev = transfer_eigenvalue(st.nu, u, st.roots, mp);
            double best = 1e300;
            for (Eigen::Index i = 0; i < es.values.size(); ++i) {
                best = std::min(best, std::abs(es.values(i) - tev));
            }
            CHECK(best < 1e-10 * scale);
        }
    }
}

TEST_CASE("on-shell action residuals") {
    const ModelParams mp = n2_params();
    const GaugeParams gp = GaugeParams::generic(mp, 809);
    const auto states = solve_bethe(mp);
    const auto grid = u_grid(5);
    for (const auto& st : states) {
        const OnshellCheck chk = onshell_action_check(st, grid, mp, gp);
        CHECK(chk.max_residual < 1e-10);
        CHECK(chk.left_norm > 1e-6);
        CHECK(chk.right_norm > 1e-6);
    }

    // off-shell roots give large residuals
    BetheState off;
    off.nu = 0;
    off.roots = {cplx(0.31, 0.17)};
    const OnshellCheck bad = onshell_action_check(off, grid, mp, gp);
    CHECK(bad.max_residual > 1e-3);

    // N=4 free fermions: the physical states pass, the vanishing-sum indices throw
    const ModelParams mp4 = n4_params();
    const GaugeParams gp4 = GaugeParams::generic(mp4, 811);
    int passed = 0, vanished = 0;
    for (const auto& st : solve_bethe(mp4)) {
        try {
            const OnshellCheck chk = onshell_action_check(st, grid, mp4, gp4);
            if (chk.max_residual < 1e-9) ++passed;
        } catch (const degenerate_configuration_error&) {
            ++vanished;
        }
    }
    CHECK(passed >= 2);
    CHECK(passed + vanished >= 8);
}

TEST_CASE("brute-force orthogonality of distinct on-shell states") {
    const ModelParams mp = n2_params();
    const GaugeParams gp = GaugeParams::generic(mp, 813);
    const auto states = solve_bethe(mp);
    for (const auto& a : states) {
        for (const auto& b : states) {
            const bool same = a.nu == b.nu && std::abs(a.roots[0] - b.roots[0]) < 1e-10;
            const Vector left = bethe_vector(a.nu, a.roots, Side::left, mp, gp);
            const Vector right = bethe_vector(b.nu, b.roots, Side::right, mp, gp);
            const cplx sp = bilinear(left, right);
            if (same) {
                CHECK(std::abs(sp) > 1e-8 * left.norm() * right.norm());
            } else {
                CHECK(std::abs(sp) < 1e-9 * left.norm() * right.norm());
            }
        }
    }
}

TEST_CASE("selection rule at even Q") {
    auto gen = testutil::rng(821);
    const ModelParams mp = n2_params();
    const GaugeParams gp = GaugeParams::generic(mp, 823);
    const auto states = solve_bethe(mp);
    for (const auto& st : states) {
        for (const int mu : {st.nu + 1, st.nu + 3}) {
            const std::vector<cplx> us = {random_cplx(gen, 0.35, 0.08)};
            const Vector left = bethe_vector(st.nu, st.roots, Side::left, mp, gp);
            const Vector right = bethe_vector(mu % 4, us, Side::right, mp, gp);
            CHECK(std::abs(bilinear(left, right)) < 1e-10 * left.norm() * right.norm());
        }
    }
}

TEST_CASE("magnetization form factor at N=2") {
    const ModelParams mp = n2_params();
    const GaugeParams gp = GaugeParams::generic(mp, 827);
    const auto states = solve_bethe(mp);
    for (const auto& st : states) {
        for (const int site : {1, 2}) {
            const FormFactorCheck chk = magnetization_form_factor_check(st, site, mp, gp);
            CHECK(chk.rel_error < 1e-9);
        }
    }

    // completeness: the diagonal weights reproduce the trace in the eigenbasis
    const Matrix op = 0.5 * (Matrix::Identity(4, 4) - embed_local(pauli(3), {1}, 2));
    cplx trace_from_states = 0.0;
    for (const auto& st : states) {
        const Vector left = bethe_vector(st.nu, st.roots, Side::left, mp, gp);
        const Vector right = bethe_vector(st.nu, st.roots, Side::right, mp, gp);
        trace_from_states += (left.transpose() * op * right)(0) / bilinear(left, right);
    }
    CHECK(rel_err(trace_from_states, op.trace()) < 1e-9);
}

TEST_CASE("s,t dependence experiment") {
    const ModelParams mp = n2_params();
    const auto states = solve_bethe(mp);

    std::vector<cplx> s_grid, t_grid;
    for (int i = 0; i < 3; ++i) {
        s_grid.push_back(cplx(0.11 + 0.17 * i, 0.21));
        t_grid.push_back(cplx(-0.23 + 0.13 * i, -0.11));
    }

    for (const auto& st : states) {
        const StDependenceReport rep =
            st_dependence_experiment(st.nu, st.roots, s_grid, t_grid, mp);
        CHECK(rep.max_projective_distance < 1e-8);
        CHECK(rep.max_zero_error < 1e-4);
        CHECK(rep.phase_shift_error < 1e-9);
    }

    // one N=4 state: direction invariance and prefactor zeros at y = -v_j
    const ModelParams mp4 = n4_params();
    const auto states4 = solve_bethe(mp4);
    const StDependenceReport rep4 = st_dependence_experiment(
        states4[0].nu, states4[0].roots, std::vector<cplx>{s_grid[0], s_grid[1]},
        std::vector<cplx>{t_grid[0], t_grid[1]}, mp4);
    CHECK(rep4.max_projective_distance < 1e-8);
    CHECK(rep4.max_zero_error < 1e-4);
    CHECK(rep4.phase_shift_error < 1e-9);
}

TEST_SUITE_END();
