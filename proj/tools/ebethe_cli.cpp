// Command-line front end: solvers, verifications and sweeps with JSON reports.

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <thread>

#include "ebethe/qop.hpp"
#include "ebethe/scalar.hpp"
#include "ebethe/verify.hpp"

using namespace ebethe;
using json = nlohmann::ordered_json;

namespace {

json encode(cplx z) { return json::array({z.real(), z.imag()}); }

json encode(std::span<const cplx> zs) {
    json out = json::array();
    for (const cplx& z : zs) out.push_back(encode(z));
    return out;
}

struct EtaFlag {
    long p = 1, q = 4;  // eta = 2p/q
};

EtaFlag parse_eta(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw CLI::ValidationError("--eta", "expected P/Q");
    long num = std::stol(text.substr(0, slash));
    long den = std::stol(text.substr(slash + 1));
    if (den <= 0 || num == 0) throw CLI::ValidationError("--eta", "expected positive P/Q");
    const long g = std::gcd(std::abs(num), den);
    num /= g;
    den /= g;
    // eta = num/den = 2P/Q
    EtaFlag f;
    if (num % 2 == 0) {
        f.p = num / 2;
        f.q = den;
    } else {
        f.p = num;
        f.q = 2 * den;
    }
    return f;
}

cplx parse_cplx(std::string text) {
    std::erase(text, ' ');
    if (text.empty()) throw CLI::ValidationError("complex", "empty value");
    double re = 0.0, im = 0.0;
    if (text.back() == 'i') {
        text.pop_back();
        // split at the last +/- that is not an exponent sign or leading
        std::size_t split = std::string::npos;
        for (std::size_t i = text.size(); i-- > 1;) {
            if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
                split = i;
                break;
            }
        }
        if (split == std::string::npos) {
            im = text.empty() || text == "+" ? 1.0 : (text == "-" ? -1.0 : std::stod(text));
        } else {
            re = std::stod(text.substr(0, split));
            const std::string rest = text.substr(split);
            im = (rest == "+") ? 1.0 : (rest == "-") ? -1.0 : std::stod(rest);
        }
    } else {
        re = std::stod(text);
    }
    return {re, im};
}

std::vector<cplx> parse_cplx_list(const std::string& text) {
    std::vector<cplx> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string chunk =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!chunk.empty()) out.push_back(parse_cplx(chunk));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int thread_cap() {
    if (const char* env = std::getenv("ELLIPT_BETHE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-ordered parallel map; results are deterministic regardless of the cap.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const int workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct CommonFlags {
    int n_sites = 2;
    std::string eta_text = "1/2";
    std::string tau_text = "0.8i";
    std::string xi_text;
    uint64_t seed = 1;
    double tol = 1e-8;
    std::string out_path;
    std::string csv_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--N", flags.n_sites, "chain length (even, <= 8)");
    cmd->add_option("--eta", flags.eta_text, "anisotropy as an exact fraction, e.g. 1/2 or 2/3");
    cmd->add_option("--tau", flags.tau_text, "modular parameter, e.g. 0.8i or 0.1+0.8i");
    cmd->add_option("--xi", flags.xi_text, "comma list of inhomogeneities (default: seeded small reals)");
    cmd->add_option("--seed", flags.seed, "seed controlling all randomness");
    cmd->add_option("--tol", flags.tol, "tolerance for pass/fail checks");
    cmd->add_option("--out", flags.out_path, "write the JSON report to this file");
    cmd->add_option("--csv", flags.csv_path, "also write a CSV table");
}

ModelParams build_model(const CommonFlags& flags) {
    const EtaFlag eta = parse_eta(flags.eta_text);
    const ModularParam tau(parse_cplx(flags.tau_text));
    std::vector<cplx> xi;
    if (!flags.xi_text.empty()) {
        xi = parse_cplx_list(flags.xi_text);
    } else {
        std::mt19937_64 gen(flags.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> unit(-0.1, 0.1);
        for (int i = 0; i < flags.n_sites; ++i) xi.emplace_back(unit(gen), 0.0);
    }
    if (static_cast<int>(xi.size()) != flags.n_sites) {
        throw CLI::ValidationError("--xi", "need exactly N entries");
    }
    return ModelParams(flags.n_sites, std::move(xi), eta.p, eta.q, tau);
}

json model_block(const ModelParams& mp) {
    json out;
    out["N"] = mp.num_sites();
    out["eta"] = {{"P", mp.p()}, {"Q", mp.q()}, {"value", mp.eta()}};
    out["tau"] = encode(mp.tau().tau());
    out["xi"] = encode(mp.xi());
    return out;
}

json state_block(const BetheState& st) {
    json out;
    out["nu"] = st.nu;
    out["roots"] = encode(st.roots);
    out["onshell"] = st.onshell;
    out["residuals"] = st.residuals;
    if (st.sumrule_ints) {
        out["nu1"] = st.sumrule_ints->first;
        out["nu3"] = st.sumrule_ints->second;
    }
    return out;
}

void emit(const json& report, const CommonFlags& flags, const std::string& csv) {
    const std::string text = report.dump(2) + "\n";
    if (flags.out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(flags.out_path);
        out << text;
    }
    if (!flags.csv_path.empty() && !csv.empty()) {
        std::ofstream out(flags.csv_path);
        out << csv;
    }
}

int run_bethe_solve(const CommonFlags& flags) {
    const ModelParams mp = build_model(flags);
    const auto states = solve_bethe(mp, {.seed = flags.seed});

    json report;
    report["schema"] = 1;
    report["command"] = "bethe-solve";
    report["model"] = model_block(mp);
    report["states"] = json::array();
    std::string csv = "nu,root_index,re,im,residual,nu1,nu3\n";
    bool ok = true;
    for (const auto& st : states) {
        report["states"].push_back(state_block(st));
        for (std::size_t i = 0; i < st.roots.size(); ++i) {
            csv += std::to_string(st.nu) + "," + std::to_string(i) + "," +
                   std::to_string(st.roots[i].real()) + "," + std::to_string(st.roots[i].imag()) +
                   "," + std::to_string(st.residuals[i]) + "," +
                   std::to_string(st.sumrule_ints ? st.sumrule_ints->first : -1) + "," +
                   std::to_string(st.sumrule_ints ? st.sumrule_ints->second : -1) + "\n";
        }
        for (const double r : st.residuals) ok = ok && r <= flags.tol;
    }
    report["count"] = states.size();
    report["pass"] = ok;
    emit(report, flags, csv);
    return ok ? 0 : 1;
}

int run_spectrum(const CommonFlags& flags) {
    const ModelParams mp = build_model(flags);
    const auto states = solve_bethe(mp, {.seed = flags.seed});
    const cplx u0(0.231, 0.017);
    const EigenSystem es = dense_eigen(transfer_matrix(u0, mp));
    const double scale = es.values.cwiseAbs().maxCoeff();

    json report;
    report["schema"] = 1;
    report["command"] = "spectrum";
    report["model"] = model_block(mp);
    report["u"] = encode(u0);
    report["eigenvalues"] = json::array();
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        report["eigenvalues"].push_back(encode(es.values(i)));
    }
    report["matches"] = json::array();
    bool ok = true;
    std::string csv = "nu,T_re,T_im,distance_to_spectrum\n";
    std::vector<bool> matched(static_cast<std::size_t>(es.values.size()), false);
    for (const auto& st : states) {
        const cplx tev = transfer_eigenvalue(st.nu, u0, st.roots, mp);
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index best_index = 0;
        for (Eigen::Index i = 0; i < es.values.size(); ++i) {
            const double d = std::abs(es.values(i) - tev);
            if (d < best) {
                best = d;
                best_index = i;
            }
        }
        if (best / scale <= flags.tol) matched[static_cast<std::size_t>(best_index)] = true;
        json m = state_block(st);
        m["eigenvalue"] = encode(tev);
        m["distance_to_spectrum"] = best / scale;
        report["matches"].push_back(m);
        csv += std::to_string(st.nu) + "," + std::to_string(tev.real()) + "," +
               std::to_string(tev.imag()) + "," + std::to_string(best / scale) + "\n";
        ok = ok && best / scale <= flags.tol;
    }
    // eigenvalues with no n = N/2 Bethe state (other root-count sectors, or
    // states outside the sum rule) are reported rather than hidden
    int unmatched = 0;
    for (const bool hit : matched) {
        if (!hit) ++unmatched;
    }
    report["unmatched_eigenvalues"] = unmatched;
    report["pass"] = ok;
    emit(report, flags, csv);
    return ok ? 0 : 1;
}

int run_scalar_product(const CommonFlags& flags, int nu, int mu, const std::string& u_spec,
                       bool check_bruteforce, int samples) {
    const ModelParams mp = build_model(flags);
    const auto states = solve_bethe(mp, {.seed = flags.seed});
    const BetheState* state = nullptr;
    for (const auto& st : states) {
        if (st.nu == nu) {
            state = &st;
            break;
        }
    }
    if (state == nullptr) {
        std::fprintf(stderr, "no on-shell state with nu=%d\n", nu);
        return 1;
    }
    const GaugeParams gp = GaugeParams::generic(mp, flags.seed);

    std::vector<std::vector<cplx>> u_sets;
    if (u_spec.rfind("random", 0) == 0) {
        uint64_t seed = flags.seed;
        const auto eq = u_spec.find("seed=");
        if (eq != std::string::npos) seed = std::stoull(u_spec.substr(eq + 5));
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> re(-0.4, 0.4), im(-0.08, 0.08);
        for (int s = 0; s < samples; ++s) {
            std::vector<cplx> us;
            for (int i = 0; i < mp.n_roots(); ++i) us.emplace_back(re(gen), im(gen));
            u_sets.push_back(std::move(us));
        }
    } else {
        u_sets.push_back(parse_cplx_list(u_spec));
    }

    struct Row {
        json body;
        bool ok = true;
    };
    std::vector<Row> rows(u_sets.size());
    cplx diag = 0.0;
    if (check_bruteforce) {
        diag = brute_force_scalar_product(nu, state->roots, nu, state->roots, mp, gp);
    }
    parallel_for(static_cast<int>(u_sets.size()), [&](int i) {
        const auto& us = u_sets[static_cast<std::size_t>(i)];
        Row row;
        try {
            const auto rep = normalized_scalar_product(nu, state->roots, mu, us, mp, gp);
            row.body["u"] = encode(us);
            row.body["r"] = encode(rep.r);
            row.body["phi1"] = encode(rep.phi1);
            row.body["det"] = encode(rep.det_value);
            row.body["value"] = encode(rep.value);
            if (check_bruteforce) {
                const cplx bf = brute_force_scalar_product(nu, state->roots, mu, us, mp, gp) / diag;
                const double rel = std::abs(rep.value - bf) /
                                   std::max({std::abs(rep.value), std::abs(bf), 1e-30});
                row.body["brute_force"] = encode(bf);
                row.body["rel_error"] = rel;
                row.ok = rel <= flags.tol;
            }
        } catch (const std::exception& e) {
            row.body["error"] = e.what();
            row.ok = false;
        }
        rows[static_cast<std::size_t>(i)] = std::move(row);
    });

    json report;
    report["schema"] = 1;
    report["command"] = "scalar-product";
    report["model"] = model_block(mp);
    report["state"] = state_block(*state);
    report["mu"] = mu;
    report["gauge"] = {{"s", encode(gp.s())}, {"t", encode(gp.t())}};
    report["samples"] = json::array();
    bool ok = true;
    std::string csv = "sample,value_re,value_im,rel_error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        report["samples"].push_back(rows[i].body);
        ok = ok && rows[i].ok;
        const auto& b = rows[i].body;
        csv += std::to_string(i) + "," +
               (b.contains("value") ? std::to_string(b["value"][0].get<double>()) + "," +
                                          std::to_string(b["value"][1].get<double>())
                                    : "nan,nan") +
               "," + (b.contains("rel_error") ? std::to_string(b["rel_error"].get<double>()) : "") +
               "\n";
    }
    report["pass"] = ok;
    emit(report, flags, csv);
    return ok ? 0 : 1;
}

int run_verify(const CommonFlags& flags, const std::string& suite, int samples) {
    const ModelParams mp = build_model(flags);
    json report;
    report["schema"] = 1;
    report["command"] = "verify";
    report["model"] = model_block(mp);
    report["suite"] = suite;
    report["checks"] = json::array();
    bool all_ok = true;

    auto push = [&](const std::string& name, double worst, double tol) {
        const bool ok = worst <= tol;
        report["checks"].push_back(
            {{"name", name}, {"max_residual", worst}, {"tolerance", tol}, {"pass", ok}});
        all_ok = all_ok && ok;
    };

    std::mt19937_64 gen(flags.seed);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(-0.2, 0.2);
    auto rc = [&]() { return cplx(re(gen), im(gen)); };

    if (suite == "yang-baxter" || suite == "all") {
        double worst = 0.0;
        for (int s = 0; s < samples; ++s) {
            const cplx eta = rc();
            const cplx u1 = rc(), u2 = rc();
            const Matrix a = r_matrix(u1 - u2, eta, mp.tau());
            const Matrix b = r_matrix(u1, eta, mp.tau());
            const Matrix c = r_matrix(u2, eta, mp.tau());
            const Matrix lhs = embed_local(a, {1, 2}, 3) * embed_local(b, {1, 3}, 3) *
                               embed_local(c, {2, 3}, 3);
            const Matrix rhs = embed_local(c, {2, 3}, 3) * embed_local(b, {1, 3}, 3) *
                               embed_local(a, {1, 2}, 3);
            worst = std::max(worst, frobenius(lhs - rhs) / frobenius(lhs));
        }
        push("yang-baxter", worst, 1e-12);
    }
    if (suite == "commuting-transfer" || suite == "all") {
        double worst = 0.0;
        for (int s = 0; s < std::min(samples, 10); ++s) {
            const cplx u = rc(), v = rc();
            const Matrix tu = transfer_matrix(u, mp);
            const Matrix tv = transfer_matrix(v, mp);
            worst = std::max(worst, commutator_norm(tu, tv) / (frobenius(tu) * frobenius(tv)));
        }
        push("commuting-transfer", worst, 1e-11);
    }
    if (suite == "onshell-action" || suite == "all") {
        const GaugeParams gp = GaugeParams::generic(mp, flags.seed);
        const auto states = solve_bethe(mp, {.seed = flags.seed});
        const std::vector<cplx> grid = {cplx(0.21, 0.013), cplx(-0.32, 0.04)};
        double worst = 0.0;
        for (const auto& st : states) {
            try {
                worst = std::max(worst, onshell_action_check(st, grid, mp, gp).max_residual);
            } catch (const degenerate_configuration_error&) {
            }
        }
        push("onshell-action", worst, 1e-9);
    }
    if (suite == "scalar-product" || suite == "all") {
        if (mp.num_sites() <= 4) {
            const GaugeParams gp = GaugeParams::generic(mp, flags.seed);
            const auto states = solve_bethe(mp, {.seed = flags.seed});
            double worst = 0.0;
            for (const auto& st : states) {
                cplx diag;
                try {
                    diag = brute_force_scalar_product(st.nu, st.roots, st.nu, st.roots, mp, gp);
                } catch (const std::exception&) {
                    continue;
                }
                if (std::abs(diag) < 1e-12) continue;
                for (int s = 0; s < std::min(samples, 5); ++s) {
                    std::vector<cplx> us;
                    for (int i = 0; i < mp.n_roots(); ++i) us.push_back(rc() * 0.7);
                    const auto rep =
                        normalized_scalar_product(st.nu, st.roots, st.nu, us, mp, gp);
                    const cplx bf =
                        brute_force_scalar_product(st.nu, st.roots, st.nu, us, mp, gp) / diag;
                    worst = std::max(worst, std::abs(rep.value - bf) /
                                                std::max({std::abs(bf), std::abs(rep.value), 1e-30}));
                }
            }
            push("scalar-product", worst, flags.tol);
        }
    }

    report["pass"] = all_ok;
    emit(report, flags, "");
    return all_ok ? 0 : 1;
}

int run_free_fermion(const CommonFlags& flags, int samples) {
    CommonFlags local = flags;
    local.eta_text = "1/2";
    const ModelParams mp = build_model(local);
    const GaugeParams gp = GaugeParams::generic(mp, flags.seed);
    const auto states = solve_bethe(mp, {.seed = flags.seed});

    json report;
    report["schema"] = 1;
    report["command"] = "free-fermion";
    report["model"] = model_block(mp);
    report["comparisons"] = json::array();
    bool ok = true;
    std::mt19937_64 gen(flags.seed);
    std::uniform_real_distribution<double> re(-0.35, 0.35), im(-0.08, 0.08);

    for (const auto& st : states) {
        for (int s = 0; s < samples; ++s) {
            std::vector<cplx> us;
            for (int i = 0; i < mp.n_roots(); ++i) us.emplace_back(re(gen), im(gen));
            for (const int mu : {st.nu, (st.nu + 2) % 4}) {
                json row;
                row["nu"] = st.nu;
                row["mu"] = mu;
                try {
                    const auto rep = normalized_scalar_product(st.nu, st.roots, mu, us, mp, gp);
                    const cplx closed = free_fermion_scalar(st.nu, st.roots, mu, us, mp, gp);
                    const double rel = std::abs(rep.value - closed) /
                                       std::max({std::abs(rep.value), std::abs(closed), 1e-30});
                    row["generic"] = encode(rep.value);
                    row["closed_form"] = encode(closed);
                    row["rel_error"] = rel;
                    ok = ok && rel <= flags.tol;
                } catch (const std::exception& e) {
                    row["error"] = e.what();
                    ok = false;
                }
                report["comparisons"].push_back(row);
            }
        }
    }
    report["pass"] = ok;
    emit(report, flags, "");
    return ok ? 0 : 1;
}

int run_qop(const CommonFlags& flags, int samples) {
    const ModelParams mp = build_model(flags);
    const GaugeParams gp = GaugeParams::generic(mp, flags.seed);
    const QColumnBasis right = choose_q_basis(mp, gp, Side::right);

    json report;
    report["schema"] = 1;
    report["command"] = "qop";
    report["model"] = model_block(mp);
    report["tq_residuals"] = json::array();
    bool ok = true;
    std::mt19937_64 gen(flags.seed);
    std::uniform_real_distribution<double> re(-0.4, 0.4), im(-0.15, 0.15);
    for (int s = 0; s < samples; ++s) {
        const cplx u(re(gen), im(gen));
        const Matrix lhs = transfer_matrix(u, mp) * pre_q_right(u, mp, right);
        const Matrix rhs = mp.a_of(u) * pre_q_right(u - mp.eta(), mp, right) +
                           mp.d_of(u) * pre_q_right(u + mp.eta(), mp, right);
        const double res = frobenius(lhs - rhs) / frobenius(lhs);
        report["tq_residuals"].push_back({{"u", encode(u)}, {"residual", res}});
        ok = ok && res <= std::max(flags.tol, 1e-10);
    }

    report["eigenvalue_tq"] = json::array();
    for (const auto& st : solve_bethe(mp, {.seed = flags.seed})) {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const cplx u = -0.45 + 0.1 * i + cplx(0.0, 0.021);
            worst = std::max(worst, tq_eigenvalue_residual(st.nu, u, st.roots, mp));
        }
        json row = state_block(st);
        row["max_tq_residual"] = worst;
        report["eigenvalue_tq"].push_back(row);
        ok = ok && worst <= std::max(flags.tol, 1e-9);
    }
    report["pass"] = ok;
    emit(report, flags, "");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inhomogeneous 8-vertex model: Bethe states and scalar products"};
    app.require_subcommand(1);

    CommonFlags flags;
    int nu = 0, mu = 0, samples = 20;
    std::string u_spec = "random";
    std::string suite = "all";
    bool check_bruteforce = false;

    auto* solve_cmd = app.add_subcommand("bethe-solve", "solve the Bethe equations");
    add_common(solve_cmd, flags);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "exact diagonalization vs eigenvalue table");
    add_common(spectrum_cmd, flags);

    auto* scalar_cmd = app.add_subcommand("scalar-product", "normalized scalar products");
    add_common(scalar_cmd, flags);
    scalar_cmd->add_option("--nu", nu, "Fourier index of the on-shell left state");
    scalar_cmd->add_option("--mu", mu, "Fourier index of the off-shell right vector");
    scalar_cmd->add_option("--u", u_spec, "off-shell parameters: comma list or random[:seed=K]");
    scalar_cmd->add_option("--samples", samples, "number of random parameter sets");
    scalar_cmd->add_flag("--check-bruteforce", check_bruteforce,
                         "compare against the direct contraction oracle");

    auto* verify_cmd = app.add_subcommand("verify", "invariant suites with pass/fail summary");
    add_common(verify_cmd, flags);
    verify_cmd->add_option("--suite", suite,
                           "yang-baxter | commuting-transfer | onshell-action | scalar-product | all");
    verify_cmd->add_option("--samples", samples, "sample count for randomized suites");

    auto* ff_cmd = app.add_subcommand("free-fermion", "closed forms vs the generic path");
    add_common(ff_cmd, flags);
    ff_cmd->add_option("--samples", samples, "parameter sets per state");

    auto* qop_cmd = app.add_subcommand("qop", "TQ relation residuals");
    add_common(qop_cmd, flags);
    qop_cmd->add_option("--samples", samples, "spectral points for the operator TQ check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve_cmd->parsed()) return run_bethe_solve(flags);
        if (spectrum_cmd->parsed()) return run_spectrum(flags);
        if (scalar_cmd->parsed()) {
            return run_scalar_product(flags, nu, mu, u_spec, check_bruteforce, samples);
        }
        if (verify_cmd->parsed()) return run_verify(flags, suite, samples);
        if (ff_cmd->parsed()) return run_free_fermion(flags, std::min(samples, 5));
        if (qop_cmd->parsed()) return run_qop(flags, std::min(samples, 10));
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
