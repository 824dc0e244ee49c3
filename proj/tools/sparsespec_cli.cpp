// Command-line driver: graph generation, spectra, the degree-eigenvalue
// correspondence experiments, pruning checks and the analytic reports.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsespec/approx.hpp"
#include "sparsespec/degree_stats.hpp"
#include "sparsespec/experiments.hpp"
#include "sparsespec/io.hpp"
#include "sparsespec/nonbacktracking.hpp"
#include "sparsespec/pruning.hpp"
#include "sparsespec/rng.hpp"
#include "sparsespec/spectra.hpp"
#include "sparsespec/transfer.hpp"

using namespace sparsespec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitCheckFailed = 2;

struct CommonFlags {
    std::int64_t n = 10000;
    double d = 5.0;
    double b = 0.0;
    double kappa = 0.25;
    double theta = 0.5;
    double tau = 2.0;
    std::int64_t trials = 20;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::string config_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "vertex count");
        cmd->add_option("--d", d, "expected degree");
        cmd->add_option("--b", b, "sparsity b, sets d = b log n");
        cmd->add_option("--kappa", kappa, "threshold exponent, 0 < kappa < 1/2");
        cmd->add_option("--theta", theta, "error exponent, 0 < theta <= 1/2");
        cmd->add_option("--tau", tau, "pruning threshold");
        cmd->add_option("--trials", trials, "number of Monte Carlo trials");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--out", out, "output path");
        cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--config", config_path, "flat key=value config file");
    }

    ExperimentConfig to_config(const std::string& name) const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = ExperimentConfig::from_file(config_path);
        cfg.n = n;
        cfg.d = d;
        if (b > 0.0) cfg.b = b;
        cfg.kappa = kappa;
        cfg.theta = theta;
        cfg.tau = tau;
        cfg.trials = trials;
        cfg.seed = seed;
        if (!out.empty()) cfg.out_path = out;
        cfg.format = format;
        cfg.name = name;
        return cfg;
    }
};

int cmd_generate(const CommonFlags& f) {
    SparseGraph g = generate_er(f.n, f.b > 0.0 ? f.b * std::log(static_cast<double>(f.n)) : f.d, f.seed);
    if (f.out.empty()) {
        write_edge_list(g, std::cout);
    } else {
        save_edge_list(g, f.out);
        std::printf("wrote %lld vertices, %lld edges to %s\n",
                    static_cast<long long>(g.n), static_cast<long long>(g.edge_count()), f.out.c_str());
    }
    return kExitOk;
}

int cmd_spectrum(const CommonFlags& f, std::int64_t k, bool centered) {
    SparseGraph g = generate_er(f.n, f.d, f.seed);
    CenteredOperator op = centered ? CenteredOperator::centered(g) : CenteredOperator::plain(g);
    SpectrumResult s;
    if (k <= 0 || k * 2 >= g.n) {
        s = full_spectrum(op);
    } else {
        s = extremal_eigs(op, static_cast<int>(k), Side::both, 1e-9, 600, derive_seed(f.seed, 2));
    }
    if (f.out.empty()) {
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
            std::printf("%zu %.12g\n", i, s.eigenvalues[i]);
    } else {
        write_spectrum_csv(s, f.out);
    }
    return kExitOk;
}

int cmd_correspond(const CommonFlags& f, bool wigner, double median_gate, double edge_rate_gate) {
    ExperimentConfig cfg = f.to_config(wigner ? "wigner" : "correspond");
    CorrespondenceReport rep = wigner ? run_wigner_correspondence(cfg) : run_correspondence(cfg);
    if (!cfg.out_path.empty()) emit(rep, cfg.format, cfg.out_path);
    const std::int64_t usable = cfg.trials - rep.skip_count;
    std::printf("trials=%lld skipped=%lld with_outliers=%lld median_max_error=%.6g edge_pass=%lld/%lld\n",
                static_cast<long long>(cfg.trials), static_cast<long long>(rep.skip_count),
                static_cast<long long>(rep.trials_with_outliers), rep.median_max_error,
                static_cast<long long>(rep.edge_pass_count), static_cast<long long>(usable));
    if (median_gate > 0.0 && rep.trials_with_outliers > 0 && rep.median_max_error > median_gate)
        return kExitCheckFailed;
    if (edge_rate_gate > 0.0 && usable > 0 &&
        static_cast<double>(rep.edge_pass_count) < edge_rate_gate * static_cast<double>(usable))
        return kExitCheckFailed;
    return kExitOk;
}

int cmd_prune_check(const CommonFlags& f) {
    bool all_ok = true;
    std::int64_t worst_removed = 0;
    for (std::int64_t t = 0; t < f.trials; ++t) {
        SparseGraph g = generate_er(f.n, f.d, derive_seed(f.seed, static_cast<std::uint64_t>(t)));
        PrunedGraph p = prune(g, f.tau);
        PrunedProperties props = verify_pruned(p);
        worst_removed = std::max(worst_removed, props.max_removed_degree);
        if (!props.all_exact_ok()) {
            all_ok = false;
            std::printf("trial %lld: FAIL %s\n", static_cast<long long>(t), props.detail.c_str());
        }
    }
    std::printf("prune-check: %s, max removed degree %lld over %lld trials\n",
                all_ok ? "all exact properties hold" : "FAILURES", static_cast<long long>(worst_removed),
                static_cast<long long>(f.trials));
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_ihara_bass(const CommonFlags& f, double t_min, double t_max, int grid) {
    SparseGraph g = generate_er(f.n, f.d, f.seed);
    CenteredOperator op = CenteredOperator::centered(g);
    if (f.out.empty()) {
        for (int i = 0; i <= grid; ++i) {
            double t = t_min + (t_max - t_min) * i / grid;
            try {
                IharaBassPair p = ihara_bass_pair(op, t);
                std::printf("%.6f %.12g %.12g\n", t, p.det_value, p.min_eig);
            } catch (const std::domain_error&) {
            }
        }
    } else {
        write_ihara_bass_csv(op, t_min, t_max, grid, f.out);
    }
    return kExitOk;
}

int cmd_nbt_radius(const CommonFlags& f, int iters) {
    std::int64_t below = 0;
    for (std::int64_t t = 0; t < f.trials; ++t) {
        SparseGraph g = generate_er(f.n, f.d, derive_seed(f.seed, static_cast<std::uint64_t>(t)));
        CenteredOperator op = CenteredOperator::centered(g);
        NbtOperator nbt(op);
        NbtRadiusEstimate est = spectral_radius_nbt(nbt, iters, derive_seed(f.seed, 1000 + t));
        std::printf("trial %lld: rho estimate %.6f\n", static_cast<long long>(t), est.estimate);
        below += est.estimate <= 1.5;
    }
    std::printf("nbt-radius: %lld/%lld estimates <= 1.5\n", static_cast<long long>(below),
                static_cast<long long>(f.trials));
    return kExitOk;
}

int cmd_psd_check(const CommonFlags& f) {
    std::int64_t pass = 0;
    for (std::int64_t t = 0; t < f.trials; ++t) {
        SparseGraph g = generate_er(f.n, f.d, derive_seed(f.seed, static_cast<std::uint64_t>(t)));
        CenteredOperator op = CenteredOperator::centered(g);
        QuadraticFormCheck q = quadratic_form_check(op, f.d);
        const bool ok = std::min(q.lam_min_plus, q.lam_min_minus) >= -q.bound;
        pass += ok;
        std::printf("trial %lld: lam_min(+-) = %.6f %.6f bound %.6f %s\n", static_cast<long long>(t),
                    q.lam_min_plus, q.lam_min_minus, q.bound, ok ? "ok" : "VIOLATED");
    }
    std::printf("psd-check: %lld/%lld within the envelope\n", static_cast<long long>(pass),
                static_cast<long long>(f.trials));
    return pass == f.trials ? kExitOk : kExitCheckFailed;
}

int cmd_degree_stats(const CommonFlags& f) {
    const double xi = std::log(std::log(static_cast<double>(f.n)));
    PropD1Report rep = validate_prop_d1(f.n, f.d, f.trials, xi, f.seed);
    std::printf("degree-stats: %s branch, pass rate %.4f (%lld/%lld)\n",
                rep.supercritical ? "supercritical" : "subcritical", rep.pass_rate,
                static_cast<long long>(rep.pairs_passed), static_cast<long long>(rep.pairs_checked));
    std::printf("d_star(%lld) = %.6f, b_star = %.6f\n", static_cast<long long>(f.n), d_star(f.n), b_star);
    return kExitOk;
}

int cmd_figure1(const CommonFlags& f, std::int64_t l_max, double b_min, double b_max, int b_steps) {
    std::vector<double> grid;
    for (int i = 0; i <= b_steps; ++i)
        grid.push_back(b_min + (b_max - b_min) * static_cast<double>(i) / b_steps);
    auto rows = figure1_curves(f.n, l_max, grid);
    if (f.out.empty()) {
        for (const auto& r : rows) std::printf("%lld %.6f %.6f\n", static_cast<long long>(r.l), r.b, r.value);
    } else {
        write_figure1_csv(rows, f.out);
        std::printf("wrote %zu rows to %s\n", rows.size(), f.out.c_str());
    }
    return kExitOk;
}

int cmd_deloc_check(const CommonFlags& f, int instances) {
    // Random admissible tridiagonal instances vs the explicit recursion oracle.
    Rng rng(f.seed);
    std::int64_t checked = 0, dominated = 0;
    for (int inst = 0; inst < instances; ++inst) {
        const int r = 10 + static_cast<int>(rng.uniform_below(51));
        const double alpha = 2.2 + 5.8 * rng.uniform01();
        const double noise = 1e-4 + 0.05 * rng.uniform01();
        IdealTridiagonal ideal = ideal_m(alpha, r);
        TridiagonalForm mt = ideal.form;
        for (int i = 0; i <= r; ++i) mt.diag[i] += noise * (2.0 * rng.uniform01() - 1.0);
        for (int i = 1; i < r; ++i) mt.offdiag[i] += noise * (2.0 * rng.uniform01() - 1.0);
        const double eta = 2.05 + 3.0 * rng.uniform01();
        DelocalizationBound bound = delocalization_bound(mt, eta);
        if (!bound.condition_ok) continue;
        // forward recursion with (M - eta) b in span{e_r}
        std::vector<double> bvec(r + 1);
        bvec[0] = 1.0;
        bvec[1] = (eta - mt.diag[0]) / mt.offdiag[0];
        for (int i = 1; i < r; ++i)
            bvec[i + 1] = ((eta - mt.diag[i]) * bvec[i] - mt.offdiag[i - 1] * bvec[i - 1]) / mt.offdiag[i];
        double norm2 = 0.0;
        for (double v : bvec) norm2 += v * v;
        const double mass = 1.0 / norm2;  // b_0 = 1
        ++checked;
        dominated += mass <= bound.bound;
    }
    std::printf("deloc-check: bound dominated the oracle in %lld/%lld admissible instances\n",
                static_cast<long long>(dominated), static_cast<long long>(checked));
    return dominated == checked ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse random graph extremal spectra toolkit"};
    app.require_subcommand(1);

    CommonFlags f;
    std::int64_t k = 0;
    bool centered = true;
    double t_min = 1.0, t_max = 3.0;
    int grid = 100, iters = 200, instances = 500, b_steps = 40;
    std::int64_t l_max = 6;
    double b_min = 0.2, b_max = 3.2;
    double median_gate = 0.0, edge_rate_gate = 0.0;

    auto* generate = app.add_subcommand("generate", "sample G(n, d/n) and write an edge list");
    f.attach(generate);

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of A or A - EA");
    f.attach(spectrum);
    spectrum->add_option("--k", k, "extremal pairs per side (0 = full dense spectrum)");
    spectrum->add_flag("--centered,!--plain", centered, "use A - EA (default) or plain A");

    auto* correspond = app.add_subcommand("correspond", "degree <-> outlier eigenvalue correspondence");
    f.attach(correspond);
    correspond->add_option("--median-gate", median_gate, "exit 2 when median max error exceeds this");
    correspond->add_option("--edge-rate-gate", edge_rate_gate, "exit 2 when edge pass rate falls below this");

    auto* wigner = app.add_subcommand("wigner", "correspondence for X = A ∘ W, Rademacher weights");
    f.attach(wigner);
    wigner->add_option("--median-gate", median_gate, "exit 2 when median max error exceeds this");
    wigner->add_option("--edge-rate-gate", edge_rate_gate, "exit 2 when edge pass rate falls below this");

    auto* prune_check = app.add_subcommand("prune-check", "pruned-graph structural properties");
    f.attach(prune_check);

    auto* ihara = app.add_subcommand("ihara-bass", "det/min-eig sweep of M(t) - A̅(t)");
    f.attach(ihara);
    ihara->add_option("--t-min", t_min, "sweep start");
    ihara->add_option("--t-max", t_max, "sweep end");
    ihara->add_option("--grid", grid, "grid points");

    auto* nbt = app.add_subcommand("nbt-radius", "nonbacktracking spectral radius estimates");
    f.attach(nbt);
    nbt->add_option("--iters", iters, "power iterations");

    auto* psd = app.add_subcommand("psd-check", "quadratic form inequality I + D ± A̅/sqrt(d)");
    f.attach(psd);

    auto* degree = app.add_subcommand("degree-stats", "degree order statistics vs predictions");
    f.attach(degree);

    auto* figure1 = app.add_subcommand("figure1", "b vs Lambda(beta_l(b log n)) curve table");
    f.attach(figure1);
    figure1->add_option("--l-max", l_max, "number of curves");
    figure1->add_option("--b-min", b_min, "grid start");
    figure1->add_option("--b-max", b_max, "grid end");
    figure1->add_option("--b-steps", b_steps, "grid steps");

    auto* deloc = app.add_subcommand("deloc-check", "delocalization bound vs recursion oracle");
    f.attach(deloc);
    deloc->add_option("--instances", instances, "random instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(f);
        if (spectrum->parsed()) return cmd_spectrum(f, k, centered);
        if (correspond->parsed()) return cmd_correspond(f, false, median_gate, edge_rate_gate);
        if (wigner->parsed()) return cmd_correspond(f, true, median_gate, edge_rate_gate);
        if (prune_check->parsed()) return cmd_prune_check(f);
        if (ihara->parsed()) return cmd_ihara_bass(f, t_min, t_max, grid);
        if (nbt->parsed()) return cmd_nbt_radius(f, iters);
        if (psd->parsed()) return cmd_psd_check(f);
        if (degree->parsed()) return cmd_degree_stats(f);
        if (figure1->parsed()) return cmd_figure1(f, l_max, b_min, b_max, b_steps);
        if (deloc->parsed()) return cmd_deloc_check(f, instances);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailed;
    }
    return kExitConfigError;
}
