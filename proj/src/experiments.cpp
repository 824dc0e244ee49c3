#include "sparsespec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sparsespec/rng.hpp"
#include "sparsespec/spectra.hpp"
#include "sparsespec/transfer.hpp"

namespace sparsespec {

double ExperimentConfig::effective_d() const {
    if (b) return *b * std::log(static_cast<double>(n));
    return d;
}

void ExperimentConfig::validate() const {
    if (!(kappa > 0.0 && kappa < 0.5)) throw std::invalid_argument("config: need 0 < kappa < 1/2");
    if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("config: need 0 < theta <= 1/2");
    if (trials < 0) throw std::invalid_argument("config: trials must be nonnegative");
    if (!(effective_d() > 1.0)) throw std::invalid_argument("config: need d > 1");
    if (format != "csv" && format != "json") throw std::invalid_argument("config: format must be csv or json");
}

void ExperimentConfig::set_kv(const std::string& key, const std::string& value) {
    auto as_i64 = [&] { return static_cast<std::int64_t>(std::stoll(value)); };
    auto as_f = [&] { return std::stod(value); };
    if (key == "n") n = as_i64();
    else if (key == "d") d = as_f();
    else if (key == "b") b = as_f();
    else if (key == "kappa") kappa = as_f();
    else if (key == "theta") theta = as_f();
    else if (key == "tau") tau = as_f();
    else if (key == "trials") trials = as_i64();
    else if (key == "seed") seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "solver_tol") solver_tol = as_f();
    else if (key == "solver_max_iter") solver_max_iter = static_cast<int>(as_i64());
    else if (key == "extra_pairs") extra_pairs = static_cast<int>(as_i64());
    else if (key == "edge_c") edge_c = as_f();
    else if (key == "threads") threads = static_cast<int>(as_i64());
    else if (key == "out") out_path = value;
    else if (key == "format") format = value;
    else if (key == "name") name = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config: expected key=value, got '" + line + "'");
        cfg.set_kv(line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

void parallel_trials(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

namespace {

struct TrialOutput {
    std::vector<CorrespondenceRow> rows;
    TrialSummary summary;
};

// Shared trial body; `wigner` switches the operator and the alpha definition.
TrialOutput one_trial(const ExperimentConfig& cfg, std::int64_t trial, bool wigner) {
    TrialOutput out;
    out.summary.trial = trial;
    const double d = cfg.effective_d();
    const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));

    SparseGraph g = generate_er(cfg.n, d, trial_seed);
    SparseWigner x;
    DegreeOrder order;
    if (wigner) {
        x = make_wigner(g, WeightLaw::rademacher, derive_seed(trial_seed, 1));
        Vec alpha = generalized_alpha(x, d);
        order.sigma.resize(g.n);
        for (std::int32_t v = 0; v < g.n; ++v) order.sigma[v] = v;
        std::stable_sort(order.sigma.begin(), order.sigma.end(),
                         [&](std::int32_t a, std::int32_t b) { return alpha[a] > alpha[b]; });
        order.alphas.resize(g.n);
        for (std::int64_t l = 0; l < g.n; ++l) order.alphas[l] = alpha[order.sigma[l]];
    } else {
        order = degree_order(g);
    }

    ThresholdIndices thr = threshold_indices(order, d, cfg.kappa, cfg.n);
    const std::int64_t L = thr.L;
    out.summary.L = L;

    const int k = static_cast<int>(std::min<std::int64_t>(L + cfg.extra_pairs, g.n / 2));
    CenteredOperator centered = CenteredOperator::centered(g);
    const LinearOperator& op = wigner ? static_cast<const LinearOperator&>(x)
                                      : static_cast<const LinearOperator&>(centered);

    SpectrumResult eigs;
    try {
        eigs = extremal_eigs(op, k, Side::both, cfg.solver_tol, cfg.solver_max_iter,
                             derive_seed(trial_seed, 2));
    } catch (const std::exception&) {
        out.summary.skipped = true;
        return out;
    }
    const std::int64_t m = static_cast<std::int64_t>(eigs.eigenvalues.size());
    if (m < 2 * (L + 1) || m < 2) {
        out.summary.skipped = true;
        return out;
    }
    const double sqrt_d = std::sqrt(d);
    auto top = [&](std::int64_t l) { return eigs.eigenvalues[l - 1] / sqrt_d; };
    auto bottom = [&](std::int64_t l) { return eigs.eigenvalues[m - l] / sqrt_d; };

    const double logd = std::log(d);
    for (std::int64_t l = 1; l <= L; ++l) {
        CorrespondenceRow row;
        row.trial = trial;
        row.l = l;
        row.alpha_sigma_l = order.alphas[l - 1];
        row.lambda_top_scaled = top(l);
        row.lambda_bottom_scaled = bottom(l);
        row.lambda_prediction = lambda_fn(std::max(order.alphas[l - 1], 2.0 + 1e-12));
        row.error_l = std::abs(row.lambda_top_scaled - row.lambda_prediction) +
                      std::abs(row.lambda_bottom_scaled + row.lambda_prediction);
        row.bound_l = cfg.bound_c * (std::pow(d, -cfg.bound_exponent_c * (row.lambda_prediction - 2.0)) +
                                     std::pow(d, -cfg.theta / 3.0));
        out.summary.max_error = std::max(out.summary.max_error, row.error_l);
        out.rows.push_back(row);
    }

    out.summary.edge_value = std::max(top(L + 1), -bottom(L + 1));
    out.summary.edge_bound = 2.0 + cfg.edge_c * std::pow(logd, -2.0 * cfg.kappa);
    out.summary.edge_ok = out.summary.edge_value <= out.summary.edge_bound;
    return out;
}

CorrespondenceReport run_impl(const ExperimentConfig& cfg, bool wigner) {
    cfg.validate();
    CorrespondenceReport rep;
    rep.config = cfg;

    std::vector<TrialOutput> outputs(cfg.trials);
    parallel_trials(cfg.trials, cfg.threads,
                    [&](std::int64_t i) { outputs[i] = one_trial(cfg, i, wigner); });

    std::vector<double> max_errors;
    for (auto& o : outputs) {
        rep.trials.push_back(o.summary);
        for (auto& r : o.rows) rep.rows.push_back(r);
        if (o.summary.skipped) {
            ++rep.skip_count;
            continue;
        }
        if (o.summary.L >= 1) {
            max_errors.push_back(o.summary.max_error);
            ++rep.trials_with_outliers;
        }
        rep.edge_pass_count += o.summary.edge_ok;
    }
    if (!max_errors.empty()) {
        std::sort(max_errors.begin(), max_errors.end());
        const std::size_t mid = max_errors.size() / 2;
        rep.median_max_error = (max_errors.size() % 2) ? max_errors[mid]
                                                       : 0.5 * (max_errors[mid - 1] + max_errors[mid]);
    }
    return rep;
}

} // namespace

CorrespondenceReport run_correspondence(const ExperimentConfig& cfg) { return run_impl(cfg, false); }

CorrespondenceReport run_wigner_correspondence(const ExperimentConfig& cfg) {
    return run_impl(cfg, true);
}

} // namespace sparsespec
