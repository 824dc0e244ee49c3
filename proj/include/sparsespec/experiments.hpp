// Experiment orchestration: seeded trial fan-out, the degree-eigenvalue
// correspondence runs, and report emission.
#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsespec/graph.hpp"
#include "sparsespec/operators.hpp"

namespace sparsespec {

struct ExperimentConfig {
    std::int64_t n = 10000;
    double d = 5.0;                 // or derived from b when b is set
    std::optional<double> b;        // d = b log n
    double kappa = 0.25;
    double theta = 0.5;
    double tau = 2.0;
    std::int64_t trials = 20;
    std::uint64_t seed = 1;
    double solver_tol = 1e-9;
    int solver_max_iter = 500;
    int extra_pairs = 5;            // eigenpairs requested: L + extra per side
    double edge_c = 1.0;            // edge bound constant in 2 + C (log d)^{-2 kappa}
    double bound_c = 1.0;           // reported error-envelope prefactor
    double bound_exponent_c = 1.0;  // reported error-envelope rate
    int threads = 0;                // 0 = hardware
    std::string out_path;
    std::string format = "csv";
    std::string name = "correspond";

    double effective_d() const;
    void validate() const;  // 0 < kappa < 1/2, 0 < theta <= 1/2, trials >= 0

    // Flat key=value file; unknown keys are errors. CLI flags override.
    static ExperimentConfig from_file(const std::string& path);
    void set_kv(const std::string& key, const std::string& value);
};

struct CorrespondenceRow {
    std::int64_t trial = 0;
    std::int64_t l = 0;                 // 1-based rank
    double alpha_sigma_l = 0.0;
    double lambda_top_scaled = 0.0;     // λ_l / sqrt(d)
    double lambda_bottom_scaled = 0.0;  // λ_{N+1-l} / sqrt(d)
    double lambda_prediction = 0.0;     // Λ(α_{σ(l)})
    double error_l = 0.0;
    double bound_l = 0.0;
};

struct TrialSummary {
    std::int64_t trial = 0;
    std::int64_t L = 0;
    double max_error = 0.0;   // over l <= L; 0 when L = 0
    bool edge_ok = false;     // l = L+1 check
    double edge_value = 0.0;  // max{λ_{L+1}, -λ_{N-L}} / sqrt(d)
    double edge_bound = 0.0;
    bool skipped = false;     // solver failure
};

struct CorrespondenceReport {
    ExperimentConfig config;
    std::vector<CorrespondenceRow> rows;
    std::vector<TrialSummary> trials;
    double median_max_error = 0.0;  // over trials with L >= 1
    std::int64_t trials_with_outliers = 0;
    std::int64_t edge_pass_count = 0;
    std::int64_t skip_count = 0;
};

CorrespondenceReport run_correspondence(const ExperimentConfig& cfg);

// Same protocol for X = A ∘ W with Rademacher weights and generalized alpha.
CorrespondenceReport run_wigner_correspondence(const ExperimentConfig& cfg);

// Stable column order, "schema":"v1" in JSON, byte-identical reruns.
void emit(const CorrespondenceReport& report, const std::string& format,
          const std::string& path);

// Deterministic trial fan-out: results land by index regardless of scheduling.
void parallel_trials(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn);

} // namespace sparsespec
