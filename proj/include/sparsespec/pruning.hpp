// Two-stage pruning: H1 makes balls around high-degree vertices trees,
// H2 separates the high-degree vertices from one another.
#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsespec/graph.hpp"

namespace sparsespec {

struct Edge {
    std::int32_t u, v;  // u < v
    bool operator<(const Edge& o) const { return u < o.u || (u == o.u && v < o.v); }
    bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
};

struct PrunedGraph {
    const SparseGraph* base = nullptr;
    double tau = 0.0;
    std::vector<Edge> h1;              // stage-1 removals (tree-ifying)
    std::vector<Edge> h2;              // stage-2 removals (separation)
    std::vector<std::int32_t> v_tau;   // {x : D_x >= tau d}, ascending
    std::map<std::int32_t, int> radii; // x in v_tau -> r_{x,tau}
    double r_tau = 0.0;                // r(tau), may be negative

    SparseGraph pruned;                // G_tau = G \ (H1 ∪ H2)

    std::int64_t removed_degree(std::int32_t x) const;
    std::int64_t max_removed_degree() const;
    // Z_tau = ∪_x B^{G_tau}_{r_{x,tau}-2}(x); empty balls for radius < 0.
    std::vector<char> z_mask() const;
};

// r(tau) = d/(2 log d) h((tau-1)/2) - 2; may be negative (radii clamp to 0).
double r_tau(double d, double tau);

struct PruneOptions {
    // Test hook: force r_{x,tau} (and the stage-1 exploration depth r_x)
    // instead of the defaults from log N / (3 log D_x) and r(tau).
    std::optional<int> radius_override;
    std::optional<int> stage1_depth_override;
};

// Deterministic: vertices of v_tau processed ascending, neighbours ascending.
PrunedGraph prune(const SparseGraph& g, double tau, const PruneOptions& opts = {});

struct PrunedProperties {
    bool paths_separated = true;      // (i)
    bool balls_are_trees = true;      // (ii)
    bool removals_touch_v_tau = true; // (iii)
    bool spheres_nested = true;       // (iv)
    bool local_spheres_agree = true;  // (v)
    std::int64_t max_removed_degree = 0;          // (vi) observed
    double removed_degree_bound = 0.0;            // (vi) 1 + log N / (h((tau-1)/2) d)
    double worst_sphere_loss_ratio = 0.0;         // (vii) vs D_x^{G\G_tau} d^{i-2} Δ
    std::string detail;               // first failure, if any
    bool all_exact_ok() const {
        return paths_separated && balls_are_trees && removals_touch_v_tau &&
               spheres_nested && local_spheres_agree;
    }
};

// Checks (i)-(v) exactly by BFS; reports the (vi) and (vii) quantities.
PrunedProperties verify_pruned(const PrunedGraph& p);

// Serialization: base edge list followed by removed edges with stage tags.
void save_pruned(const PrunedGraph& p, const std::string& path);

} // namespace sparsespec
