// Random graph generation and the combinatorial primitives: BFS spheres,
// degree ordering, cycle excess and boundary edge counts.
#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace sparsespec {

// Undirected simple graph on {0..n-1}, adjacency lists strictly sorted.
struct SparseGraph {
    std::int64_t n = 0;
    std::vector<std::vector<std::int32_t>> adjacency;
    double d_param = 0.0;       // expected degree of the G(n, d/n) sample
    std::uint64_t seed = 0;

    std::int64_t degree(std::int32_t x) const { return static_cast<std::int64_t>(adjacency[x].size()); }
    std::int64_t edge_count() const;
    bool has_edge(std::int32_t x, std::int32_t y) const;

    // Normalized degree alpha_x = D_x / d.
    double alpha(std::int32_t x) const { return static_cast<double>(degree(x)) / d_param; }
};

// BFS layering around a center: S_0 = {x}, S_i the i-sphere, plus the
// edge count of the induced ball.
struct VertexLayering {
    std::int32_t center = 0;
    std::vector<std::vector<std::int32_t>> spheres;
    std::int64_t ball_edge_count = 0;

    std::int64_t ball_size() const;
    int radius() const { return static_cast<int>(spheres.size()) - 1; }
};

// Permutation sigma sorting vertices by nonincreasing normalized degree,
// ties broken by ascending vertex index.
struct DegreeOrder {
    std::vector<std::int32_t> sigma;  // sigma[l] = vertex of rank l (0-based)
    std::vector<double> alphas;       // alphas[l] = alpha_{sigma[l]}, nonincreasing
};

struct ThresholdIndices {
    std::int64_t L = 0;       // = L_leq, threshold 2 + (log d)^(-kappa)
    std::int64_t L_geq = 0;   // threshold tau_*
    std::int64_t L_leq = 0;
    double tau_star = 0.0;    // 2 + C (log d)^2 / (d ∧ log N)
};

// G(n, d/n): every unordered pair is an edge independently with probability
// d/n, sampled by geometric skipping over the pair stream. Deterministic
// given seed. Accepts 0 < d <= n (d = n gives the complete graph).
SparseGraph generate_er(std::int64_t n, double d, std::uint64_t seed);

// Build a graph from explicit edges (for fixtures and deserialization).
SparseGraph graph_from_edges(std::int64_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                             double d_param = 1.0, std::uint64_t seed = 0);

// Exact BFS layers S_0..S_r around x plus |E(G|_{B_r(x)})|.
VertexLayering bfs_layers(const SparseGraph& g, std::int32_t x, int r);

// |E(G|_{B_r(x)})| - |B_r(x)| + 1; zero iff the induced ball is a tree.
std::int64_t cycle_excess(const SparseGraph& g, std::int32_t x, int r);

DegreeOrder degree_order(const SparseGraph& g);

// N_i(y) = |S_i ∩ S_1(y)| for every y in S_{i-1} ∪ S_i ∪ S_{i+1}.
std::unordered_map<std::int32_t, std::int64_t>
boundary_counts(const SparseGraph& g, const VertexLayering& layering, int i);

// Threshold indices L (== L_leq), L_geq and tau_*. tau_star_c is the
// unnamed universal constant in tau_* = 2 + C (log d)^2/(d ∧ log N).
ThresholdIndices threshold_indices(const DegreeOrder& order, double d, double kappa,
                                   std::int64_t n, double tau_star_c = 1.0);

// Edge-list text serialization: header "n d seed", then one "u v" per line.
void write_edge_list(const SparseGraph& g, std::ostream& out);
SparseGraph read_edge_list(std::istream& in);
void save_edge_list(const SparseGraph& g, const std::string& path);
SparseGraph load_edge_list(const std::string& path);

// Exact (D_root, d)-tree of the given depth: root has D_root children, every
// other non-leaf vertex d children. Used by tests and tree fixtures.
SparseGraph regular_tree(std::int64_t root_children, std::int64_t children, int depth,
                         double d_param);

} // namespace sparsespec
