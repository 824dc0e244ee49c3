#include "sparsespec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "sparsespec/rng.hpp"

namespace sparsespec {

std::int64_t SparseGraph::edge_count() const {
    std::int64_t twice = 0;
    for (const auto& nb : adjacency) twice += static_cast<std::int64_t>(nb.size());
    return twice / 2;
}

bool SparseGraph::has_edge(std::int32_t x, std::int32_t y) const {
    const auto& nb = adjacency[x];
    return std::binary_search(nb.begin(), nb.end(), y);
}

std::int64_t VertexLayering::ball_size() const {
    std::int64_t total = 0;
    for (const auto& s : spheres) total += static_cast<std::int64_t>(s.size());
    return total;
}

namespace {

// Map a linear index k in the lexicographic stream (0,1),(0,2),...,(n-2,n-1)
// to the pair (i,j). `row` and `row_start` carry the sweep state so a full
// generation costs O(n + edges).
struct PairCursor {
    std::int64_t n;
    std::int64_t row = 0;
    std::int64_t row_start = 0;  // linear index of pair (row, row+1)

    std::pair<std::int32_t, std::int32_t> locate(std::int64_t k) {
        while (k >= row_start + (n - 1 - row)) {
            row_start += n - 1 - row;
            ++row;
        }
        return {static_cast<std::int32_t>(row),
                static_cast<std::int32_t>(row + 1 + (k - row_start))};
    }
};

} // namespace

SparseGraph generate_er(std::int64_t n, double d, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("generate_er: n must be positive");
    if (!(d > 0.0) || d > static_cast<double>(n))
        throw std::invalid_argument("generate_er: need 0 < d <= n");

    SparseGraph g;
    g.n = n;
    g.d_param = d;
    g.seed = seed;
    g.adjacency.assign(n, {});

    const double p = d / static_cast<double>(n);
    const std::int64_t m = n * (n - 1) / 2;
    Rng rng(seed);

    if (p >= 1.0) {
        for (std::int32_t i = 0; i < n; ++i)
            for (std::int32_t j = 0; j < n; ++j)
                if (i != j) g.adjacency[i].push_back(j);
        return g;
    }

    // Geometric skipping: gap to the next kept pair is floor(log U / log(1-p)).
    const double log1mp = std::log1p(-p);
    PairCursor cursor{n};
    std::int64_t k = -1;
    for (;;) {
        double u = rng.uniform01_open();
        double gap = std::floor(std::log(u) / log1mp);
        if (gap > static_cast<double>(m)) break;
        k += 1 + static_cast<std::int64_t>(gap);
        if (k >= m) break;
        auto [i, j] = cursor.locate(k);
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    return g;
}

SparseGraph graph_from_edges(std::int64_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                             double d_param, std::uint64_t seed) {
    SparseGraph g;
    g.n = n;
    g.d_param = d_param;
    g.seed = seed;
    g.adjacency.assign(n, {});
    for (auto [u, v] : edges) {
        if (u == v) throw std::invalid_argument("graph_from_edges: loop");
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("graph_from_edges: vertex out of range");
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    for (auto& nb : g.adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return g;
}

VertexLayering bfs_layers(const SparseGraph& g, std::int32_t x, int r) {
    if (x < 0 || x >= g.n) throw std::out_of_range("bfs_layers: center out of range");
    if (r < 0) throw std::invalid_argument("bfs_layers: negative radius");

    VertexLayering lay;
    lay.center = x;
    std::vector<int> dist(g.n, -1);
    dist[x] = 0;
    lay.spheres.push_back({x});
    for (int i = 0; i < r; ++i) {
        std::vector<std::int32_t> next;
        for (std::int32_t y : lay.spheres[i])
            for (std::int32_t z : g.adjacency[y])
                if (dist[z] < 0) {
                    dist[z] = i + 1;
                    next.push_back(z);
                }
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        lay.spheres.push_back(std::move(next));
    }

    const int reached = static_cast<int>(lay.spheres.size()) - 1;
    std::int64_t twice = 0;
    for (int i = 0; i <= reached; ++i)
        for (std::int32_t y : lay.spheres[i])
            for (std::int32_t z : g.adjacency[y])
                if (dist[z] >= 0 && dist[z] <= reached) ++twice;
    lay.ball_edge_count = twice / 2;
    return lay;
}

std::int64_t cycle_excess(const SparseGraph& g, std::int32_t x, int r) {
    VertexLayering lay = bfs_layers(g, x, r);
    return lay.ball_edge_count - lay.ball_size() + 1;
}

DegreeOrder degree_order(const SparseGraph& g) {
    DegreeOrder ord;
    ord.sigma.resize(g.n);
    std::iota(ord.sigma.begin(), ord.sigma.end(), 0);
    std::stable_sort(ord.sigma.begin(), ord.sigma.end(), [&](std::int32_t a, std::int32_t b) {
        return g.degree(a) > g.degree(b);
    });
    ord.alphas.resize(g.n);
    for (std::int64_t l = 0; l < g.n; ++l)
        ord.alphas[l] = static_cast<double>(g.degree(ord.sigma[l])) / g.d_param;
    return ord;
}

std::unordered_map<std::int32_t, std::int64_t>
boundary_counts(const SparseGraph& g, const VertexLayering& layering, int i) {
    if (i < 0 || i > layering.radius())
        throw std::out_of_range("boundary_counts: sphere index out of range");

    std::vector<char> in_si(g.n, 0);
    for (std::int32_t y : layering.spheres[i]) in_si[y] = 1;

    std::unordered_map<std::int32_t, std::int64_t> counts;
    auto tally = [&](const std::vector<std::int32_t>& sphere) {
        for (std::int32_t y : sphere) {
            std::int64_t c = 0;
            for (std::int32_t z : g.adjacency[y]) c += in_si[z];
            counts[y] = c;
        }
    };
    if (i >= 1) tally(layering.spheres[i - 1]);
    tally(layering.spheres[i]);
    if (i + 1 <= layering.radius()) tally(layering.spheres[i + 1]);
    return counts;
}

ThresholdIndices threshold_indices(const DegreeOrder& order, double d, double kappa,
                                   std::int64_t n, double tau_star_c) {
    if (!(d > 1.0)) throw std::invalid_argument("threshold_indices: need d > 1");
    if (!(kappa > 0.0 && kappa < 0.5)) throw std::invalid_argument("threshold_indices: need 0 < kappa < 1/2");

    ThresholdIndices out;
    const double logd = std::log(d);
    const double thr_leq = 2.0 + std::pow(logd, -kappa);
    out.tau_star = 2.0 + tau_star_c * logd * logd / std::min(d, std::log(static_cast<double>(n)));

    auto count_at_least = [&](double thr) {
        std::int64_t l = 0;
        while (l < static_cast<std::int64_t>(order.alphas.size()) && order.alphas[l] >= thr) ++l;
        return l;  // 0 when alpha_{sigma(1)} is below the threshold
    };
    out.L_leq = count_at_least(thr_leq);
    out.L_geq = count_at_least(out.tau_star);
    out.L = out.L_leq;
    return out;
}

void write_edge_list(const SparseGraph& g, std::ostream& out) {
    out << g.n << ' ' << g.d_param << ' ' << g.seed << '\n';
    for (std::int32_t x = 0; x < g.n; ++x)
        for (std::int32_t y : g.adjacency[x])
            if (x < y) out << x << ' ' << y << '\n';
}

SparseGraph read_edge_list(std::istream& in) {
    std::int64_t n;
    double d;
    std::uint64_t seed;
    if (!(in >> n >> d >> seed)) throw std::runtime_error("edge list: bad header");
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    std::int64_t u, v;
    while (in >> u >> v) edges.emplace_back(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v));
    return graph_from_edges(n, edges, d, seed);
}

void save_edge_list(const SparseGraph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_edge_list(g, f);
}

SparseGraph load_edge_list(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return read_edge_list(f);
}

SparseGraph regular_tree(std::int64_t root_children, std::int64_t children, int depth,
                         double d_param) {
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    std::int64_t next = 1;
    std::vector<std::int64_t> frontier{0};
    for (int level = 0; level < depth; ++level) {
        std::vector<std::int64_t> fresh;
        const std::int64_t fanout = (level == 0) ? root_children : children;
        for (std::int64_t parent : frontier)
            for (std::int64_t c = 0; c < fanout; ++c) {
                edges.emplace_back(static_cast<std::int32_t>(parent), static_cast<std::int32_t>(next));
                fresh.push_back(next++);
            }
        frontier = std::move(fresh);
    }
    return graph_from_edges(next, edges, d_param);
}

} // namespace sparsespec
