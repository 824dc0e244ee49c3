#include <doctest.h>

#include <cmath>
#include <fstream>

#include "sparsespec/degree_stats.hpp"
#include "sparsespec/pruning.hpp"
#include "sparsespec/rng.hpp"

using namespace sparsespec;

TEST_CASE("r_tau: hand values and monotonicity") {
    const double d = std::exp(2.0);
    CHECK(r_tau(d, 3.0) == doctest::Approx((d / 4.0) * (2.0 * std::log(2.0) - 1.0) - 2.0).epsilon(1e-12));
    CHECK(r_tau(d, 3.0) == doctest::Approx(-1.2864).epsilon(1e-3));
    CHECK(r_tau(5.0, 1.0 + 1e-12) == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(r_tau(5.0, 2.0) < r_tau(5.0, 3.0));
    CHECK(r_tau(5.0, 3.0) < r_tau(5.0, 4.0));
}

TEST_CASE("prune: no high-degree vertices leaves the graph untouched") {
    SparseGraph g = generate_er(500, 4.0, 3);
    PrunedGraph p = prune(g, 50.0);
    CHECK(p.v_tau.empty());
    CHECK(p.h1.empty());
    CHECK(p.h2.empty());
    CHECK(p.pruned.adjacency == g.adjacency);
}

TEST_CASE("prune: isolated hub with a tree ball removes nothing") {
    SparseGraph tree = regular_tree(9, 2, 4, 2.0);  // root alpha = 4.5
    PruneOptions opts;
    opts.radius_override = 2;
    opts.stage1_depth_override = 6;
    PrunedGraph p = prune(tree, 2.0, opts);
    CHECK(p.v_tau == std::vector<std::int32_t>{0});
    CHECK(p.h1.empty());
    CHECK(p.h2.empty());
}

TEST_CASE("prune: two adjacent hubs get separated") {
    // two stars joined by an edge; everything else is a tree
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (int i = 1; i <= 8; ++i) edges.push_back({0, i});
    for (int i = 10; i <= 17; ++i) edges.push_back({9, i});
    edges.push_back({0, 9});
    SparseGraph g = graph_from_edges(18, edges, 2.0);
    PruneOptions opts;
    opts.radius_override = 1;
    opts.stage1_depth_override = 4;
    PrunedGraph p = prune(g, 2.0, opts);
    CHECK(p.v_tau == std::vector<std::int32_t>{0, 9});
    CHECK(p.h2.size() == 1);
    CHECK(p.h2[0].u == 0);
    CHECK(p.h2[0].v == 9);
    PrunedProperties props = verify_pruned(p);
    CHECK(props.paths_separated);
    CHECK(props.all_exact_ok());
}

TEST_CASE("prune: cycle inside a hub ball is cut by stage 1") {
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (int i = 1; i <= 8; ++i) edges.push_back({0, i});
    edges.push_back({1, 2});  // triangle 0-1-2
    SparseGraph g = graph_from_edges(9, edges, 2.0);
    CHECK(cycle_excess(g, 0, 1) == 1);

    PruneOptions opts;
    opts.radius_override = 1;
    opts.stage1_depth_override = 4;
    PrunedGraph p = prune(g, 2.0, opts);
    CHECK(!p.h1.empty());
    CHECK(cycle_excess(p.pruned, 0, 1) == 0);
    PrunedProperties props = verify_pruned(p);
    CHECK(props.balls_are_trees);
    CHECK(props.all_exact_ok());
}

TEST_CASE("prune: exact properties hold on random graphs with forced radii") {
    int checked = 0;
    for (int t = 0; t < 25; ++t) {
        SparseGraph g = generate_er(600, 5.0, derive_seed(50, t));
        PruneOptions opts;
        opts.radius_override = 1;
        opts.stage1_depth_override = 4;
        PrunedGraph p = prune(g, 1.6, opts);
        if (p.v_tau.empty()) continue;
        ++checked;
        PrunedProperties props = verify_pruned(p);
        INFO("trial ", t, ": ", props.detail);
        CHECK(props.all_exact_ok());

        // pairwise disjoint balls (consequence of (i))
        std::vector<char> owner(g.n, 0);
        for (std::int32_t x : p.v_tau) {
            VertexLayering lay = bfs_layers(p.pruned, x, p.radii.at(x));
            for (const auto& sphere : lay.spheres)
                for (std::int32_t y : sphere) {
                    CHECK(!owner[y]);
                    owner[y] = 1;
                }
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("prune: default radii on honest samples, all properties verified") {
    for (int t = 0; t < 8; ++t) {
        SparseGraph g = generate_er(2000, 5.0, derive_seed(81, t));
        PrunedGraph p = prune(g, 2.0);
        PrunedProperties props = verify_pruned(p);
        CHECK(props.all_exact_ok());
        for (const Edge& e : p.h1) CHECK(g.has_edge(e.u, e.v));
        for (const Edge& e : p.h2) CHECK(g.has_edge(e.u, e.v));
    }
}

TEST_CASE("stage-1 invariant: half-radius balls in G minus H1 are trees") {
    for (int t = 0; t < 10; ++t) {
        SparseGraph g = generate_er(800, 6.0, derive_seed(31, t));
        PruneOptions opts;
        opts.radius_override = 1;
        opts.stage1_depth_override = 4;
        PrunedGraph p = prune(g, 1.5, opts);
        SparseGraph g1 = *p.base;
        // remove only stage-1 edges
        std::vector<std::pair<std::int32_t, std::int32_t>> kept;
        for (std::int32_t u = 0; u < g.n; ++u)
            for (std::int32_t v : g.adjacency[u])
                if (u < v && !std::binary_search(p.h1.begin(), p.h1.end(), Edge{u, v})) kept.push_back({u, v});
        SparseGraph minus_h1 = graph_from_edges(g.n, kept, g.d_param);
        for (std::int32_t x : p.v_tau) CHECK(cycle_excess(minus_h1, x, 2) == 0);
    }
}

TEST_CASE("pruning is idempotent on already-pruned fixtures") {
    SparseGraph g = generate_er(800, 5.0, 17);
    PruneOptions opts;
    opts.radius_override = 1;
    opts.stage1_depth_override = 4;
    PrunedGraph p = prune(g, 1.6, opts);
    SparseGraph again = p.pruned;
    again.d_param = g.d_param;
    PrunedGraph p2 = prune(again, 1.6, opts);
    CHECK(p2.h1.empty());
    CHECK(p2.h2.empty());
}

TEST_CASE("high-degree vertices stay sparse in balls (Monte Carlo)") {
    const double tau = 2.0, d = 5.0;
    const std::int64_t n = 10000;
    const double hval = h_fn((tau - 1.0) / 2.0);
    const double bound = std::ceil(4.0 * std::log(static_cast<double>(n)) / (hval * d));
    int pass = 0, trials = 40;
    for (int t = 0; t < trials; ++t) {
        SparseGraph g = generate_er(n, d, derive_seed(777, t));
        PrunedGraph p = prune(g, tau);
        const int radius = std::max(0, static_cast<int>(std::floor(p.r_tau)));
        std::int64_t worst = 0;
        for (std::int32_t x : p.v_tau) {
            VertexLayering lay = bfs_layers(g, x, radius);
            std::int64_t count = 0;
            for (const auto& sphere : lay.spheres)
                for (std::int32_t y : sphere)
                    count += static_cast<double>(g.degree(y)) >= tau * d;
            worst = std::max(worst, count);
        }
        pass += static_cast<double>(worst) <= bound;
    }
    CHECK(static_cast<double>(pass) >= 0.95 * trials);
}

TEST_CASE("pruned serialization writes stage tags") {
    SparseGraph g = generate_er(200, 5.0, 5);
    PruneOptions opts;
    opts.radius_override = 1;
    opts.stage1_depth_override = 4;
    PrunedGraph p = prune(g, 1.5, opts);
    save_pruned(p, "/tmp/pruned_test.txt");
    std::ifstream f("/tmp/pruned_test.txt");
    CHECK(f.good());
}
