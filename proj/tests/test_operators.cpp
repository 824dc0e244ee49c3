#include <doctest.h>

#include <cmath>

#include "sparsespec/operators.hpp"
#include "sparsespec/pruning.hpp"
#include "sparsespec/rng.hpp"

using namespace sparsespec;

namespace {
Vec random_vec(std::int64_t n, std::uint64_t seed) {
    Rng rng(seed);
    Vec v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}
} // namespace

TEST_CASE("centered_matvec: empty graph and all-ones") {
    SparseGraph g = graph_from_edges(6, {}, 2.0);
    CenteredOperator op = CenteredOperator::centered(g);
    Vec ones = Vec::Ones(6);
    Vec out = centered_matvec(op, ones);
    const double expected = -(2.0 / 6.0) * 5.0;  // -(d/N)(n-1)
    for (int i = 0; i < 6; ++i) CHECK(out[i] == doctest::Approx(expected).epsilon(1e-14));

    SparseGraph h = generate_er(50, 4.0, 1);
    CenteredOperator hop = CenteredOperator::centered(h);
    Vec hout = centered_matvec(hop, Vec::Ones(50));
    for (int x = 0; x < 50; ++x) {
        const double row = static_cast<double>(h.degree(x)) - 4.0 * 49.0 / 50.0;
        CHECK(hout[x] == doctest::Approx(row).epsilon(1e-12));
    }
}

TEST_CASE("centered_matvec matches the dense oracle") {
    SparseGraph g = generate_er(50, 5.0, 12);
    CenteredOperator op = CenteredOperator::centered(g);
    Mat dense = materialize_dense(op);
    for (int trial = 0; trial < 5; ++trial) {
        Vec v = random_vec(50, 100 + trial);
        Vec fast = centered_matvec(op, v);
        Vec slow = dense * v;
        CHECK((fast - slow).norm() <= 1e-12 * slow.norm());
    }
}

TEST_CASE("operator symmetry on random vectors") {
    SparseGraph g = generate_er(300, 6.0, 4);
    CenteredOperator op = CenteredOperator::centered(g);
    SparseWigner x = make_wigner(g, WeightLaw::uniform_scaled, 9);
    for (int trial = 0; trial < 5; ++trial) {
        Vec u = random_vec(300, 55 + trial), v = random_vec(300, 75 + trial);
        const double a1 = u.dot(op.apply(v)), a2 = op.apply(u).dot(v);
        CHECK(std::abs(a1 - a2) <= 1e-12 * std::max(1.0, std::abs(a1)));
        const double b1 = u.dot(x.apply(v)), b2 = x.apply(u).dot(v);
        CHECK(std::abs(b1 - b2) <= 1e-12 * std::max(1.0, std::abs(b1)));
    }
}

TEST_CASE("materialize_dense basics") {
    SparseGraph g = graph_from_edges(2, {{0, 1}}, 1.0);
    Mat plain = materialize_dense(CenteredOperator::plain(g));
    CHECK(plain(0, 1) == 1.0);
    CHECK(plain(0, 0) == 0.0);

    Mat centered = materialize_dense(CenteredOperator::centered(g));
    CHECK(centered(0, 1) == doctest::Approx(0.5));
    CHECK(centered(0, 0) == 0.0);

    CHECK_THROWS(materialize_dense(CenteredOperator::plain(generate_er(30, 2.0, 1)), 10));
}

TEST_CASE("implicit matvec agrees with dense on a 300-vertex sample") {
    SparseGraph g = generate_er(300, 5.0, 17);
    CenteredOperator op = CenteredOperator::centered(g);
    Mat dense = materialize_dense(op);
    for (int trial = 0; trial < 20; ++trial) {
        Vec v = random_vec(300, 900 + trial);
        CHECK((op.apply(v) - dense * v).norm() <= 1e-12 * (dense * v).norm());
    }
}

TEST_CASE("make_wigner: law support and determinism") {
    SparseGraph g = generate_er(500, 6.0, 2);
    SparseWigner r = make_wigner(g, WeightLaw::rademacher, 5);
    for (std::int32_t v = 0; v < g.n; ++v)
        for (double w : r.weights[v]) CHECK(std::abs(w) == 1.0);

    SparseWigner r2 = make_wigner(g, WeightLaw::rademacher, 5);
    CHECK(r.weights == r2.weights);

    CHECK_THROWS(make_wigner(g, WeightLaw::custom_bounded, 1, 0.5));
}

TEST_CASE("make_wigner: weights symmetric and only on edges") {
    SparseGraph g = generate_er(200, 5.0, 31);
    SparseWigner x = make_wigner(g, WeightLaw::uniform_scaled, 7);
    for (std::int32_t u = 0; u < g.n; ++u)
        for (std::int32_t v : g.adjacency[u]) CHECK(x.weight(u, v) == x.weight(v, u));
    for (std::int32_t v = 1; v < g.n; ++v)
        if (!g.has_edge(0, v)) {
            CHECK(x.weight(0, v) == 0.0);
            break;
        }
}

TEST_CASE("uniform-scaled law: empirical variance near 1") {
    SparseGraph g = generate_er(20000, 12.0, 3);  // ~1.2e5 edges
    SparseWigner x = make_wigner(g, WeightLaw::uniform_scaled, 77);
    double sum = 0.0, sum2 = 0.0;
    std::int64_t count = 0;
    for (std::int32_t u = 0; u < g.n; ++u) {
        const auto& nb = g.adjacency[u];
        for (std::size_t j = 0; j < nb.size(); ++j)
            if (u < nb[j]) {
                sum += x.weights[u][j];
                sum2 += x.weights[u][j] * x.weights[u][j];
                ++count;
            }
    }
    const double mean = sum / count;
    const double var = sum2 / count - mean * mean;
    // variance of w² for uniform-scaled is 4/5; 3 sigma window
    const double sigma = std::sqrt(0.8 / static_cast<double>(count));
    CHECK(std::abs(var - 1.0) <= 3.0 * sigma);
}

TEST_CASE("generalized_alpha: isolated vertices, rademacher, bounded laws") {
    SparseGraph g = generate_er(800, 4.0, 21);
    SparseWigner r = make_wigner(g, WeightLaw::rademacher, 6);
    Vec alpha = generalized_alpha(r, 4.0);
    for (std::int32_t v = 0; v < g.n; ++v) {
        if (g.degree(v) == 0) CHECK(alpha[v] == 0.0);
        CHECK(alpha[v] == doctest::Approx(static_cast<double>(g.degree(v)) / 4.0).epsilon(1e-14));
    }

    SparseWigner cb = make_wigner(g, WeightLaw::custom_bounded, 8, 2.0);
    Vec beta = generalized_alpha(cb, 4.0);
    for (std::int32_t v = 0; v < g.n; ++v)
        CHECK(beta[v] <= 4.0 * static_cast<double>(g.degree(v)) / 4.0 + 1e-12);
}

TEST_CASE("pruned_restricted: no pruning + l=1 equals the centered operator") {
    SparseGraph g = generate_er(60, 3.0, 44);
    CenteredOperator base = CenteredOperator::centered(g);
    PrunedGraph p = prune(g, 50.0);  // threshold far above any degree
    CHECK(p.v_tau.empty());
    DegreeOrder ord = degree_order(g);
    CenteredOperator op = pruned_restricted(base, p, 1, ord);
    Vec v = random_vec(60, 5);
    CHECK((op.apply(v) - base.apply(v)).norm() <= 1e-13 * base.apply(v).norm());
}

TEST_CASE("pruned_restricted: masked rows vanish, dense oracle, idempotent mask") {
    SparseGraph g = generate_er(40, 4.0, 91);
    CenteredOperator base = CenteredOperator::centered(g);
    PrunedGraph p = prune(g, 1.5);
    DegreeOrder ord = degree_order(g);
    CenteredOperator op = pruned_restricted(base, p, 3, ord);

    Vec e = Vec::Zero(40);
    e[ord.sigma[0]] = 1.0;
    CHECK(op.apply(e).norm() == 0.0);

    // dense oracle by explicit masking
    std::vector<char> vmask(40, 1);
    vmask[ord.sigma[0]] = vmask[ord.sigma[1]] = 0;
    std::vector<char> zmask = p.z_mask();
    Mat dense = Mat::Zero(40, 40);
    const double shift = g.d_param / 40.0;
    for (int x = 0; x < 40; ++x)
        for (int y = 0; y < 40; ++y) {
            if (x == y || !vmask[x] || !vmask[y]) continue;
            double a = p.pruned.has_edge(x, y) ? 1.0 : 0.0;
            if (!zmask[x] && !zmask[y]) a -= shift;
            dense(x, y) = a;
        }
    for (int trial = 0; trial < 10; ++trial) {
        Vec v = random_vec(40, 600 + trial);
        CHECK((op.apply(v) - dense * v).norm() <= 1e-12 * std::max(1.0, (dense * v).norm()));
    }

    // restriction idempotence: masking twice equals masking once
    Vec w = random_vec(40, 8);
    Vec once = op.apply(w);
    Vec masked = w;
    masked[ord.sigma[0]] = 0.0;
    masked[ord.sigma[1]] = 0.0;
    CHECK((op.apply(masked) - once).norm() <= 1e-13 * std::max(1.0, once.norm()));
}

TEST_CASE("pruned operator provenance is enforced") {
    SparseGraph g = generate_er(30, 3.0, 1);
    SparseGraph h = generate_er(30, 3.0, 2);
    PrunedGraph p = prune(h, 2.0);
    DegreeOrder ord = degree_order(g);
    CHECK_THROWS(pruned_restricted(CenteredOperator::centered(g), p, 1, ord));
}

TEST_CASE("pruned operator powers agree with the plain pruned adjacency near a hub") {
    // with radius r the expectation shift vanishes on B_{r-2}, so the first
    // r-2 Krylov powers of the restricted operator match plain A_tau
    SparseGraph g = generate_er(900, 5.0, 123);
    PruneOptions opts;
    opts.radius_override = 4;
    opts.stage1_depth_override = 8;
    PrunedGraph p = prune(g, 1.8, opts);
    REQUIRE(!p.v_tau.empty());
    DegreeOrder ord = degree_order(g);
    CenteredOperator base = CenteredOperator::centered(g);

    const std::int32_t x = p.v_tau[0];
    CenteredOperator restricted = pruned_restricted(base, p, 1, ord);
    CenteredOperator plain_tau = CenteredOperator::plain(p.pruned);

    Vec e = Vec::Zero(g.n);
    e[x] = 1.0;
    Vec a = e, b = e;
    for (int i = 1; i <= 2; ++i) {  // i <= r_{x,tau} - 2
        a = restricted.apply(a);
        b = plain_tau.apply(b);
        CHECK((a - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("wigner weights round-trip through the u v w triples") {
    SparseGraph g = generate_er(300, 5.0, 15);
    SparseWigner x = make_wigner(g, WeightLaw::uniform_scaled, 9);
    save_wigner(x, "/tmp/sparsespec_wigner.txt");
    SparseWigner y = load_wigner(g, "/tmp/sparsespec_wigner.txt");
    CHECK(y.weights == x.weights);
    CHECK(y.seed == x.seed);
}
