#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sparsespec/approx.hpp"
#include "sparsespec/rng.hpp"
#include "sparsespec/spectra.hpp"
#include "sparsespec/transfer.hpp"

using namespace sparsespec;

TEST_CASE("r_x_radius: closed-form values") {
    CHECK(r_x_radius(10, 1000000) == 2);
    CHECK(r_x_radius(1000000, 1000000) == 0);
    CHECK(r_x_radius(4, 1000000000) == 4);
    CHECK_THROWS(r_x_radius(1, 100));
}

TEST_CASE("coefficients_u: ratios and normalization") {
    // D_x = 4d: u_1/u_0 = sqrt(4/3), later ratio 1/sqrt(3)
    auto u = coefficients_u(8, 2.0, 4);
    CHECK(u[1] / u[0] == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
    for (int i = 1; i <= 3; ++i)
        CHECK(u[i + 1] / u[i] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

    // D_x = 2d: no decay, all u_i equal from i = 1
    auto flat = coefficients_u(6, 3.0, 5);
    for (int i = 1; i <= 5; ++i) CHECK(flat[i + 1] == doctest::Approx(flat[i]).epsilon(1e-12));

    auto norm = coefficients_u(10, 2.0, 3);
    double acc = 0.0;
    for (int i = 0; i <= 3; ++i) acc += norm[i] * norm[i];
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm.size() == 5);  // includes u_{r+1}

    CHECK_THROWS(coefficients_u(3, 3.0, 2));  // D_x <= d
}

TEST_CASE("build_v: r=0 and inner-product identity") {
    SparseGraph g = generate_er(400, 3.0, 15);
    DegreeOrder ord = degree_order(g);
    const std::int32_t x = ord.sigma[0];

    ApproxEigvector v0 = build_v(g, x, 0, Sign::plus);
    CHECK(v0.vector[x] == doctest::Approx(1.0));
    CHECK(v0.vector.norm() == doctest::Approx(1.0));

    const int r = 2;
    ApproxEigvector vp = build_v(g, x, r, Sign::plus);
    ApproxEigvector vm = build_v(g, x, r, Sign::minus);
    CHECK(vp.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vm.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    double expected = 0.0;
    for (int i = 0; i <= vp.radius; ++i)
        expected += (i % 2 ? -1.0 : 1.0) * vp.coefficients[i] * vp.coefficients[i];
    CHECK(vp.vector.dot(vm.vector) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("build_v: coefficients decrease for alpha > 2") {
    SparseGraph tree = regular_tree(9, 2, 4, 2.0);  // alpha = 4.5
    ApproxEigvector v = build_v(tree, 0, 4, Sign::plus);
    for (int i = 1; i < v.radius; ++i) CHECK(v.coefficients[i + 1] < v.coefficients[i]);
    for (double c : v.coefficients) CHECK(c > 0.0);
}

TEST_CASE("build_v: errors on empty sphere when shrinking is off") {
    SparseGraph path = graph_from_edges(3, {{0, 1}, {1, 2}}, 0.5);
    CHECK_THROWS(build_v(path, 0, 5, Sign::plus, /*shrink=*/false));
    ApproxEigvector v = build_v(path, 0, 5, Sign::plus, /*shrink=*/true);
    CHECK(v.radius == 2);
    CHECK(v.radius_shrunk);
}

TEST_CASE("tree vector is an exact eigenvector up to the boundary row") {
    // on a (D_x, d)-tree the residual of v against sqrt(d) Lambda equals the
    // truncation boundary; compare with the tridiagonal of the same tree
    SparseGraph tree = regular_tree(8, 2, 5, 2.0);
    ApproxEigvector v = build_v(tree, 0, 4, Sign::plus);
    CenteredOperator a = CenteredOperator::plain(tree);
    Vec resid = a.apply(v.vector) - v.predicted_eigenvalue * v.vector;
    // support of the residual: spheres r and r+1 only
    VertexLayering lay = bfs_layers(tree, 0, 5);
    std::vector<char> allowed(tree.n, 0);
    for (std::int32_t y : lay.spheres[4]) allowed[y] = 1;
    for (std::int32_t y : lay.spheres[5]) allowed[y] = 1;
    for (std::int32_t y = 0; y < tree.n; ++y)
        if (std::abs(resid[y]) > 1e-10) CHECK(allowed[y]);
}

TEST_CASE("error_decomposition: exact reconstruction everywhere") {
    SparseGraph g = generate_er(2000, 5.0, 71);
    DegreeOrder ord = degree_order(g);
    for (int l = 0; l < 6; ++l) {
        const std::int32_t x = ord.sigma[l];
        const int rx = r_x_radius(g.degree(x), g.n);
        for (int r : {0, 1, 2, std::max(1, rx)}) {
            ErrorDecomposition dec = error_decomposition(g, x, r);
            CHECK(dec.reconstruction_residual <= 1e-10);
            double triangle = 0.0;
            for (double w : dec.norms) triangle += w;
            CHECK(dec.total_residual <= triangle + 1e-10);
        }
    }
}

TEST_CASE("error_decomposition: w_1 = w_2 = w_3 = 0 on regular trees") {
    SparseGraph tree = regular_tree(12, 3, 4, 3.0);
    ErrorDecomposition dec = error_decomposition(tree, 0, 3);
    CHECK(dec.norms[1] <= 1e-12);
    CHECK(dec.norms[2] <= 1e-12);
    CHECK(dec.norms[3] <= 1e-12);
    CHECK(dec.reconstruction_residual <= 1e-10);
}

TEST_CASE("tree residual decays geometrically in r") {
    // spider: root with D_x = 4 legs, every other vertex one child (d = 1)
    const double rate = 1.0 / std::sqrt(3.0);  // sqrt(d/(D_x-d))
    std::vector<double> resid;
    for (int r : {5, 10, 20}) {
        SparseGraph spider = regular_tree(4, 1, r, 1.0);
        ApproxEigvector v = build_v(spider, 0, r, Sign::plus);
        CenteredOperator a = CenteredOperator::plain(spider);
        resid.push_back((a.apply(v.vector) - v.predicted_eigenvalue * v.vector).norm());
    }
    CHECK(resid[1] <= resid[0] * std::pow(rate, 5) * 10.0);
    CHECK(resid[2] <= resid[1] * std::pow(rate, 10) * 10.0);
}

TEST_CASE("residual implies a nearby eigenvalue") {
    SparseGraph g = generate_er(600, 4.0, 13);
    CenteredOperator op = CenteredOperator::centered(g);
    auto dense = full_spectrum(op);
    DegreeOrder ord = degree_order(g);
    for (int l = 0; l < 4; ++l) {
        const std::int32_t x = ord.sigma[l];
        ApproxEigvector v = build_v(g, x, std::max(1, r_x_radius(g.degree(x), g.n)), Sign::plus);
        const double eps = (op.apply(v.vector) - v.predicted_eigenvalue * v.vector).norm();
        double dist = 1e18;
        for (double lam : dense.eigenvalues) dist = std::min(dist, std::abs(lam - v.predicted_eigenvalue));
        CHECK(dist <= eps + 1e-9);
    }
}

TEST_CASE("median residual trend improves with n") {
    const double d = 6.0;
    auto median_residual = [&](std::int64_t n, std::uint64_t seed) {
        std::vector<double> vals;
        for (int t = 0; t < 3; ++t) {
            SparseGraph g = generate_er(n, d, derive_seed(seed, t));
            DegreeOrder ord = degree_order(g);
            for (int l = 0; l < 5 && l < g.n; ++l) {
                const std::int32_t x = ord.sigma[l];
                if (ord.alphas[l] < 2.5) continue;
                ErrorDecomposition dec =
                    error_decomposition(g, x, std::max(1, r_x_radius(g.degree(x), g.n)));
                vals.push_back(dec.total_residual / std::sqrt(d));
            }
        }
        std::sort(vals.begin(), vals.end());
        return vals.empty() ? 1e9 : vals[vals.size() / 2];
    };
    const double small = median_residual(10000, 5);
    const double large = median_residual(100000, 6);
    MESSAGE("median residual/sqrt(d): n=1e4 ", small, ", n=1e5 ", large);
    CHECK(large < small);
}

TEST_CASE("wigner vector: rademacher tree reduces to the unweighted case") {
    SparseGraph tree = regular_tree(8, 2, 4, 2.0);
    SparseWigner x = make_wigner(tree, WeightLaw::rademacher, 4);
    ApproxEigvector vw = build_v_wigner(x, 0, 3, Sign::plus, 2.0);
    ApproxEigvector vu = build_v(tree, 0, 3, Sign::plus);
    CHECK(vw.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // |g_i|² = |S_i| for ±1 weights, so the coefficients agree
    for (std::size_t i = 0; i < vu.coefficients.size(); ++i)
        CHECK(vw.coefficients[i] == doctest::Approx(vu.coefficients[i]).epsilon(1e-12));

    ApproxEigvector v0 = build_v_wigner(x, 0, 0, Sign::plus, 2.0);
    CHECK(v0.vector[0] == doctest::Approx(1.0));
}

TEST_CASE("wigner error terms: exact reconstruction and the vanishing fixture") {
    SparseGraph g = generate_er(500, 5.0, 29);
    SparseWigner x = make_wigner(g, WeightLaw::uniform_scaled, 3);
    Vec alpha = generalized_alpha(x, 5.0);
    std::int32_t best = 0;
    for (std::int32_t v = 1; v < g.n; ++v)
        if (alpha[v] > alpha[best]) best = v;
    ErrorDecomposition dec = wigner_error_terms(x, best, 2, 5.0);
    CHECK(dec.norms.size() == 4);  // no w_0 analogue
    CHECK(dec.reconstruction_residual <= 1e-10);

    // rademacher weights on a regular tree: column sums of squares equal d
    SparseGraph tree = regular_tree(10, 2, 4, 2.0);
    SparseWigner tx = make_wigner(tree, WeightLaw::rademacher, 11);
    ErrorDecomposition tdec = wigner_error_terms(tx, 0, 3, 2.0);
    CHECK(tdec.norms[1] <= 1e-12);  // w_2
    CHECK(tdec.norms[2] <= 1e-12);  // w_3
    CHECK(tdec.reconstruction_residual <= 1e-10);
}

TEST_CASE("wigner residual comparable to the unweighted residual") {
    const double d = 6.0;
    std::vector<double> plain_r, wigner_r;
    for (int t = 0; t < 5; ++t) {
        SparseGraph g = generate_er(20000, d, derive_seed(99, t));
        DegreeOrder ord = degree_order(g);
        const std::int32_t x = ord.sigma[0];
        const int r = std::max(1, r_x_radius(g.degree(x), g.n));
        plain_r.push_back(error_decomposition(g, x, r).total_residual);
        SparseWigner w = make_wigner(g, WeightLaw::rademacher, derive_seed(7, t));
        wigner_r.push_back(wigner_error_terms(w, x, r, d).total_residual);
    }
    std::sort(plain_r.begin(), plain_r.end());
    std::sort(wigner_r.begin(), wigner_r.end());
    CHECK(wigner_r[2] <= 2.0 * plain_r[2] + 1e-9);
    CHECK(plain_r[2] <= 2.0 * wigner_r[2] + 1e-9);
}
