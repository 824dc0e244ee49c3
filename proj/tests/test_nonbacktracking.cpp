#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sparsespec/nonbacktracking.hpp"
#include "sparsespec/rng.hpp"
#include "sparsespec/spectra.hpp"

using namespace sparsespec;

namespace {
Vec random_vec(std::int64_t n, std::uint64_t seed) {
    Rng rng(seed);
    Vec v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

double max_abs_eig(const Mat& m) {
    Eigen::EigenSolver<Mat> es(m, false);
    double best = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        best = std::max(best, std::abs(es.eigenvalues()(i)));
    return best;
}
} // namespace

TEST_CASE("nbt matvec matches the dense operator on tiny graphs") {
    SparseGraph g = graph_from_edges(2, {{0, 1}}, 1.0);
    CenteredOperator op = CenteredOperator::centered(g);
    NbtOperator nbt(op);
    Mat dense = nbt.dense();
    CHECK(dense.rows() == 4);
    for (int t = 0; t < 4; ++t) {
        Vec w = random_vec(4, 10 + t);
        CHECK((nbt.apply(w) - dense * w).norm() <= 1e-12 * std::max(1.0, (dense * w).norm()));
    }
}

TEST_CASE("nbt matvec: constant-in-v input collapses to row sums") {
    SparseGraph g = generate_er(12, 3.0, 9);
    CenteredOperator op = CenteredOperator::centered(g);
    NbtOperator nbt(op);
    const std::int64_t n = g.n;
    Vec w = Vec::Zero(n * n);
    const std::int32_t fixed_y = 4;
    for (std::int64_t v = 0; v < n; ++v) w[fixed_y * n + v] = 1.0;  // pairs (y, v)
    Vec out = nbt.apply(w);
    const double inv_sqrt_d = 1.0 / std::sqrt(g.d_param);
    for (std::int64_t x = 0; x < n; ++x) {
        double row_sum = 0.0;
        for (std::int64_t v = 0; v < n; ++v) row_sum += op.entry(fixed_y, v);
        const double expected = inv_sqrt_d * (row_sum - op.entry(fixed_y, x));
        CHECK(out[x * n + fixed_y] == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("nbt matvec matches dense on n=30") {
    SparseGraph g = generate_er(30, 6.0, 21);
    CenteredOperator op = CenteredOperator::centered(g);
    NbtOperator nbt(op);
    Mat dense = nbt.dense();
    for (int t = 0; t < 3; ++t) {
        Vec w = random_vec(900, 40 + t);
        Vec fast = nbt.apply(w);
        Vec slow = dense * w;
        CHECK((fast - slow).norm() <= 1e-12 * slow.norm());
    }
}

TEST_CASE("spectral radius estimate: sanity on the empty graph") {
    SparseGraph g = graph_from_edges(20, {}, 4.0);
    CenteredOperator op = CenteredOperator::centered(g);
    NbtOperator nbt(op);
    NbtRadiusEstimate est = spectral_radius_nbt(nbt, 80, 3);
    CHECK(std::isfinite(est.estimate));
    CHECK(est.flagged_nonnormal);
    CHECK_THROWS(spectral_radius_nbt(nbt, 10, 3));
}

TEST_CASE("spectral radius estimate agrees with the dense oracle") {
    SparseGraph g = generate_er(12, 5.0, 33);
    CenteredOperator op = CenteredOperator::centered(g);
    NbtOperator nbt(op);
    const double exact = max_abs_eig(nbt.dense());
    NbtRadiusEstimate est = spectral_radius_nbt(nbt, 1500, 4);
    CHECK(std::abs(est.estimate - exact) <= 0.05);
}

TEST_CASE("ihara-bass: pencil tends to the identity for large t") {
    SparseGraph g = generate_er(12, 6.0, 2);
    CenteredOperator op = CenteredOperator::centered(g);
    IharaBassPair p = ihara_bass_pair(op, 1e6);
    CHECK(p.min_eig >= 1.0 - 1e-3);
    CHECK(p.min_eig <= 1.0 + 1e-3);
}

TEST_CASE("ihara-bass: excluded parameters raise") {
    SparseGraph g = graph_from_edges(4, {{0, 1}, {2, 3}}, 2.0);
    CenteredOperator op = CenteredOperator::centered(g);
    const double bad = (1.0 - 2.0 / 4.0) / std::sqrt(2.0);  // t²d = (1 - d/N)²
    CHECK_THROWS_AS((void)ihara_bass_pair(op, bad), std::domain_error);
}

TEST_CASE("ihara-bass roots match the real spectrum of dense B") {
    SparseGraph g = generate_er(8, 4.0, 14);
    CenteredOperator op = CenteredOperator::centered(g);
    NbtOperator nbt(op);
    Mat b = nbt.dense();
    Eigen::EigenSolver<Mat> es(b, false);

    const double excluded = (1.0 - g.d_param / g.n) / std::sqrt(g.d_param) + 0.02;
    std::vector<double> real_eigs;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i).imag()) < 1e-9 &&
            std::abs(es.eigenvalues()(i).real()) > excluded)
            real_eigs.push_back(es.eigenvalues()(i).real());

    std::vector<double> roots = ihara_bass_roots(op, excluded, 4.0, 4000);
    auto negroots = ihara_bass_roots(op, -4.0, -excluded, 4000);
    roots.insert(roots.end(), negroots.begin(), negroots.end());

    for (double t : real_eigs) {
        double best = 1e18;
        for (double r : roots) best = std::min(best, std::abs(r - t));
        CHECK(best <= 1e-6);
    }
    // and conversely every located root is an eigenvalue of B
    for (double r : roots) {
        double best = 1e18;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            best = std::min(best, std::abs(std::complex<double>(r, 0.0) - es.eigenvalues()(i)));
        CHECK(best <= 1e-6);
    }

    // strictly positive definite beyond the spectral radius
    const double rho = max_abs_eig(b);
    for (double t : {rho + 1e-3, rho + 0.1, rho + 1.0})
        CHECK(ihara_bass_pair(op, t).min_eig > 0.0);
}

TEST_CASE("pencil PD threshold locates the top real eigenvalue of B") {
    // When det(M(t) - A̅(t)) has real roots above the excluded set, the PD
    // threshold is the largest of them and coincides with the top real
    // eigenvalue of B; when there is none, the pencil stays PD on the whole
    // admissible range and the top real eigenvalue is the excluded value
    // itself (the pole of the pencil).
    for (std::uint64_t seed : {8u, 14u, 23u, 31u}) {
        SparseGraph g = generate_er(10, 5.0, seed);
        CenteredOperator op = CenteredOperator::centered(g);
        NbtOperator nbt(op);
        const double excluded = (1.0 - g.d_param / g.n) / std::sqrt(g.d_param);

        Eigen::EigenSolver<Mat> es(nbt.dense(), false);
        double max_real = 0.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i).imag()) < 1e-9)
                max_real = std::max(max_real, es.eigenvalues()(i).real());

        std::vector<double> roots = ihara_bass_roots(op, excluded + 1e-4, 4.0, 4000);
        if (!roots.empty()) {
            const double t_star = *std::max_element(roots.begin(), roots.end());
            CHECK(t_star == doctest::Approx(max_real).epsilon(1e-6));
            for (double t : {t_star + 1e-3, t_star + 0.5})
                CHECK(ihara_bass_pair(op, t).min_eig > 0.0);
        } else {
            CHECK(max_real == doctest::Approx(excluded).epsilon(1e-9));
            for (double t : {excluded + 1e-3, excluded + 0.5, excluded + 2.0})
                CHECK(ihara_bass_pair(op, t).min_eig > 0.0);
        }
    }
}

TEST_CASE("quadratic form check on a small dense instance") {
    SparseGraph g = generate_er(4, 1.0, 6);
    CenteredOperator op = CenteredOperator::centered(g);
    QuadraticFormCheck q = quadratic_form_check(op, 1.0);
    // dense evaluation oracle
    Mat a = materialize_dense(op);
    Mat id = Mat::Identity(4, 4);
    Mat dd = Mat::Zero(4, 4);
    for (int x = 0; x < 4; ++x) dd(x, x) = g.alpha(x);
    auto lam_min = [](const Mat& m) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    };
    CHECK(q.lam_min_plus == doctest::Approx(lam_min(id + dd - a)).epsilon(1e-7));
    CHECK(q.lam_min_minus == doctest::Approx(lam_min(id + dd + a)).epsilon(1e-7));
}

TEST_CASE("quadratic form inequality and the norm corollary at moderate n") {
    SparseGraph g = generate_er(1200, 8.0, 44);
    CenteredOperator op = CenteredOperator::centered(g);
    QuadraticFormCheck q = quadratic_form_check(op, 8.0);
    CHECK(std::min(q.lam_min_plus, q.lam_min_minus) >= -q.bound);
    auto top = extremal_eigs(op, 1, Side::both, 1e-8, 300, 2);
    const double norm_a = std::max(std::abs(top.eigenvalues.front()), std::abs(top.eigenvalues.back()));
    CHECK(norm_a / std::sqrt(8.0) <= q.norm_bound_rhs);
}
