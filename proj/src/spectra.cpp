#include "sparsespec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sparsespec/rng.hpp"

namespace sparsespec {

SpectrumResult full_spectrum_dense(const Mat& m, bool want_vectors) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(
        m, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");

    const std::int64_t n = m.rows();
    SpectrumResult res;
    res.eigenvalues.resize(n);
    for (std::int64_t i = 0; i < n; ++i) res.eigenvalues[i] = solver.eigenvalues()[n - 1 - i];
    if (want_vectors) {
        res.eigenvectors.resize(n);
        for (std::int64_t i = 0; i < n; ++i) res.eigenvectors[i] = solver.eigenvectors().col(n - 1 - i);
    }
    res.residuals.assign(n, 0.0);
    if (want_vectors)
        for (std::int64_t i = 0; i < n; ++i)
            res.residuals[i] = (m * res.eigenvectors[i] - res.eigenvalues[i] * res.eigenvectors[i]).norm();
    res.converged.assign(n, true);
    return res;
}

SpectrumResult full_spectrum(const LinearOperator& op, bool want_vectors, std::int64_t cap) {
    return full_spectrum_dense(materialize_dense(op, cap), want_vectors);
}

namespace {

// Orthogonalize v against the columns in basis (twice, for stability).
void reorthogonalize(Vec& v, const std::vector<Vec>& basis, int count) {
    for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < count; ++j) v -= basis[j].dot(v) * basis[j];
}

} // namespace

SpectrumResult extremal_eigs(const LinearOperator& op, int k, Side side, double tol,
                             int max_iter, std::uint64_t seed) {
    const std::int64_t n = op.size();
    if (k <= 0) throw std::invalid_argument("extremal_eigs: need k > 0");
    const int want_per_side = k;
    const int m_max = static_cast<int>(std::min<std::int64_t>(n, max_iter));

    Rng rng(seed);
    Vec v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = rng.normal();
    v.normalize();

    std::vector<Vec> basis;
    basis.reserve(m_max);
    basis.push_back(v);
    std::vector<double> alpha, beta;  // Lanczos recurrence coefficients

    Vec w(n);
    int m = 0;
    bool exhausted = false;

    auto ritz_done = [&](int steps) -> bool {
        if (steps < 2 * want_per_side + 2) return false;
        Mat t = Mat::Zero(steps, steps);
        for (int i = 0; i < steps; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(t);
        const double scale = std::max(std::abs(es.eigenvalues()(0)),
                                      std::abs(es.eigenvalues()(steps - 1)));
        const double blast = beta.empty() ? 0.0 : beta.back();
        auto pair_ok = [&](int idx) {
            return blast * std::abs(es.eigenvectors()(steps - 1, idx)) <= tol * std::max(1.0, scale);
        };
        bool ok = true;
        if (side != Side::bottom)
            for (int i = 0; i < want_per_side; ++i) ok = ok && pair_ok(steps - 1 - i);
        if (side != Side::top)
            for (int i = 0; i < want_per_side; ++i) ok = ok && pair_ok(i);
        return ok;
    };

    while (m < m_max) {
        op.apply(basis[m], w);
        const double a = basis[m].dot(w);
        alpha.push_back(a);
        w -= a * basis[m];
        if (m > 0) w -= beta[m - 1] * basis[m - 1];
        reorthogonalize(w, basis, m + 1);
        const double b = w.norm();
        ++m;
        if (b <= 1e-12 * std::max(1.0, std::abs(a))) {
            exhausted = true;
            break;
        }
        if (m >= m_max) break;
        beta.push_back(b);
        basis.push_back(w / b);
        if (m % 16 == 0 && ritz_done(m)) break;
    }

    // Ritz pairs of the m x m tridiagonal.
    Mat t = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(t);

    const int avail = m;
    const int take = std::min(want_per_side, avail);
    std::vector<int> picks;
    if (side != Side::bottom)
        for (int i = 0; i < take; ++i) picks.push_back(avail - 1 - i);  // largest first
    if (side != Side::top)
        for (int i = 0; i < take; ++i) picks.push_back(i);              // smallest

    SpectrumResult res;
    const double scale = std::max({1.0, std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(avail - 1))});
    for (int idx : picks) {
        const double lam = es.eigenvalues()(idx);
        Vec y = Vec::Zero(n);
        for (int j = 0; j < m; ++j) y += es.eigenvectors()(j, idx) * basis[j];
        y.normalize();
        Vec r = op.apply(y) - lam * y;
        res.eigenvalues.push_back(lam);
        res.eigenvectors.push_back(std::move(y));
        res.residuals.push_back(r.norm());
        res.converged.push_back(r.norm() <= tol * scale);
    }

    // Report nonincreasing.
    std::vector<std::size_t> order(res.eigenvalues.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return res.eigenvalues[a] > res.eigenvalues[b];
    });
    SpectrumResult sorted;
    for (std::size_t i : order) {
        sorted.eigenvalues.push_back(res.eigenvalues[i]);
        sorted.eigenvectors.push_back(std::move(res.eigenvectors[i]));
        sorted.residuals.push_back(res.residuals[i]);
        sorted.converged.push_back(res.converged[i]);
    }
    (void)exhausted;
    return sorted;
}

Mat TridiagonalForm::dense() const {
    Mat t = Mat::Zero(m + 1, m + 1);
    for (int i = 0; i <= m; ++i) {
        t(i, i) = diag[i];
        if (i < m) t(i, i + 1) = t(i + 1, i) = offdiag[i];
    }
    return t;
}

TridiagonalForm tridiagonalize(const LinearOperator& op, std::int32_t x, int r, bool keep_basis) {
    const std::int64_t n = op.size();
    if (x < 0 || x >= n) throw std::out_of_range("tridiagonalize: center out of range");
    if (r < 1) throw std::invalid_argument("tridiagonalize: need r >= 1");

    TridiagonalForm form;
    form.center = x;

    std::vector<Vec> g;           // unnormalized g_i
    std::vector<Vec> ghat;        // g_i / ‖g_i‖
    g.push_back(Vec::Zero(n));
    g[0][x] = 1.0;
    ghat.push_back(g[0]);
    form.basis_norms.push_back(1.0);

    Vec w(n);
    for (int i = 0; i < r; ++i) {
        op.apply(g[i], w);
        form.diag.push_back(ghat[i].dot(w) / form.basis_norms[i]);
        reorthogonalize(w, ghat, static_cast<int>(ghat.size()));
        const double norm = w.norm();
        if (norm <= 1e-12 * std::max(1.0, form.basis_norms[i])) {
            form.exhausted = true;
            break;
        }
        g.push_back(w);
        ghat.push_back(w / norm);
        form.basis_norms.push_back(norm);
        form.offdiag.push_back(norm / form.basis_norms[i]);
    }
    form.m = static_cast<int>(form.offdiag.size());
    // diagonal entry of the last row
    if (static_cast<int>(form.diag.size()) == form.m) {
        op.apply(g[form.m], w);
        form.diag.push_back(ghat[form.m].dot(w) / form.basis_norms[form.m]);
    }
    form.diag.resize(form.m + 1);
    if (keep_basis) form.basis = std::move(g);
    return form;
}

bool bipartite_diag_check(const TridiagonalForm& form) {
    double max_diag = 0.0, max_off = 0.0;
    for (double d : form.diag) max_diag = std::max(max_diag, std::abs(d));
    for (double o : form.offdiag) max_off = std::max(max_off, std::abs(o));
    return max_diag <= 1e-10 * std::max(1.0, max_off);
}

void write_spectrum_csv(const SpectrumResult& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "index,eigenvalue,residual\n";
    char buf[80];
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, s.eigenvalues[i],
                      i < s.residuals.size() ? s.residuals[i] : 0.0);
        f << buf;
    }
}

} // namespace sparsespec
