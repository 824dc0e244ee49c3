#include "sparsespec/nonbacktracking.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sparsespec/rng.hpp"
#include "sparsespec/spectra.hpp"

namespace sparsespec {

NbtOperator::NbtOperator(const CenteredOperator& base, std::int64_t cap) : base_(&base), n_(base.size()) {
    if (base.kind() != OperatorKind::centered)
        throw std::invalid_argument("NbtOperator: base must be the centered operator");
    if (n_ > cap) throw std::invalid_argument("NbtOperator: n exceeds cap");
}

void NbtOperator::apply(const Vec& w, Vec& out) const {
    if (w.size() != pair_count()) throw std::invalid_argument("nbt_matvec: dimension mismatch");
    out.resize(pair_count());
    const SparseGraph& g = base_->graph();
    const double shift = g.d_param / static_cast<double>(n_);
    const double inv_sqrt_d = 1.0 / std::sqrt(g.d_param);

    // Row partial sums: s_y = Σ_{v ~ y} w_(y,v), t_y = Σ_v w_(y,v).
    Vec s(n_), t(n_);
    for (std::int64_t y = 0; y < n_; ++y) {
        const double* row = w.data() + y * n_;
        double acc = 0.0;
        for (std::int32_t v : g.adjacency[y]) acc += row[v];
        s[y] = acc;
        double tot = 0.0;
        for (std::int64_t v = 0; v < n_; ++v) tot += row[v];
        t[y] = tot;
    }

    // A̅_{yv} = A_{yv} - shift for v != y, 0 on the diagonal.
    std::vector<char> adj_row(n_, 0);
    for (std::int64_t y = 0; y < n_; ++y) {
        const double row_sum = s[y] - shift * (t[y] - w[y * n_ + y]);
        for (std::int32_t v : g.adjacency[y]) adj_row[v] = 1;
        for (std::int64_t x = 0; x < n_; ++x) {
            double a_yx = 0.0;
            if (x != y) a_yx = (adj_row[x] ? 1.0 : 0.0) - shift;
            out[x * n_ + y] = inv_sqrt_d * (row_sum - a_yx * w[y * n_ + x]);
        }
        for (std::int32_t v : g.adjacency[y]) adj_row[v] = 0;
    }
}

Vec NbtOperator::apply(const Vec& w) const {
    Vec out;
    apply(w, out);
    return out;
}

Mat NbtOperator::dense(std::int64_t cap) const {
    if (n_ > cap) throw std::invalid_argument("NbtOperator::dense: n exceeds cap");
    const std::int64_t m = pair_count();
    Mat b(m, m);
    Vec e = Vec::Zero(m), col(m);
    for (std::int64_t j = 0; j < m; ++j) {
        e[j] = 1.0;
        apply(e, col);
        b.col(j) = col;
        e[j] = 0.0;
    }
    return b;
}

Vec nbt_matvec(const NbtOperator& op, const Vec& w) { return op.apply(w); }

NbtRadiusEstimate spectral_radius_nbt(const NbtOperator& op, int iters, std::uint64_t seed,
                                      int stride) {
    if (iters < 50) throw std::invalid_argument("spectral_radius_nbt: need iters >= 50");
    if (stride < 1) throw std::invalid_argument("spectral_radius_nbt: need stride >= 1");
    const std::int64_t m = op.pair_count();
    Rng rng(seed);
    Vec w(m);
    for (std::int64_t i = 0; i < m; ++i) w[i] = rng.normal();
    w /= w.norm();

    std::deque<double> ratios;
    Vec next(m);
    double log_gain = 0.0;
    int since_renorm = 0;
    for (int it = 0; it < iters; ++it) {
        op.apply(w, next);
        const double norm = next.norm();
        if (!std::isfinite(norm) || norm == 0.0)
            throw std::runtime_error("spectral_radius_nbt: iteration diverged or vanished");
        log_gain += std::log(norm);
        w = next / norm;
        if (++since_renorm == stride) {
            ratios.push_back(log_gain / stride);  // per-step rate over the period
            if (ratios.size() > 10) ratios.pop_front();
            log_gain = 0.0;
            since_renorm = 0;
        }
    }
    if (ratios.empty()) throw std::runtime_error("spectral_radius_nbt: stride exceeds iterations");

    double log_acc = 0.0;
    for (double r : ratios) log_acc += r;
    NbtRadiusEstimate est;
    est.estimate = std::exp(log_acc / static_cast<double>(ratios.size()));
    est.iterations = iters;
    return est;
}

IharaBassPair ihara_bass_pair(const CenteredOperator& base, double t, std::int64_t cap) {
    const std::int64_t n = base.size();
    if (n > cap) throw std::invalid_argument("ihara_bass_pair: n exceeds cap");
    const SparseGraph& g = base.graph();
    const double d = g.d_param;
    const double shift = d / static_cast<double>(n);
    const double t2d = t * t * d;

    // Excluded set: t² d == A̅_xy² for some pair; entries take two values.
    const double on = 1.0 - shift, off = -shift;
    for (double a : {on, off}) {
        if (std::abs(t2d - a * a) < 1e-12 * std::max(1.0, t2d))
            throw std::domain_error("ihara_bass_pair: t in the excluded set (t²d = A̅_xy²)");
    }

    IharaBassPair out;
    out.t = t;
    out.a_t = Mat::Zero(n, n);
    out.m_t = Vec::Ones(n);
    const double sqrt_d = std::sqrt(d);
    for (std::int64_t x = 0; x < n; ++x) {
        for (std::int64_t y = 0; y < n; ++y) {
            if (x == y) continue;
            const double a = g.has_edge(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y))
                                 ? on
                                 : off;
            out.a_t(x, y) = t * sqrt_d * a / (t2d - a * a);
            out.m_t[x] += a * a / (t2d - a * a);
        }
    }

    Mat pencil = -out.a_t;
    for (std::int64_t x = 0; x < n; ++x) pencil(x, x) += out.m_t[x];
    Eigen::SelfAdjointEigenSolver<Mat> es(pencil, Eigen::EigenvaluesOnly);
    out.min_eig = es.eigenvalues()(0);
    long double det = 1.0L;
    for (std::int64_t i = 0; i < n; ++i) det *= static_cast<long double>(es.eigenvalues()(i));
    out.det_value = static_cast<double>(det);
    return out;
}

std::vector<double> ihara_bass_roots(const CenteredOperator& base, double t_min, double t_max,
                                     int grid, double tol) {
    if (grid < 2) throw std::invalid_argument("ihara_bass_roots: need grid >= 2");
    auto det_at = [&](double t) { return ihara_bass_pair(base, t).det_value; };

    std::vector<double> roots;
    double prev_t = t_min, prev_f;
    try {
        prev_f = det_at(prev_t);
    } catch (const std::domain_error&) {
        prev_t += 1e-9;
        prev_f = det_at(prev_t);
    }
    for (int i = 1; i <= grid; ++i) {
        double t = t_min + (t_max - t_min) * static_cast<double>(i) / grid;
        double f;
        try {
            f = det_at(t);
        } catch (const std::domain_error&) {
            t += 1e-9;
            f = det_at(t);
        }
        if (prev_f == 0.0) roots.push_back(prev_t);
        if (prev_f * f < 0.0) {
            double lo = prev_t, hi = t, flo = prev_f;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = det_at(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
                if (hi - lo < tol) break;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_f = f;
    }
    return roots;
}

namespace {

// I + D ∓ A̅/sqrt(d) as an implicit operator.
class ShiftedOperator : public LinearOperator {
public:
    ShiftedOperator(const CenteredOperator& base, double sign) : base_(&base), sign_(sign) {
        const SparseGraph& g = base.graph();
        alphas_.resize(g.n);
        for (std::int32_t x = 0; x < g.n; ++x) alphas_[x] = g.alpha(x);
        inv_sqrt_d_ = 1.0 / std::sqrt(g.d_param);
    }
    std::int64_t size() const override { return base_->size(); }
    void apply(const Vec& in, Vec& out) const override {
        base_->apply(in, out);
        out *= sign_ * inv_sqrt_d_;
        for (std::int64_t i = 0; i < size(); ++i) out[i] += (1.0 + alphas_[i]) * in[i];
    }

private:
    const CenteredOperator* base_;
    double sign_;
    double inv_sqrt_d_;
    Vec alphas_;
};

} // namespace

QuadraticFormCheck quadratic_form_check(const CenteredOperator& base, double d, double envelope_c,
                                        double tol, int max_iter, std::uint64_t seed) {
    QuadraticFormCheck out;
    const SparseGraph& g = base.graph();
    std::int64_t dmax = 0;
    for (std::int32_t x = 0; x < g.n; ++x) dmax = std::max(dmax, g.degree(x));
    out.bound = envelope_c * (d + static_cast<double>(dmax)) / std::pow(d, 1.5);

    ShiftedOperator minus(base, -1.0);  // I + D - A̅/sqrt(d)
    ShiftedOperator plus(base, +1.0);   // I + D + A̅/sqrt(d)
    SpectrumResult sm = extremal_eigs(minus, 1, Side::bottom, tol, max_iter, seed);
    SpectrumResult sp = extremal_eigs(plus, 1, Side::bottom, tol, max_iter, seed + 1);
    if (sm.eigenvalues.empty() || sp.eigenvalues.empty())
        throw std::runtime_error("quadratic_form_check: eigensolver returned nothing");
    out.lam_min_plus = sm.eigenvalues.back();
    out.lam_min_minus = sp.eigenvalues.back();
    out.norm_bound_rhs = 1.0 + static_cast<double>(dmax) / d + out.bound;
    return out;
}

void write_ihara_bass_csv(const CenteredOperator& base, double t_min, double t_max, int grid,
                          const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "t,det_value,min_eig\n";
    char buf[120];
    for (int i = 0; i <= grid; ++i) {
        double t = t_min + (t_max - t_min) * static_cast<double>(i) / grid;
        try {
            IharaBassPair p = ihara_bass_pair(base, t);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, p.det_value, p.min_eig);
            f << buf;
        } catch (const std::domain_error&) {
            // excluded t; skip the grid point
        }
    }
}

} // namespace sparsespec
