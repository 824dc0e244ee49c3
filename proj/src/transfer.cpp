#include "sparsespec/transfer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sparsespec/degree_stats.hpp"

namespace sparsespec {

double lambda_fn(double t) {
    if (!(t > 1.0)) throw std::invalid_argument("lambda_fn: need t > 1");
    return t / std::sqrt(t - 1.0);
}

double alpha_fn(double eta) {
    if (eta < 2.0) throw std::invalid_argument("alpha_fn: need eta >= 2");
    return 0.5 * eta * (eta + std::sqrt(eta * eta - 4.0));
}

double gamma_fn(double eta) {
    if (!(std::abs(eta) > 2.0)) throw std::invalid_argument("gamma_fn: need |eta| > 2");
    const double s = eta > 0.0 ? 1.0 : -1.0;
    return 0.5 * (eta - s * std::sqrt(eta * eta - 4.0));
}

IdealTridiagonal ideal_m(double alpha, int r) {
    if (!(alpha > 0.0)) throw std::invalid_argument("ideal_m: need alpha > 0");
    if (r < 1) throw std::invalid_argument("ideal_m: need r >= 1");
    IdealTridiagonal out;
    out.alpha = alpha;
    out.r = r;
    out.form.m = r;
    out.form.diag.assign(r + 1, 0.0);
    out.form.offdiag.assign(r, 1.0);
    out.form.offdiag[0] = std::sqrt(alpha);
    out.form.basis_norms.assign(r + 1, 1.0);
    return out;
}

std::vector<double> ideal_eigvec_u(double alpha, int r) {
    if (!(alpha > 2.0)) throw std::invalid_argument("ideal_eigvec_u: need alpha > 2");
    if (r < 1) throw std::invalid_argument("ideal_eigvec_u: need r >= 1");
    std::vector<double> u(r + 1);
    u[0] = 1.0;
    u[1] = std::sqrt(alpha / (alpha - 1.0));
    const double ratio = 1.0 / std::sqrt(alpha - 1.0);
    for (int i = 2; i <= r; ++i) u[i] = u[i - 1] * ratio;
    double norm = 0.0;
    for (double x : u) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : u) x /= norm;
    return u;
}

std::array<double, 2> transfer_step(double eta, const std::array<double, 2>& pair) {
    return {eta * pair[0] - pair[1], pair[0]};
}

double delta_fn(double m00, double m01, double m11, double m12, double eta) {
    const double g = gamma_fn(eta);
    const double num = g * (eta - m00) * (eta - m11) - g * m01 * m01 - m12 * (eta - m00);
    const double den = m01 * m01 + g * (eta - m00) * m12 - (eta - m00) * (eta - m11);
    const double scale = std::max({1.0, m01 * m01, std::abs((eta - m00) * (eta - m11))});
    if (std::abs(den) < 1e-10 * scale)
        throw std::domain_error("delta_fn: resonance, denominator vanishes");
    return num / den;
}

GammaGeqResult gamma_geq_fn(double m00, double m01, double m11, double m12, double eta,
                            double eps) {
    if (!(std::abs(eta) > 2.0)) throw std::invalid_argument("gamma_geq_fn: need |eta| > 2");
    const double g = gamma_fn(eta);
    const double delta = delta_fn(m00, m01, m11, m12, eta);
    const double mass = 1.0 + std::max(1.0, delta * delta);
    GammaGeqResult out;
    out.value = 1.0 / g - 8.0 * (3.0 + eta) * eps / (1.0 - g * g) * std::sqrt(mass);
    const double rhs = 4.0 + 1024.0 * (3.0 + eta) * (3.0 + eta) * eps * eps /
                                 ((1.0 - g * g) * (1.0 - g * g)) * mass;
    out.condition_ok = eta * eta >= rhs;
    return out;
}

DelocalizationBound delocalization_bound(const TridiagonalForm& mt, double eta) {
    DelocalizationBound out;
    out.bound = std::numeric_limits<double>::infinity();
    if (!(eta > 2.0)) return out;
    const int r = mt.m;
    if (r < 3) return out;

    double eps = 0.0;  // max over i in [1, r-1] of |M_ii| ∨ |M_{i,i+1} - 1|
    for (int i = 1; i <= r - 1; ++i)
        eps = std::max({eps, std::abs(mt.diag[i]), std::abs(mt.offdiag[i] - 1.0)});
    out.eps = eps;
    out.gamma = gamma_fn(eta);

    const double m00 = mt.diag[0], m01 = mt.offdiag[0];
    const double m11 = mt.diag[1], m12 = mt.offdiag[1];
    if (m12 == 0.0 || m01 == 0.0) return out;  // degenerate prefactor

    double delta;
    try {
        delta = delta_fn(m00, m01, m11, m12, eta);
    } catch (const std::domain_error&) {
        return out;
    }
    out.delta = delta;

    GammaGeqResult gg = gamma_geq_fn(m00, m01, m11, m12, eta, eps);
    out.gamma_geq = gg.value;
    out.condition_ok = gg.condition_ok && eps <= 0.5;
    if (!out.condition_ok) return out;

    const double g = out.gamma;
    const double q1_den = m01 * m01 - (eta - m11) * (eta - m00) + g * m12 * (eta - m00);
    if (q1_den == 0.0) return out;
    const double prefactor = 8.0 * (m01 * m12) * (m01 * m12) / (q1_den * q1_den);
    // decay exponent 2(r-2): the expanding component is tracked over the
    // pairs i = 1..r-1 only, so the last usable index is r-2
    const double decay = std::pow(gg.value, -2.0 * (r - 2));
    out.bound = prefactor * std::min(decay, 1.0 / (r - 1));
    return out;
}

Section7Params section7_params(double mu, double d, double tau, double zeta, std::int64_t n) {
    const double target = mu / std::sqrt(d) - zeta;
    if (!(target > 2.0)) throw std::invalid_argument("section7_params: mu too small, no omega > 2");

    // Lambda is increasing on [2, inf); bisect Lambda(omega) = target.
    double lo = 2.0 + 1e-12, hi = 1e6;
    if (lambda_fn(hi) < target) throw std::invalid_argument("section7_params: target beyond bracket");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (lambda_fn(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
    }

    Section7Params out;
    out.omega = 0.5 * (lo + hi);
    const double logn = std::log(static_cast<double>(n));
    const double a = logn / (12.0 * std::log(out.omega * d));
    const double b = d / (4.0 * std::log(d)) * h_fn((tau - 1.0) / 2.0) - 1.0;
    out.r_tau_omega = std::min(a, b) - 2.0;
    return out;
}

bool in_cal_w(double alpha_x, double tau, double mu, double zeta, double d) {
    if (alpha_x < tau) return false;
    return mu >= std::sqrt(d) * (lambda_fn(std::max(alpha_x, 2.0)) + zeta);
}

double cal_e(double tau, int k, double d, std::int64_t n) {
    const double logn = std::log(static_cast<double>(n));
    const double inner = (std::log(d) + logn / d) * (1.0 + logn / (d * tau));
    return std::pow(3.0 * std::sqrt(tau) + 2.0, k) / std::sqrt(d) * std::sqrt(inner);
}

TridiagComparison tridiag_comparison(const SparseGraph& g, const PrunedGraph& pruned,
                                     std::int32_t x, int r, double d, bool use_centered,
                                     const DegreeOrder* order) {
    if (pruned.base != &g) throw std::invalid_argument("tridiag_comparison: pruned graph from a different base");
    if (!pruned.radii.count(x)) throw std::invalid_argument("tridiag_comparison: x not in v_tau");

    TridiagComparison out;
    TridiagonalForm form;
    if (use_centered) {
        DegreeOrder local;
        if (!order) {
            local = degree_order(g);
            order = &local;
        }
        std::int64_t l = 1;
        for (std::int64_t k = 0; k < g.n; ++k)
            if (order->sigma[k] == x) {
                l = k + 1;
                break;
            }
        CenteredOperator base = CenteredOperator::centered(g);
        CenteredOperator op = pruned_restricted(base, pruned, l, *order);
        form = tridiagonalize(op, x, r, /*keep_basis=*/true);
    } else {
        CenteredOperator op = CenteredOperator::plain(pruned.pruned);
        form = tridiagonalize(op, x, r, /*keep_basis=*/true);
    }

    const double alpha_x = static_cast<double>(g.degree(x)) / d;
    IdealTridiagonal ideal = ideal_m(alpha_x, r);
    const int rows = std::min(form.m, r) + 1;
    Mat diff = Mat::Zero(rows, rows);
    Mat a = form.dense(), b = std::sqrt(d) * ideal.form.dense();
    diff = a.topLeftCorner(rows, rows) - b.topLeftCorner(rows, rows);
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    out.op_norm_diff =
        std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(rows - 1)));
    out.cal_e_value = cal_e(pruned.tau, r, d, g.n);

    VertexLayering lay = bfs_layers(pruned.pruned, x, form.m);
    for (int k = 0; k <= std::min(form.m, lay.radius()); ++k) {
        Vec indicator = Vec::Zero(g.n);
        for (std::int32_t y : lay.spheres[k]) indicator[y] = 1.0;
        const double denom = indicator.norm();
        if (denom > 0.0 && k < static_cast<int>(form.basis.size()))
            out.g_closeness.push_back((form.basis[k] - indicator).norm() / denom);
    }
    return out;
}

} // namespace sparsespec
