#include "sparsespec/degree_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsespec/graph.hpp"
#include "sparsespec/rng.hpp"

namespace sparsespec {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Bisection for an increasing function; caller supplies a bracketing hi.
template <class F>
double bisect_increasing(F f, double lo, double hi, double target, double tol) {
    double flo = f(lo) - target;
    if (flo > tol) throw std::invalid_argument("bisection: target below range");
    while (f(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("bisection: no upper bracket");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
    }
    double root = 0.5 * (lo + hi);
    if (std::abs(f(root) - target) > tol)
        throw std::runtime_error("bisection: residual above tolerance");
    return root;
}
} // namespace

double h_fn(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("h_fn: need alpha >= 0");
    return (1.0 + alpha) * std::log1p(alpha) - alpha;
}

double delta_degree_bound(std::int64_t n, double d, double c) {
    const double logn = std::log(static_cast<double>(n));
    if (d >= 0.5 * logn) return d + c * std::sqrt(d * logn);
    const double denom = std::log(logn) - std::log(d);
    if (denom <= 0.0) throw std::invalid_argument("delta_degree_bound: log log N <= log d in the sparse branch");
    return c * logn / denom;
}

double f_d_fn(double d, double alpha) {
    if (!(d > 0.0)) throw std::invalid_argument("f_d_fn: need d > 0");
    if (alpha < 1.0) throw std::invalid_argument("f_d_fn: need alpha >= 1");
    return d * (alpha * std::log(alpha) - alpha + 1.0) + 0.5 * std::log(2.0 * kPi * alpha * d);
}

double beta_l(std::int64_t n, std::int64_t l, double d, double existence_window_c) {
    if (l < 1) throw std::invalid_argument("beta_l: need l >= 1");
    const double window = static_cast<double>(n) / (existence_window_c * std::sqrt(d));
    if (static_cast<double>(l) > window)
        throw std::invalid_argument("beta_l: l outside the existence window N/(C sqrt(d))");
    const double target = std::log(static_cast<double>(n) / static_cast<double>(l));
    if (target < f_d_fn(d, 1.0) - 1e-12)
        throw std::invalid_argument("beta_l: log(N/l) below f_d(1)");
    return bisect_increasing([&](double a) { return f_d_fn(d, a); }, 1.0, 4.0, target, 1e-10);
}

double d_star(std::int64_t n) {
    if (n < 3) throw std::invalid_argument("d_star: need n >= 3");
    const double target = std::log(static_cast<double>(n));
    return bisect_increasing([&](double d) { return f_d_fn(d, 2.0); }, 1e-6, 8.0, target, 1e-10);
}

DegreeModel DegreeModel::build(std::int64_t n, double d, double kappa) {
    DegreeModel m;
    m.n = n;
    m.d = d;
    m.d_star_value = d_star(n);

    auto count_with_beta_at_least = [&](double thr) -> std::int64_t {
        // beta_l >= thr  <=>  log(N/l) >= f_d(thr)  <=>  l <= N exp(-f_d(thr))
        if (thr < 1.0) thr = 1.0;
        const double fd = f_d_fn(d, thr);
        const double lmax = static_cast<double>(n) * std::exp(-fd);
        return lmax < 1.0 ? 0 : static_cast<std::int64_t>(std::floor(lmax));
    };
    m.l0 = count_with_beta_at_least(2.0);
    m.cal_l = count_with_beta_at_least(2.0 + std::pow(std::log(d), -kappa));
    return m;
}

std::optional<double> DegreeModel::beta(std::int64_t l) const {
    try {
        return beta_l(n, l, d);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::vector<Figure1Row> figure1_curves(std::int64_t n, std::int64_t l_max,
                                       const std::vector<double>& b_grid) {
    std::vector<Figure1Row> rows;
    const double logn = std::log(static_cast<double>(n));
    for (std::int64_t l = 1; l <= l_max; ++l) {
        for (double b : b_grid) {
            if (!(b > 0.0)) throw std::invalid_argument("figure1_curves: b grid must be positive");
            const double d = b * logn;
            double beta;
            try {
                beta = beta_l(n, l, d);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (beta < 2.0) continue;  // the figure cuts off at Lambda(2) = 2
            rows.push_back({l, b, beta / std::sqrt(beta - 1.0)});
        }
    }
    return rows;
}

PropD1Report validate_prop_d1(std::int64_t n, double d, std::int64_t trials, double xi,
                              std::uint64_t seed) {
    PropD1Report rep;
    rep.trials = trials;
    if (trials <= 0) return rep;

    const double dstar = d_star(n);
    rep.supercritical = d > dstar;

    std::vector<double> betas;
    std::int64_t l0 = 0;
    if (!rep.supercritical) {
        l0 = DegreeModel::build(n, d, 0.25).l0;
        betas.resize(l0);
        for (std::int64_t l = 1; l <= l0; ++l) betas[l - 1] = beta_l(n, l, d);
    }

    for (std::int64_t t = 0; t < trials; ++t) {
        SparseGraph g = generate_er(n, d, derive_seed(seed, static_cast<std::uint64_t>(t)));
        DegreeOrder ord = degree_order(g);
        if (rep.supercritical) {
            ++rep.pairs_checked;
            rep.pairs_passed += (ord.alphas[0] <= 2.0 + xi / d);
        } else {
            for (std::int64_t l = 1; l <= l0; ++l) {
                const double beta = betas[l - 1];
                const double tol = std::max(1.0, xi / std::log(beta)) / d;
                ++rep.pairs_checked;
                rep.pairs_passed += (std::abs(ord.alphas[l - 1] - beta) <= tol);
            }
        }
    }
    rep.pass_rate = rep.pairs_checked ? static_cast<double>(rep.pairs_passed) /
                                            static_cast<double>(rep.pairs_checked)
                                      : 1.0;
    return rep;
}

} // namespace sparsespec
