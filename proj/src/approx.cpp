#include "sparsespec/approx.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "sparsespec/transfer.hpp"

namespace sparsespec {

namespace {

// Vector of the form Σ_y local[y] 1_y + global_const 1_{[N]}; every w_k and
// the residual live on a small ball plus (for w_0) a global constant.
struct BallVec {
    std::int64_t n = 0;
    std::unordered_map<std::int32_t, double> local;
    double global_const = 0.0;

    void add(std::int32_t y, double val) { local[y] += val; }
    double norm() const {
        double acc = 0.0;
        for (auto [y, val] : local) acc += (val + global_const) * (val + global_const);
        acc += static_cast<double>(n - static_cast<std::int64_t>(local.size())) * global_const *
               global_const;
        return std::sqrt(acc);
    }
    BallVec& operator-=(const BallVec& o) {
        for (auto [y, val] : o.local) local[y] -= val;
        global_const -= o.global_const;
        return *this;
    }
};

std::vector<double> coefficients_u_real(double degree_x, double d, int r) {
    if (!(degree_x > d)) throw std::invalid_argument("coefficients_u: need D_x > d");
    if (r < 0) throw std::invalid_argument("coefficients_u: need r >= 0");
    std::vector<double> u(r + 2);
    u[0] = 1.0;
    u[1] = std::sqrt(degree_x) / std::sqrt(degree_x - d);
    const double ratio = std::sqrt(d / (degree_x - d));
    for (int i = 2; i <= r + 1; ++i) u[i] = u[i - 1] * ratio;
    double norm = 0.0;
    for (int i = 0; i <= r; ++i) norm += u[i] * u[i];  // u_{r+1} outside the normalization
    norm = std::sqrt(norm);
    for (double& x : u) x /= norm;
    return u;
}

struct SphereData {
    VertexLayering lay;
    int r_eff = 0;
    bool shrunk = false;
};

SphereData spheres_for(const SparseGraph& g, std::int32_t x, int r, bool shrink) {
    SphereData sd;
    sd.lay = bfs_layers(g, x, r + 1);
    const int reached = sd.lay.radius();
    if (reached >= r) {
        sd.r_eff = r;
        return sd;
    }
    if (!shrink)
        throw std::runtime_error("build_v: empty sphere at radius " + std::to_string(reached + 1));
    sd.r_eff = reached;
    sd.shrunk = true;
    return sd;
}

} // namespace

int r_x_radius(std::int64_t degree_x, std::int64_t n) {
    if (degree_x <= 1) throw std::invalid_argument("r_x_radius: need D_x >= 2");
    double ratio = std::log(static_cast<double>(n)) / (3.0 * std::log(static_cast<double>(degree_x)));
    return static_cast<int>(std::floor(ratio + 1e-9));
}

std::vector<double> coefficients_u(std::int64_t degree_x, double d, int r) {
    return coefficients_u_real(static_cast<double>(degree_x), d, r);
}

ApproxEigvector build_v(const SparseGraph& g, std::int32_t x, int r, Sign sign,
                        bool shrink_on_empty_sphere) {
    SphereData sd = spheres_for(g, x, r, shrink_on_empty_sphere);
    const int re = sd.r_eff;
    std::vector<double> u = coefficients_u(g.degree(x), g.d_param, re);

    ApproxEigvector out;
    out.center = x;
    out.radius = re;
    out.radius_shrunk = sd.shrunk;
    out.sign = sign;
    out.coefficients = u;
    const double alpha_x = g.alpha(x);
    const double lam = std::sqrt(g.d_param) * lambda_fn(alpha_x);
    out.predicted_eigenvalue = (sign == Sign::plus) ? lam : -lam;

    out.vector = Vec::Zero(g.n);
    for (int i = 0; i <= re; ++i) {
        const double c = (sign == Sign::minus && (i % 2)) ? -u[i] : u[i];
        const double s = c / std::sqrt(static_cast<double>(sd.lay.spheres[i].size()));
        for (std::int32_t y : sd.lay.spheres[i]) out.vector[y] = s;
    }
    return out;
}

namespace {

// Shared assembly of the exact decomposition; the Wigner variant passes
// norm-weighted spheres instead of sphere cardinalities.
ErrorDecomposition decompose_er(const SparseGraph& g, std::int32_t x, int r, Sign sign,
                                bool shrink) {
    SphereData sd = spheres_for(g, x, r, shrink);
    const int re = sd.r_eff;
    const auto& sph = sd.lay.spheres;
    const double d = g.d_param;
    const std::int64_t n = g.n;

    std::vector<double> u = coefficients_u(g.degree(x), d, re);
    std::vector<double> c(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        c[i] = (sign == Sign::minus && (i % 2)) ? -u[i] : u[i];
    const double lam_abs = std::sqrt(d) * lambda_fn(g.alpha(x));
    const double lam = (sign == Sign::plus) ? lam_abs : -lam_abs;

    std::vector<double> ssize(re + 2, 0.0);
    for (int i = 0; i <= sd.lay.radius() && i <= re + 1; ++i)
        ssize[i] = static_cast<double>(sph[i].size());

    // v as a local map
    BallVec v{n, {}, 0.0};
    for (int i = 0; i <= re; ++i)
        for (std::int32_t y : sph[i]) v.add(y, c[i] / std::sqrt(ssize[i]));
    double v_sum = 0.0;
    for (auto [y, val] : v.local) v_sum += val;

    // w_0 = (d/N) v - d <e,v> e
    BallVec w0{n, {}, 0.0};
    w0.global_const = -d * (v_sum / std::sqrt(static_cast<double>(n))) / std::sqrt(static_cast<double>(n));
    for (auto [y, val] : v.local) w0.add(y, (d / static_cast<double>(n)) * val);

    // Boundary counts per sphere index
    std::vector<std::unordered_map<std::int32_t, std::int64_t>> counts(re + 1);
    for (int i = 0; i <= re; ++i) counts[i] = boundary_counts(g, sd.lay, i);

    const int rad = sd.lay.radius();
    BallVec w1{n, {}, 0.0}, w2{n, {}, 0.0}, w3{n, {}, 0.0}, w4{n, {}, 0.0};
    for (int i = 0; i <= re; ++i) {
        const double scale = c[i] / std::sqrt(ssize[i]);
        if (i + 1 <= rad)
            for (std::int32_t y : sph[i + 1])
                w1.add(y, scale * static_cast<double>(counts[i].at(y) - 1));
        for (std::int32_t y : sph[i]) w1.add(y, scale * static_cast<double>(counts[i].at(y)));
        if (i >= 1)
            for (std::int32_t y : sph[i - 1])
                w2.add(y, scale * (static_cast<double>(counts[i].at(y)) - ssize[i] / ssize[i - 1]));
    }

    const double sqrt_d = std::sqrt(d);
    auto ratio = [&](int hi, int lo) { return std::sqrt(ssize[hi] / ssize[lo]); };
    auto add_sphere = [&](BallVec& w, int i, double coeff) {
        if (coeff == 0.0 || i > rad || ssize[i] == 0.0) return;
        const double per = coeff / std::sqrt(ssize[i]);
        for (std::int32_t y : sph[i]) w.add(y, per);
    };

    if (re >= 2) {
        add_sphere(w3, 1, c[2] * (ratio(2, 1) - sqrt_d));
        for (int i = 2; i <= re - 1; ++i)
            add_sphere(w3, i,
                       c[i + 1] * (ratio(i + 1, i) - sqrt_d) + c[i - 1] * (ratio(i, i - 1) - sqrt_d));
        add_sphere(w4, re, c[re - 1] * ratio(re, re - 1) - c[re - 1] * sqrt_d - c[re + 1] * sqrt_d);
        if (re + 1 <= rad) add_sphere(w4, re + 1, c[re] * ratio(re + 1, re));
    } else if (re == 1) {
        // boundary row uses the sqrt(D_x) recursion instead of sqrt(d)
        const double sqrt_dx = std::sqrt(static_cast<double>(g.degree(x)));
        add_sphere(w4, 0, c[1] * ratio(1, 0) - lam * c[0]);
        add_sphere(w4, 1, c[0] * ratio(1, 0) - c[0] * sqrt_dx - c[2] * sqrt_d);
        if (2 <= rad) add_sphere(w4, 2, c[1] * ratio(2, 1));
    } else {  // re == 0: v = 1_x
        add_sphere(w4, 0, -lam * c[0]);
        if (1 <= rad) add_sphere(w4, 1, c[0] * ratio(1, 0));
    }

    // (A̅ - lam) v assembled independently
    BallVec lhs{n, {}, 0.0};
    lhs.global_const = -(d / static_cast<double>(n)) * v_sum;
    for (auto [y, val] : v.local) {
        lhs.add(y, (d / static_cast<double>(n)) * val - lam * val);
        for (std::int32_t z : g.adjacency[y]) lhs.add(z, val);
    }

    ErrorDecomposition res;
    res.total_residual = lhs.norm();
    res.norms = {w0.norm(), w1.norm(), w2.norm(), w3.norm(), w4.norm()};
    lhs -= w0;
    lhs -= w1;
    lhs -= w2;
    lhs -= w3;
    lhs -= w4;
    res.reconstruction_residual = lhs.norm();
    return res;
}

// Weighted spheres for the Wigner construction. Spheres follow the nonzero
// pattern of X; g_i is stored sparsely on S_i.
struct WignerSpheres {
    std::vector<std::vector<std::int32_t>> spheres;
    std::vector<std::unordered_map<std::int32_t, double>> g;  // g_i on S_i
    std::vector<double> norms;                                // ‖g_i‖
    int r_eff = 0;
    bool shrunk = false;
};

WignerSpheres wigner_spheres(const SparseWigner& x_op, std::int32_t x, int r, bool shrink) {
    const SparseGraph& gr = *x_op.graph;
    WignerSpheres ws;
    std::vector<int> dist(gr.n, -1);
    dist[x] = 0;
    ws.spheres.push_back({x});
    ws.g.push_back({{x, 1.0}});
    ws.norms.push_back(1.0);

    for (int i = 0; i < r + 1; ++i) {
        // next sphere via nonzero weights
        std::vector<std::int32_t> next;
        std::unordered_map<std::int32_t, double> gnext;
        for (std::int32_t y : ws.spheres[i]) {
            const auto& nb = gr.adjacency[y];
            const auto& wt = x_op.weights[y];
            const double gy = ws.g[i].at(y);
            for (std::size_t j = 0; j < nb.size(); ++j) {
                if (wt[j] == 0.0) continue;
                const std::int32_t z = nb[j];
                if (dist[z] < 0) {
                    dist[z] = i + 1;
                    next.push_back(z);
                }
                if (dist[z] == i + 1) gnext[z] += wt[j] * gy;
            }
        }
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        double norm = 0.0;
        for (auto [_, val] : gnext) norm += val * val;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;  // g_i vanished by cancellation
        ws.spheres.push_back(std::move(next));
        ws.g.push_back(std::move(gnext));
        ws.norms.push_back(norm);
    }

    const int reached = static_cast<int>(ws.spheres.size()) - 1;
    if (reached >= r) {
        ws.r_eff = r;
    } else if (shrink) {
        ws.r_eff = reached;
        ws.shrunk = true;
    } else {
        throw std::runtime_error("build_v_wigner: zero g before radius " + std::to_string(reached + 1));
    }
    return ws;
}

} // namespace

ErrorDecomposition error_decomposition(const SparseGraph& g, std::int32_t x, int r, Sign sign,
                                       bool shrink_on_empty_sphere) {
    return decompose_er(g, x, r, sign, shrink_on_empty_sphere);
}

ApproxEigvector build_v_wigner(const SparseWigner& x_op, std::int32_t x, int r, Sign sign,
                               double d, bool shrink_on_empty_sphere) {
    WignerSpheres ws = wigner_spheres(x_op, x, r, shrink_on_empty_sphere);
    const int re = ws.r_eff;
    const double alpha_x = generalized_alpha(x_op, d)[x];
    if (!(alpha_x > 1.0)) throw std::invalid_argument("build_v_wigner: need generalized alpha > 1");

    std::vector<double> u = coefficients_u_real(alpha_x * d, d, re);
    ApproxEigvector out;
    out.center = x;
    out.radius = re;
    out.radius_shrunk = ws.shrunk;
    out.sign = sign;
    out.coefficients = u;
    const double lam = std::sqrt(d) * lambda_fn(alpha_x);
    out.predicted_eigenvalue = (sign == Sign::plus) ? lam : -lam;

    out.vector = Vec::Zero(x_op.graph->n);
    for (int i = 0; i <= re; ++i) {
        const double c = (sign == Sign::minus && (i % 2)) ? -u[i] : u[i];
        for (auto [y, val] : ws.g[i]) out.vector[y] += c * val / ws.norms[i];
    }
    return out;
}

ErrorDecomposition wigner_error_terms(const SparseWigner& x_op, std::int32_t x, int r, double d,
                                      Sign sign, bool shrink_on_empty_sphere) {
    const SparseGraph& gr = *x_op.graph;
    const std::int64_t n = gr.n;
    WignerSpheres ws = wigner_spheres(x_op, x, r, shrink_on_empty_sphere);
    const int re = ws.r_eff;
    const int rad = static_cast<int>(ws.spheres.size()) - 1;

    const double alpha_x = generalized_alpha(x_op, d)[x];
    if (!(alpha_x > 1.0)) throw std::invalid_argument("wigner_error_terms: need generalized alpha > 1");
    std::vector<double> u = coefficients_u_real(alpha_x * d, d, re);
    std::vector<double> c(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        c[i] = (sign == Sign::minus && (i % 2)) ? -u[i] : u[i];
    const double lam_abs = std::sqrt(d) * lambda_fn(alpha_x);
    const double lam = (sign == Sign::plus) ? lam_abs : -lam_abs;

    // N_i(y) = <1_y, X g_i> for y near S_i
    auto counts_for = [&](int i) {
        std::unordered_map<std::int32_t, double> out;
        for (auto [y, gy] : ws.g[i]) {
            const auto& nb = gr.adjacency[y];
            const auto& wt = x_op.weights[y];
            for (std::size_t j = 0; j < nb.size(); ++j)
                if (wt[j] != 0.0) out[nb[j]] += wt[j] * gy;
        }
        return out;
    };

    BallVec w1{n, {}, 0.0}, w2{n, {}, 0.0}, w3{n, {}, 0.0}, w4{n, {}, 0.0};
    std::vector<int> dist(n, -1);
    for (int i = 0; i <= rad; ++i)
        for (std::int32_t y : ws.spheres[i]) dist[y] = i;

    for (int i = 0; i <= re; ++i) {
        auto ni = counts_for(i);
        const double inv = c[i] / ws.norms[i];
        for (auto [y, val] : ni) {
            if (dist[y] == i + 1) {
                const double g_next = (i + 1 <= rad && ws.g[i + 1].count(y)) ? ws.g[i + 1].at(y) : 0.0;
                w1.add(y, inv * (val - g_next));
            } else if (dist[y] == i) {
                w1.add(y, inv * val);
            }
        }
        if (i >= 1) {
            const double rr = (ws.norms[i] * ws.norms[i]) / (ws.norms[i - 1] * ws.norms[i - 1]);
            for (auto [y, val] : ni)
                if (dist[y] == i - 1) w2.add(y, inv * val);
            for (auto [y, gy] : ws.g[i - 1]) w2.add(y, -inv * rr * gy);
        }
    }

    const double sqrt_d = std::sqrt(d);
    auto nratio = [&](int hi, int lo) { return ws.norms[hi] / ws.norms[lo]; };
    auto add_ghat = [&](BallVec& w, int i, double coeff) {
        if (coeff == 0.0 || i > rad) return;
        for (auto [y, gy] : ws.g[i]) w.add(y, coeff * gy / ws.norms[i]);
    };

    if (re >= 2) {
        add_ghat(w3, 1, c[2] * (nratio(2, 1) - sqrt_d));
        for (int i = 2; i <= re - 1; ++i)
            add_ghat(w3, i,
                     c[i + 1] * (nratio(i + 1, i) - sqrt_d) + c[i - 1] * (nratio(i, i - 1) - sqrt_d));
        add_ghat(w4, re, c[re - 1] * nratio(re, re - 1) - c[re - 1] * sqrt_d - c[re + 1] * sqrt_d);
        if (re + 1 <= rad) add_ghat(w4, re + 1, c[re] * nratio(re + 1, re));
    } else if (re == 1) {
        const double sqrt_dx = std::sqrt(alpha_x * d);
        add_ghat(w4, 0, c[1] * nratio(1, 0) - lam * c[0]);
        add_ghat(w4, 1, c[0] * nratio(1, 0) - c[0] * sqrt_dx - c[2] * sqrt_d);
        if (2 <= rad) add_ghat(w4, 2, c[1] * nratio(2, 1));
    } else {
        add_ghat(w4, 0, -lam * c[0]);
        if (1 <= rad) add_ghat(w4, 1, c[0] * nratio(1, 0));
    }

    // (X - lam) v assembled independently
    BallVec lhs{n, {}, 0.0};
    for (int i = 0; i <= re; ++i) {
        const double inv = c[i] / ws.norms[i];
        for (auto [y, gy] : ws.g[i]) {
            lhs.add(y, -lam * inv * gy);
            const auto& nb = gr.adjacency[y];
            const auto& wt = x_op.weights[y];
            for (std::size_t j = 0; j < nb.size(); ++j)
                if (wt[j] != 0.0) lhs.add(nb[j], wt[j] * inv * gy);
        }
    }

    ErrorDecomposition res;
    res.total_residual = lhs.norm();
    res.norms = {w1.norm(), w2.norm(), w3.norm(), w4.norm()};
    lhs -= w1;
    lhs -= w2;
    lhs -= w3;
    lhs -= w4;
    res.reconstruction_residual = lhs.norm();
    return res;
}

} // namespace sparsespec
