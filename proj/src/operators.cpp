#include "sparsespec/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sparsespec/pruning.hpp"
#include "sparsespec/rng.hpp"

namespace sparsespec {

CenteredOperator CenteredOperator::plain(const SparseGraph& g) {
    CenteredOperator op;
    op.g_ = &g;
    op.kind_ = OperatorKind::plain;
    return op;
}

CenteredOperator CenteredOperator::centered(const SparseGraph& g) {
    CenteredOperator op;
    op.g_ = &g;
    op.kind_ = OperatorKind::centered;
    return op;
}

void CenteredOperator::apply(const Vec& in, Vec& out) const {
    const std::int64_t n = g_->n;
    if (in.size() != n) throw std::invalid_argument("matvec: dimension mismatch");
    out.resize(n);

    const bool restricted = !v_mask_.empty();
    const bool projected = !z_mask_.empty();
    const double shift = d_param() / static_cast<double>(n);

    // Adjacency part on the (possibly masked) input.
    Vec u;
    const Vec* src = &in;
    if (restricted) {
        u.resize(n);
        for (std::int64_t i = 0; i < n; ++i) u[i] = v_mask_[i] ? in[i] : 0.0;
        src = &u;
    }
    for (std::int64_t x = 0; x < n; ++x) {
        double acc = 0.0;
        for (std::int32_t y : g_->adjacency[x]) acc += (*src)[y];
        out[x] = acc;
    }

    if (kind_ == OperatorKind::centered || kind_ == OperatorKind::pruned_restricted) {
        if (!projected) {
            const double total = src->sum();
            for (std::int64_t x = 0; x < n; ++x) out[x] += shift * ((*src)[x] - total);
        } else {
            double total = 0.0;
            for (std::int64_t x = 0; x < n; ++x)
                if (!z_mask_[x]) total += (*src)[x];
            for (std::int64_t x = 0; x < n; ++x)
                if (!z_mask_[x]) out[x] += shift * ((*src)[x] - total);
        }
    }
    if (restricted)
        for (std::int64_t x = 0; x < n; ++x)
            if (!v_mask_[x]) out[x] = 0.0;
}

double CenteredOperator::entry(std::int32_t x, std::int32_t y) const {
    if (!v_mask_.empty() && (!v_mask_[x] || !v_mask_[y])) return 0.0;
    double a = g_->has_edge(x, y) ? 1.0 : 0.0;
    if (kind_ == OperatorKind::plain) return a;
    const double shift = d_param() / static_cast<double>(g_->n);
    if (kind_ == OperatorKind::centered) return x == y ? a : a - shift;
    // pruned_restricted: shift only when both coordinates are outside Z_tau
    if (x == y) return a;
    if (!z_mask_.empty() && (z_mask_[x] || z_mask_[y])) return a;
    return a - shift;
}

Vec centered_matvec(const CenteredOperator& op, const Vec& v) { return op.apply(v); }

void SparseWigner::apply(const Vec& in, Vec& out) const {
    const std::int64_t n = graph->n;
    if (in.size() != n) throw std::invalid_argument("matvec: dimension mismatch");
    out.resize(n);
    for (std::int64_t x = 0; x < n; ++x) {
        const auto& nb = graph->adjacency[x];
        const auto& wt = weights[x];
        double acc = 0.0;
        for (std::size_t j = 0; j < nb.size(); ++j) acc += wt[j] * in[nb[j]];
        out[x] = acc;
    }
}

double SparseWigner::weight(std::int32_t x, std::int32_t y) const {
    const auto& nb = graph->adjacency[x];
    auto it = std::lower_bound(nb.begin(), nb.end(), y);
    if (it == nb.end() || *it != y) return 0.0;
    return weights[x][static_cast<std::size_t>(it - nb.begin())];
}

SparseWigner make_wigner(const SparseGraph& g, WeightLaw law, std::uint64_t seed, double bound_k) {
    if (law == WeightLaw::custom_bounded && bound_k < 1.0)
        throw std::invalid_argument("make_wigner: custom_bounded needs K >= 1 for unit variance");

    SparseWigner x;
    x.graph = &g;
    x.law = law;
    x.seed = seed;
    switch (law) {
        case WeightLaw::rademacher: x.bound_k = 1.0; break;
        case WeightLaw::uniform_scaled: x.bound_k = std::sqrt(3.0); break;
        case WeightLaw::custom_bounded: x.bound_k = bound_k; break;
    }

    x.weights.resize(g.n);
    for (std::int32_t v = 0; v < g.n; ++v) x.weights[v].resize(g.adjacency[v].size());

    Rng rng(seed);
    auto draw = [&]() -> double {
        switch (law) {
            case WeightLaw::rademacher:
                return (rng.next_u64() & 1) ? 1.0 : -1.0;
            case WeightLaw::uniform_scaled:
                return std::sqrt(3.0) * (2.0 * rng.uniform01() - 1.0);
            case WeightLaw::custom_bounded: {
                // three-point law: ±K w.p. 1/(2K²), 0 otherwise
                const double p = 1.0 / (2.0 * bound_k * bound_k);
                const double u = rng.uniform01();
                if (u < p) return bound_k;
                if (u < 2.0 * p) return -bound_k;
                return 0.0;
            }
        }
        return 0.0;
    };

    // One draw per edge {u,v} with u < v, in sorted edge order.
    for (std::int32_t u = 0; u < g.n; ++u) {
        const auto& nb = g.adjacency[u];
        for (std::size_t j = 0; j < nb.size(); ++j) {
            std::int32_t v = nb[j];
            if (u < v) {
                double w = draw();
                x.weights[u][j] = w;
                const auto& back = g.adjacency[v];
                auto it = std::lower_bound(back.begin(), back.end(), u);
                x.weights[v][static_cast<std::size_t>(it - back.begin())] = w;
            }
        }
    }
    return x;
}

Vec generalized_alpha(const SparseWigner& x_op, double d) {
    if (!(d > 0.0)) throw std::invalid_argument("generalized_alpha: need d > 0");
    const std::int64_t n = x_op.graph->n;
    Vec alpha(n);
    for (std::int64_t v = 0; v < n; ++v) {
        double acc = 0.0;
        for (double w : x_op.weights[v]) acc += w * w;
        alpha[v] = acc / d;
    }
    return alpha;
}

Mat materialize_dense(const LinearOperator& op, std::int64_t cap) {
    const std::int64_t n = op.size();
    if (n > cap) throw std::invalid_argument("materialize_dense: size exceeds cap");
    Mat m(n, n);
    Vec e = Vec::Zero(n), col(n);
    for (std::int64_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        op.apply(e, col);
        m.col(j) = col;
        e[j] = 0.0;
    }
    return m;
}

CenteredOperator make_pruned_restricted_operator(const SparseGraph& pruned_adjacency,
                                                 double d_param,
                                                 const std::vector<char>& z_mask,
                                                 const std::vector<char>& v_mask) {
    CenteredOperator op;
    op.g_ = &pruned_adjacency;
    op.d_override_ = d_param;
    op.kind_ = OperatorKind::pruned_restricted;
    op.z_mask_ = z_mask;
    op.v_mask_ = v_mask;
    return op;
}

void save_wigner(const SparseWigner& x, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const SparseGraph& g = *x.graph;
    f << g.n << ' ' << g.d_param << ' ' << x.seed << '\n';
    char buf[80];
    for (std::int32_t u = 0; u < g.n; ++u) {
        const auto& nb = g.adjacency[u];
        for (std::size_t j = 0; j < nb.size(); ++j)
            if (u < nb[j]) {
                std::snprintf(buf, sizeof buf, "%d %d %.17g\n", u, nb[j], x.weights[u][j]);
                f << buf;
            }
    }
}

SparseWigner load_wigner(const SparseGraph& g, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::int64_t n;
    double d;
    std::uint64_t seed;
    if (!(f >> n >> d >> seed)) throw std::runtime_error("weighted edge list: bad header");
    if (n != g.n) throw std::runtime_error("weighted edge list: vertex count mismatch");

    SparseWigner x;
    x.graph = &g;
    x.law = WeightLaw::custom_bounded;
    x.seed = seed;
    x.weights.resize(g.n);
    for (std::int32_t v = 0; v < g.n; ++v) x.weights[v].resize(g.adjacency[v].size(), 0.0);

    std::int64_t u, v;
    double w;
    double bound = 0.0;
    while (f >> u >> v >> w) {
        const auto set = [&](std::int32_t a, std::int32_t b) {
            const auto& nb = g.adjacency[a];
            auto it = std::lower_bound(nb.begin(), nb.end(), b);
            if (it == nb.end() || *it != b)
                throw std::runtime_error("weighted edge list: edge missing from the carrier graph");
            x.weights[a][static_cast<std::size_t>(it - nb.begin())] = w;
        };
        set(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v));
        set(static_cast<std::int32_t>(v), static_cast<std::int32_t>(u));
        bound = std::max(bound, std::abs(w));
    }
    x.bound_k = bound;
    return x;
}

CenteredOperator pruned_restricted(const CenteredOperator& base, const PrunedGraph& pruned,
                                   std::int64_t l, const DegreeOrder& order) {
    if (l < 1) throw std::invalid_argument("pruned_restricted: need l >= 1");
    if (pruned.base != &base.graph())
        throw std::invalid_argument("pruned_restricted: pruned graph built from a different base");

    const std::int64_t n = base.size();
    std::vector<char> v_mask(n, 1);
    for (std::int64_t k = 0; k + 1 < l && k < n; ++k) v_mask[order.sigma[k]] = 0;
    return make_pruned_restricted_operator(pruned.pruned, base.d_param(), pruned.z_mask(), v_mask);
}

} // namespace sparsespec
