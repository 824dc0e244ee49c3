#include "sparsespec/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <stdexcept>

#include "sparsespec/degree_stats.hpp"

namespace sparsespec {

double r_tau(double d, double tau) {
    if (!(d > 1.0) || !(tau > 1.0)) throw std::invalid_argument("r_tau: need d > 1 and tau > 1");
    return d / (2.0 * std::log(d)) * h_fn((tau - 1.0) / 2.0) - 2.0;
}

namespace {

int r_x_of(std::int64_t n, std::int64_t deg) {
    if (deg <= 1) return 0;
    // tiny nudge so exact integer ratios are not floored down by FP error
    double ratio = std::log(static_cast<double>(n)) / (3.0 * std::log(static_cast<double>(deg)));
    return static_cast<int>(std::floor(ratio + 1e-9));
}

// Removes an edge from sorted adjacency lists.
void drop_edge(std::vector<std::vector<std::int32_t>>& adj, std::int32_t u, std::int32_t v) {
    auto erase_from = [&](std::int32_t a, std::int32_t b) {
        auto& nb = adj[a];
        auto it = std::lower_bound(nb.begin(), nb.end(), b);
        if (it != nb.end() && *it == b) nb.erase(it);
    };
    erase_from(u, v);
    erase_from(v, u);
}

} // namespace

std::int64_t PrunedGraph::removed_degree(std::int32_t x) const {
    std::int64_t c = 0;
    for (const Edge& e : h1) c += (e.u == x) + (e.v == x);
    for (const Edge& e : h2) c += (e.u == x) + (e.v == x);
    return c;
}

std::int64_t PrunedGraph::max_removed_degree() const {
    std::vector<std::int64_t> deg(base->n, 0);
    for (const Edge& e : h1) { ++deg[e.u]; ++deg[e.v]; }
    for (const Edge& e : h2) { ++deg[e.u]; ++deg[e.v]; }
    std::int64_t mx = 0;
    for (auto v : deg) mx = std::max(mx, v);
    return mx;
}

std::vector<char> PrunedGraph::z_mask() const {
    std::vector<char> mask(base->n, 0);
    for (auto [x, r] : radii) {
        if (r - 2 < 0) continue;
        VertexLayering lay = bfs_layers(pruned, x, r - 2);
        for (const auto& sphere : lay.spheres)
            for (std::int32_t y : sphere) mask[y] = 1;
    }
    return mask;
}

PrunedGraph prune(const SparseGraph& g, double tau, const PruneOptions& opts) {
    if (!(tau > 1.0)) throw std::invalid_argument("prune: need tau > 1");

    PrunedGraph out;
    out.base = &g;
    out.tau = tau;
    out.r_tau = (g.d_param > 1.0) ? r_tau(g.d_param, tau) : -2.0;

    const double thr = tau * g.d_param;
    for (std::int32_t x = 0; x < g.n; ++x)
        if (static_cast<double>(g.degree(x)) >= thr) out.v_tau.push_back(x);

    for (std::int32_t x : out.v_tau) {
        int rx = r_x_of(g.n, g.degree(x));
        int r = opts.radius_override
                    ? *opts.radius_override
                    : static_cast<int>(std::floor(std::min(rx / 4.0, std::max(0.0, out.r_tau) / 2.0)));
        out.radii[x] = std::max(0, r);
    }

    // Stage 1: for x in v_tau and y ~ x, explore T_y = vertices reachable from
    // y within depth r_x without the edge {x,y}; cut {x,y} if x in T_y or the
    // induced subgraph on T_y has a cycle.
    std::set<Edge> h1set;
    std::vector<int> mark(g.n, -1);
    int stamp = 0;
    for (std::int32_t x : out.v_tau) {
        const int depth = opts.stage1_depth_override ? *opts.stage1_depth_override
                                                     : r_x_of(g.n, g.degree(x));
        for (std::int32_t y : g.adjacency[x]) {
            ++stamp;
            std::vector<std::int32_t> t_y{y};
            mark[y] = stamp;
            std::vector<std::int32_t> frontier{y};
            bool x_in_ty = false;
            for (int lev = 0; lev < depth && !frontier.empty(); ++lev) {
                std::vector<std::int32_t> next;
                for (std::int32_t z : frontier)
                    for (std::int32_t w : g.adjacency[z]) {
                        if (z == y && w == x) continue;  // excluded edge
                        if (z == x && w == y) continue;
                        if (w == x) x_in_ty = true;
                        if (mark[w] != stamp && w != x) {
                            mark[w] = stamp;
                            t_y.push_back(w);
                            next.push_back(w);
                        }
                    }
                frontier = std::move(next);
            }
            bool cut = x_in_ty;
            if (!cut) {
                // |E(G|_{T_y})| vs |T_y| - 1, counting the excluded edge out
                std::int64_t twice = 0;
                for (std::int32_t z : t_y)
                    for (std::int32_t w : g.adjacency[z])
                        if (mark[w] == stamp && !(z == y && w == x) && !(z == x && w == y)) ++twice;
                cut = (twice / 2) > static_cast<std::int64_t>(t_y.size()) - 1;
            }
            if (cut) h1set.insert(Edge{std::min(x, y), std::max(x, y)});
        }
    }
    out.h1.assign(h1set.begin(), h1set.end());

    SparseGraph g1 = g;  // G \ H1
    for (const Edge& e : out.h1) drop_edge(g1.adjacency, e.u, e.v);

    // Stage 2: for x in v_tau, any other v_tau vertex within distance
    // 2 r_{x,tau} in G\H1 sits in a unique branch; cut that branch's root edge.
    std::vector<char> in_v(g.n, 0);
    for (std::int32_t x : out.v_tau) in_v[x] = 1;
    std::set<Edge> h2set;
    for (std::int32_t x : out.v_tau) {
        const int reach = 2 * out.radii[x];
        if (reach <= 0) continue;
        ++stamp;
        std::vector<std::int32_t> branch(g.n, -1);
        mark[x] = stamp;
        std::vector<std::int32_t> frontier;
        for (std::int32_t z : g1.adjacency[x]) {
            mark[z] = stamp;
            branch[z] = z;
            frontier.push_back(z);
        }
        for (int lev = 1; lev < reach && !frontier.empty(); ++lev) {
            std::vector<std::int32_t> next;
            for (std::int32_t z : frontier)
                for (std::int32_t w : g1.adjacency[z])
                    if (mark[w] != stamp) {
                        mark[w] = stamp;
                        branch[w] = branch[z];
                        next.push_back(w);
                    }
            frontier = std::move(next);
        }
        for (std::int32_t y = 0; y < g.n; ++y)
            if (mark[y] == stamp && y != x && in_v[y] && branch[y] >= 0)
                h2set.insert(Edge{std::min(x, branch[y]), std::max(x, branch[y])});
    }
    out.h2.assign(h2set.begin(), h2set.end());

    out.pruned = g1;
    for (const Edge& e : out.h2) drop_edge(out.pruned.adjacency, e.u, e.v);
    return out;
}

PrunedProperties verify_pruned(const PrunedGraph& p) {
    PrunedProperties res;
    const SparseGraph& g = *p.base;
    const SparseGraph& gt = p.pruned;

    // (iii) every removed edge has an endpoint in v_tau
    std::vector<char> in_v(g.n, 0);
    for (std::int32_t x : p.v_tau) in_v[x] = 1;
    for (const Edge& e : p.h1)
        if (!in_v[e.u] && !in_v[e.v]) {
            res.removals_touch_v_tau = false;
            res.detail = "h1 edge not incident to v_tau";
        }
    for (const Edge& e : p.h2)
        if (!in_v[e.u] && !in_v[e.v]) {
            res.removals_touch_v_tau = false;
            res.detail = "h2 edge not incident to v_tau";
        }

    int max_radius = 0;
    for (auto [x, r] : p.radii) max_radius = std::max(max_radius, r);

    for (std::int32_t x : p.v_tau) {
        const int rx = p.radii.at(x);

        // (i) distance in G_tau from x to any other v_tau vertex
        {
            std::vector<int> dist(g.n, -1);
            dist[x] = 0;
            std::queue<std::int32_t> q;
            q.push(x);
            const int limit = rx + max_radius;  // any closer pair violates (i)
            while (!q.empty()) {
                std::int32_t z = q.front();
                q.pop();
                if (dist[z] >= limit) continue;
                for (std::int32_t w : gt.adjacency[z])
                    if (dist[w] < 0) {
                        dist[w] = dist[z] + 1;
                        q.push(w);
                    }
            }
            for (std::int32_t y : p.v_tau)
                if (y != x && dist[y] >= 0 && dist[y] < rx + p.radii.at(y) + 1) {
                    res.paths_separated = false;
                    res.detail = "v_tau pair closer than r_x,tau + r_y,tau + 1";
                }
        }

        // (ii) induced ball in G_tau is a tree
        if (cycle_excess(gt, x, rx) != 0) {
            res.balls_are_trees = false;
            res.detail = "pruned ball around " + std::to_string(x) + " has a cycle";
        }

        // (iv) S_i^{G_tau}(x) ⊂ S_i^G(x), and (v) sphere-local adjacency agrees
        VertexLayering lt = bfs_layers(gt, x, rx);
        VertexLayering lg = bfs_layers(g, x, rx);
        for (int i = 1; i <= std::min(lt.radius(), rx); ++i) {
            std::vector<char> in_g(g.n, 0);
            if (i <= lg.radius())
                for (std::int32_t y : lg.spheres[i]) in_g[y] = 1;
            for (std::int32_t y : lt.spheres[i])
                if (!in_g[y]) {
                    res.spheres_nested = false;
                    res.detail = "pruned sphere escapes the base sphere";
                }
        }
        {
            std::vector<int> dist_t(g.n, -1), dist_g(g.n, -1);
            for (int i = 0; i <= lt.radius(); ++i)
                for (std::int32_t y : lt.spheres[i]) dist_t[y] = i;
            for (int i = 0; i <= lg.radius(); ++i)
                for (std::int32_t y : lg.spheres[i]) dist_g[y] = i;
            for (int i = 0; i <= lt.radius(); ++i)
                for (std::int32_t y : lt.spheres[i]) {
                    if (i == 0) continue;  // y != x
                    for (int s = 1; s <= rx; ++s) {
                        // S_1(y) ∩ S_s(x): compare between G_tau and G
                        std::int64_t ct = 0, cg = 0;
                        for (std::int32_t w : gt.adjacency[y]) ct += (dist_t[w] == s);
                        for (std::int32_t w : g.adjacency[y]) cg += (dist_g[w] == s);
                        if (ct != cg) {
                            res.local_spheres_agree = false;
                            res.detail = "S_1(y) ∩ S_i(x) differs between G and G_tau";
                        }
                        // exact set equality, not just counts
                        if (ct == cg && ct > 0) {
                            for (std::int32_t w : gt.adjacency[y])
                                if (dist_t[w] == s && dist_g[w] != s) {
                                    res.local_spheres_agree = false;
                                    res.detail = "sphere membership shifted between G and G_tau";
                                }
                        }
                    }
                }
        }

        // (vii) worst ratio |S_i^G \ S_i^{G_tau}| / (D_x^{G\G_tau} d^{i-2} Δ)
        const std::int64_t removed_deg = p.removed_degree(x);
        if (removed_deg > 0) {
            const double delta = delta_degree_bound(g.n, g.d_param, 1.0);
            for (int i = 2; i <= rx && i <= lg.radius(); ++i) {
                std::vector<char> in_t(g.n, 0);
                if (i <= lt.radius())
                    for (std::int32_t y : lt.spheres[i]) in_t[y] = 1;
                std::int64_t lost = 0;
                for (std::int32_t y : lg.spheres[i]) lost += !in_t[y];
                const double denom = static_cast<double>(removed_deg) *
                                     std::pow(g.d_param, i - 2) * delta;
                if (denom > 0.0)
                    res.worst_sphere_loss_ratio =
                        std::max(res.worst_sphere_loss_ratio, static_cast<double>(lost) / denom);
            }
        }
    }

    res.max_removed_degree = p.max_removed_degree();
    const double hval = h_fn((p.tau - 1.0) / 2.0);
    res.removed_degree_bound =
        1.0 + std::log(static_cast<double>(g.n)) / (hval * g.d_param);
    return res;
}

void save_pruned(const PrunedGraph& p, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_edge_list(*p.base, f);
    f << "# removed stage u v\n";
    for (const Edge& e : p.h1) f << "1 " << e.u << ' ' << e.v << '\n';
    for (const Edge& e : p.h2) f << "2 " << e.u << ' ' << e.v << '\n';
}

} // namespace sparsespec
