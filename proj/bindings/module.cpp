// Python bindings for the core operations.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparsespec/approx.hpp"
#include "sparsespec/degree_stats.hpp"
#include "sparsespec/experiments.hpp"
#include "sparsespec/io.hpp"
#include "sparsespec/nonbacktracking.hpp"
#include "sparsespec/pruning.hpp"
#include "sparsespec/spectra.hpp"
#include "sparsespec/transfer.hpp"

namespace py = pybind11;
using namespace sparsespec;

namespace {

WeightLaw law_from_string(const std::string& name) {
    if (name == "rademacher") return WeightLaw::rademacher;
    if (name == "uniform-scaled") return WeightLaw::uniform_scaled;
    if (name == "custom-bounded") return WeightLaw::custom_bounded;
    throw std::invalid_argument("unknown weight law: " + name);
}

Side side_from_string(const std::string& name) {
    if (name == "top") return Side::top;
    if (name == "bottom") return Side::bottom;
    if (name == "both") return Side::both;
    throw std::invalid_argument("unknown side: " + name);
}

TridiagonalForm form_from_arrays(const std::vector<double>& diag, const std::vector<double>& offdiag) {
    if (diag.size() != offdiag.size() + 1)
        throw std::invalid_argument("need len(diag) == len(offdiag) + 1");
    TridiagonalForm form;
    form.diag = diag;
    form.offdiag = offdiag;
    form.m = static_cast<int>(offdiag.size());
    form.basis_norms.assign(diag.size(), 1.0);
    return form;
}

py::dict spectrum_to_dict(const SpectrumResult& s, bool with_vectors) {
    py::dict out;
    out["eigenvalues"] = s.eigenvalues;
    out["residuals"] = s.residuals;
    out["converged"] = std::vector<bool>(s.converged.begin(), s.converged.end());
    if (with_vectors) {
        py::list vecs;
        for (const auto& v : s.eigenvectors) vecs.append(v);
        out["eigenvectors"] = vecs;
    }
    return out;
}

py::dict decomposition_to_dict(const ErrorDecomposition& dec) {
    py::dict out;
    out["w_norms"] = dec.norms;
    out["reconstruction_residual"] = dec.reconstruction_residual;
    out["total_residual"] = dec.total_residual;
    return out;
}

py::dict report_to_dict(const CorrespondenceReport& rep) {
    py::dict out;
    py::list rows;
    for (const auto& r : rep.rows) {
        py::dict row;
        row["trial"] = r.trial;
        row["l"] = r.l;
        row["alpha_sigma_l"] = r.alpha_sigma_l;
        row["lambda_top_scaled"] = r.lambda_top_scaled;
        row["lambda_bottom_scaled"] = r.lambda_bottom_scaled;
        row["lambda_prediction"] = r.lambda_prediction;
        row["error_l"] = r.error_l;
        row["bound_l"] = r.bound_l;
        rows.append(row);
    }
    out["rows"] = rows;
    py::list trials;
    for (const auto& t : rep.trials) {
        py::dict row;
        row["trial"] = t.trial;
        row["L"] = t.L;
        row["max_error"] = t.max_error;
        row["edge_ok"] = t.edge_ok;
        row["edge_value"] = t.edge_value;
        row["edge_bound"] = t.edge_bound;
        row["skipped"] = t.skipped;
        trials.append(row);
    }
    out["trials"] = trials;
    out["median_max_error"] = rep.median_max_error;
    out["trials_with_outliers"] = rep.trials_with_outliers;
    out["edge_pass_count"] = rep.edge_pass_count;
    out["skip_count"] = rep.skip_count;
    return out;
}

ExperimentConfig config_from_kwargs(std::int64_t n, double d, double kappa, double theta,
                                    std::int64_t trials, std::uint64_t seed, double tol,
                                    int max_iter, int threads) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.kappa = kappa;
    cfg.theta = theta;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.solver_tol = tol;
    cfg.solver_max_iter = max_iter;
    cfg.threads = threads;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "extremal spectra of sparse random graphs";

    py::class_<SparseGraph>(m, "SparseGraph")
        .def_readonly("n", &SparseGraph::n)
        .def_readonly("d_param", &SparseGraph::d_param)
        .def_readonly("seed", &SparseGraph::seed)
        .def("degree", &SparseGraph::degree)
        .def("alpha", &SparseGraph::alpha)
        .def("edge_count", &SparseGraph::edge_count)
        .def("has_edge", &SparseGraph::has_edge)
        .def("neighbors", [](const SparseGraph& g, std::int32_t x) { return g.adjacency.at(x); });

    m.def("generate_er", &generate_er, py::arg("n"), py::arg("d"), py::arg("seed"));
    m.def("graph_from_edges", &graph_from_edges, py::arg("n"), py::arg("edges"),
          py::arg("d_param") = 1.0, py::arg("seed") = 0);
    m.def("regular_tree", &regular_tree, py::arg("root_children"), py::arg("children"),
          py::arg("depth"), py::arg("d_param"));
    m.def("save_edge_list", &save_edge_list);
    m.def("load_edge_list", &load_edge_list);

    py::class_<VertexLayering>(m, "VertexLayering")
        .def_readonly("center", &VertexLayering::center)
        .def_readonly("spheres", &VertexLayering::spheres)
        .def_readonly("ball_edge_count", &VertexLayering::ball_edge_count)
        .def("ball_size", &VertexLayering::ball_size)
        .def("radius", &VertexLayering::radius);

    m.def("bfs_layers", &bfs_layers, py::arg("g"), py::arg("x"), py::arg("r"));
    m.def("cycle_excess", &cycle_excess, py::arg("g"), py::arg("x"), py::arg("r"));
    m.def("degree_order", [](const SparseGraph& g) {
        DegreeOrder ord = degree_order(g);
        return py::make_tuple(ord.sigma, ord.alphas);
    });
    m.def("boundary_counts", [](const SparseGraph& g, const VertexLayering& lay, int i) {
        return boundary_counts(g, lay, i);
    });
    m.def(
        "threshold_indices",
        [](const SparseGraph& g, double kappa, double tau_star_c) {
            DegreeOrder ord = degree_order(g);
            ThresholdIndices t = threshold_indices(ord, g.d_param, kappa, g.n, tau_star_c);
            py::dict out;
            out["L"] = t.L;
            out["L_geq"] = t.L_geq;
            out["L_leq"] = t.L_leq;
            out["tau_star"] = t.tau_star;
            return out;
        },
        py::arg("g"), py::arg("kappa"), py::arg("tau_star_c") = 1.0);

    // operators
    m.def("centered_matvec", [](const SparseGraph& g, const Vec& v) {
        return CenteredOperator::centered(g).apply(v);
    });
    m.def("plain_matvec", [](const SparseGraph& g, const Vec& v) {
        return CenteredOperator::plain(g).apply(v);
    });
    m.def(
        "materialize_dense",
        [](const SparseGraph& g, bool centered, std::int64_t cap) {
            auto op = centered ? CenteredOperator::centered(g) : CenteredOperator::plain(g);
            return materialize_dense(op, cap);
        },
        py::arg("g"), py::arg("centered") = true, py::arg("cap") = 2000);

    py::class_<SparseWigner>(m, "SparseWigner")
        .def_readonly("seed", &SparseWigner::seed)
        .def_readonly("bound_k", &SparseWigner::bound_k)
        .def("matvec", [](const SparseWigner& x, const Vec& v) { return x.apply(v); })
        .def("weight", &SparseWigner::weight);

    m.def(
        "make_wigner",
        [](const SparseGraph& g, const std::string& law, std::uint64_t seed, double bound_k) {
            return make_wigner(g, law_from_string(law), seed, bound_k);
        },
        py::arg("g"), py::arg("law") = "rademacher", py::arg("seed") = 1, py::arg("bound_k") = 1.0,
        py::keep_alive<0, 1>());
    m.def("generalized_alpha", &generalized_alpha, py::arg("x"), py::arg("d"));
    m.def(
        "wigner_dense",
        [](const SparseWigner& x, std::int64_t cap) { return materialize_dense(x, cap); },
        py::arg("x"), py::arg("cap") = 2000);

    // spectra
    m.def(
        "full_spectrum",
        [](const SparseGraph& g, bool centered, bool vectors, std::int64_t cap) {
            auto op = centered ? CenteredOperator::centered(g) : CenteredOperator::plain(g);
            return spectrum_to_dict(full_spectrum(op, vectors, cap), vectors);
        },
        py::arg("g"), py::arg("centered") = true, py::arg("want_vectors") = false,
        py::arg("cap") = 2000);
    m.def(
        "extremal_eigs",
        [](const SparseGraph& g, int k, const std::string& side, bool centered, double tol,
           int max_iter, std::uint64_t seed) {
            auto op = centered ? CenteredOperator::centered(g) : CenteredOperator::plain(g);
            return spectrum_to_dict(extremal_eigs(op, k, side_from_string(side), tol, max_iter, seed),
                                    false);
        },
        py::arg("g"), py::arg("k"), py::arg("side") = "both", py::arg("centered") = true,
        py::arg("tol") = 1e-10, py::arg("max_iter") = 400, py::arg("seed") = 1);
    m.def(
        "wigner_extremal_eigs",
        [](const SparseWigner& x, int k, const std::string& side, double tol, int max_iter,
           std::uint64_t seed) {
            return spectrum_to_dict(extremal_eigs(x, k, side_from_string(side), tol, max_iter, seed),
                                    false);
        },
        py::arg("x"), py::arg("k"), py::arg("side") = "both", py::arg("tol") = 1e-10,
        py::arg("max_iter") = 400, py::arg("seed") = 1);

    py::class_<TridiagonalForm>(m, "TridiagonalForm")
        .def_readonly("diag", &TridiagonalForm::diag)
        .def_readonly("offdiag", &TridiagonalForm::offdiag)
        .def_readonly("basis_norms", &TridiagonalForm::basis_norms)
        .def_readonly("m", &TridiagonalForm::m)
        .def_readonly("center", &TridiagonalForm::center)
        .def_readonly("exhausted", &TridiagonalForm::exhausted)
        .def("dense", &TridiagonalForm::dense);

    m.def(
        "tridiagonalize",
        [](const SparseGraph& g, std::int32_t x, int r, bool centered, bool keep_basis) {
            auto op = centered ? CenteredOperator::centered(g) : CenteredOperator::plain(g);
            return tridiagonalize(op, x, r, keep_basis);
        },
        py::arg("g"), py::arg("x"), py::arg("r"), py::arg("centered") = false,
        py::arg("keep_basis") = false);
    m.def("bipartite_diag_check", &bipartite_diag_check);

    // approximate eigenvectors
    m.def("r_x_radius", &r_x_radius, py::arg("degree_x"), py::arg("n"));
    m.def("coefficients_u", &coefficients_u, py::arg("degree_x"), py::arg("d"), py::arg("r"));
    m.def(
        "build_v",
        [](const SparseGraph& g, std::int32_t x, int r, bool minus, bool shrink) {
            ApproxEigvector v = build_v(g, x, r, minus ? Sign::minus : Sign::plus, shrink);
            py::dict out;
            out["vector"] = v.vector;
            out["coefficients"] = v.coefficients;
            out["radius"] = v.radius;
            out["radius_shrunk"] = v.radius_shrunk;
            out["predicted_eigenvalue"] = v.predicted_eigenvalue;
            return out;
        },
        py::arg("g"), py::arg("x"), py::arg("r"), py::arg("minus") = false,
        py::arg("shrink_on_empty_sphere") = true);
    m.def(
        "error_decomposition",
        [](const SparseGraph& g, std::int32_t x, int r, bool minus) {
            return decomposition_to_dict(
                error_decomposition(g, x, r, minus ? Sign::minus : Sign::plus));
        },
        py::arg("g"), py::arg("x"), py::arg("r"), py::arg("minus") = false);
    m.def(
        "build_v_wigner",
        [](const SparseWigner& xop, std::int32_t x, int r, double d, bool minus) {
            ApproxEigvector v = build_v_wigner(xop, x, r, minus ? Sign::minus : Sign::plus, d);
            py::dict out;
            out["vector"] = v.vector;
            out["coefficients"] = v.coefficients;
            out["radius"] = v.radius;
            out["predicted_eigenvalue"] = v.predicted_eigenvalue;
            return out;
        },
        py::arg("x_op"), py::arg("x"), py::arg("r"), py::arg("d"), py::arg("minus") = false);
    m.def(
        "wigner_error_terms",
        [](const SparseWigner& xop, std::int32_t x, int r, double d, bool minus) {
            return decomposition_to_dict(
                wigner_error_terms(xop, x, r, d, minus ? Sign::minus : Sign::plus));
        },
        py::arg("x_op"), py::arg("x"), py::arg("r"), py::arg("d"), py::arg("minus") = false);

    // pruning
    py::class_<PrunedGraph>(m, "PrunedGraph")
        .def_readonly("tau", &PrunedGraph::tau)
        .def_readonly("v_tau", &PrunedGraph::v_tau)
        .def_readonly("r_tau", &PrunedGraph::r_tau)
        .def_property_readonly("h1",
                               [](const PrunedGraph& p) {
                                   std::vector<std::pair<std::int32_t, std::int32_t>> out;
                                   for (const Edge& e : p.h1) out.emplace_back(e.u, e.v);
                                   return out;
                               })
        .def_property_readonly("h2",
                               [](const PrunedGraph& p) {
                                   std::vector<std::pair<std::int32_t, std::int32_t>> out;
                                   for (const Edge& e : p.h2) out.emplace_back(e.u, e.v);
                                   return out;
                               })
        .def_property_readonly("pruned_graph", [](const PrunedGraph& p) { return p.pruned; })
        .def_property_readonly("radii",
                               [](const PrunedGraph& p) {
                                   py::dict out;
                                   for (auto [x, r] : p.radii) out[py::int_(x)] = r;
                                   return out;
                               })
        .def("max_removed_degree", &PrunedGraph::max_removed_degree);

    m.def("r_tau", &r_tau, py::arg("d"), py::arg("tau"));
    m.def(
        "prune",
        [](const SparseGraph& g, double tau, std::optional<int> radius_override,
           std::optional<int> stage1_depth_override) {
            PruneOptions opts;
            opts.radius_override = radius_override;
            opts.stage1_depth_override = stage1_depth_override;
            return prune(g, tau, opts);
        },
        py::arg("g"), py::arg("tau"), py::arg("radius_override") = std::nullopt,
        py::arg("stage1_depth_override") = std::nullopt, py::keep_alive<0, 1>());
    m.def("verify_pruned", [](const PrunedGraph& p) {
        PrunedProperties props = verify_pruned(p);
        py::dict out;
        out["paths_separated"] = props.paths_separated;
        out["balls_are_trees"] = props.balls_are_trees;
        out["removals_touch_v_tau"] = props.removals_touch_v_tau;
        out["spheres_nested"] = props.spheres_nested;
        out["local_spheres_agree"] = props.local_spheres_agree;
        out["max_removed_degree"] = props.max_removed_degree;
        out["removed_degree_bound"] = props.removed_degree_bound;
        out["worst_sphere_loss_ratio"] = props.worst_sphere_loss_ratio;
        out["all_exact_ok"] = props.all_exact_ok();
        out["detail"] = props.detail;
        return out;
    });

    // nonbacktracking
    m.def(
        "nbt_matvec",
        [](const SparseGraph& g, const Vec& w) {
            CenteredOperator op = CenteredOperator::centered(g);
            NbtOperator nbt(op);
            return nbt.apply(w);
        },
        py::arg("g"), py::arg("w"));
    m.def(
        "nbt_spectral_radius",
        [](const SparseGraph& g, int iters, std::uint64_t seed, int stride) {
            CenteredOperator op = CenteredOperator::centered(g);
            NbtOperator nbt(op);
            return spectral_radius_nbt(nbt, iters, seed, stride).estimate;
        },
        py::arg("g"), py::arg("iters") = 200, py::arg("seed") = 1, py::arg("stride") = 1);
    m.def(
        "ihara_bass_pair",
        [](const SparseGraph& g, double t) {
            CenteredOperator op = CenteredOperator::centered(g);
            IharaBassPair p = ihara_bass_pair(op, t);
            py::dict out;
            out["t"] = p.t;
            out["det_value"] = p.det_value;
            out["min_eig"] = p.min_eig;
            return out;
        },
        py::arg("g"), py::arg("t"));
    m.def(
        "ihara_bass_roots",
        [](const SparseGraph& g, double t_min, double t_max, int grid) {
            CenteredOperator op = CenteredOperator::centered(g);
            return ihara_bass_roots(op, t_min, t_max, grid);
        },
        py::arg("g"), py::arg("t_min"), py::arg("t_max"), py::arg("grid") = 2000);
    m.def(
        "quadratic_form_check",
        [](const SparseGraph& g, double envelope_c, double tol, int max_iter, std::uint64_t seed) {
            CenteredOperator op = CenteredOperator::centered(g);
            QuadraticFormCheck q = quadratic_form_check(op, g.d_param, envelope_c, tol, max_iter, seed);
            py::dict out;
            out["lam_min_plus"] = q.lam_min_plus;
            out["lam_min_minus"] = q.lam_min_minus;
            out["bound"] = q.bound;
            out["norm_bound_rhs"] = q.norm_bound_rhs;
            return out;
        },
        py::arg("g"), py::arg("envelope_c") = 10.0, py::arg("tol") = 1e-8, py::arg("max_iter") = 600,
        py::arg("seed") = 1);

    // transfer-matrix analytics
    m.def("lambda_fn", &lambda_fn);
    m.def("alpha_fn", &alpha_fn);
    m.def("gamma_fn", &gamma_fn);
    m.def(
        "ideal_m",
        [](double alpha, int r) {
            IdealTridiagonal ideal = ideal_m(alpha, r);
            return py::make_tuple(ideal.form.diag, ideal.form.offdiag);
        },
        py::arg("alpha"), py::arg("r"));
    m.def("ideal_eigvec_u", &ideal_eigvec_u, py::arg("alpha"), py::arg("r"));
    m.def("transfer_step", &transfer_step, py::arg("eta"), py::arg("pair"));
    m.def("delta_fn", &delta_fn, py::arg("m00"), py::arg("m01"), py::arg("m11"), py::arg("m12"),
          py::arg("eta"));
    m.def(
        "gamma_geq_fn",
        [](double m00, double m01, double m11, double m12, double eta, double eps) {
            GammaGeqResult r = gamma_geq_fn(m00, m01, m11, m12, eta, eps);
            return py::make_tuple(r.value, r.condition_ok);
        },
        py::arg("m00"), py::arg("m01"), py::arg("m11"), py::arg("m12"), py::arg("eta"),
        py::arg("eps"));
    m.def(
        "delocalization_bound",
        [](const std::vector<double>& diag, const std::vector<double>& offdiag, double eta) {
            DelocalizationBound b = delocalization_bound(form_from_arrays(diag, offdiag), eta);
            py::dict out;
            out["bound"] = b.bound;
            out["eps"] = b.eps;
            out["delta"] = b.delta;
            out["gamma"] = b.gamma;
            out["gamma_geq"] = b.gamma_geq;
            out["condition_ok"] = b.condition_ok;
            return out;
        },
        py::arg("diag"), py::arg("offdiag"), py::arg("eta"));
    m.def(
        "section7_params",
        [](double mu, double d, double tau, double zeta, std::int64_t n) {
            Section7Params p = section7_params(mu, d, tau, zeta, n);
            return py::make_tuple(p.omega, p.r_tau_omega);
        },
        py::arg("mu"), py::arg("d"), py::arg("tau"), py::arg("zeta"), py::arg("n"));
    m.def("in_cal_w", &in_cal_w, py::arg("alpha_x"), py::arg("tau"), py::arg("mu"), py::arg("zeta"),
          py::arg("d"));
    m.def("cal_e", &cal_e, py::arg("tau"), py::arg("k"), py::arg("d"), py::arg("n"));
    m.def(
        "tridiag_comparison",
        [](const SparseGraph& g, const PrunedGraph& p, std::int32_t x, int r, double d,
           bool use_centered) {
            TridiagComparison cmp = tridiag_comparison(g, p, x, r, d, use_centered);
            py::dict out;
            out["op_norm_diff"] = cmp.op_norm_diff;
            out["cal_e_value"] = cmp.cal_e_value;
            out["g_closeness"] = cmp.g_closeness;
            return out;
        },
        py::arg("g"), py::arg("pruned"), py::arg("x"), py::arg("r"), py::arg("d"),
        py::arg("use_centered") = true);

    // degree statistics
    m.def("h_fn", &h_fn);
    m.def("delta_degree_bound", &delta_degree_bound, py::arg("n"), py::arg("d"), py::arg("c"));
    m.def("f_d_fn", &f_d_fn, py::arg("d"), py::arg("alpha"));
    m.def("beta_l", &beta_l, py::arg("n"), py::arg("l"), py::arg("d"),
          py::arg("existence_window_c") = 3.0);
    m.def("d_star", &d_star, py::arg("n"));
    m.attr("b_star") = b_star;
    m.def(
        "figure1_curves",
        [](std::int64_t n, std::int64_t l_max, const std::vector<double>& b_grid) {
            std::vector<std::tuple<std::int64_t, double, double>> out;
            for (const auto& r : figure1_curves(n, l_max, b_grid)) out.emplace_back(r.l, r.b, r.value);
            return out;
        },
        py::arg("n"), py::arg("l_max"), py::arg("b_grid"));
    m.def(
        "validate_prop_d1",
        [](std::int64_t n, double d, std::int64_t trials, double xi, std::uint64_t seed) {
            PropD1Report r = validate_prop_d1(n, d, trials, xi, seed);
            py::dict out;
            out["trials"] = r.trials;
            out["pairs_checked"] = r.pairs_checked;
            out["pairs_passed"] = r.pairs_passed;
            out["pass_rate"] = r.pass_rate;
            out["supercritical"] = r.supercritical;
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("trials"), py::arg("xi"), py::arg("seed") = 1);

    // experiments
    m.def(
        "run_correspondence",
        [](std::int64_t n, double d, double kappa, double theta, std::int64_t trials,
           std::uint64_t seed, double tol, int max_iter, int threads, bool wigner) {
            ExperimentConfig cfg =
                config_from_kwargs(n, d, kappa, theta, trials, seed, tol, max_iter, threads);
            return report_to_dict(wigner ? run_wigner_correspondence(cfg) : run_correspondence(cfg));
        },
        py::arg("n"), py::arg("d"), py::arg("kappa") = 0.25, py::arg("theta") = 0.5,
        py::arg("trials") = 20, py::arg("seed") = 1, py::arg("tol") = 1e-7,
        py::arg("max_iter") = 350, py::arg("threads") = 0, py::arg("wigner") = false);
}
