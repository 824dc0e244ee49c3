import math

import numpy as np
import pytest

import sparsespec as ss


def test_generate_and_degrees():
    g = ss.generate_er(500, 4.0, seed=7)
    assert g.n == 500
    degs = [g.degree(x) for x in range(g.n)]
    assert abs(sum(degs) / g.n - 4.0) < 1.0
    assert g.edge_count() == sum(degs) // 2
    h = ss.generate_er(500, 4.0, seed=7)
    assert h.edge_count() == g.edge_count()
    for x in (0, 100, 499):
        assert h.neighbors(x) == g.neighbors(x)


def test_matvec_against_numpy():
    g = ss.generate_er(120, 5.0, seed=3)
    a = ss.materialize_dense(g, centered=True)
    v = np.random.default_rng(0).normal(size=120)
    fast = ss.centered_matvec(g, v)
    assert np.allclose(fast, a @ v, atol=1e-12)
    assert np.allclose(a, a.T)


def test_full_spectrum_star():
    star = ss.graph_from_edges(4, [(0, 1), (0, 2), (0, 3)])
    s = ss.full_spectrum(star, centered=False)
    assert s["eigenvalues"][0] == pytest.approx(math.sqrt(3.0))
    assert s["eigenvalues"][-1] == pytest.approx(-math.sqrt(3.0))


def test_extremal_eigs_matches_dense():
    g = ss.generate_er(300, 6.0, seed=11)
    dense = ss.full_spectrum(g)["eigenvalues"]
    lan = ss.extremal_eigs(g, k=4, side="both", tol=1e-10, max_iter=300, seed=5)["eigenvalues"]
    assert lan[0] == pytest.approx(dense[0], abs=1e-8)
    assert lan[-1] == pytest.approx(dense[-1], abs=1e-8)


def test_tridiagonalize_tree_closed_form():
    tree = ss.regular_tree(6, 3, 3, d_param=3.0)
    form = ss.tridiagonalize(tree, 0, 3)
    assert form.m == 3
    assert max(abs(d) for d in form.diag) <= 1e-12
    assert form.offdiag[0] == pytest.approx(math.sqrt(6.0))
    assert form.offdiag[1] == pytest.approx(math.sqrt(3.0))
    assert ss.bipartite_diag_check(form)


def test_build_v_and_decomposition():
    g = ss.generate_er(2000, 5.0, seed=19)
    sigma, alphas = ss.degree_order(g)
    x = sigma[0]
    r = max(1, ss.r_x_radius(g.degree(x), g.n))
    v = ss.build_v(g, x, r)
    assert np.linalg.norm(v["vector"]) == pytest.approx(1.0)
    assert v["predicted_eigenvalue"] == pytest.approx(
        math.sqrt(g.d_param) * ss.lambda_fn(alphas[0])
    )
    dec = ss.error_decomposition(g, x, r)
    assert dec["reconstruction_residual"] <= 1e-10
    assert len(dec["w_norms"]) == 5

    w = ss.make_wigner(g, law="rademacher", seed=2)
    wdec = ss.wigner_error_terms(w, x, r, g.d_param)
    assert wdec["reconstruction_residual"] <= 1e-10
    assert len(wdec["w_norms"]) == 4


def test_prune_and_verify():
    g = ss.generate_er(2000, 5.0, seed=23)
    p = ss.prune(g, 2.0)
    props = ss.verify_pruned(p)
    assert props["all_exact_ok"]
    assert props["max_removed_degree"] >= 0
    assert len(p.v_tau) > 0


def test_transfer_analytics():
    assert ss.lambda_fn(2.0) == pytest.approx(2.0)
    assert ss.alpha_fn(ss.lambda_fn(5.0)) == pytest.approx(5.0)
    assert ss.gamma_fn(2.5) == pytest.approx(0.5)
    diag, offdiag = ss.ideal_m(3.0, 2)
    assert offdiag[0] == pytest.approx(math.sqrt(3.0))
    assert ss.delta_fn(0.0, math.sqrt(3.0), 0.0, 1.0, 2.5) == pytest.approx(0.4375)
    out = ss.delocalization_bound([0.0] * 21, [math.sqrt(5.0)] + [1.0] * 19, 2.6)
    assert out["condition_ok"]
    assert out["bound"] > 0.0


def test_degree_statistics():
    n = 10000
    assert ss.h_fn(1.0) == pytest.approx(2 * math.log(2) - 1)
    b1 = ss.beta_l(n, 1, 5.0)
    assert ss.f_d_fn(5.0, b1) == pytest.approx(math.log(n), abs=1e-9)
    ds = ss.d_star(n)
    assert ss.f_d_fn(ds, 2.0) == pytest.approx(math.log(n), abs=1e-9)
    # d_star = b_star log N - O(log log N); the correction is sizable at n = 1e4
    assert 1.5 < ds / math.log(n) < ss.b_star
    rows = ss.figure1_curves(1000, 3, [0.5, 1.0, 1.5, 2.0])
    assert all(value >= 2.0 for (_, _, value) in rows)


def test_nbt_and_ihara_bass():
    g = ss.generate_er(60, 5.0, seed=5)
    n = g.n
    w = np.random.default_rng(1).normal(size=n * n)
    out = ss.nbt_matvec(g, w)
    assert out.shape == (n * n,)
    rho = ss.nbt_spectral_radius(g, iters=150, seed=2)
    assert 0.0 < rho < 3.0
    pair = ss.ihara_bass_pair(g, 1e6)
    assert pair["min_eig"] == pytest.approx(1.0, abs=1e-3)


def test_correspondence_smoke():
    rep = ss.run_correspondence(n=600, d=4.0, trials=2, seed=9, max_iter=250)
    assert rep["skip_count"] == 0
    assert len(rep["trials"]) == 2
    for row in rep["rows"]:
        assert row["error_l"] >= 0.0
