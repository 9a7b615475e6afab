import numpy as np
import pytest

from slra import solver as sv
from slra import structured as st
from slra import systems as sy
from slra.systems import CPoly, PolySystem


def scalar_system(terms):
    return PolySystem(variables=("x",), equations=[CPoly(1, terms)],
                      var_labels=("x",), formulation="test",
                      reconstruct=lambda c: np.array([[c[0]]]))


def test_track_univariate_shift():
    # {x^2 - 4} from the start {x^2 - 1}: endpoints 2 and -2
    target = sv.CompiledSystem([CPoly(1, {(2,): 1.0, (0,): -4.0})], 1)
    start = sv.PowerStart([2], np.array([1.0 + 0j]))
    hom = sv.Homotopy(target, start, sv.TrackerConfig(seed=1).gamma())
    x0 = np.array([[1.0 + 0j], [-1.0 + 0j]])
    status, endp = sv.track_batch(hom, x0, sv.TrackerConfig(seed=1))
    assert list(status) == [sv.CONVERGED, sv.CONVERGED]
    assert sorted(np.round(endp[:, 0].real, 8)) == [-2.0, 2.0]


def test_track_identity_homotopy():
    # F = G: endpoints equal start points
    eqs = [CPoly(1, {(2,): 1.0, (0,): -1.0})]
    target = sv.CompiledSystem(eqs, 1)
    start = sv.PowerStart([2], np.array([1.0 + 0j]))
    hom = sv.Homotopy(target, start, sv.TrackerConfig(seed=1).gamma())
    x0 = np.array([[1.0 + 0j], [-1.0 + 0j]])
    status, endp = sv.track_batch(hom, x0, sv.TrackerConfig(seed=1))
    assert np.allclose(endp, x0, atol=1e-8)


def test_track_linear_system_oracle():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(4, 4))
    b = rng.normal(size=4)
    eqs = []
    for i in range(4):
        terms = {tuple(1 if k == j else 0 for k in range(4)): A[i, j] for j in range(4)}
        terms[(0,) * 4] = -b[i]
        eqs.append(CPoly(4, terms))
    system = PolySystem(variables=tuple("abcd"), equations=eqs,
                        var_labels=("v",) * 4, formulation="test",
                        reconstruct=lambda c: c.reshape(1, 4))
    pts = sv.solve_system(system, sv.TrackerConfig(seed=2, charts=1))
    assert len(pts) == 1
    assert np.max(np.abs(pts[0][0] - np.linalg.solve(A, b))) < 1e-10


def test_total_degree_budget_guard():
    eqs = [CPoly(2, {(9, 0): 1.0, (0, 0): -1.0}),
           CPoly(2, {(0, 9): 1.0, (0, 0): -1.0})]
    with pytest.raises(ValueError, match="max_paths"):
        sv.total_degree_start(eqs, np.random.default_rng(0), max_paths=10)


def test_total_degree_rejects_constant_equation():
    eqs = [CPoly(1, {(0,): 1.0})]
    with pytest.raises(ValueError, match="zero-degree"):
        sv.total_degree_start(eqs, np.random.default_rng(0), max_paths=10)


def test_mh_bezout_counts():
    # dual rank-one chart for n = 3: groups {t}, {z}
    assert sv.mh_bezout([[1, 2]] * 3 + [[2, 1]] * 2, [3, 2]) == 73
    # single group reduces to the total-degree count
    assert sv.mh_bezout([[3]] * 5, [5]) == 3 ** 5
    assert sv.mh_bezout([[1, 0], [1, 0], [0, 1]], [2, 1]) == 1


def test_set_partitions():
    assert len(sv.set_partitions(list("ab"))) == 2
    assert len(sv.set_partitions(list("abcd"))) == 15


def test_start_point_count_matches_bound():
    rey = st.load_dataset("rey")
    system = sy.dual_rank1(rey.data_array(), rey.weights.as_array())
    cfg = sv.TrackerConfig(seed=1, charts=1)
    stats = sv.PathStats()
    sv.solve_system(system, cfg, stats=stats)
    assert stats.n_paths == 73          # the multihomogeneous bound, exactly
    stats2 = sv.PathStats()
    sv.solve_system(system, sv.TrackerConfig(seed=1, charts=1, start_kind="total"),
                    stats=stats2)
    assert stats2.n_paths == 3 ** 5     # the Bezout bound, exactly


def test_tracker_config_validation():
    with pytest.raises(ValueError):
        sv.TrackerConfig(dedup_tol=1e-14)   # must exceed newton_tol
    with pytest.raises(ValueError):
        sv.TrackerConfig(track_tol=-1.0)


def test_gamma_unit_modulus_and_seeded():
    g1 = sv.TrackerConfig(seed=5).gamma()
    g2 = sv.TrackerConfig(seed=5).gamma()
    assert g1 == g2
    assert abs(abs(g1) - 1.0) < 1e-12
    assert g1 != sv.TrackerConfig(seed=6).gamma()


# -- end-to-end small instances -----------------------------------------------

def test_unit_diag_2x2_eckart_young_case():
    U = np.diag([3, 1])
    inst = st.Instance(m=2, n=2, r=1, family="dense",
                       U=((3, 0), (0, 1)), weights=st.WeightMatrix.ones(2, 2))
    ss = sv.solve(inst, "primal", sv.TrackerConfig(seed=4))
    assert ss.n_complex == 2
    mats = sorted(np.round(np.real(p.X), 6).tolist() for p in ss.points)
    assert mats == [[[0.0, 0.0], [0.0, 1.0]], [[3.0, 0.0], [0.0, 0.0]]]


def test_unit_diag_3x3_truncations_and_classification():
    inst = st.Instance(m=3, n=3, r=2, family="dense",
                       U=tuple(map(tuple, np.diag([3, 2, 1]).tolist())),
                       weights=st.WeightMatrix.ones(3, 3))
    ss = sv.solve(inst, "dual-rank1", sv.TrackerConfig(seed=4))
    assert ss.n_complex == 3 == ss.n_real
    assert ss.predicted == 3 and ss.agreement
    best = ss.closest()
    assert np.allclose(np.real(best.X), np.diag([3.0, 2.0, 0.0]), atol=1e-8)
    assert best.classification == "local_min"
    assert np.allclose(np.real(best.X), sy.eckart_young(inst.data_array(), 2),
                       atol=1e-8)


def test_determinism_across_threads_and_reruns():
    inst = st.dense_instance(2, 2, 1, seed=8, s=1)

    def run(threads):
        ss = sv.solve(inst, "primal", sv.TrackerConfig(seed=9, threads=threads))
        return [(np.round(p.X, 8).tolist(), p.is_real, p.classification)
                for p in ss.points]

    assert run(1) == run(4) == run(1)


def test_conjugate_closure_and_residual_bounds():
    rey = st.load_dataset("rey")
    ss = sv.solve(rey, "dual-rank1", sv.TrackerConfig(seed=1))
    assert not [w for w in ss.warnings if "conjugate" in w]
    nonreal = [p for p in ss.points if not p.is_real]
    assert len(nonreal) % 2 == 0
    system = sy.rank1_direct(rey.data_array(), rey.weights.as_array())
    scale = system.coefficient_scale()
    for p in ss.points:
        assert p.residual < 1e-8 * (1.0 + scale)


def test_critical_points_orthogonal_to_tangent_space():
    # the weighted residual at every accepted point is orthogonal (complex
    # bilinear pairing) to the tangent space of the rank variety
    rey = st.load_dataset("rey")
    U, Lam = rey.data_array(), rey.weights.as_array()
    ss = sv.solve(rey, "dual-rank1", sv.TrackerConfig(seed=1))
    for p in ss.points:
        X = p.X
        G = Lam * (X - U)
        u_, s_, vt_ = np.linalg.svd(X)
        col = u_[:, :1]
        row = vt_[:1, :]
        # tangent directions: col * anything + anything * row
        for k in range(3):
            T1 = np.outer(col[:, 0], np.eye(3)[k])
            T2 = np.outer(np.eye(3)[k], row[0])
            for T in (T1, T2):
                num = abs(np.sum(G * T))
                den = np.linalg.norm(G.ravel()) * np.linalg.norm(T.ravel())
                assert num < 1e-6 * max(den, 1.0)


def test_duality_bijection_small():
    inst = st.dense_instance(3, 3, 2, seed=77)
    cfg = sv.TrackerConfig(seed=6, charts=1)
    U, Lam = inst.data_array(), inst.weights.as_array()
    dual_points = sv._dedup(
        sv.solve_system(sy.dual_rank1(U, Lam), cfg), cfg.dedup_tol)
    # the transferred X of each dual point is a corank-one critical point: its
    # weighted residual must be orthogonal to the corank-one tangent space
    assert len(dual_points) == 39
    for coords, Y, res, chart, flag in dual_points[:5]:
        X = sy.inverse_transfer(Y, Lam, U)
        assert np.linalg.matrix_rank(np.asarray(Y, dtype=complex), tol=1e-6) == 1


def test_reconcile_report():
    inst = st.dense_instance(2, 2, 1, seed=8)
    ss = sv.solve(inst, "primal", sv.TrackerConfig(seed=9))
    report = sv.reconcile(ss)
    assert report["predicted"] == 6
    assert report["found"] == ss.n_complex
    assert report["agreement"] == (ss.n_complex == 6)
    mismatch = sv.reconcile(ss, predicted=7)
    assert mismatch["agreement"] is False
    assert "suggestion" in mismatch


def test_dedup_prefers_clean_representatives():
    a = (np.array([1.0 + 0j]), np.array([[1.0 + 0j]]), 1e-12, "default", True)
    b = (np.array([1.0 + 1e-9j]), np.array([[1.0 + 1e-9j]]), 1e-10, "default", False)
    kept = sv._dedup([a, b], 1e-6)
    assert len(kept) == 1
    assert kept[0][4] is False


def test_solve_rejects_sectioned_dual_chart():
    inst = st.dense_instance(3, 3, 2, seed=5, s=1)
    with pytest.raises(ValueError, match="linear sections"):
        sv.solve(inst, "dual-rank1", sv.TrackerConfig(seed=5))


def test_cross_formulation_agreement():
    # the X-sets from the determinant, kernel-chart and dual-chart routes
    # coincide on a seeded corank-one instance
    inst = st.dense_instance(3, 3, 2, seed=55)
    cfg = sv.TrackerConfig(seed=7, charts=1)
    primal = sv.solve(inst, "primal", cfg)
    normal = sv.solve(inst, "normal", cfg)
    dual = sv.solve(inst, "dual-rank1", cfg)
    assert primal.n_complex == normal.n_complex == dual.n_complex == 39

    def as_set(points):
        return [p.X for p in points]

    for other in (normal, dual):
        for X in as_set(primal.points):
            dist = min(np.max(np.abs(X - X2)) / (1.0 + np.max(np.abs(X)))
                       for X2 in as_set(other.points))
            assert dist < 1e-6
