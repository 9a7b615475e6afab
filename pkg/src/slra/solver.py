"""Homotopy continuation solver for the critical-point systems.

Total-degree and multihomogeneous start systems, gamma-trick path tracking
(RK4 predictor on the Davidenko ODE + Newton corrector with adaptive steps),
endpoint refinement on the original (unsquared) system, residual and
degenerate-locus filtering, symmetry folding, deduplication, realness and
second-order classification, and count reconciliation against the exact
ED-degree engine.

Paths are tracked in vectorized batches: the per-path adaptive state lives in
flat numpy arrays and every predictor/corrector stage is a batched polynomial
evaluation plus a batched linear solve, so the output is independent of any
scheduling/thread configuration by construction; results are canonically
sorted at the end.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from itertools import product as iter_product
from typing import Callable, Iterator, Sequence

import numpy as np

from . import eddegree, systems
from .structured import Instance, hankel_weights
from .systems import CPoly, PolySystem

ACTIVE, CONVERGED, DIVERGED, SINGULAR, FAILED = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class TrackerConfig:
    """All tunables of one solver run; the seed fixes every random choice."""

    track_tol: float = 1e-10
    newton_tol: float = 1e-12
    dedup_tol: float = 1e-6
    real_tol: float = 1e-8
    min_step: float = 1e-14
    max_step: float = 0.1
    max_steps: int = 10_000
    start_kind: str = "auto"       # "auto" | "total" | "mh"
    threads: int = 1               # scheduling hint only; output is identical
    seed: int = 0
    charts: int = 2
    chunk: int = 6000
    max_paths: int = 500_000
    polish: bool = True
    div_threshold: float = 1e8

    def __post_init__(self):
        for name in ("track_tol", "newton_tol", "dedup_tol", "real_tol",
                     "min_step", "max_step"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.dedup_tol <= self.newton_tol:
            raise ValueError("dedup tolerance must exceed Newton tolerance")

    def gamma(self) -> complex:
        u = float(np.random.default_rng(self.seed ^ 0x5EED).uniform(0.05, 0.95))
        if abs(u - 0.5) < 0.03:  # keep gamma safely off the real axis
            u += 0.06
        return complex(np.exp(2j * np.pi * u))


# ---------------------------------------------------------------------------
# Compilation: batched evaluation of a polynomial system and its Jacobian
# ---------------------------------------------------------------------------

class CompiledSystem:
    """Shared-monomial-basis evaluator for F and dF over path batches."""

    def __init__(self, equations: Sequence[CPoly], nvars: int):
        self.nvars = nvars
        self.neqs = len(equations)
        derivs = [[eq.diff(v) for v in range(nvars)] for eq in equations]
        monomials: dict[tuple[int, ...], int] = {}

        def touch(p: CPoly):
            for e in p.terms:
                if e not in monomials:
                    monomials[e] = len(monomials)

        for eq in equations:
            touch(eq)
        for row in derivs:
            for p in row:
                touch(p)
        self.nm = len(monomials)
        self.exps = np.zeros((self.nm, nvars), dtype=np.int64)
        for e, idx in monomials.items():
            self.exps[idx] = e
        self.maxpow = self.exps.max(axis=0) if self.nm else np.zeros(nvars, dtype=np.int64)

        from scipy.sparse import csr_matrix

        def pack(polys: list[CPoly], width: int) -> csr_matrix:
            rows, cols, vals = [], [], []
            for j, p in enumerate(polys):
                for e, c in p.terms.items():
                    rows.append(monomials[e])
                    cols.append(j)
                    vals.append(c)
            return csr_matrix((np.array(vals, dtype=complex),
                               (np.array(rows, dtype=np.int64),
                                np.array(cols, dtype=np.int64))),
                              shape=(self.nm, width))

        self._cf = pack(list(equations), self.neqs)
        flat = [derivs[i][v] for i in range(self.neqs) for v in range(nvars)]
        self._cj = pack(flat, self.neqs * nvars)
        self._cft = self._cf.T.tocsr()
        self._cjt = self._cj.T.tocsr()
        self.coeff_scale = max((abs(c) for eq in equations
                                for c in eq.terms.values()), default=1.0)
        # per-variable columns with nonzero exponent, for the value builder
        self._var_cols = [np.nonzero(self.exps[:, v])[0] for v in range(nvars)]

    def monomial_values(self, x: np.ndarray) -> np.ndarray:
        """(nm, N) values of every monomial at each batch point (transposed
        layout keeps the gather-multiply passes contiguous)."""
        n = x.shape[0]
        v = np.ones((self.nm, n), dtype=x.dtype)
        xt = np.ascontiguousarray(x.T)
        for var in range(self.nvars):
            cols = self._var_cols[var]
            if cols.size == 0:
                continue
            mp = int(self.maxpow[var])
            pows = np.empty((mp + 1, n), dtype=x.dtype)
            pows[0] = 1
            xi = xt[var]
            for k in range(1, mp + 1):
                np.multiply(pows[k - 1], xi, out=pows[k])
            v[cols] *= pows[self.exps[cols, var]]
        return v

    def eval(self, x: np.ndarray, mv: np.ndarray | None = None) -> np.ndarray:
        if mv is None:
            mv = self.monomial_values(x)
        return np.asarray(self._cft.dot(mv.astype(complex, copy=False))).T

    def jac(self, x: np.ndarray, mv: np.ndarray | None = None) -> np.ndarray:
        if mv is None:
            mv = self.monomial_values(x)
        flat = np.asarray(self._cjt.dot(mv.astype(complex, copy=False))).T
        return np.ascontiguousarray(flat).reshape(x.shape[0], self.neqs, self.nvars)

    def eval_and_jac(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mv = self.monomial_values(x)
        return self.eval(x, mv), self.jac(x, mv)


# ---------------------------------------------------------------------------
# Start systems
# ---------------------------------------------------------------------------

class PowerStart:
    """Start system x_i^{d_i} - c_i, evaluated in closed form."""

    def __init__(self, degrees: Sequence[int], constants: np.ndarray):
        self.degrees = np.array(degrees, dtype=np.int64)
        self.constants = np.asarray(constants)
        self.nvars = len(degrees)

    def eval_and_jac(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = x.shape[0]
        powm1 = x ** (self.degrees - 1)[None, :]
        vals = powm1 * x - self.constants[None, :]
        jac = np.zeros((n, self.nvars, self.nvars), dtype=x.dtype)
        idx = np.arange(self.nvars)
        jac[:, idx, idx] = self.degrees[None, :] * powm1
        return vals, jac


def total_degree_start(equations: Sequence[CPoly], rng: np.random.Generator,
                       max_paths: int):
    """x_i^{d_i} - c_i with random unit-modulus c_i; lazily enumerated roots."""
    nvars = len(equations)
    degrees = [eq.degree() for eq in equations]
    if any(d <= 0 for d in degrees):
        raise ValueError("zero-degree equation in start system")
    total = math.prod(degrees)
    if total > max_paths:
        raise ValueError(f"total-degree start needs {total} paths "
                         f"(> max_paths {max_paths})")
    phases = rng.uniform(0.0, 1.0, size=nvars)
    c = np.exp(2j * np.pi * phases)
    roots = [c[i] ** (1.0 / degrees[i])
             * np.exp(2j * np.pi * np.arange(degrees[i]) / degrees[i])
             for i in range(nvars)]

    def enumerate_points(chunk: int) -> Iterator[np.ndarray]:
        buf = []
        for combo in iter_product(*[range(d) for d in degrees]):
            buf.append([roots[i][k] for i, k in enumerate(combo)])
            if len(buf) == chunk:
                yield np.array(buf, dtype=complex)
                buf = []
        if buf:
            yield np.array(buf, dtype=complex)

    return PowerStart(degrees, c), total, enumerate_points


def mh_bezout(degree_matrix: Sequence[Sequence[int]], sizes: Sequence[int]) -> int:
    """Multihomogeneous root count: coefficient of prod zeta_g^{sizes_g} in
    prod_i (sum_g D[i][g] zeta_g), via dynamic programming."""
    sizes = tuple(int(s) for s in sizes)
    state: dict[tuple[int, ...], int] = {tuple(0 for _ in sizes): 1}
    for row in degree_matrix:
        nxt: dict[tuple[int, ...], int] = {}
        for used, ways in state.items():
            for g, d in enumerate(row):
                if d <= 0 or used[g] >= sizes[g]:
                    continue
                key = tuple(u + (1 if i == g else 0) for i, u in enumerate(used))
                nxt[key] = nxt.get(key, 0) + ways * d
        state = nxt
        if not state:
            return 0
    return state.get(sizes, 0)


def set_partitions(items: Sequence) -> list[list[list]]:
    items = list(items)
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in set_partitions(rest):
        out.append([[first]] + [list(b) for b in part])
        for i in range(len(part)):
            blocks = [list(b) for b in part]
            blocks[i] = [first] + blocks[i]
            out.append(blocks)
    return out


class MultihomogStart:
    """Products of random affine-linear group factors, with lazily enumerated
    start points obtained from block linear solves.

    Evaluation uses the product structure directly (prefix/suffix products
    for the Jacobian), never the expanded polynomials.
    """

    def __init__(self, equations: Sequence[CPoly], groups: list[list[int]],
                 nvars: int, rng: np.random.Generator):
        self.nvars = nvars
        self.groups = groups
        self.deg = [[eq.degree_on(g) for g in groups] for eq in equations]
        self.count = mh_bezout(self.deg, [len(g) for g in groups])
        # factors[i][g][j] = (coeff over group vars, const); rows[i] stacks the
        # same factors as full-width affine forms for vectorized evaluation
        self.factors: list[list[list[tuple[np.ndarray, complex]]]] = []
        self.rows: list[np.ndarray] = []
        self.consts: list[np.ndarray] = []
        for i in range(len(equations)):
            per_group = []
            full_rows = []
            full_consts = []
            for g, gvars in enumerate(groups):
                fs = []
                for _ in range(self.deg[i][g]):
                    coeff = (rng.normal(size=len(gvars))
                             + 1j * rng.normal(size=len(gvars)))
                    const = complex(rng.normal() + 1j * rng.normal())
                    fs.append((coeff, const))
                    row = np.zeros(nvars, dtype=complex)
                    row[gvars] = coeff
                    full_rows.append(row)
                    full_consts.append(const)
                per_group.append(fs)
            self.factors.append(per_group)
            self.rows.append(np.array(full_rows))
            self.consts.append(np.array(full_consts))

    def eval_and_jac(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = x.shape[0]
        ne = len(self.rows)
        if not hasattr(self, "_stacked"):
            # one affine map for all factors of all equations, plus segments
            self._offsets = np.cumsum([0] + [r.shape[0] for r in self.rows])
            self._allrows = np.concatenate(self.rows, axis=0)
            self._allconsts = np.concatenate(self.consts)
            self._stacked = True
        lv = x @ self._allrows.T + self._allconsts[None, :]
        vals = np.empty((n, ne), dtype=x.dtype)
        jac = np.zeros((n, ne, self.nvars), dtype=x.dtype)
        for i in range(ne):
            lo, hi = self._offsets[i], self._offsets[i + 1]
            nf = hi - lo
            seg = lv[:, lo:hi]
            pre = np.empty((n, nf + 1), dtype=x.dtype)
            suf = np.empty((n, nf + 1), dtype=x.dtype)
            pre[:, 0] = 1
            suf[:, nf] = 1
            for k in range(nf):
                np.multiply(pre[:, k], seg[:, k], out=pre[:, k + 1])
            for k in range(nf - 1, -1, -1):
                np.multiply(suf[:, k + 1], seg[:, k], out=suf[:, k])
            vals[:, i] = pre[:, nf]
            jac[:, i, :] = (pre[:, :nf] * suf[:, 1:]) @ self._allrows[lo:hi]
        return vals, jac

    def _assignments(self) -> Iterator[tuple[int, ...]]:
        """Which group each equation serves, respecting group capacities."""
        ne = len(self.deg)
        caps = [len(g) for g in self.groups]

        def rec(i: int, remaining: list[int], chosen: list[int]):
            if i == ne:
                if all(r == 0 for r in remaining):
                    yield tuple(chosen)
                return
            if sum(remaining) != ne - i:
                return
            for g, cap in enumerate(remaining):
                if cap > 0 and self.deg[i][g] > 0:
                    remaining[g] -= 1
                    chosen.append(g)
                    yield from rec(i + 1, remaining, chosen)
                    chosen.pop()
                    remaining[g] += 1

        yield from rec(0, [c for c in caps], [])

    def enumerate_points(self, chunk: int) -> Iterator[np.ndarray]:
        """Start points in deterministic order, solved in batched blocks."""
        pending: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

        def flush():
            if not pending:
                return None
            m = len(pending)
            x = np.zeros((m, self.nvars), dtype=complex)
            for g, gvars in enumerate(self.groups):
                k = len(gvars)
                a = np.zeros((m, k, k), dtype=complex)
                b = np.zeros((m, k), dtype=complex)
                for p, (assign, choices) in enumerate(pending):
                    row = 0
                    for i, gi in enumerate(assign):
                        if gi != g:
                            continue
                        coeff, const = self.factors[i][g][choices[i]]
                        a[p, row] = coeff
                        b[p, row] = -const
                        row += 1
                sol, ok = _batched_solve(a, b)
                if not ok.all():
                    raise np.linalg.LinAlgError("degenerate start factors; retry "
                                                "with a different seed")
                x[:, gvars] = sol
            pending.clear()
            return x

        for assign in self._assignments():
            choice_ranges = [range(self.deg[i][assign[i]])
                             for i in range(len(assign))]
            for choices in iter_product(*choice_ranges):
                pending.append((assign, choices))
                if len(pending) == chunk:
                    yield flush()
        out = flush()
        if out is not None:
            yield out


def choose_start(squared: Sequence[CPoly], label_indices: dict[str, list[int]],
                 nvars: int, rng: np.random.Generator, cfg: TrackerConfig):
    """Pick total-degree or the best multihomogeneous grouping.

    Returns (start equations, path count, point generator, description).
    """
    degrees = [eq.degree() for eq in squared]
    td_count = math.prod(degrees)
    best = None
    if cfg.start_kind in ("auto", "mh") and len(label_indices) > 1:
        labels = sorted(label_indices)
        for blocks in set_partitions(labels):
            if len(blocks) == 1:
                continue
            groups = [sorted(i for lab in block for i in label_indices[lab])
                      for block in blocks]
            deg_matrix = [[eq.degree_on(g) for g in groups] for eq in squared]
            count = mh_bezout(deg_matrix, [len(g) for g in groups])
            if count <= 0:
                continue
            key = (count, len(blocks))
            if best is None or key < best[0]:
                best = (key, groups, blocks)
    use_mh = best is not None and (cfg.start_kind == "mh"
                                   or (cfg.start_kind == "auto" and best[0][0] < td_count))
    if use_mh:
        groups = best[1]
        start = MultihomogStart(squared, groups, nvars, rng)
        if start.count > cfg.max_paths:
            raise ValueError(f"multihomogeneous start needs {start.count} paths "
                             f"(> max_paths {cfg.max_paths})")
        desc = "mh:" + "|".join(",".join(b) for b in best[2])
        return start, start.count, start.enumerate_points, desc
    start, count, gen = total_degree_start(squared, rng, cfg.max_paths)
    return start, count, gen, "total-degree"


def normalize_equations(equations: Sequence[CPoly]) -> list[CPoly]:
    """Scale each equation to unit max coefficient.

    The critical systems mix O(1) bilinear rows with weight-times-data rows
    several orders larger; tracking tolerances are scale-relative, so
    normalizing keeps the corrector honest across rows.
    """
    out = []
    for eq in equations:
        scale = max((abs(c) for c in eq.terms.values()), default=1.0)
        out.append(eq * (1.0 / scale) if scale > 0 else eq)
    return out


def square_up(system: PolySystem, rng: np.random.Generator) -> list[CPoly]:
    """Random combinations reducing an overdetermined system to a square one.

    When the system declares a merge block (the equations carrying its
    polynomial syzygies), the reduction randomizes inside that block: keeping
    the block intact would leave the squared Jacobian singular at every
    solution.  Otherwise equations with identical per-label degree signatures
    are combined so the multihomogeneous structure survives.  Spurious
    solutions introduced by randomization are removed later by the residual
    filter on the full system.
    """
    if not system.overdetermined:
        return list(system.equations)
    excess = len(system.equations) - system.n_vars

    def combine(members: list[int], target: int) -> list[CPoly]:
        mix = rng.normal(size=(target, len(members))) \
            + 1j * rng.normal(size=(target, len(members)))
        out = []
        for row in mix:
            eq = CPoly.const(system.n_vars, 0.0)
            for c, i in zip(row, members):
                eq = eq + c * system.equations[i]
            out.append(eq)
        return out

    if system.merge_block is not None:
        block = list(system.merge_block)
        if len(block) - excess < 1:
            raise ValueError("merge block too small to absorb the excess")
        keep = [i for i in range(len(system.equations)) if i not in set(block)]
        out = combine(block, len(block) - excess)
        out.extend(system.equations[i] for i in keep)
        return out

    labels = sorted(system.label_indices())
    idx = system.label_indices()
    classes: dict[tuple[int, ...], list[int]] = {}
    for i, eq in enumerate(system.equations):
        sig = tuple(eq.degree_on(idx[lab]) for lab in labels)
        classes.setdefault(sig, []).append(i)
    sizes = {sig: len(members) for sig, members in classes.items()}
    order = sorted(classes, key=lambda sig: (sum(sig), sizes[sig]), reverse=True)
    for sig in order:
        while excess > 0 and sizes[sig] > 1:
            sizes[sig] -= 1
            excess -= 1
        if excess == 0:
            break
    if excess > 0:
        raise ValueError("cannot square up: too few combinable equations")
    out: list[CPoly] = []
    for sig in sorted(classes):
        members = classes[sig]
        if sizes[sig] == len(members):
            out.extend(system.equations[i] for i in members)
        else:
            out.extend(combine(members, sizes[sig]))
    return out


# ---------------------------------------------------------------------------
# Path tracking
# ---------------------------------------------------------------------------

@dataclass
class PathStats:
    n_paths: int = 0
    n_converged: int = 0
    n_diverged: int = 0
    n_singular: int = 0
    n_failed: int = 0
    n_filtered: int = 0
    n_raw_points: int = 0
    start_kind: str = ""
    charts: int = 1

    def consistent(self) -> bool:
        return (self.n_converged + self.n_diverged + self.n_singular
                + self.n_failed == self.n_paths)

    def merge(self, other: "PathStats") -> None:
        self.n_paths += other.n_paths
        self.n_converged += other.n_converged
        self.n_diverged += other.n_diverged
        self.n_singular += other.n_singular
        self.n_failed += other.n_failed
        self.n_filtered += other.n_filtered
        self.n_raw_points += other.n_raw_points


def _batched_solve(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve stacked systems; returns (solutions, ok mask).  Singular or
    non-finite batches are resolved per item instead of aborting the batch."""
    try:
        sol = np.linalg.solve(a, b[..., None])[..., 0]
        bad = ~np.isfinite(sol).all(axis=1)
    except np.linalg.LinAlgError:
        sol = np.zeros_like(b)
        bad = np.zeros(a.shape[0], dtype=bool)
        for i in range(a.shape[0]):
            try:
                sol[i] = np.linalg.solve(a[i], b[i])
                if not np.isfinite(sol[i]).all():
                    bad[i] = True
            except np.linalg.LinAlgError:
                bad[i] = True
    return sol, ~bad


class Homotopy:
    """H(x, t) = gamma (1-t) G(x) + t F(x), t from 0 to 1.

    The target is a compiled sparse-monomial system; the start system is
    evaluated in closed form from its factor structure.
    """

    def __init__(self, target: CompiledSystem, start, gamma: complex):
        self.f = target
        self.start = start
        self.gamma = gamma

    def eval_jac(self, x: np.ndarray, t: np.ndarray):
        fv, fj = self.f.eval_and_jac(x)
        gv, gj = self.start.eval_and_jac(x)
        wf = t[:, None]
        wg = self.gamma * (1 - t)[:, None]
        h = wf * fv + wg * gv
        ht = fv - self.gamma * gv
        # fj and gj are freshly allocated; combine in place
        fj *= wf[..., None]
        gj *= wg[..., None]
        fj += gj
        return h, fj, ht

    def tangent(self, x: np.ndarray, t: np.ndarray):
        _, hx, ht = self.eval_jac(x, t)
        sol, ok = _batched_solve(hx, -ht)
        return sol, ok


def track_batch(hom: Homotopy, x0: np.ndarray, cfg: TrackerConfig):
    """Track one batch of paths from t=0 to t=1.

    Returns (status array, endpoint array); endpoints are meaningful for
    CONVERGED and SINGULAR (endgame-extrapolated) paths.
    """
    with np.errstate(all="ignore"):
        return _track_batch_impl(hom, x0, cfg)


def _track_batch_impl(hom: Homotopy, x0: np.ndarray, cfg: TrackerConfig):
    n = x0.shape[0]
    x = x0.astype(complex).copy()
    t = np.zeros(n)
    h = np.full(n, min(0.05, cfg.max_step))
    status = np.full(n, ACTIVE, dtype=np.int8)
    streak = np.zeros(n, dtype=np.int32)
    steps = np.zeros(n, dtype=np.int64)
    rejects = np.zeros(n, dtype=np.int64)
    endpoint = np.zeros_like(x)

    def rk4(xa, ta, ha):
        k1, ok1 = hom.tangent(xa, ta)
        k2, ok2 = hom.tangent(xa + 0.5 * ha[:, None] * k1, ta + 0.5 * ha)
        k3, ok3 = hom.tangent(xa + 0.5 * ha[:, None] * k2, ta + 0.5 * ha)
        k4, ok4 = hom.tangent(xa + ha[:, None] * k3, ta + ha)
        pred = xa + (ha[:, None] / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        return pred, ok1 & ok2 & ok3 & ok4

    def newton(xa, ta, iters, tol):
        xc = xa.copy()
        conv = np.zeros(xa.shape[0], dtype=bool)
        pending = np.arange(xa.shape[0])
        for _ in range(iters):
            if pending.size == 0:
                break
            hv, hx, _ = hom.eval_jac(xc[pending], ta[pending])
            delta, ok = _batched_solve(hx, -hv)
            moved = xc[pending] + np.where(ok[:, None], delta, 0.0)
            xc[pending] = moved
            dn = np.max(np.abs(delta), axis=1)
            scale = 1.0 + np.max(np.abs(moved), axis=1)
            hit = ok & (dn < tol * scale)
            conv[pending[hit]] = True
            pending = pending[~hit & ok]
        return xc, conv

    while True:
        act = np.nonzero(status == ACTIVE)[0]
        if act.size == 0:
            break
        xa, ta = x[act], t[act]
        # approach t=1 geometrically: the remaining gap halves per step, so
        # paths drifting to infinity cross the divergence threshold in a
        # bounded number of steps instead of stalling at the boundary
        ha = np.minimum(h[act], np.maximum(0.5 * (1.0 - ta), 1e-10))

        # mid-path corrector tolerance is looser than the endpoint tolerance;
        # endpoints are re-polished on the target system anyway
        pred, pok = rk4(xa, ta, ha)
        xc, cok = newton(pred, ta + ha, 3, max(cfg.track_tol, 1e-8))
        accept = pok & cok & np.isfinite(xc).all(axis=1)

        ia = act[accept]
        x[ia] = xc[accept]
        t[ia] = ta[accept] + ha[accept]
        streak[ia] += 1
        rejects[ia] = 0
        grow = ia[streak[ia] >= 2]
        h[grow] = np.minimum(h[grow] * 1.5, cfg.max_step)
        # rejected paths halve the step; only consecutive rejects count as stuck
        ir = act[~accept]
        h[ir] *= 0.5
        streak[ir] = 0
        rejects[ir] += 1
        steps[act] += 1

        norms = np.max(np.abs(x[act]), axis=1)
        diverged = act[~np.isfinite(norms) | (norms > cfg.div_threshold)]
        status[diverged] = DIVERGED

        stalled = act[((h[act] < cfg.min_step) | (rejects[act] > 50))
                      & (status[act] == ACTIVE)]
        status[stalled] = FAILED
        exhausted = act[(steps[act] >= cfg.max_steps) & (status[act] == ACTIVE)]
        status[exhausted] = FAILED

        done = np.nonzero((status == ACTIVE) & (t >= 1.0 - 2e-10))[0]
        if done.size:
            xe, conv = newton_target(hom.f, x[done], cfg)
            endpoint[done] = xe
            # unbounded endpoints that fail the final Newton are at infinity,
            # not singular
            big = np.max(np.abs(x[done]), axis=1) > 1e5
            status[done] = np.where(conv, CONVERGED,
                                    np.where(big, DIVERGED, SINGULAR))

    # endgame for stalled paths that got close to the end
    stalled = np.nonzero((status == FAILED) & (t > 0.95))[0]
    if stalled.size:
        xe, got = _endgame(hom, x[stalled], t[stalled], cfg)
        endpoint[stalled[got]] = xe[got]
        status[stalled[got]] = SINGULAR
    # paths abandoned at a large norm were heading to infinity
    big_fail = np.nonzero((status == FAILED)
                          & (np.max(np.abs(x), axis=1) > 1e4))[0]
    status[big_fail] = DIVERGED

    return status, endpoint


def newton_target(f: CompiledSystem, x: np.ndarray, cfg: TrackerConfig,
                  iters: int = 12):
    """Newton on the target system F alone (square systems)."""
    xc = x.astype(complex).copy()
    ok = np.ones(x.shape[0], dtype=bool)
    for _ in range(iters):
        fv, fj = f.eval_and_jac(xc)
        delta, solvable = _batched_solve(fj, -fv)
        ok &= solvable
        xc = np.where(solvable[:, None], xc + delta, xc)
        dn = np.max(np.abs(delta), axis=1)
        scale = 1.0 + np.max(np.abs(xc), axis=1)
        if np.all(dn[ok] < cfg.newton_tol * scale[ok]) if ok.any() else True:
            break
    fv = f.eval(xc)
    res = np.max(np.abs(fv), axis=1)
    conv = ok & np.isfinite(res) & (res < 1e-6 * (1.0 + f.coeff_scale)) \
        & np.isfinite(xc).all(axis=1)
    return xc, conv


def _endgame(hom: Homotopy, x: np.ndarray, t: np.ndarray, cfg: TrackerConfig):
    """Geometric marching toward t=1 with vector extrapolation.

    Samples x(t_k) at t_k = 1 - (1 - t0) 2^-k via damped Newton correction,
    then extrapolates the geometric tail; used for singular endpoints only.
    """
    xc = x.astype(complex).copy()
    tc = t.copy()
    samples = [xc.copy()]
    alive = np.ones(x.shape[0], dtype=bool)
    for _ in range(14):
        tc = 1.0 - (1.0 - tc) * 0.5
        xc2, conv = _newton_at(hom, xc, tc, 12, 1e-8)
        alive &= conv & (np.max(np.abs(xc2), axis=1) < cfg.div_threshold)
        xc = np.where(alive[:, None], xc2, xc)
        samples.append(xc.copy())
    # Aitken-style limit from the last three samples
    s0, s1, s2 = samples[-3], samples[-2], samples[-1]
    d1, d2 = s1 - s0, s2 - s1
    denom = np.sum(np.abs(d1 - d2) ** 2, axis=1)
    small = denom < 1e-30
    ratio = np.where(small, 0.0,
                     np.sum((d2 * np.conj(d1 - d2)), axis=1) / np.where(small, 1.0, denom))
    ratio = np.clip(np.abs(ratio), 0.0, 0.95) * np.exp(1j * np.angle(ratio))
    limit = s2 + d2 * (ratio / (1.0 - ratio))[:, None]
    fv = hom.f.eval(limit)
    res = np.max(np.abs(fv), axis=1)
    got = alive & (res < 1e-4 * (1.0 + hom.f.coeff_scale))
    return limit, got


def _newton_at(hom: Homotopy, x: np.ndarray, t: np.ndarray, iters: int, tol: float):
    xc = x.copy()
    ok = np.ones(x.shape[0], dtype=bool)
    for _ in range(iters):
        hv, hx, _ = hom.eval_jac(xc, t)
        delta, solvable = _batched_solve(hx, -hv)
        ok &= solvable
        xc = np.where(solvable[:, None], xc + delta, xc)
        dn = np.max(np.abs(delta), axis=1)
        if np.all(dn[ok] < tol * (1.0 + np.max(np.abs(xc), axis=1))[ok]) if ok.any() else True:
            break
    return xc, ok


def refine_full(system: PolySystem, compiled_full: CompiledSystem,
                points: np.ndarray, cfg: TrackerConfig) -> np.ndarray:
    """Gauss-Newton refinement on the original (possibly overdetermined)
    system, with a mixed-precision ultimate pass for the survivors."""
    if points.size == 0:
        return points
    xc = points.astype(complex).copy()
    for _ in range(12):
        fv, fj = compiled_full.eval_and_jac(xc)
        if system.overdetermined:
            jh = np.conj(np.transpose(fj, (0, 2, 1)))
            a = jh @ fj
            b = -(jh @ fv[..., None])[..., 0]
            delta, _ = _batched_solve(a, b)
        else:
            delta, _ = _batched_solve(fj, -fv)
        delta = np.where(np.isfinite(delta), delta, 0.0)
        xc = xc + delta
        if np.max(np.abs(delta)) < cfg.newton_tol * (1.0 + np.max(np.abs(xc))):
            break
    if cfg.polish and xc.shape[0] <= 2000:
        xc = _polish_extended(system, compiled_full, xc)
    return xc


def _polish_extended(system: PolySystem, compiled: CompiledSystem,
                     points: np.ndarray) -> np.ndarray:
    """Iterative refinement with extended-precision residuals: the correction
    is solved in double precision but the residual is evaluated in
    complex long double, which resolves algebraic coordinates well below
    double-precision Newton stagnation."""
    xc = points.astype(np.clongdouble)
    for _ in range(3):
        mv = compiled.monomial_values(xc)  # (nm, N) in extended precision
        fv = np.zeros((xc.shape[0], compiled.neqs), dtype=np.clongdouble)
        cf = compiled._cf.tocoo()
        for r, c, v in zip(cf.row, cf.col, cf.data):
            fv[:, c] += v * mv[r]
        fj = compiled.jac(xc.astype(complex))
        if system.overdetermined:
            jh = np.conj(np.transpose(fj, (0, 2, 1)))
            a = jh @ fj
            b = -(jh @ fv.astype(complex)[..., None])[..., 0]
            delta, _ = _batched_solve(a, b)
        else:
            delta, _ = _batched_solve(fj, -fv.astype(complex))
        xc = xc + np.where(np.isfinite(delta), delta, 0.0).astype(np.clongdouble)
    return xc.astype(complex)


# ---------------------------------------------------------------------------
# Solution sets
# ---------------------------------------------------------------------------

@dataclass
class CriticalPoint:
    coords: np.ndarray
    X: np.ndarray
    residual: float
    is_real: bool
    classification: str | None = None   # local_min | saddle_or_max | ambiguous
    objective: float | None = None
    multiplicity_flag: bool = False
    chart: str = "default"

    def sort_key(self):
        flat = np.asarray(self.X).ravel()
        return tuple(v for z in flat
                     for v in (round(z.real / 1e-8), round(z.imag / 1e-8)))


@dataclass
class SolutionSet:
    points: list[CriticalPoint]
    stats: PathStats
    predicted: int | None = None
    predicted_basis: str = ""
    agreement: bool | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def n_complex(self) -> int:
        return len(self.points)

    @property
    def n_real(self) -> int:
        return sum(1 for p in self.points if p.is_real)

    @property
    def n_local_min(self) -> int:
        return sum(1 for p in self.points if p.classification == "local_min")

    def real_points(self) -> list[CriticalPoint]:
        return [p for p in self.points if p.is_real]

    def closest(self) -> CriticalPoint | None:
        reals = [p for p in self.real_points() if p.objective is not None]
        return min(reals, key=lambda p: p.objective) if reals else None


def _dedup(points: list[tuple], tol: float) -> list[tuple]:
    """Cluster by matrix-space distance; prefer cleanly converged
    representatives, then the smallest residual."""
    if not points:
        return []
    order = sorted(range(len(points)),
                   key=lambda i: (points[i][4], points[i][2], i))
    kept: list[tuple] = []
    for i in order:
        entry = points[i]
        mat = entry[1]
        dup = False
        for other in kept:
            mat2 = other[1]
            scale = 1.0 + max(np.max(np.abs(mat)), np.max(np.abs(mat2)))
            if np.max(np.abs(mat - mat2)) < tol * scale:
                dup = True
                break
        if not dup:
            kept.append(entry)
    return kept


def _fold_symmetry(points: list[tuple], system: PolySystem, tol: float,
                   warnings: list[str]) -> list[tuple]:
    """Quotient by the chart symmetry: keep one representative per orbit,
    matching partners by nearest neighbor under the involution."""
    if system.symmetry is None or system.symmetry_order == 1:
        return points
    kept = []
    used = [False] * len(points)
    for i, entry in enumerate(points):
        if used[i]:
            continue
        used[i] = True
        coords = entry[0]
        image = system.symmetry(coords)
        matched = False
        for j in range(i + 1, len(points)):
            if used[j]:
                continue
            scale = 1.0 + max(np.max(np.abs(image)), np.max(np.abs(points[j][0])))
            if np.max(np.abs(points[j][0] - image)) < max(tol, 1e-4) * scale:
                used[j] = True
                matched = True
                break
        if not matched:
            # fixed points of the involution sit on the degenerate locus and
            # are filtered earlier; anything else deserves a diagnostic
            scale = 1.0 + np.max(np.abs(coords))
            if np.max(np.abs(image - coords)) > max(tol, 1e-4) * scale:
                warnings.append("unmatched symmetry partner; counting once")
        kept.append(entry)
    return kept


# ---------------------------------------------------------------------------
# Classification (second-order test at real critical points)
# ---------------------------------------------------------------------------

def _eig_classify(hessian: np.ndarray, constraint_jac: np.ndarray | None = None) -> str:
    h = np.real(hessian)
    h = 0.5 * (h + h.T)
    if constraint_jac is not None and constraint_jac.size:
        _, sv, vt = np.linalg.svd(constraint_jac)
        rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0] if sv.size else 1.0)))
        basis = vt[rank:].T
        if basis.shape[1] == 0:
            return "ambiguous"
        h = basis.T @ h @ basis
    eig = np.linalg.eigvalsh(h)
    scale = max(np.max(np.abs(eig)), 1e-300)
    if np.all(eig > 1e-7 * scale):
        return "local_min"
    if np.any(eig < -1e-7 * scale):
        return "saddle_or_max"
    return "ambiguous"


def _poly_hessian(potential: CPoly, point: np.ndarray) -> np.ndarray:
    nv = potential.n
    h = np.zeros((nv, nv), dtype=complex)
    for i in range(nv):
        di = potential.diff(i)
        for j in range(i, nv):
            val = di.diff(j).eval(point)
            h[i, j] = val
            h[j, i] = val
    return h


def _rank_factor_chart(instance: Instance, X: np.ndarray):
    """Objective and constraint polys in a rank-r product chart around X.

    Pivot rows (greedy volume choice) hold the free factor B = X[rows]; the
    other rows are unknown combinations A of them: X_i = sum_k a_ik B_k.
    """
    m, n, r = instance.m, instance.n, instance.r
    Xr = np.real(X)
    rows: list[int] = []
    residual = Xr.copy()
    for _ in range(r):
        norms = np.linalg.norm(residual, axis=1)
        pick = int(np.argmax(norms))
        rows.append(pick)
        v = residual[pick]
        nv = np.linalg.norm(v)
        if nv < 1e-14:
            break
        v = v / nv
        residual = residual - np.outer(residual @ v, v)
        residual[pick] = 0.0
    rows = sorted(set(rows))
    while len(rows) < r:
        rows.append(next(i for i in range(m) if i not in rows))
        rows = sorted(rows)
    others = [i for i in range(m) if i not in rows]
    b0 = Xr[rows, :]
    a0, *_ = np.linalg.lstsq(b0.T, Xr[others, :].T, rcond=None)
    a0 = a0.T  # (m-r, r)

    nparams = len(others) * r + r * n
    Lam = instance.weights.as_array()
    U = instance.data_array()

    def a_var(io, k):
        return CPoly.var(nparams, io * r + k)

    def b_var(k, j):
        return CPoly.var(nparams, len(others) * r + k * n + j)

    xpolys: list[list[CPoly]] = [[None] * n for _ in range(m)]  # type: ignore[list-item]
    for k, i in enumerate(rows):
        for j in range(n):
            xpolys[i][j] = b_var(k, j)
    for io, i in enumerate(others):
        for j in range(n):
            p = CPoly.const(nparams, 0.0)
            for k in range(r):
                p = p + a_var(io, k) * b_var(k, j)
            xpolys[i][j] = p

    f = CPoly.const(nparams, 0.0)
    for i in range(m):
        for j in range(n):
            d = xpolys[i][j] - U[i, j]
            f = f + Lam[i, j] * (d * d)
    constraints = []
    for c in instance.constraints:
        p = CPoly.const(nparams, float(c.constant))
        for i in range(m):
            for j in range(n):
                cf = float(c.coeffs[i][j])
                if cf:
                    p = p + cf * xpolys[i][j]
        constraints.append(p)
    point = np.concatenate([a0.ravel(), b0.ravel()]).astype(complex)
    return f, constraints, point


def classify_point(instance: Instance | None, formulation: str,
                   point: CriticalPoint, system: PolySystem) -> str:
    """Second-order classification of a real critical point.

    Unconstrained chart formulations use the chart Hessian of the objective;
    constrained ones use the Lagrangian Hessian projected onto the numerical
    tangent space of the constraint set.
    """
    X = np.real(point.X)
    coords = point.coords

    if point.multiplicity_flag:
        return "ambiguous"

    # single-chart parametrized formulations: the chart potential IS the
    # instance objective, so its Hessian decides (coords must be real)
    if formulation in ("hankel-rank1", "catalecticant") and system.potential is not None:
        if np.max(np.abs(np.imag(coords))) < 1e-6 * (1.0 + np.max(np.abs(coords))):
            h = _poly_hessian(system.potential, np.real(coords).astype(complex))
            return _eig_classify(h)
        return "ambiguous"

    if instance is None:
        return "ambiguous"

    if instance.r == 1 and instance.structure() is None:
        # real rank-one chart adapted at the point
        Lam = instance.weights.as_array()
        U = instance.data_array()
        m, n = X.shape
        j0 = int(np.argmax(np.linalg.norm(X, axis=0)))
        i0 = int(np.argmax(np.abs(X[:, j0])))
        if abs(X[i0, j0]) < 1e-13:
            return "ambiguous"
        v = X[i0, :] / X[i0, j0]
        tt = X[:, j0]
        nparams = m + n - 1
        tvars = [CPoly.var(nparams, i) for i in range(m)]
        vpolys = []
        pos = 0
        for j in range(n):
            if j == j0:
                vpolys.append(CPoly.const(nparams, 1.0))
            else:
                vpolys.append(CPoly.var(nparams, m + pos))
                pos += 1
        f = CPoly.const(nparams, 0.0)
        for i in range(m):
            for j in range(n):
                d = tvars[i] * vpolys[j] - U[i, j]
                f = f + Lam[i, j] * (d * d)
        pt = np.concatenate([tt, np.delete(v, j0)]).astype(complex)
        return _eig_classify(_poly_hessian(f, pt))

    st = instance.structure()
    if st is not None:
        # structural coordinates with the determinant constraint (square
        # corank-one families)
        p, q = st.shape
        if p == q and instance.r == p - 1:
            ncoords = st.n_coords
            w = [float(x) for x in st.coordinate_weights(instance.weights)]
            u = [float(x) for x in st.coords_from_matrix(instance.data_array())]
            grid = [[CPoly.var(ncoords, st.grid[i][j]) if st.grid[i][j] is not None
                     else CPoly.const(ncoords, 0.0) for j in range(q)]
                    for i in range(p)]
            det = systems.poly_det(grid)
            f = CPoly.const(ncoords, 0.0)
            for c in range(ncoords):
                d = CPoly.var(ncoords, c) - u[c]
                f = f + w[c] * (d * d)
            xpt = np.array([float(x) for x in st.coords_from_matrix(X)],
                           dtype=complex)
            grad_f = np.array([f.diff(i).eval(xpt) for i in range(ncoords)])
            grad_h = np.array([det.diff(i).eval(xpt) for i in range(ncoords)])
            denom = float(np.real(np.vdot(grad_h, grad_h)))
            if denom < 1e-30:
                return "ambiguous"
            mu = -float(np.real(np.vdot(grad_h, grad_f))) / denom
            h = _poly_hessian(f, xpt) + mu * _poly_hessian(det, xpt)
            return _eig_classify(h, np.real(grad_h)[None, :])
        return "ambiguous"

    # dense rank-r manifold chart with linear constraints
    f, constraints, pt = _rank_factor_chart(instance, X)
    grad_f = np.array([f.diff(i).eval(pt) for i in range(f.n)])
    if constraints:
        jac = np.array([[c.diff(i).eval(pt) for i in range(f.n)]
                        for c in constraints])
        mus, *_ = np.linalg.lstsq(np.real(jac).T, -np.real(grad_f), rcond=None)
        h = _poly_hessian(f, pt)
        for mu, c in zip(mus, constraints):
            h = h + mu * _poly_hessian(c, pt)
        return _eig_classify(h, np.real(jac))
    return _eig_classify(_poly_hessian(f, pt))


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def solve_system(system: PolySystem, cfg: TrackerConfig | None = None,
                 instance: Instance | None = None,
                 transfer: Callable[[np.ndarray], np.ndarray] | None = None,
                 stats: PathStats | None = None) -> list[tuple]:
    """Track one chart system; returns accepted (coords, matrix, residual,
    chart, singular_flag) tuples after residual and degenerate filtering
    (no dedup here)."""
    cfg = cfg or TrackerConfig()
    rng = np.random.default_rng(
        (cfg.seed, zlib.crc32(system.chart_tag.encode())))
    squared = normalize_equations(square_up(system, rng))
    start, n_paths, point_gen, desc = choose_start(
        squared, system.label_indices(), system.n_vars, rng, cfg)
    compiled_full = CompiledSystem(system.equations, system.n_vars)
    compiled_sq = CompiledSystem(squared, system.n_vars)
    hom = Homotopy(compiled_sq, start, cfg.gamma())

    local = PathStats(start_kind=desc)
    endpoints: list[np.ndarray] = []
    singular_flags: list[np.ndarray] = []
    seen = 0
    for batch in point_gen(cfg.chunk):
        seen += batch.shape[0]
        status, endp = track_batch(hom, batch, cfg)
        local.n_converged += int(np.sum(status == CONVERGED))
        local.n_diverged += int(np.sum(status == DIVERGED))
        local.n_singular += int(np.sum(status == SINGULAR))
        local.n_failed += int(np.sum(status == FAILED))
        good = (status == CONVERGED) | (status == SINGULAR)
        if np.any(good):
            endpoints.append(endp[good])
            singular_flags.append(status[good] == SINGULAR)
    local.n_paths = seen
    if seen != n_paths:
        raise AssertionError(f"start enumeration produced {seen} of {n_paths} points")

    accepted: list[tuple] = []
    if endpoints:
        pts = np.concatenate(endpoints, axis=0)
        flags = np.concatenate(singular_flags, axis=0)
        with np.errstate(all="ignore"):
            pts = refine_full(system, compiled_full, pts, cfg)
            fv = compiled_full.eval(pts)
        res = np.max(np.abs(fv), axis=1)
        threshold = 1e-8 * (1.0 + compiled_full.coeff_scale)
        for i in range(pts.shape[0]):
            if not np.isfinite(res[i]) or res[i] >= threshold:
                local.n_filtered += 1
                continue
            coords = pts[i]
            mat = system.reconstruct(coords)
            degen_tol = 1e-4 if flags[i] else 1e-8
            if system.degenerate is not None and system.degenerate(coords, mat, degen_tol):
                local.n_filtered += 1
                continue
            if transfer is not None:
                mat = transfer(mat)
            accepted.append((coords, mat, float(res[i]), system.chart_tag,
                             bool(flags[i])))
    local.n_raw_points = len(accepted)
    if stats is not None:
        stats.merge(local)
        stats.start_kind = stats.start_kind or desc
    return accepted


def _predict(instance: Instance) -> tuple[int | None, str]:
    """Expected count from the exact engine, when a formula applies."""
    m, n, r = instance.m, instance.n, instance.r
    s = instance.codimension()
    section = instance.section_kind()
    st = instance.structure()
    if st is None:
        if instance.is_unit_weights():
            if s == 0:
                return systems.unit_weight_critical_count(m, n, r), "unit-weight subset count"
            if m == n and r == n - 1 and section == "linear":
                return (eddegree.conjectured_corank1_unit(m, n, s),
                        "conjectured unit-weight value")
            return None, "no unit-weight formula for this case"
        q = eddegree.EDDegreeQuery(m, n, r, s, section, "generic")
        return eddegree.ed_degree(q), "generic ED degree"
    if instance.family == "hankel":
        order = int(instance.params["hankel_order"])
        if instance.weights == hankel_weights(order, "omega"):
            if 2 * r <= order - 1:
                return eddegree.hankel_ed_generic(order - 1, r), "generic Hankel ED degree"
        return None, "Hankel weights without a closed form (numeric target)"
    return None, "no closed form for this family"


def _build_charts(instance: Instance, formulation: str, cfg: TrackerConfig):
    """The chart systems to track and the matrix transfer applied afterwards."""
    rng = np.random.default_rng((cfg.seed, 0xC4A7))
    U = instance.data_array()
    Lam = instance.weights.as_array()
    minmn = min(instance.m, instance.n)

    def random_unitary(k):
        a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        q, _ = np.linalg.qr(a)
        return q

    def scaled_permutation(k):
        # relocates the kernel-chart identity block without densifying the
        # equations, so the multihomogeneous degree profile is preserved
        perm = rng.permutation(k)
        phases = np.exp(2j * np.pi * rng.uniform(size=k))
        mix = np.zeros((k, k), dtype=complex)
        mix[np.arange(k), perm] = phases
        return mix

    if formulation == "primal":
        return [systems.primal_corank1(instance)], None
    if formulation == "hankel-rank1":
        st = instance.structure()
        coords = [float(x) for x in st.coords_from_matrix(U)]
        order = int(instance.params["hankel_order"])
        return [systems.hankel_rank1(order, instance.weights, coords)], None
    if formulation == "catalecticant":
        st = instance.structure()
        coords = [float(x) for x in st.coords_from_matrix(U)]
        return [systems.catalecticant_rank2(coords)], None
    if formulation == "normal":
        charts = [systems.normal_space(instance)]
        if cfg.charts > 1:
            charts.append(systems.normal_space(
                instance, left_mix=scaled_permutation(instance.m),
                right_mix=scaled_permutation(instance.n)))
        return charts, None
    if formulation == "dual-rank1":
        if instance.constraints:
            raise ValueError("the unconstrained rank-one chart does not "
                             "support linear sections")
        if instance.r == 1:
            builder = lambda mix: systems.rank1_direct(U, Lam, col_mix=mix)
            transfer = None
        elif instance.r == minmn - 1:
            builder = lambda mix: systems.dual_rank1(U, Lam, col_mix=mix)
            transfer = lambda Y: systems.inverse_transfer(Y, Lam, U)
        else:
            raise ValueError("dual-rank1 needs rank 1 or corank 1")
        charts = [builder(None)]
        if cfg.charts > 1:
            charts.append(builder(random_unitary(instance.n)))
        return charts, transfer
    raise ValueError(f"unknown formulation {formulation!r}")


def default_formulation(instance: Instance) -> str:
    if instance.family == "hankel" and instance.r == 1:
        return "hankel-rank1"
    if instance.family == "catalecticant":
        return "catalecticant"
    st = instance.structure()
    if st is not None:
        return "primal"
    if not instance.constraints and instance.r in (1, min(instance.m, instance.n) - 1):
        return "dual-rank1"
    if instance.m == instance.n and instance.r == instance.n - 1:
        return "primal"
    return "normal"


def solve(instance: Instance, formulation: str = "auto",
          config: TrackerConfig | None = None,
          expected: int | None = None) -> SolutionSet:
    """Find all complex critical points of the instance.

    Tracks every chart of the requested formulation, merges and deduplicates
    endpoints in matrix space, folds chart symmetries, classifies real points,
    and reconciles the count against the exact engine when a formula applies.
    """
    cfg = config or TrackerConfig()
    if formulation == "auto":
        formulation = default_formulation(instance)
    charts, transfer = _build_charts(instance, formulation, cfg)
    stats = PathStats(charts=len(charts))
    warnings: list[str] = []
    raw: list[tuple[np.ndarray, np.ndarray, float, str]] = []
    for system in charts:
        raw.extend(solve_system(system, cfg, instance, transfer, stats))
    base = charts[0]
    raw = _fold_symmetry(_dedup(raw, cfg.dedup_tol), base, cfg.dedup_tol, warnings) \
        if base.symmetry is not None else _dedup(raw, cfg.dedup_tol)

    Lam = instance.weights.as_array()
    U = instance.data_array()
    points: list[CriticalPoint] = []
    for coords, mat, res, chart, singular in raw:
        scale = 1.0 + float(np.max(np.abs(mat)))
        is_real = bool(np.max(np.abs(np.imag(mat))) < cfg.real_tol * scale)
        cp = CriticalPoint(coords=coords, X=mat, residual=res, is_real=is_real,
                           chart=chart, multiplicity_flag=singular)
        if is_real:
            cp.objective = float(np.real(systems.objective(np.real(mat), U, Lam)))
            cp.classification = classify_point(instance, formulation, cp, base)
        points.append(cp)
    points.sort(key=lambda p: p.sort_key())

    # conjugation closure check
    nonreal = [p for p in points if not p.is_real]
    unmatched = _conjugate_mismatch(nonreal, cfg.dedup_tol)
    if unmatched:
        warnings.append(f"{unmatched} non-real points without a conjugate partner")
    if not stats.consistent():
        warnings.append("inconsistent count: path statuses do not sum to the total")

    predicted, basis = (expected, "caller expectation") if expected is not None \
        else _predict(instance)
    agreement = None if predicted is None else (len(points) == predicted)
    return SolutionSet(points=points, stats=stats, predicted=predicted,
                       predicted_basis=basis, agreement=agreement,
                       warnings=warnings)


def _conjugate_mismatch(nonreal: list[CriticalPoint], tol: float) -> int:
    used = [False] * len(nonreal)
    unmatched = 0
    for i, p in enumerate(nonreal):
        if used[i]:
            continue
        used[i] = True
        target = np.conj(p.X)
        hit = False
        for j in range(i + 1, len(nonreal)):
            if used[j]:
                continue
            q = nonreal[j]
            scale = 1.0 + max(np.max(np.abs(target)), np.max(np.abs(q.X)))
            if np.max(np.abs(q.X - target)) < tol * scale:
                used[j] = True
                hit = True
                break
        if not hit:
            unmatched += 1
    return unmatched


def reconcile(solution_set: SolutionSet, predicted: int | None = None) -> dict:
    """Compare the found count with the exact prediction; on mismatch, report
    path forensics and suggest a rerun with a fresh gamma/seed (a mismatch may
    certify non-genericity or a tracking failure)."""
    if predicted is None:
        predicted = solution_set.predicted
    found = solution_set.n_complex
    agree = None if predicted is None else (found == predicted)
    report = {
        "predicted": predicted,
        "found": found,
        "agreement": agree,
        "paths": vars(solution_set.stats).copy(),
        "warnings": list(solution_set.warnings),
    }
    if agree is False:
        report["suggestion"] = ("rerun with a different seed (fresh gamma and "
                                "start system); a persistent mismatch indicates "
                                "non-generic data or weights")
    return report
