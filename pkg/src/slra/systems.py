"""Critical-point polynomial systems for weighted low-rank approximation.

Each builder returns a PolySystem: sparse complex-coefficient equations over
named variables, plus the metadata the solver needs (variable group labels
for multihomogeneous starts, the chart map back to a matrix, degenerate-locus
predicates, a symmetry fold, and the scalar potential whose gradient the
equations realize, used by the finite-difference tests and the second-order
classifier).

Formulations:

  primal_corank1    determinant + Lagrange rows, square matrices of corank 1
                    (dense matrix coordinates or a square structured family)
  dual_rank1        unconstrained rank-one chart for the Hadamard-dual problem
  normal_space      kernel charts + multipliers for any intermediate rank
  hankel_rank1      the two-variable chart x_k = s t^k of rank-one Hankels
  catalecticant_rank2  six-parameter chart of rank-2 ternary-quartic tensors

Structured instances are built directly in their structural coordinates:
each coordinate carries the summed weight of the matrix positions it fills.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Mapping, Sequence

import numpy as np

from .structured import (Instance, WeightMatrix, catalecticant_structure,
                         catalecticant_theta, hankel_structure)

Exponent = tuple[int, ...]


class CPoly:
    """Sparse polynomial with complex floating coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exponent, complex] | None = None):
        self.n = n
        self.terms: dict[Exponent, complex] = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[tuple(e)] = complex(c)

    @classmethod
    def const(cls, n: int, c) -> "CPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int) -> "CPoly":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1.0})

    def __add__(self, other) -> "CPoly":
        if not isinstance(other, CPoly):
            other = CPoly.const(self.n, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v != 0:
                out[e] = v
            else:
                out.pop(e, None)
        return CPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "CPoly":
        return CPoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "CPoly":
        return self + (-other if isinstance(other, CPoly) else -complex(other))

    def __rsub__(self, other) -> "CPoly":
        return (-self) + other

    def __mul__(self, other) -> "CPoly":
        if not isinstance(other, CPoly):
            return CPoly(self.n, {e: c * other for e, c in self.terms.items()})
        out: dict[Exponent, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                out[e] = v
        return CPoly(self.n, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def diff(self, i: int) -> "CPoly":
        out: dict[Exponent, complex] = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                key = tuple(d)
                out[key] = out.get(key, 0) + c * e[i]
        return CPoly(self.n, out)

    def eval(self, x: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self.terms.items():
            v = c
            for xi, ei in zip(x, e):
                if ei:
                    v = v * xi ** ei
            total += v
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_on(self, indices: Sequence[int]) -> int:
        idx = list(indices)
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms


def poly_det(entries: list[list[CPoly]]) -> CPoly:
    """Determinant of a square grid of polynomials (subset DP over columns)."""
    n = len(entries)
    nvars = entries[0][0].n
    state: dict[int, CPoly] = {0: CPoly.const(nvars, 1.0)}
    for row in range(n):
        nxt: dict[int, CPoly] = {}
        for mask, acc in state.items():
            # sign of placing this row at `col`: parity of used columns > col
            sign = -1.0 if row % 2 else 1.0
            for col in range(n):
                bit = 1 << col
                if mask & bit:
                    sign = -sign
                    continue
                p = entries[row][col]
                if p.is_zero():
                    continue
                key = mask | bit
                term = acc * p * sign if sign < 0 else acc * p
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
        state = nxt
    return state.get((1 << n) - 1, CPoly.const(nvars, 0.0))


@dataclass
class PolySystem:
    """A square or overdetermined system plus solver-facing metadata."""

    variables: tuple[str, ...]
    equations: list[CPoly]
    var_labels: tuple[str, ...]                 # one group label per variable
    formulation: str
    reconstruct: Callable[[np.ndarray], np.ndarray]
    instance: Instance | None = None
    degenerate: Callable[[np.ndarray, np.ndarray, float], bool] | None = None
    symmetry: Callable[[np.ndarray], np.ndarray] | None = None
    symmetry_order: int = 1
    potential: CPoly | None = None
    grad_map: tuple[int | None, ...] | None = None  # var index -> equation index
    chart_tag: str = "default"
    # equations whose block carries the overdeterminacy (polynomial syzygies);
    # squaring-up must randomize inside this block, or the squared Jacobian
    # degenerates at every solution
    merge_block: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.equations) < len(self.variables):
            raise ValueError("system has fewer equations than variables")
        if len(self.var_labels) != len(self.variables):
            raise ValueError("one group label per variable is required")

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def overdetermined(self) -> bool:
        return len(self.equations) > len(self.variables)

    def label_indices(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for i, lab in enumerate(self.var_labels):
            out.setdefault(lab, []).append(i)
        return out

    def coefficient_scale(self) -> float:
        return max((abs(c) for eq in self.equations for c in eq.terms.values()),
                   default=1.0)

    def evaluate(self, point: Sequence[complex]) -> np.ndarray:
        return np.array([eq.eval(point) for eq in self.equations])


def residual(system: PolySystem, point: Sequence[complex]) -> float:
    """Max absolute equation value at the point."""
    return float(np.max(np.abs(system.evaluate(point))))


# ---------------------------------------------------------------------------
# Weighted objective helpers
# ---------------------------------------------------------------------------

def objective(X: np.ndarray, U: np.ndarray, Lam: np.ndarray) -> complex:
    """The weighted squared distance sum lambda_ij (x_ij - u_ij)^2 (algebraic,
    no conjugation: real for real X, the quantity whose critical points are
    being counted)."""
    D = np.asarray(X) - np.asarray(U)
    return complex(np.sum(np.asarray(Lam) * D * D))


def eckart_young(U: np.ndarray, r: int) -> np.ndarray:
    """Closest rank <= r matrix in unweighted Frobenius distance."""
    U = np.asarray(U, dtype=float)
    u, s, vt = np.linalg.svd(U, full_matrices=False)
    s = s.copy()
    s[r:] = 0.0
    return (u * s) @ vt


def unit_weight_critical_count(m: int, n: int, r: int) -> int:
    """Critical points of the unit-weight unconstrained problem: one per
    choice of r singular values to keep."""
    return comb(min(m, n), r)


def dual_transfer(X: np.ndarray, Lam: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Hadamard transfer to the dual problem: Y = Lam * U - Lam * X."""
    return np.asarray(Lam) * (np.asarray(U) - np.asarray(X))


def inverse_transfer(Y: np.ndarray, Lam: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Inverse of dual_transfer: X = U - Y / Lam (entrywise)."""
    return np.asarray(U) - np.asarray(Y) / np.asarray(Lam)


def _instance_coordinates(instance: Instance):
    """(structure, names, effective weights, effective data) for any family.

    Dense instances use one coordinate per matrix position; structured ones
    use their structural coordinates with position-summed weights.
    """
    st = instance.structure()
    if st is None:
        m, n = instance.m, instance.n
        names = tuple(f"x{i+1}{j+1}" for i in range(m) for j in range(n))
        w = [float(instance.weights.entry(i, j)) for i in range(m) for j in range(n)]
        u = [float(instance.U[i][j]) for i in range(m) for j in range(n)]
        return None, names, w, u
    w = [float(x) for x in st.coordinate_weights(instance.weights)]
    u = [float(x) for x in st.coords_from_matrix(instance.data_array())]
    return st, st.coord_names, w, u


def _matrix_entry_polys(instance: Instance, nvars: int, offset: int = 0):
    """The matrix X as a grid of CPoly in the instance's coordinates."""
    st = instance.structure()
    m, n = instance.m, instance.n
    grid = []
    for i in range(m):
        row = []
        for j in range(n):
            if st is None:
                row.append(CPoly.var(nvars, offset + i * n + j))
            else:
                c = st.grid[i][j]
                row.append(CPoly.const(nvars, 0.0) if c is None
                           else CPoly.var(nvars, offset + c))
        grid.append(row)
    return grid


def _reconstruct_from_coords(instance: Instance):
    st = instance.structure()
    m, n = instance.m, instance.n

    if st is None:
        def rec(coords: np.ndarray) -> np.ndarray:
            return np.asarray(coords)[: m * n].reshape(m, n)
    else:
        def rec(coords: np.ndarray) -> np.ndarray:
            return st.matrix_from_coords(np.asarray(coords)[: st.n_coords])
    return rec


# ---------------------------------------------------------------------------
# Formulation builders
# ---------------------------------------------------------------------------

def primal_corank1(instance: Instance) -> PolySystem:
    """Determinant formulation for square corank-one problems.

    Variables: the instance coordinates plus multipliers z_0..z_s.  Equations:
    det X = 0, the constraints, and for every coordinate the Lagrange row
    z_0 d(det)/dx + sum_k z_k dL_k/dx + weight * (x - u) = 0.  All equations
    together are the gradient of
      Phi = z_0 det X + sum_k z_k L_k + (1/2) sum weight (x - u)^2.
    """
    st = instance.structure()
    if st is None:
        if instance.m != instance.n:
            raise ValueError("corank-one formulation needs a square matrix")
        if instance.r != instance.n - 1:
            raise ValueError("corank-one formulation needs rank = n - 1")
    else:
        p, q = st.shape
        if p != q:
            raise ValueError("structured corank-one formulation needs a square format")
        if instance.r != p - 1:
            raise ValueError("corank-one formulation needs rank = format - 1")
        if instance.constraints:
            raise ValueError("structured families do not take extra constraints")

    _, names, weights, data = _instance_coordinates(instance)
    ncoords = len(names)
    s = len(instance.constraints)
    nvars = ncoords + s + 1
    variables = names + tuple(f"z{k}" for k in range(s + 1))
    labels = ("x",) * ncoords + ("z",) * (s + 1)

    det = poly_det(_matrix_entry_polys(instance, nvars))
    constraint_polys = []
    for c in instance.constraints:
        p = CPoly.const(nvars, float(c.constant))
        for i in range(instance.m):
            for j in range(instance.n):
                cf = float(c.coeffs[i][j])
                if cf:
                    # constraints act on matrix positions; map through structure
                    stm = instance.structure()
                    idx = i * instance.n + j if stm is None else stm.grid[i][j]
                    if idx is not None:
                        p = p + cf * CPoly.var(nvars, idx)
        constraint_polys.append(p)

    equations = [det] + list(constraint_polys)
    for c in range(ncoords):
        eq = CPoly.var(nvars, ncoords) * det.diff(c)
        for k, cp in enumerate(constraint_polys):
            eq = eq + CPoly.var(nvars, ncoords + 1 + k) * cp.diff(c)
        eq = eq + weights[c] * (CPoly.var(nvars, c) - data[c])
        equations.append(eq)

    half = CPoly.const(nvars, 0.0)
    for c in range(ncoords):
        d = CPoly.var(nvars, c) - data[c]
        half = half + (0.5 * weights[c]) * (d * d)
    potential = CPoly.var(nvars, ncoords) * det + half
    for k, cp in enumerate(constraint_polys):
        potential = potential + CPoly.var(nvars, ncoords + 1 + k) * cp
    grad_map = tuple([1 + s + c for c in range(ncoords)] + [0]
                     + [1 + k for k in range(s)])

    return PolySystem(
        variables=variables, equations=equations, var_labels=labels,
        formulation="primal", reconstruct=_reconstruct_from_coords(instance),
        instance=instance, potential=potential, grad_map=grad_map,
    )


def dual_rank1(U, Lam, col_mix: np.ndarray | None = None) -> PolySystem:
    """Gradient system of Q_dual(Y) = sum (y_ij - lambda_ij u_ij)^2 / lambda_ij
    on the rank-one chart y_ij = t_i v_j, v = col_mix @ (1, z_1, .., z_{n-1}).

    col_mix defaults to the identity (the plain chart v = (1, z)); a random
    invertible mix gives a second chart that covers rank-one matrices whose
    first column vanishes.
    """
    U = np.asarray(U, dtype=float)
    Lam = np.asarray(Lam, dtype=float)
    m, n = U.shape
    if np.any(Lam == 0):
        raise ValueError("all weights must be nonzero")
    nvars = m + n - 1
    variables = tuple(f"t{i+1}" for i in range(m)) + tuple(f"z{j}" for j in range(1, n))
    labels = ("t",) * m + ("z",) * (n - 1)
    C = np.eye(n, dtype=complex) if col_mix is None else np.asarray(col_mix, dtype=complex)

    # v_j as affine-linear polys in z
    v = []
    for j in range(n):
        p = CPoly.const(nvars, C[j, 0])
        for k in range(1, n):
            if C[j, k] != 0:
                p = p + C[j, k] * CPoly.var(nvars, m + k - 1)
        v.append(p)

    q = CPoly.const(nvars, 0.0)
    for i in range(m):
        ti = CPoly.var(nvars, i)
        for j in range(n):
            resid = ti * v[j] - Lam[i, j] * U[i, j]
            q = q + (1.0 / Lam[i, j]) * (resid * resid)
    equations = [q.diff(i) for i in range(nvars)]

    def rec(coords: np.ndarray) -> np.ndarray:
        t = np.asarray(coords)[:m]
        z = np.concatenate([[1.0], np.asarray(coords)[m:]])
        return np.outer(t, C @ z)

    scale = float(np.max(np.abs(Lam * U))) + 1.0

    def degen(coords, Y, tol):
        return bool(np.max(np.abs(Y)) < tol * scale)

    return PolySystem(
        variables=variables, equations=equations, var_labels=labels,
        formulation="dual-rank1", reconstruct=rec, degenerate=degen,
        potential=q, grad_map=tuple(range(nvars)),
        chart_tag="default" if col_mix is None else "mixed",
    )


def rank1_direct(U, Lam, col_mix: np.ndarray | None = None) -> PolySystem:
    """Gradient system for min sum lambda (x - u)^2 over rank-one matrices.

    Identical chart machinery as dual_rank1; indeed Q_dual for the data
    (Lam * U, 1/Lam) is exactly this objective, so we reuse the builder.
    """
    U = np.asarray(U, dtype=float)
    Lam = np.asarray(Lam, dtype=float)
    sys_ = dual_rank1(Lam * U, 1.0 / Lam, col_mix=col_mix)
    sys_.formulation = "rank1-direct"
    return sys_


def normal_space(instance: Instance, left_mix: np.ndarray | None = None,
                 right_mix: np.ndarray | None = None) -> PolySystem:
    """Kernel-chart formulation for rank <= r with linear/affine constraints.

    Y (m x (m-r), identity block on top) spans the left kernel and
    Z (n x (n-r), identity block on top) the right kernel; the products of
    their columns span the normal space of the rank-r manifold.  Equations:
    Y^t X = 0, X Z = 0, the constraints, and the mn Lagrange rows
    [w 1] . [N; dL; lambda (x - u)] = 0.  Overdetermined by (m-r)(n-r).

    Optional left/right mixes replace the identity blocks by a generic chart;
    solving in a second chart recovers points whose kernels are not graded
    compatibly with the plain one.
    """
    if instance.structure() is not None:
        raise ValueError("normal-space formulation expects matrix coordinates; "
                         "structured families have dedicated formulations")
    m, n, r = instance.m, instance.n, instance.r
    if not 1 <= r < min(m, n):
        raise ValueError("rank bound out of range")
    s = len(instance.constraints)
    a, b = m - r, n - r
    n_x, n_y, n_z, n_w = m * n, r * a, r * b, a * b + s
    nvars = n_x + n_y + n_z + n_w
    variables = (tuple(f"x{i+1}{j+1}" for i in range(m) for j in range(n))
                 + tuple(f"y{i+1}{j+1}" for i in range(r) for j in range(a))
                 + tuple(f"z{i+1}{j+1}" for i in range(r) for j in range(b))
                 + tuple(f"w{k+1}" for k in range(n_w)))
    labels = ("x",) * n_x + ("y",) * n_y + ("z",) * n_z + ("w",) * n_w

    def xv(i, j):
        return CPoly.var(nvars, i * n + j)

    ML = np.eye(m, dtype=complex) if left_mix is None else np.asarray(left_mix, dtype=complex)
    MR = np.eye(n, dtype=complex) if right_mix is None else np.asarray(right_mix, dtype=complex)

    # Y = ML @ [[I_a], [y]], column k; entries as polys in the y block
    def Ycol(k):
        col = []
        for row in range(m):
            p = CPoly.const(nvars, ML[row, k])
            for yi in range(r):
                cf = ML[row, a + yi]
                if cf != 0:
                    p = p + cf * CPoly.var(nvars, n_x + yi * a + k)
            col.append(p)
        return col

    def Zcol(k):
        col = []
        for row in range(n):
            p = CPoly.const(nvars, MR[row, k])
            for zi in range(r):
                cf = MR[row, b + zi]
                if cf != 0:
                    p = p + cf * CPoly.var(nvars, n_x + n_y + zi * b + k)
            col.append(p)
        return col

    ycols = [Ycol(k) for k in range(a)]
    zcols = [Zcol(k) for k in range(b)]

    equations: list[CPoly] = []
    # Y^t X = 0 : a x n
    for k in range(a):
        for j in range(n):
            eq = CPoly.const(nvars, 0.0)
            for i in range(m):
                eq = eq + ycols[k][i] * xv(i, j)
            equations.append(eq)
    # X Z = 0 : m x b
    for i in range(m):
        for k in range(b):
            eq = CPoly.const(nvars, 0.0)
            for j in range(n):
                eq = eq + xv(i, j) * zcols[k][j]
            equations.append(eq)
    # constraints
    constraint_polys = []
    for c in instance.constraints:
        p = CPoly.const(nvars, float(c.constant))
        for i in range(m):
            for j in range(n):
                cf = float(c.coeffs[i][j])
                if cf:
                    p = p + cf * xv(i, j)
        constraint_polys.append(p)
    equations.extend(constraint_polys)

    # Lagrange rows: one per matrix position
    Lam = instance.weights.as_array()
    U = instance.data_array()
    w_off = n_x + n_y + n_z
    lagrange_start = len(equations)
    for i in range(m):
        for j in range(n):
            eq = Lam[i, j] * (xv(i, j) - U[i, j])
            for kz in range(b):
                for ky in range(a):
                    widx = w_off + kz * a + ky
                    eq = eq + CPoly.var(nvars, widx) * (ycols[ky][i] * zcols[kz][j])
            for q in range(s):
                cf = float(instance.constraints[q].coeffs[i][j])
                if cf:
                    eq = eq + cf * CPoly.var(nvars, w_off + a * b + q)
            equations.append(eq)

    potential = CPoly.const(nvars, 0.0)
    for i in range(m):
        for j in range(n):
            d = xv(i, j) - U[i, j]
            potential = potential + (0.5 * Lam[i, j]) * (d * d)
    for kz in range(b):
        for ky in range(a):
            widx = w_off + kz * a + ky
            inner = CPoly.const(nvars, 0.0)
            for i in range(m):
                for j in range(n):
                    inner = inner + (ycols[ky][i] * zcols[kz][j]) * xv(i, j)
            potential = potential + CPoly.var(nvars, widx) * inner
    for q, cp in enumerate(constraint_polys):
        potential = potential + CPoly.var(nvars, w_off + a * b + q) * cp
    grad_map = tuple(
        [lagrange_start + k for k in range(m * n)]
        + [None] * (n_y + n_z + n_w))

    def degen(coords, X, tol):
        sv = np.linalg.svd(X, compute_uv=False)
        top = sv[0] if sv[0] > 0 else 1.0
        return bool(sv[r - 1] / top < tol)

    # (Y^t X) Z = Y^t (X Z) identically: the a*b syzygies live in the
    # bilinear block, whose equations must absorb the squaring reduction
    bilinear = tuple(range(a * n + m * b))

    return PolySystem(
        variables=variables, equations=equations, var_labels=labels,
        formulation="normal", reconstruct=_reconstruct_from_coords(instance),
        instance=instance, degenerate=degen,
        potential=potential, grad_map=grad_map,
        chart_tag="default" if left_mix is None and right_mix is None else "mixed",
        merge_block=bilinear,
    )


def hankel_rank1(n: int, weights: WeightMatrix, data: Sequence[float]) -> PolySystem:
    """Gradient system in (s, t) for rank-one Hankel approximation.

    The chart x_k = s t^k parametrizes rank-one Hankel matrices of order n;
    critical points with t = 0 are excluded by the degenerate predicate.
    """
    st = hankel_structure(n)
    if weights.shape != st.shape:
        raise ValueError("weight matrix does not match the Hankel format")
    if len(data) != n:
        raise ValueError(f"need {n} data coordinates")
    w = [float(x) for x in st.coordinate_weights(weights)]
    u = [float(x) for x in data]

    sv, tv = CPoly.var(2, 0), CPoly.var(2, 1)
    tpow = [CPoly.const(2, 1.0)]
    for _ in range(n - 1):
        tpow.append(tpow[-1] * tv)
    g = CPoly.const(2, 0.0)
    for k in range(n):
        resid = sv * tpow[k] - u[k]
        g = g + w[k] * (resid * resid)
    equations = [g.diff(0), g.diff(1)]

    def rec(coords: np.ndarray) -> np.ndarray:
        s_, t_ = coords[0], coords[1]
        vec = np.array([s_ * t_ ** k for k in range(n)])
        return st.matrix_from_coords(vec)

    def degen(coords, X, tol):
        # t = 0 hits the chart boundary; s = 0 collapses to the cone point
        # (X = 0, a singular point of the variety): both are excluded
        scale = 1.0 + float(np.max(np.abs(coords)))
        return bool(abs(coords[1]) < tol * scale or abs(coords[0]) < tol * scale)

    return PolySystem(
        variables=("s", "t"), equations=equations, var_labels=("s", "t"),
        formulation="hankel-rank1", reconstruct=rec, degenerate=degen,
        potential=g, grad_map=(0, 1),
    )


# Catalecticant chart: x_key as a polynomial in (a, b, c, d, e, f).
# Monomials of the quartic (s + b t + c u)^4 contribute b^i c^j per key "4-i-j".
def _catalecticant_chart_polys() -> dict[str, CPoly]:
    av, bv, cv, dv, ev, fv = (CPoly.var(6, i) for i in range(6))
    out: dict[str, CPoly] = {}
    for name in catalecticant_structure().coord_names:
        p4, i, j = (int(ch) for ch in name)
        term1 = av
        term2 = dv
        for _ in range(i):
            term1 = term1 * bv
            term2 = term2 * ev
        for _ in range(j):
            term1 = term1 * cv
            term2 = term2 * fv
        out[name] = term1 + term2
    return out


def catalecticant_rank2(data: Mapping | Sequence[float],
                        coeff_weights: Sequence[float] | None = None) -> PolySystem:
    """Gradient system of the rank-2 tensor objective in the 2-to-1 chart
    a (s + b t + c u)^4 + d (s + e t + f u)^4.

    coeff_weights overrides the per-coordinate objective coefficients (the
    tensor metric gives the 1/6/4/12 pattern); passing random values yields
    the generic-weight variant of the count.  The chart double-covers the
    rank-2 locus via (a,b,c) <-> (d,e,f), so reported counts are half the
    filtered solution count; the degenerate locus is ad = 0 or (b,c) = (e,f).
    """
    st = catalecticant_structure()
    if isinstance(data, Mapping):
        normalized = {}
        for key, value in data.items():
            if isinstance(key, tuple):
                key = "".join(str(int(x)) for x in key)
            normalized[str(key)] = float(value)
        u = [normalized[name] for name in st.coord_names]
    else:
        u = [float(x) for x in data]
        if len(u) != 15:
            raise ValueError("need 15 coefficient values")
    if coeff_weights is None:
        w = [float(x) for x in st.coordinate_weights(catalecticant_theta())]
    else:
        w = [float(x) for x in coeff_weights]
        if len(w) != 15:
            raise ValueError("need 15 objective coefficients")

    charts = _catalecticant_chart_polys()
    g = CPoly.const(6, 0.0)
    for k, name in enumerate(st.coord_names):
        resid = charts[name] - u[k]
        g = g + w[k] * (resid * resid)
    equations = [g.diff(i) for i in range(6)]

    def rec(coords: np.ndarray) -> np.ndarray:
        a, b, c, d, e, f = coords
        vals = {}
        for name in st.coord_names:
            _, i, j = (int(ch) for ch in name)
            vals[name] = a * b ** i * c ** j + d * e ** i * f ** j
        vec = np.array([vals[name] for name in st.coord_names])
        return st.matrix_from_coords(vec)

    def degen(coords, X, tol):
        a, b, c, d, e, f = coords
        scale = 1.0 + float(np.max(np.abs(coords)))
        on_ad = abs(a * d) < tol * scale * scale
        on_diag = max(abs(b - e), abs(c - f)) < tol * scale
        return bool(on_ad or on_diag)

    def swap(coords: np.ndarray) -> np.ndarray:
        a, b, c, d, e, f = coords
        return np.array([d, e, f, a, b, c])

    return PolySystem(
        variables=("a", "b", "c", "d", "e", "f"), equations=equations,
        var_labels=("a", "b", "c", "a", "b", "c"),
        formulation="catalecticant", reconstruct=rec, degenerate=degen,
        symmetry=swap, symmetry_order=2,
        potential=g, grad_map=tuple(range(6)),
    )
