"""Hochschild (co)homology of an algebra from the bar complex, exactly.

Chains in degree m are A tensor A^m (flattened row-major, the A factor
is the most significant index); cochains are k-linear maps A^m -> A
stored as d x d^m matrices and flattened the same way.  The boundary is

    b(a0 x a1 x .. x am) = sum_i (-1)^i (.. a_i a_{i+1} ..)
                           + (-1)^m (a_m a0 x a1 x .. x a_{m-1})

and the coboundary of an m-cochain f is

    (df)(a1 .. a_{m+1}) = a1 f(a2 ..) + sum_i (-1)^i f(.. a_i a_{i+1} ..)
                          + (-1)^{m+1} f(a1 ..) a_{m+1}.

Class representatives are canonical: cycle and boundary spaces are kept
as RREF row spaces, and the cycle rows whose leading columns are not
leading columns of the boundary space form a basis of the quotient.
When A carries a symmetrizing form, (f, a0 x ..) -> (a0, f(a1 ..))
descends to a pairing of HH^m with HH_m whose gram matrix must be
square and invertible.

Matrices in degree m have d^(2m+1) or d^(2m+3) entries; every assembly
checks the entry count against a cap (KK_SIZE_CAP in the environment,
default 2^27) and raises SizeCapExceeded instead of allocating.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .algebras import Algebra
from .errors import (
    DegeneratePairing,
    DerinvError,
    DimensionMismatch,
    InvariantViolation,
    SizeCapExceeded,
)
from .fields import CODE_DTYPE, Field
from .linalg import Mat, Subspace, field_kron

DEFAULT_SIZE_CAP = 2**27
SIZE_CAP_ENV = "KK_SIZE_CAP"


def resolve_size_cap(size_cap: int | None = None) -> int:
    if size_cap is not None:
        return size_cap
    env = os.environ.get(SIZE_CAP_ENV)
    return int(env) if env else DEFAULT_SIZE_CAP


def _check_cap(entries: int, cap: int, what: str) -> None:
    if entries > cap:
        raise SizeCapExceeded(entries, cap, what)


def _digit_planes(f: Field, arr: np.ndarray) -> list[np.ndarray]:
    if f.e == 1:
        return [arr.astype(CODE_DTYPE)]
    a = arr.astype(np.int64)
    return [((a // f.p**t) % f.p).astype(CODE_DTYPE) for t in range(f.e)]


def _recompose(f: Field, planes: list[np.ndarray]) -> np.ndarray:
    if f.e == 1:
        return (planes[0] % f.p).astype(CODE_DTYPE)
    out = np.zeros(planes[0].shape, dtype=np.int64)
    for t, plane in enumerate(planes):
        out += (plane.astype(np.int64) % f.p) * f.p**t
    return out.astype(CODE_DTYPE)


def _neg_digits(p: int, plane: np.ndarray) -> np.ndarray:
    return ((p - plane.astype(np.int16)) % p).astype(CODE_DTYPE)


def boundary_matrix(algebra: Algebra, m: int, size_cap: int | None = None) -> Mat:
    """Bar boundary b_m as a (d^m, d^(m+1)) matrix; m >= 1."""
    if m < 1:
        raise ValueError("boundary is defined for m >= 1")
    f, d = algebra.field, algebra.dim
    rows_n, cols_n = d**m, d ** (m + 1)
    # cap before cache: capped calls must behave the same hot or cold
    _check_cap(rows_n * cols_n, resolve_size_cap(size_cap), f"boundary matrix b_{m}")
    key = ("boundary", m)
    cached = algebra._cache.get(key)
    if cached is not None:
        return cached
    mt = np.ascontiguousarray(algebra.mult_matrix.data.T)  # d x d^2
    mt_planes = _digit_planes(f, mt)
    p = f.p
    planes = [np.zeros((rows_n, cols_n), dtype=CODE_DTYPE) for _ in range(f.e)]
    for i in range(m):
        left = np.eye(d**i, dtype=CODE_DTYPE)
        right = np.eye(d ** (m - 1 - i), dtype=CODE_DTYPE)
        for t in range(f.e):
            pl = mt_planes[t] if i % 2 == 0 else _neg_digits(p, mt_planes[t])
            planes[t] = (planes[t] + np.kron(np.kron(left, pl), right)) % p
    # cyclic term: a_m a_0 x a_1 .. a_{m-1}, sign (-1)^m
    ii, jj, kk, vv = algebra.sparse_mult()
    mid = np.arange(d ** (m - 1), dtype=np.int64)
    vplanes = _digit_planes(f, vv)
    for idx in range(ii.shape[0]):
        u, v, w = int(ii[idx]), int(jj[idx]), int(kk[idx])
        r = w * d ** (m - 1) + mid
        c = v * d**m + mid * d + u
        for t in range(f.e):
            dig = int(vplanes[t][idx])
            if m % 2 == 1:
                dig = (p - dig) % p
            if dig:
                np.add.at(planes[t], (r, c), dig)
    for t in range(f.e):
        planes[t] %= p
    out = Mat(f, _recompose(f, planes))
    algebra._cache[key] = out
    return out


def coboundary_matrix(algebra: Algebra, m: int, size_cap: int | None = None) -> Mat:
    """Hochschild coboundary on m-cochains, a (d^(m+2), d^(m+1)) matrix."""
    if m < 0:
        raise ValueError("m must be >= 0")
    f, d = algebra.field, algebra.dim
    rows_n, cols_n = d ** (m + 2), d ** (m + 1)
    _check_cap(rows_n * cols_n, resolve_size_cap(size_cap), f"coboundary matrix on degree {m}")
    key = ("coboundary", m)
    cached = algebra._cache.get(key)
    if cached is not None:
        return cached
    mt = np.ascontiguousarray(algebra.mult_matrix.data.T)
    mt_planes = _digit_planes(f, mt)
    p = f.p
    planes = [np.zeros((rows_n, cols_n), dtype=CODE_DTYPE) for _ in range(f.e)]
    ii, jj, kk, vv = algebra.sparse_mult()
    vplanes = _digit_planes(f, vv)
    rest = np.arange(d**m, dtype=np.int64)
    # left action: a1 f(a2 ..); structure constant c[a1, f-out, out]
    for idx in range(ii.shape[0]):
        u, v, w = int(ii[idx]), int(jj[idx]), int(kk[idx])
        r = w * d ** (m + 1) + u * d**m + rest
        c = v * d**m + rest
        for t in range(f.e):
            dig = int(vplanes[t][idx])
            if dig:
                np.add.at(planes[t], (r, c), dig)
    for t in range(f.e):
        planes[t] %= p
    # inner contractions: f(.. a_i a_{i+1} ..), sign (-1)^i
    for i in range(1, m + 1):
        left = np.eye(d ** (i - 1), dtype=CODE_DTYPE)
        right = np.eye(d ** (m - i), dtype=CODE_DTYPE)
        eye_out = np.eye(d, dtype=CODE_DTYPE)
        for t in range(f.e):
            pl = mt_planes[t] if i % 2 == 0 else _neg_digits(p, mt_planes[t])
            contraction = np.kron(np.kron(left, pl), right)  # d^m x d^(m+1)
            planes[t] = (planes[t] + np.kron(eye_out, contraction.T)) % p
    # right action: f(a1 ..) a_{m+1}, sign (-1)^(m+1); c[f-out, a_{m+1}, out]
    for idx in range(ii.shape[0]):
        u, v, w = int(ii[idx]), int(jj[idx]), int(kk[idx])
        r = w * d ** (m + 1) + rest * d + v
        c = u * d**m + rest
        for t in range(f.e):
            dig = int(vplanes[t][idx])
            if (m + 1) % 2 == 1:
                dig = (p - dig) % p
            if dig:
                np.add.at(planes[t], (r, c), dig)
    for t in range(f.e):
        planes[t] %= p
    out = Mat(f, _recompose(f, planes))
    algebra._cache[key] = out
    return out


class Cochain:
    """A k-linear map A^arity -> A as a d x d^arity matrix of codes."""

    __slots__ = ("algebra", "arity", "matrix")

    def __init__(self, algebra: Algebra, arity: int, matrix: Mat):
        if arity < 0:
            raise ValueError("arity must be >= 0")
        d = algebra.dim
        if matrix.shape != (d, d**arity):
            raise DimensionMismatch(
                f"cochain of arity {arity} needs shape {(d, d ** arity)}, got {matrix.shape}"
            )
        self.algebra = algebra
        self.arity = arity
        self.matrix = matrix

    @staticmethod
    def from_flat(algebra: Algebra, arity: int, vec: np.ndarray) -> "Cochain":
        f, d = algebra.field, algebra.dim
        v = f.varr(vec).reshape(-1)
        if v.shape[0] != d ** (arity + 1):
            raise DimensionMismatch("flat cochain vector has wrong length")
        return Cochain(algebra, arity, Mat(f, v.reshape(d, d**arity)))

    def flat(self) -> np.ndarray:
        return self.matrix.data.reshape(-1)

    def apply(self, *args: np.ndarray) -> np.ndarray:
        if len(args) != self.arity:
            raise DimensionMismatch(f"expected {self.arity} arguments, got {len(args)}")
        f = self.algebra.field
        t = np.ones(1, dtype=CODE_DTYPE)
        for a in args:
            a = f.varr(a).reshape(-1)
            t = f.vmul(t[:, None], a[None, :]).reshape(-1)
        return self.matrix.mul_vec(t)

    def is_cocycle(self, size_cap: int | None = None) -> bool:
        delta = coboundary_matrix(self.algebra, self.arity, size_cap)
        return not delta.mul_vec(self.flat()).any()

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.algebra, self.arity, self.matrix + other.matrix)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.algebra, self.arity, self.matrix - other.matrix)

    def __neg__(self) -> "Cochain":
        return Cochain(self.algebra, self.arity, -self.matrix)

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.algebra, self.arity, self.matrix.scale(c))

    def _check(self, other: "Cochain") -> None:
        if self.algebra is not other.algebra:
            raise DimensionMismatch("cochains over different algebras")
        if self.arity != other.arity:
            raise DimensionMismatch(f"arity mismatch {self.arity} vs {other.arity}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.algebra is other.algebra
            and self.arity == other.arity
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((id(self.algebra), self.arity, self.matrix))

    def __repr__(self) -> str:
        return f"Cochain(arity={self.arity}, dim={self.algebra.dim})"


def multiplication_cochain(algebra: Algebra) -> Cochain:
    """The product of A as a 2-cochain."""
    return Cochain(algebra, 2, Mat(algebra.field, algebra.mult_matrix.data.T))


def unit_cochain(algebra: Algebra) -> Cochain:
    """The unit of A as a 0-cochain."""
    return Cochain(algebra, 0, Mat(algebra.field, algebra.unit.reshape(-1, 1)))


def coboundary(f: Cochain, size_cap: int | None = None) -> Cochain:
    delta = coboundary_matrix(f.algebra, f.arity, size_cap)
    return Cochain.from_flat(f.algebra, f.arity + 1, delta.mul_vec(f.flat()))


@dataclass(frozen=True)
class HomologyBasis:
    """HH_m or HH^m with canonical class representatives.

    reps rows are the cycle-space RREF rows whose leading columns do not
    occur as leading columns of the boundary space; they represent a
    basis of the quotient, and class coordinates of a cycle are read off
    at those columns after reducing mod boundaries.
    """

    algebra: Algebra
    degree: int
    kind: str  # "homology" or "cohomology"
    cycles: Subspace
    boundaries: Subspace
    rep_pivots: tuple[int, ...]
    reps: Mat

    @property
    def dim(self) -> int:
        return self.reps.rows

    def class_coords(self, vec: np.ndarray) -> np.ndarray:
        f = self.algebra.field
        v = f.varr(vec).reshape(-1)
        if v.shape[0] != self.cycles.ambient_dim:
            raise DimensionMismatch("vector has wrong chain degree")
        residue, _ = self.boundaries.reduce(v)
        coords = residue[list(self.rep_pivots)].copy()
        recon = f.matmul(coords.reshape(1, -1), self.reps.data).reshape(-1)
        if not np.array_equal(residue, recon):
            word = "cycle" if self.kind == "homology" else "cocycle"
            raise DerinvError(f"vector is not a {word} in degree {self.degree}")
        return coords

    def rep_vector(self, idx: int) -> np.ndarray:
        return self.reps.data[idx]

    def cochain(self, idx: int) -> Cochain:
        if self.kind != "cohomology":
            raise DerinvError("chain classes do not lift to cochains")
        return Cochain.from_flat(self.algebra, self.degree, self.reps.data[idx])

    def cochains(self) -> list[Cochain]:
        return [self.cochain(i) for i in range(self.dim)]


def _leading_cols(basis: Mat) -> np.ndarray:
    if basis.rows == 0:
        return np.zeros(0, dtype=np.int64)
    return np.argmax(basis.data != 0, axis=1)


def _quotient_basis(algebra: Algebra, degree: int, kind: str,
                    cycles: Subspace, boundaries: Subspace) -> HomologyBasis:
    f = algebra.field
    piv_z = _leading_cols(cycles.basis)
    piv_b = set(int(c) for c in _leading_cols(boundaries.basis))
    if boundaries.dim:
        if not piv_b.issubset(set(int(c) for c in piv_z)):
            raise InvariantViolation("boundary space not inside cycle space")
        # one-shot reduction of every boundary row against the cycle RREF
        combo = f.matmul(boundaries.basis.data[:, piv_z], cycles.basis.data)
        if not np.array_equal(combo, boundaries.basis.data):
            raise InvariantViolation("boundary space not inside cycle space")
    keep = [i for i, c in enumerate(piv_z) if int(c) not in piv_b]
    reps = Mat(f, cycles.basis.data[keep]) if keep else Mat.zeros(f, 0, cycles.ambient_dim)
    rep_pivots = tuple(int(piv_z[i]) for i in keep)
    return HomologyBasis(algebra, degree, kind, cycles, boundaries, rep_pivots, reps)


def hh_homology(algebra: Algebra, m: int, size_cap: int | None = None) -> HomologyBasis:
    """HH_m as a quotient of the degree-m cycle space of the bar complex."""
    if m < 0:
        raise ValueError("m must be >= 0")
    f, d = algebra.field, algebra.dim
    # the widest matrix touched is b_{m+1} with d^(2m+3) entries
    _check_cap(d ** (2 * m + 3), resolve_size_cap(size_cap), f"boundary matrix b_{m + 1}")
    key = ("hh_homology", m)
    cached = algebra._cache.get(key)
    if cached is not None:
        return cached
    if m == 0:
        cycles = Subspace.full(f, d)
        b1 = boundary_matrix(algebra, 1, size_cap)
        boundaries = Subspace.from_rows(f, Mat(f, b1.data.T))
        if boundaries != algebra.commutator_space():
            raise InvariantViolation("image of b_1 differs from the commutator space")
    else:
        bm = boundary_matrix(algebra, m, size_cap)
        cycles = Subspace(f, bm.cols, bm.kernel())
        bnext = boundary_matrix(algebra, m + 1, size_cap)
        boundaries = Subspace.from_rows(f, Mat(f, bnext.data.T))
    out = _quotient_basis(algebra, m, "homology", cycles, boundaries)
    algebra._cache[key] = out
    return out


def hh_cohomology(algebra: Algebra, m: int, size_cap: int | None = None) -> HomologyBasis:
    """HH^m as a quotient of the degree-m cocycle space."""
    if m < 0:
        raise ValueError("m must be >= 0")
    d = algebra.dim
    _check_cap(
        d ** (2 * m + 3), resolve_size_cap(size_cap), f"coboundary matrix on degree {m}"
    )
    key = ("hh_cohomology", m)
    cached = algebra._cache.get(key)
    if cached is not None:
        return cached
    f = algebra.field
    delta = coboundary_matrix(algebra, m, size_cap)
    cycles = Subspace(f, delta.cols, delta.kernel())
    if m == 0:
        boundaries = Subspace.zero(f, delta.cols)
    else:
        prev = coboundary_matrix(algebra, m - 1, size_cap)
        boundaries = Subspace.from_rows(f, Mat(f, prev.data.T))
    out = _quotient_basis(algebra, m, "cohomology", cycles, boundaries)
    algebra._cache[key] = out
    return out


def pairing(f: Cochain, chain: np.ndarray) -> int:
    """(f, a0 x a1 .. x am) = (a0, f(a1 .. am)) via the symmetrizing form."""
    a = f.algebra
    gram = a.require_form().gram
    fld = a.field
    chain = fld.varr(chain).reshape(-1)
    if chain.shape[0] != a.dim ** (f.arity + 1):
        raise DimensionMismatch("chain degree does not match cochain arity")
    weights = fld.matmul(gram.data, f.matrix.data).reshape(-1)
    return fld.vdot(chain, weights)


def pairing_gram(algebra: Algebra, m: int, size_cap: int | None = None) -> Mat:
    """Gram matrix of the HH^m x HH_m pairing on canonical representatives.

    Square and invertible for a symmetric algebra; raises
    DegeneratePairing otherwise.
    """
    key = ("pairing_gram", m)
    cached = algebra._cache.get(key)
    if cached is not None:
        return cached
    algebra.require_form()
    coh = hh_cohomology(algebra, m, size_cap)
    hom = hh_homology(algebra, m, size_cap)
    f = algebra.field
    rows = []
    for i in range(coh.dim):
        fc = coh.cochain(i)
        rows.append([pairing(fc, hom.rep_vector(j)) for j in range(hom.dim)])
    g = Mat(f, np.array(rows, dtype=np.int64).reshape(coh.dim, hom.dim))
    if g.rows != g.cols:
        raise DegeneratePairing(f"HH^{m} and HH_{m} have different dimensions {g.rows} vs {g.cols}")
    if g.rows and g.rank() < g.rows:
        raise DegeneratePairing(f"degree {m} pairing matrix is singular")
    algebra._cache[key] = g
    return g


def cup(f: Cochain, g: Cochain, size_cap: int | None = None) -> Cochain:
    """Cup product: (f cup g)(a1 .. a_{m+n}) = f(a1 .. a_m) g(.. a_{m+n})."""
    if f.algebra is not g.algebra:
        raise DimensionMismatch("cochains over different algebras")
    a = f.algebra
    fld, d = a.field, a.dim
    arity = f.arity + g.arity
    _check_cap(d * d * d**arity, resolve_size_cap(size_cap), "cup product tensor")
    big = field_kron(fld, f.matrix.data, g.matrix.data)  # d^2 x d^arity
    out = fld.matmul(a.mult_matrix.data.T, big)
    return Cochain(a, arity, Mat(fld, out))


def cup_power(f: Cochain, k: int, size_cap: int | None = None) -> Cochain:
    """k-fold cup power of f; k >= 1."""
    if k < 1:
        raise ValueError("cup power needs k >= 1")
    out = f
    for _ in range(k - 1):
        out = cup(out, f, size_cap)
    return out
