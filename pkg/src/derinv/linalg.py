"""Exact dense linear algebra over GF(p^e).

Matrices are immutable wrappers around int8 code arrays.  Row reduction
is leftmost-pivot RREF with unit leading entries, so the reduced form of
a row space is canonical and subspaces compare by array equality.  For
GF(2) rows are bit-packed during elimination; everything else runs on
the generic table/modular path.  Matrix products go through float64
BLAS, which is exact at these sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NoSolution, SingularForm, SingularMatrix
from .fields import CODE_DTYPE, Field


class Mat:
    """Immutable matrix of field-element codes."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data: np.ndarray):
        arr = field.varr(data)
        if arr.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-D, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr, dtype=CODE_DTYPE)
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    # -- constructors --

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Mat":
        return Mat(field, np.zeros((rows, cols), dtype=CODE_DTYPE))

    @staticmethod
    def identity(field: Field, n: int) -> "Mat":
        return Mat(field, np.eye(n, dtype=CODE_DTYPE))

    @staticmethod
    def from_rows(field: Field, rows: Sequence[Sequence[int]]) -> "Mat":
        return Mat(field, np.array(rows, dtype=np.int64).reshape(len(rows), -1))

    # -- basic dims --

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def _check_same(self, other: "Mat") -> None:
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape mismatch {self.shape} vs {other.shape}")

    # -- arithmetic --

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat(self.field, self.field.vadd(self.data, other.data))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat(self.field, self.field.vsub(self.data, other.data))

    def __neg__(self) -> "Mat":
        return Mat(self.field, self.field.vneg(self.data))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        return Mat(self.field, self.field.matmul(self.data, other.data))

    def scale(self, c: int) -> "Mat":
        return Mat(self.field, self.field.vscale(c, self.data))

    def mul_vec(self, v: np.ndarray) -> np.ndarray:
        """Matrix times column vector of codes."""
        v = self.field.varr(v).reshape(-1)
        if v.shape[0] != self.cols:
            raise DimensionMismatch(f"vector length {v.shape[0]} vs cols {self.cols}")
        return self.field.matmul(self.data, v.reshape(-1, 1)).reshape(-1)

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.data.T)

    def frobenius(self, n: int = 1) -> "Mat":
        return Mat(self.field, self.field.vfrob(self.data, n))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.shape == other.shape
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.field, self.data.tobytes(), self.shape))

    def __repr__(self) -> str:
        return f"Mat({self.field}, {self.rows}x{self.cols})"

    # -- elimination --

    def rref(self) -> tuple["Mat", int, tuple[int, ...]]:
        """Reduced row echelon form: (R, rank, pivot columns)."""
        out, rank, pivots = _rref_array(self.field, self.data)
        return Mat(self.field, out), rank, pivots

    def rank(self) -> int:
        a = self.data if self.rows <= self.cols else self.data.T
        return _rref_array(self.field, a)[1]

    def kernel(self) -> "Mat":
        """Canonical RREF basis (rows) of the right null space."""
        R, rank, pivots = _rref_array(self.field, self.data)
        f = self.field
        free = [j for j in range(self.cols) if j not in set(pivots)]
        if not free:
            return Mat.zeros(f, 0, self.cols)
        basis = np.zeros((len(free), self.cols), dtype=CODE_DTYPE)
        if rank:
            block = f.vneg(R[:rank][:, free])  # rank x len(free)
            basis[np.arange(len(free))[:, None], np.array(pivots)[None, :]] = block.T
        basis[np.arange(len(free)), free] = 1
        out, _, _ = _rref_array(f, basis)
        return Mat(f, out[: len(free)])

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        """One solution x of self @ x = b, or None if inconsistent."""
        f = self.field
        b = f.varr(b).reshape(-1)
        if b.shape[0] != self.rows:
            raise DimensionMismatch("rhs length mismatch")
        aug = np.concatenate([self.data, b.reshape(-1, 1)], axis=1)
        R, rank, pivots = _rref_array(f, aug)
        if pivots and pivots[-1] == self.cols:
            return None
        x = np.zeros(self.cols, dtype=CODE_DTYPE)
        if rank:
            x[list(pivots)] = R[:rank, self.cols]
        return x

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise SingularMatrix("only square matrices invert")
        n = self.rows
        aug = np.concatenate([self.data, np.eye(n, dtype=CODE_DTYPE)], axis=1)
        R, rank, pivots = _rref_array(self.field, aug)
        if rank < n or pivots[:n] != tuple(range(n)):
            raise SingularMatrix(f"rank {rank} < {n}")
        return Mat(self.field, R[:n, n:])


def _rref_array(f: Field, a: np.ndarray) -> tuple[np.ndarray, int, tuple[int, ...]]:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a.astype(CODE_DTYPE).copy(), 0, ()
    if f.p == 2 and f.e == 1:
        return _rref_gf2(a)
    return _rref_generic(f, a)


def _rref_gf2(a: np.ndarray) -> tuple[np.ndarray, int, tuple[int, ...]]:
    r, c = a.shape
    P = np.packbits(a.astype(np.uint8), axis=1)
    row = 0
    pivots: list[int] = []
    for col in range(c):
        byte, shift = col >> 3, 7 - (col & 7)
        colbits = (P[row:, byte] >> shift) & 1
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            P[[row, pr]] = P[[pr, row]]
        mask = ((P[:, byte] >> shift) & 1).astype(bool)
        mask[row] = False
        if mask.any():
            P[mask] ^= P[row]
        pivots.append(col)
        row += 1
        if row == r:
            break
    out = np.unpackbits(P, axis=1, count=c).astype(CODE_DTYPE)
    return out, row, tuple(pivots)


def _rref_generic(f: Field, a: np.ndarray) -> tuple[np.ndarray, int, tuple[int, ...]]:
    M = a.astype(CODE_DTYPE).copy()
    r, c = M.shape
    row = 0
    pivots: list[int] = []
    for col in range(c):
        sub = M[row:, col]
        nz = np.flatnonzero(sub)
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            M[[row, pr]] = M[[pr, row]]
        pv = int(M[row, col])
        if pv != 1:
            M[row, col:] = f.vscale(f.inv(pv), M[row, col:])
        sel = np.flatnonzero(M[:, col])
        sel = sel[sel != row]
        if sel.size:
            factors = M[sel, col]
            if f.e == 1:
                upd = (
                    M[sel, col:].astype(np.int32)
                    - factors.astype(np.int32)[:, None] * M[row, col:].astype(np.int32)
                ) % f.p
                M[sel, col:] = upd.astype(CODE_DTYPE)
            else:
                prod = f.vmul(factors[:, None], M[row, col:][None, :])
                M[sel, col:] = f.vsub(M[sel, col:], prod)
        pivots.append(col)
        row += 1
        if row == r:
            break
    return M, row, tuple(pivots)


def field_kron(f: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of code arrays with field multiplication."""
    out = f.vmul(a[:, None, :, None], b[None, :, None, :])
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def vstack(mats: Sequence[Mat]) -> Mat:
    f = mats[0].field
    return Mat(f, np.concatenate([m.data for m in mats], axis=0))


def hstack(mats: Sequence[Mat]) -> Mat:
    f = mats[0].field
    return Mat(f, np.concatenate([m.data for m in mats], axis=1))


# -- subspaces --


@dataclass(frozen=True)
class Subspace:
    """Row space with a canonical RREF basis; equality is basis equality."""

    field: Field
    ambient_dim: int
    basis: Mat  # dim x ambient_dim, RREF, no zero rows

    @staticmethod
    def from_rows(field: Field, rows: Mat | np.ndarray | Sequence[Sequence[int]]) -> "Subspace":
        if isinstance(rows, Mat):
            field = rows.field
            arr = rows.data
        else:
            arr = field.varr(np.array(rows, dtype=np.int64))
            if arr.ndim == 1:
                arr = arr.reshape(1, -1)
        if arr.shape[0] == 0:
            return Subspace.zero(field, arr.shape[1])
        R, rank, _ = _rref_array(field, arr)
        return Subspace(field, arr.shape[1], Mat(field, R[:rank]))

    @staticmethod
    def zero(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Mat.zeros(field, 0, ambient_dim))

    @staticmethod
    def full(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Mat.identity(field, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_zero(self) -> bool:
        return self.dim == 0

    def _pivots(self) -> np.ndarray:
        return np.array([int(np.flatnonzero(r)[0]) for r in self.basis.data], dtype=np.int64)

    def reduce(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(residue, coefficients): v = coeffs @ basis + residue."""
        f = self.field
        v = f.varr(v).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector not in ambient space")
        if self.dim == 0:
            return v.copy(), np.zeros(0, dtype=CODE_DTYPE)
        coeffs = v[self._pivots()]
        combo = f.matmul(coeffs.reshape(1, -1), self.basis.data).reshape(-1)
        return f.vsub(v, combo), coeffs

    def contains(self, v: np.ndarray) -> bool:
        residue, _ = self.reduce(v)
        return not residue.any()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(r) for r in other.basis.data)

    def _check(self, other: "Subspace") -> None:
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces in different ambient spaces")

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        stacked = np.concatenate([self.basis.data, other.basis.data], axis=0)
        if stacked.shape[0] == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        R, rank, _ = _rref_array(self.field, stacked)
        return Subspace(self.field, self.ambient_dim, Mat(self.field, R[:rank]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        f = self.field
        # x = a @ U = b @ V: solve [U^T | -V^T] (a; b) = 0
        stacked = np.concatenate([self.basis.data.T, f.vneg(other.basis.data.T)], axis=1)
        K = Mat(f, stacked).kernel()
        if K.rows == 0:
            return Subspace.zero(f, self.ambient_dim)
        combos = f.matmul(K.data[:, : self.dim], self.basis.data)
        R, rank, _ = _rref_array(f, combos)
        return Subspace(f, self.ambient_dim, Mat(f, R[:rank]))

    def frobenius_image(self, n: int) -> "Subspace":
        """Entrywise x -> x^(p^n); RREF shape is preserved."""
        return Subspace(self.field, self.ambient_dim, self.basis.frobenius(n))

    def map_rows(self, m: Mat) -> "Subspace":
        """Image of this subspace under x -> m @ x (row basis transported)."""
        if m.cols != self.ambient_dim:
            raise DimensionMismatch("map domain mismatch")
        if self.dim == 0:
            return Subspace.zero(self.field, m.rows)
        img = self.field.matmul(self.basis.data, m.data.T)
        R, rank, _ = _rref_array(self.field, img)
        return Subspace(self.field, m.rows, Mat(self.field, R[:rank]))


def orthogonal_complement(gram: Mat, u: Subspace) -> Subspace:
    """{x : (b, x) = 0 for all b in u}, pairing (b, x) = b @ gram @ x."""
    if gram.rows != gram.cols or gram.cols != u.ambient_dim:
        raise DimensionMismatch("gram/subspace shape mismatch")
    if u.dim == 0:
        return Subspace.full(u.field, u.ambient_dim)
    prod = Mat(u.field, u.field.matmul(u.basis.data, gram.data))
    K = prod.kernel()
    return Subspace(u.field, u.ambient_dim, K)


# -- semilinear operators --


@dataclass(frozen=True)
class SemilinearOperator:
    """x -> matrix @ Frobenius^twist(x); f(c*x) = c^(p^twist) * f(x)."""

    matrix: Mat
    twist: int

    @property
    def field(self) -> Field:
        return self.matrix.field

    def apply(self, v: np.ndarray) -> np.ndarray:
        f = self.field
        v = f.vfrob(f.varr(v).reshape(-1), self.twist)
        return self.matrix.mul_vec(v)

    def image(self) -> Subspace:
        if self.matrix.cols == 0:
            return Subspace.zero(self.field, self.matrix.rows)
        return Subspace.from_rows(self.field, Mat(self.field, self.matrix.data.T))

    def kernel(self) -> Subspace:
        K = self.matrix.kernel()
        return Subspace(self.field, self.matrix.cols, K).frobenius_image(-self.twist)

    def compose(self, other: "SemilinearOperator") -> "SemilinearOperator":
        """self after other."""
        m = self.matrix @ other.matrix.frobenius(self.twist)
        return SemilinearOperator(m, self.twist + other.twist)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemilinearOperator):
            return NotImplemented
        e = self.field.e
        return self.matrix == other.matrix and (self.twist - other.twist) % e == 0


def semilinear_solve(gram: Mat, rhs: np.ndarray, twist: int) -> np.ndarray:
    """Unique w with (w, b_i) = Fr^(-twist)(rhs_i), pairing via gram.

    (w, b_i) means w^T @ gram column i.  Raises SingularForm when gram
    is not invertible.
    """
    if gram.rows != gram.cols:
        raise DimensionMismatch("gram matrix must be square")
    f = gram.field
    rhs = f.vfrob(f.varr(rhs).reshape(-1), -twist)
    if gram.rank() < gram.rows:
        raise SingularForm("gram matrix is singular")
    sol = gram.T.solve(rhs)
    assert sol is not None
    return sol


def solve_strict(m: Mat, b: np.ndarray) -> np.ndarray:
    x = m.solve(b)
    if x is None:
        raise NoSolution("inconsistent linear system")
    return x
