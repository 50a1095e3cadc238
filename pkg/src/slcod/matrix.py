"""Dense exact linear algebra over a :class:`~slcod.field.FiniteField`.

The array-level functions (``rref``, ``nullspace_codes``, ``charpoly_codes``,
``eigenbasis_codes``) work on numpy ``int64`` arrays of element codes and are
what the Lie-algebra layer uses internally.  :class:`Mat` and
:class:`Polynomial` are the value types exposed to callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .field import FieldElement, FiniteField


# -- array level -------------------------------------------------------------

def rref(F: FiniteField, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(a, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        if a[r, c] != F.one_code:
            a[r] = F.vmul(a[r], F.inv(int(a[r, c])))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = F.vsub(a[hit], F.vmul(col[hit][:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a[:r] if r else a[:0], pivots


def rank_codes(F: FiniteField, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(F, a)[1])


def nullspace_codes(F: FiniteField, a: np.ndarray) -> np.ndarray:
    """Basis of the right kernel as rows, in reduced form (free variable = 1)."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64) * F.one_code
    r, pivots = rref(F, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = F.one_code
        for i, pc in enumerate(pivots):
            basis[k, pc] = F.neg(int(r[i, f]))
    return basis


def solve_codes(F: FiniteField, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution x of a x = b (b may be a matrix of right-hand sides), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(F, aug)
    n = a.shape[1]
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n:]
    return x[:, 0] if vec else x


def inverse_codes(F: FiniteField, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64) * F.one_code], axis=1)
    r, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return r[:n, n:]


def _hessenberg(F: FiniteField, a: np.ndarray) -> np.ndarray:
    h = np.array(a, dtype=np.int64, copy=True)
    n = h.shape[0]
    for m in range(1, n - 1):
        nz = np.flatnonzero(h[m:, m - 1])
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            h[[i, m]] = h[[m, i]]
            h[:, [i, m]] = h[:, [m, i]]
        mult = F.vmul(h[m + 1:, m - 1], F.inv(int(h[m, m - 1])))
        if not mult.any():
            continue
        h[m + 1:] = F.vsub(h[m + 1:], F.vmul(mult[:, None], h[m][None, :]))
        h[:, m] = F.vadd(h[:, m], F.matmul(h[:, m + 1:], mult[:, None])[:, 0])
    return h


def charpoly_codes(F: FiniteField, a: np.ndarray) -> np.ndarray:
    """Coefficients (ascending) of det(tI - a), via Hessenberg reduction."""
    n = a.shape[0]
    h = _hessenberg(F, a)
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = F.one_code
    for m in range(1, n + 1):
        prev = polys[m - 1]
        shifted = np.concatenate([[0], prev[:-1]])
        cur = F.vsub(shifted, F.vmul(prev, int(h[m - 1, m - 1])))
        t = F.one_code
        for i in range(m - 1, 0, -1):
            t = F.mul(t, int(h[i, i - 1]))
            coef = F.mul(int(h[i - 1, m - 1]), t)
            if coef:
                cur = F.vsub(cur, F.vmul(polys[i - 1], coef))
        polys[m] = cur
    return polys[n]


def _eval_poly(F: FiniteField, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), int(c))
    return acc


def eigenvalues_codes(F: FiniteField, a: np.ndarray) -> list[int]:
    """Distinct eigenvalues in F, by scanning the roots of the characteristic polynomial."""
    cp = charpoly_codes(F, a)
    return [x for x in range(F.q) if _eval_poly(F, cp, x) == 0]


def eigenbasis_codes(F: FiniteField, family: Sequence[np.ndarray]
                     ) -> Optional[tuple[np.ndarray, list[tuple[int, ...]]]]:
    """Common eigenbasis of a commuting family by eigenspace refinement.

    Returns ``(V, tuples)`` with eigenvectors as the *rows* of V, or None when
    some member is not diagonalisable over F.
    """
    n = family[0].shape[0]
    blocks: list[tuple[np.ndarray, tuple[int, ...]]] = [
        (np.eye(n, dtype=np.int64) * F.one_code, ())]
    for op in family:
        lams = eigenvalues_codes(F, op)
        refined = []
        for v, tag in blocks:
            # v holds a basis of the current joint eigenspace as rows
            av = F.matmul(v, op.T)
            found = 0
            for lam in lams:
                diff = F.vsub(av, F.vmul(v, lam))
                c = nullspace_codes(F, diff.T)
                if c.shape[0]:
                    refined.append((F.matmul(c, v), tag + (lam,)))
                    found += c.shape[0]
                if found == v.shape[0]:
                    break
            if found != v.shape[0]:
                return None
        blocks = refined
    vecs = np.concatenate([v for v, _ in blocks], axis=0)
    tags = [tag for v, tag in blocks for _ in range(v.shape[0])]
    return vecs, tags


# -- value types -------------------------------------------------------------

class Mat:
    """An immutable dense matrix over a finite field."""

    __slots__ = ("field", "data")

    def __init__(self, field: FiniteField, data):
        self.field = field
        if isinstance(data, np.ndarray) and data.dtype == np.int64:
            arr = data.copy()
        else:
            rows = [list(r) for r in data]
            arr = np.array([[_code(field, x) for x in r] for r in rows], dtype=np.int64)
            if arr.ndim != 2:
                arr = arr.reshape(len(rows), -1)
        arr.setflags(write=False)
        self.data = arr

    @classmethod
    def identity(cls, F: FiniteField, n: int) -> "Mat":
        return cls(F, np.eye(n, dtype=np.int64) * F.one_code)

    @classmethod
    def zeros(cls, F: FiniteField, rows: int, cols: Optional[int] = None) -> "Mat":
        return cls(F, np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def diag(cls, F: FiniteField, entries: Sequence) -> "Mat":
        n = len(entries)
        a = np.zeros((n, n), dtype=np.int64)
        for i, x in enumerate(entries):
            a[i, i] = _code(F, x)
        return cls(F, a)

    @classmethod
    def unit(cls, F: FiniteField, n: int, i: int, j: int) -> "Mat":
        a = np.zeros((n, n), dtype=np.int64)
        a[i, j] = F.one_code
        return cls(F, a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def _check(self, other: "Mat") -> None:
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError("matrices over different fields")

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, int(self.data[i, j]))

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat(self.field, self.field.vadd(self.data, other.data))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat(self.field, self.field.vsub(self.data, other.data))

    def __neg__(self) -> "Mat":
        return Mat(self.field, self.field.vneg(self.data))

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Mat(self.field, self.field.matmul(self.data, other.data))

    def __mul__(self, scalar) -> "Mat":
        if isinstance(scalar, Mat):
            return NotImplemented
        return Mat(self.field, self.field.vmul(self.data, _code(self.field, scalar)))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Mat.identity(self.field, self.rows)
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, Mat) and self.field == other.field
                and self.shape == other.shape and bool(np.array_equal(self.data, other.data)))

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.data.tobytes()))

    @property
    def T(self) -> "Mat":
        return Mat(self.field, np.ascontiguousarray(self.data.T))

    def trace(self) -> FieldElement:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return FieldElement(self.field, int(self.field.vsum(np.diagonal(self.data))))

    def inverse(self) -> "Mat":
        return Mat(self.field, inverse_codes(self.field, self.data))

    def rank(self) -> int:
        return rank_codes(self.field, self.data)

    def det(self) -> FieldElement:
        F = self.field
        n = self.rows
        if self.shape != (n, n):
            raise ValueError("determinant of a non-square matrix")
        a = self.data.copy()
        d = F.one_code
        for c in range(n):
            nz = np.flatnonzero(a[c:, c])
            if nz.size == 0:
                return F.zero
            piv = c + int(nz[0])
            if piv != c:
                a[[c, piv]] = a[[piv, c]]
                d = F.neg(d)
            pv = int(a[c, c])
            d = F.mul(d, pv)
            below = a[c + 1:, c]
            if below.any():
                f = F.vmul(below, F.inv(pv))
                a[c + 1:] = F.vsub(a[c + 1:], F.vmul(f[:, None], a[c][None, :]))
        return FieldElement(F, d)

    def is_zero(self) -> bool:
        return not self.data.any()

    def flat(self) -> np.ndarray:
        return self.data.reshape(-1)

    def tolist(self) -> list[list[FieldElement]]:
        return [[FieldElement(self.field, int(x)) for x in r] for r in self.data]

    def to_json(self) -> dict:
        F = self.field
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[list(F.coeffs_of(int(x))) for x in r] for r in self.data]}

    @classmethod
    def from_json(cls, F: FiniteField, obj: dict) -> "Mat":
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"matrix entries do not match declared shape {rows}x{cols}")
        a = np.zeros((rows, cols), dtype=np.int64)
        for i, r in enumerate(entries):
            for j, e in enumerate(r):
                if len(e) != F.m:
                    raise ValueError(f"element {e} has {len(e)} coefficients, field needs {F.m}")
                a[i, j] = F.code_of(e)
        return cls(F, a)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(FieldElement(self.field, int(x))) for x in r)
                         for r in self.data)
        return f"Mat[{body}]"


def _code(F: FiniteField, x) -> int:
    if isinstance(x, FieldElement):
        if x.field != F:
            raise ValueError(f"element of {x.field!r} used in {F!r}")
        return x.code
    if isinstance(x, (int, np.integer)):
        return F.embed_code(int(x))
    return F(x).code


def kron(a: Mat, b: Mat) -> Mat:
    """Block matrix [a_ij * b]."""
    a._check(b)
    F = a.field
    # blocks[i, j, k, l] = a[i, j] * b[k, l]; row index i*rows_b + k
    blocks = F.vmul(a.data[:, :, None, None], b.data[None, None, :, :])
    r = a.rows * b.rows
    c = a.cols * b.cols
    return Mat(F, np.ascontiguousarray(blocks.transpose(0, 2, 1, 3).reshape(r, c)))


def nullspace(a: Mat) -> list[list[FieldElement]]:
    """Reduced basis of the right kernel of ``a``."""
    basis = nullspace_codes(a.field, a.data)
    return [[FieldElement(a.field, int(x)) for x in row] for row in basis]


@dataclass(frozen=True)
class Polynomial:
    """A polynomial over a finite field; ``coeffs`` are codes, lowest degree first."""

    field: FiniteField
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        if any(x < 0 or x >= self.field.q for x in c):
            raise ValueError("coefficients must be field codes; use from_elements for integers")
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_elements(cls, F: FiniteField, coeffs: Iterable) -> "Polynomial":
        return cls(F, tuple(_code(F, x) for x in coeffs))

    @classmethod
    def from_roots(cls, F: FiniteField, roots: Iterable) -> "Polynomial":
        p = cls(F, (F.one_code,))
        for r in roots:
            p = p * cls(F, (F.neg(_code(F, r)), F.one_code))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> FieldElement:
        return FieldElement(self.field, _eval_poly(self.field, self.coeffs, _code(self.field, x)))

    def eval_matrix(self, a: Mat) -> Mat:
        F = self.field
        n = a.rows
        acc = Mat.zeros(F, n)
        ident = Mat.identity(F, n)
        for c in reversed(self.coeffs):
            acc = acc @ a + ident * FieldElement(F, c)
        return acc

    def roots(self) -> list[FieldElement]:
        return [FieldElement(self.field, x) for x in range(self.field.q)
                if _eval_poly(self.field, self.coeffs, x) == 0]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial(F, tuple(F.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, tuple(self.field.neg(x) for x in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Polynomial(F, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Polynomial(F, tuple(out))

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = F.inv(other.coeffs[-1])
        quot = [0] * max(len(rem) - d, 1)
        while len(rem) - 1 >= d and rem:
            shift = len(rem) - 1 - d
            f = F.mul(rem[-1], inv_lead)
            quot[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = F.sub(rem[shift + i], F.mul(f, c))
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(F, tuple(quot)), Polynomial(F, tuple(rem))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = str(FieldElement(self.field, c))
            if self.field.m > 1 and "+" in cs:
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if c == self.field.one_code else f"{cs}*{mono}")
        return " + ".join(terms)


def char_min_poly(a: Mat) -> tuple[Polynomial, Polynomial]:
    """Characteristic and minimal polynomial of a square matrix."""
    F = a.field
    n = a.rows
    if a.shape != (n, n):
        raise ValueError("characteristic polynomial of a non-square matrix")
    cp = Polynomial(F, tuple(int(x) for x in charpoly_codes(F, a.data)))
    # least k with I, A, ..., A^k dependent
    powers = [np.eye(n, dtype=np.int64).reshape(-1) * F.one_code]
    cur = np.eye(n, dtype=np.int64) * F.one_code
    for k in range(1, n + 1):
        cur = F.matmul(cur, a.data)
        powers.append(cur.reshape(-1))
        ker = nullspace_codes(F, np.stack(powers, axis=1))
        if ker.shape[0]:
            rel = ker[0]
            lead = int(rel[-1])
            rel = F.vmul(rel, F.inv(lead))
            return cp, Polynomial(F, tuple(int(x) for x in rel))
    raise AssertionError("Cayley-Hamilton violated")  # unreachable


def diagonalize(a: Mat) -> Optional[tuple[list[FieldElement], Mat]]:
    """Eigenvalues and eigenvector columns V with a == V diag(eig) V^-1, or None."""
    F = a.field
    res = eigenbasis_codes(F, [a.data])
    if res is None:
        return None
    vecs, tags = res
    return [FieldElement(F, t[0]) for t in tags], Mat(F, np.ascontiguousarray(vecs.T))


def is_diagonalizable(a: Mat) -> bool:
    return diagonalize(a) is not None


def simultaneous_eigenbasis(family: Sequence[Mat]
                            ) -> Optional[tuple[Mat, list[tuple[FieldElement, ...]]]]:
    """Common eigenvector columns and their eigenvalue tuples for a commuting family."""
    if not family:
        raise ValueError("empty family")
    F = family[0].field
    n = family[0].rows
    for x in family:
        family[0]._check(x)
        if x.shape != (n, n):
            raise ValueError("family members must be square of equal size")
    for i, x in enumerate(family):
        for y in family[i + 1:]:
            if (x @ y) != (y @ x):
                raise ValueError("family is not commuting")
    res = eigenbasis_codes(F, [x.data for x in family])
    if res is None:
        return None
    vecs, tags = res
    return (Mat(F, np.ascontiguousarray(vecs.T)),
            [tuple(FieldElement(F, c) for c in t) for t in tags])
