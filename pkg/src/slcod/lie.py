"""The Lie algebra sl_n(F): bracket, Killing form and Cartan subalgebra tests.

Matrices in sl_n are handled as row-major flattened vectors of length n^2.
Whenever the adjoint action is needed on sl_n itself we use the coordinates
"off-diagonal entries, then the first n-1 diagonal entries", which determine
a traceless matrix uniquely.

Conventions: the adjoint operator of h is ``x -> [x, h]`` so that a root
``alpha`` satisfies ``[x, h] = alpha(h) x``.  Roots are stored as tuples of
eigenvalues against the stored basis of H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .field import FieldElement, FiniteField
from .matrix import Mat, eigenbasis_codes, nullspace_codes, rank_codes, rref


class NotClosedError(ValueError):
    """A span that was required to be a subalgebra is not bracket-closed."""


# -- low level helpers -------------------------------------------------------

def _bracket_codes(F: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return F.vsub(F.matmul(a, b), F.matmul(b, a))


def _pair_brackets(F: FiniteField, n: int, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """All brackets [x_i, y_j] of two stacks of flattened matrices, as rows."""
    if xs.shape[0] == 0 or ys.shape[0] == 0:
        return np.zeros((0, n * n), dtype=np.int64)
    a = xs.reshape(-1, 1, n, n)
    b = ys.reshape(1, -1, n, n)
    return _bracket_codes(F, a, b).reshape(-1, n * n)


def ad_gl(F: FiniteField, h: np.ndarray) -> np.ndarray:
    """Matrix of x -> [x, h] on row-major vec(x) in gl_n."""
    n = h.shape[0]
    ident = np.eye(n, dtype=np.int64) * F.one_code
    left = F.vmul(ident[:, None, :, None], h.T[None, :, None, :]).reshape(n * n, n * n)
    right = F.vmul(h[:, None, :, None], ident[None, :, None, :]).reshape(n * n, n * n)
    return F.vsub(left, right)


@lru_cache(maxsize=None)
def sl_coordinates(n: int, F: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    """``(pick, embed)``: coordinate indices into vec(x), and the n^2 x (n^2-1) basis matrix."""
    pick = [i * n + j for i in range(n) for j in range(n) if i != j]
    pick += [i * n + i for i in range(n - 1)]
    embed = np.zeros((n * n, n * n - 1), dtype=np.int64)
    for k, idx in enumerate(pick):
        embed[idx, k] = F.one_code
        if k >= n * (n - 1):
            embed[(n - 1) * n + (n - 1), k] = F.neg(F.one_code)
    pick = np.array(pick)
    pick.setflags(write=False)
    embed.setflags(write=False)
    return pick, embed


def ad_sl(F: FiniteField, h: np.ndarray) -> np.ndarray:
    """Matrix of x -> [x, h] on sl_n in the standard coordinates."""
    n = h.shape[0]
    pick, embed = sl_coordinates(n, F)
    return F.matmul(ad_gl(F, h)[pick], embed)


def sl_basis(n: int, F: FiniteField) -> list[Mat]:
    _, embed = sl_coordinates(n, F)
    return [Mat(F, np.ascontiguousarray(col.reshape(n, n))) for col in embed.T]


# -- public operations -------------------------------------------------------

def bracket(a: Mat, b: Mat) -> Mat:
    if a.shape != b.shape or a.rows != a.cols:
        raise ValueError(f"bracket needs square matrices of one shape, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def killing(a: Mat, b: Mat) -> FieldElement:
    """The Killing form 2n Tr(AB) on sl_n."""
    n = a.rows
    F = a.field
    if a.shape != (n, n) or b.shape != (n, n):
        raise ValueError("Killing form needs two n x n matrices")
    if (2 * n) % F.p == 0:
        raise ValueError(f"char {F.p} divides 2n = {2 * n}; the form is degenerate")
    if a.trace() or b.trace():
        raise ValueError("Killing form is defined on traceless matrices")
    return (a @ b).trace() * (2 * n)


def adjoint_trace_form(a: Mat, b: Mat) -> FieldElement:
    """Tr(ad a . ad b) computed from the adjoint representation on sl_n."""
    F = a.field
    prod = F.matmul(ad_sl(F, a.data), ad_sl(F, b.data))
    return FieldElement(F, int(F.vsum(np.diagonal(prod))))


class Subalgebra:
    """A linear span inside sl_n stored as a reduced echelon basis.

    ``closed`` records whether the span is closed under the bracket; the
    cartan tests refuse to run on spans that are not.
    """

    def __init__(self, n: int, field: FiniteField, vectors: np.ndarray):
        self.n = n
        self.field = field
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, n * n)
        tr = field.vsum(vectors[:, [i * n + i for i in range(n)]], axis=1) if vectors.size else []
        if np.any(np.asarray(tr) != 0):
            raise ValueError("basis matrices must be traceless")
        rows, pivots = rref(field, vectors) if vectors.shape[0] else (vectors[:0], [])
        rows.setflags(write=False)
        self.rows = rows
        self.pivots = pivots
        self.closed = self._is_closed()

    @classmethod
    def from_matrices(cls, mats: Sequence[Mat], n: Optional[int] = None,
                      field: Optional[FiniteField] = None) -> "Subalgebra":
        if not mats:
            if n is None or field is None:
                raise ValueError("empty span needs explicit n and field")
            return cls(n, field, np.zeros((0, n * n), dtype=np.int64))
        F = mats[0].field
        n = mats[0].rows
        for m in mats:
            if m.field != F:
                raise ValueError("mixed fields in span")
            if m.shape != (n, n):
                raise ValueError("span members must be square of equal size")
        return cls(n, F, np.stack([m.flat() for m in mats]))

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    @property
    def basis(self) -> list[Mat]:
        n = self.n
        return [Mat(self.field, np.ascontiguousarray(r.reshape(n, n))) for r in self.rows]

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Remainders of flattened matrices modulo this span."""
        F = self.field
        vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, self.n * self.n)
        if not self.pivots:
            return vecs
        return F.vsub(vecs, F.matmul(vecs[:, self.pivots], self.rows))

    def contains(self, x: Mat) -> bool:
        return not self.reduce(x.flat()).any()

    def _is_closed(self) -> bool:
        br = _pair_brackets(self.field, self.n, self.rows, self.rows)
        return not self.reduce(br).any()

    def is_abelian(self) -> bool:
        return not _pair_brackets(self.field, self.n, self.rows, self.rows).any()

    def conjugate(self, g: Mat, g_inv: Optional[Mat] = None) -> "Subalgebra":
        """The span of g x g^-1 over the basis."""
        F = self.field
        g_inv = g.inverse() if g_inv is None else g_inv
        mats = self.rows.reshape(-1, self.n, self.n)
        conj = F.matmul(F.matmul(g.data[None], mats), g_inv.data[None])
        return Subalgebra(self.n, F, conj.reshape(-1, self.n * self.n))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subalgebra) and self.n == other.n
                and self.field == other.field and np.array_equal(self.rows, other.rows))

    def __hash__(self) -> int:
        return hash((self.n, self.field, self.rows.tobytes()))

    def __repr__(self) -> str:
        return f"Subalgebra(n={self.n}, dim={self.dim}, over {self.field!r})"

    def to_json(self) -> dict:
        return {"n": self.n, "basis": [m.to_json() for m in self.basis]}

    @classmethod
    def from_json(cls, F: FiniteField, obj: dict) -> "Subalgebra":
        n = int(obj["n"])
        mats = [Mat.from_json(F, m) for m in obj["basis"]]
        for m in mats:
            if m.shape != (n, n):
                raise ValueError(f"basis matrix of shape {m.shape} in a subalgebra of sl_{n}")
        return cls.from_matrices(mats, n=n, field=F)


def span_close(mats: Sequence[Mat], strict: bool = True) -> Subalgebra:
    """Span of ``mats``; raises NotClosedError for non-subalgebras when strict."""
    sub = Subalgebra.from_matrices(mats)
    if strict and not sub.closed:
        raise NotClosedError("span is not closed under the bracket")
    return sub


def normalizer(h: Subalgebra) -> Subalgebra:
    """{x in sl_n : [x, H] in H}."""
    F, n = h.field, h.n
    nonpiv = [c for c in range(n * n) if c not in set(h.pivots)]
    blocks = [np.array([[F.one_code if c % (n + 1) == 0 else 0 for c in range(n * n)]],
                       dtype=np.int64)]
    for b in h.rows:
        m = ad_gl(F, b.reshape(n, n))
        if h.pivots:
            cond = F.vsub(m[nonpiv], F.matmul(h.rows[:, nonpiv].T, m[h.pivots]))
        else:
            cond = m
        blocks.append(cond)
    return Subalgebra(n, F, nullspace_codes(F, np.concatenate(blocks)))


def _require_closed(h: Subalgebra) -> None:
    if not h.closed:
        raise NotClosedError("subalgebra test on a span that is not bracket-closed")


def is_nilpotent(h: Subalgebra) -> bool:
    """Lower central series H, [H, H], [H, [H, H]], ... reaches zero."""
    _require_closed(h)
    F, n = h.field, h.n
    cur = h.rows
    while cur.shape[0]:
        nxt = _pair_brackets(F, n, h.rows, cur)
        nxt, _ = rref(F, nxt) if nxt.shape[0] else (nxt, [])
        if nxt.shape[0] == cur.shape[0]:
            return False
        cur = nxt
    return True


def is_cartan(h: Subalgebra) -> bool:
    _require_closed(h)
    return is_nilpotent(h) and normalizer(h).dim == h.dim


@dataclass
class RootDecomposition:
    """Root spaces of sl_n relative to an abelian H.

    ``spaces`` maps each root (a tuple of eigenvalue codes, one per basis
    vector of H) to a stack of flattened matrices spanning the root space.
    """

    cartan: Subalgebra
    spaces: dict[tuple[int, ...], np.ndarray]

    @property
    def field(self) -> FiniteField:
        return self.cartan.field

    @property
    def roots(self) -> list[tuple[FieldElement, ...]]:
        F = self.field
        return [tuple(FieldElement(F, c) for c in r) for r in self.spaces]

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.cartan.dim

    def space(self, root: Sequence) -> list[Mat]:
        key = tuple(x.code if isinstance(x, FieldElement) else int(x) for x in root)
        n = self.cartan.n
        return [Mat(self.field, np.ascontiguousarray(r.reshape(n, n))) for r in self.spaces[key]]

    def dimension(self) -> int:
        return sum(v.shape[0] for v in self.spaces.values())


def root_decomposition(h: Subalgebra) -> Optional[RootDecomposition]:
    """Simultaneous eigenspaces of ad H on sl_n, or None if ad H is not diagonalisable over F."""
    if not h.is_abelian():
        raise ValueError("root decomposition needs an abelian subalgebra")
    F, n = h.field, h.n
    _, embed = sl_coordinates(n, F)
    family = [ad_sl(F, b.reshape(n, n)) for b in h.rows]
    if not family:
        family = [np.zeros((n * n - 1, n * n - 1), dtype=np.int64)]
    res = eigenbasis_codes(F, family)
    if res is None:
        return None
    vecs, tags = res
    flat = F.matmul(vecs, embed.T)
    spaces: dict[tuple[int, ...], list[np.ndarray]] = {}
    for v, tag in zip(flat, tags):
        spaces.setdefault(tag[:h.dim] if h.dim else (), []).append(v)
    return RootDecomposition(h, {k: np.stack(v) for k, v in spaces.items()})


@dataclass
class CartanReport:
    """Outcome of the classical Cartan test; later flags stay False once a check fails."""

    bracket_closed: bool = False
    nilpotent: bool = False
    self_normalizing: bool = False
    abelian: bool = False
    has_root_decomposition: bool = False
    condition_b: bool = False
    condition_c: bool = False
    is_cartan: bool = False
    is_classical: bool = False
    failure: Optional[str] = None
    roots: Optional[RootDecomposition] = field(default=None, repr=False, compare=False)

    def flags(self) -> dict:
        return {k: getattr(self, k) for k in (
            "bracket_closed", "nilpotent", "self_normalizing", "abelian",
            "has_root_decomposition", "condition_b", "condition_c", "is_cartan", "is_classical")}

    def to_json(self) -> dict:
        out = self.flags()
        out["failure"] = self.failure
        return out


def root_string_ok(roots: set[tuple[int, ...]], F: FiniteField) -> bool:
    """Condition (c): for every root a and nonzero root b some a + k b, 1 <= k < char, is not a root.

    ``k`` runs up to the characteristic of F, and ``a = 0`` is included.
    """
    p = F.p
    for b in roots:
        if not any(b):
            continue
        multiples = [tuple(F.mul(F.embed_code(k), x) for x in b) for k in range(1, p)]
        for a in roots:
            if all(tuple(F.add(x, y) for x, y in zip(a, kb)) in roots for kb in multiples):
                return False
    return True


def is_classical_cartan(h: Subalgebra) -> CartanReport:
    rep = CartanReport()
    if not h.closed:
        rep.failure = "span is not bracket-closed"
        return rep
    rep.bracket_closed = True
    rep.nilpotent = is_nilpotent(h)
    rep.self_normalizing = normalizer(h).dim == h.dim
    rep.is_cartan = rep.nilpotent and rep.self_normalizing
    if not rep.is_cartan:
        rep.failure = "not nilpotent" if not rep.nilpotent else "not self-normalizing"
        return rep
    rep.abelian = h.is_abelian()
    if not rep.abelian:
        rep.failure = "not abelian"
        return rep
    rd = root_decomposition(h)
    if rd is None:
        rep.failure = "no root space decomposition over the base field (ad H not diagonalizable)"
        return rep
    rep.has_root_decomposition = True
    rep.roots = rd
    F, n = h.field, h.n
    for alpha, space in rd.spaces.items():
        if not any(alpha):
            continue
        neg = tuple(F.neg(c) for c in alpha)
        other = rd.spaces.get(neg)
        d = 0 if other is None else rank_codes(F, _pair_brackets(F, n, space, other))
        if d != 1:
            rep.failure = f"[L_alpha, L_-alpha] has dimension {d} for a root alpha"
            return rep
    rep.condition_b = True
    if not root_string_ok(set(rd.spaces), F):
        rep.failure = "root string condition (c) fails"
        return rep
    rep.condition_c = True
    rep.is_classical = True
    return rep


def classical_algebra_check(n: int, F: FiniteField) -> bool:
    """Center of sl_n is zero and [sl_n, sl_n] = sl_n."""
    if n % F.p == 0:
        raise ValueError(f"char {F.p} divides n = {n}: the identity is central in sl_{n}")
    _, embed = sl_coordinates(n, F)
    basis = np.ascontiguousarray(embed.T)
    trace_row = np.array([[F.one_code if c % (n + 1) == 0 else 0 for c in range(n * n)]],
                         dtype=np.int64)
    conds = [trace_row] + [ad_gl(F, b.reshape(n, n)) for b in basis]
    center = nullspace_codes(F, np.concatenate(conds))
    derived = rank_codes(F, _pair_brackets(F, n, basis, basis))
    return center.shape[0] == 0 and derived == n * n - 1
