"""Constructions of orthogonal decompositions of sl_n and the COD verifier.

Included here: the clock-and-shift (J) decomposition for n = p, its
Kronecker-product version for n = p^m, the three-term decomposition of sl_2,
and the twisted four-component family J_3(a, b) of sl_3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ._parallel import parallel_map
from .field import FieldElement, FiniteField, field_trace, make_field, nth_root
from .lie import CartanReport, Subalgebra, is_classical_cartan, span_close
from .matrix import Mat, kron, nullspace_codes, rank_codes

FORMAT = "cod-v1"


class PreconditionError(ValueError):
    """Hypotheses of a construction are not met (missing roots of unity etc.)."""


@dataclass
class Decomposition:
    n: int
    field: FiniteField
    components: list[Subalgebra]
    labels: list[str]

    def __post_init__(self):
        if len(self.labels) != len(self.components):
            raise ValueError("one label per component")

    def __len__(self) -> int:
        return len(self.components)

    def component(self, label: str) -> Subalgebra:
        return self.components[self.labels.index(label)]

    def conjugate(self, g: Mat) -> "Decomposition":
        g_inv = g.inverse()
        return Decomposition(self.n, self.field, [c.conjugate(g, g_inv) for c in self.components],
                             list(self.labels))

    def component_set(self) -> frozenset:
        return frozenset(self.components)

    def to_json(self) -> dict:
        return {"format": FORMAT, "n": self.n, "field": self.field.to_json(),
                "components": [{"label": lab, "basis": [m.to_json() for m in c.basis]}
                               for lab, c in zip(self.labels, self.components)]}

    @classmethod
    def from_json(cls, obj: dict) -> "Decomposition":
        if obj.get("format") != FORMAT:
            raise ValueError(f"expected format {FORMAT!r}, got {obj.get('format')!r}")
        F = FiniteField.from_json(obj["field"])
        n = int(obj["n"])
        comps, labels = [], []
        for c in obj["components"]:
            comps.append(Subalgebra.from_json(F, {"n": n, "basis": c["basis"]}))
            labels.append(str(c["label"]))
        return cls(n, F, comps, labels)


@dataclass
class CodReport:
    n: int
    spans_directly: bool
    dimensions_ok: bool
    orthogonal_pairs: list[list[bool]]
    component_reports: list[CartanReport]
    labels: list[str] = field(default_factory=list)
    note: Optional[str] = None

    @property
    def all_orthogonal(self) -> bool:
        return all(all(row) for row in self.orthogonal_pairs)

    @property
    def all_classical(self) -> bool:
        return all(r.is_classical for r in self.component_reports)

    @property
    def is_cod(self) -> bool:
        return self.spans_directly and self.all_orthogonal and self.all_classical

    def to_json(self) -> dict:
        return {"format": FORMAT, "n": self.n, "is_cod": self.is_cod,
                "spans_directly": self.spans_directly, "dimensions_ok": self.dimensions_ok,
                "orthogonal_pairs": self.orthogonal_pairs,
                "component_reports": [dict(label=lab, **r.to_json())
                                      for lab, r in zip(self.labels, self.component_reports)],
                "note": self.note}

    def summary(self) -> str:
        lines = [f"sl_{self.n}: {len(self.component_reports)} components",
                 f"  direct sum spanning sl_{self.n}: {self.spans_directly}",
                 f"  component count and dimensions: {self.dimensions_ok}",
                 f"  pairwise Killing-orthogonal:   {self.all_orthogonal}"]
        for i, row in enumerate(self.orthogonal_pairs):
            bad = [self.labels[j] for j, ok in enumerate(row) if not ok]
            if bad:
                lines.append(f"    {self.labels[i]} not orthogonal to {', '.join(bad)}")
        for lab, r in zip(self.labels, self.component_reports):
            status = "classical" if r.is_classical else f"NOT classical ({r.failure})"
            lines.append(f"  {lab}: {status}")
        if not self.spans_directly:
            lines.append("  not a direct sum")
        if self.note:
            lines.append(f"  note: {self.note}")
        lines.append(f"COD: {'yes' if self.is_cod else 'no'}")
        return "\n".join(lines)


def verify_cod(dec: Decomposition) -> CodReport:
    """Direct sum, pairwise Killing orthogonality and classicality of every component."""
    F, n = dec.field, dec.n
    comps = dec.components
    dims_ok = len(comps) == n + 1 and all(c.dim == n - 1 for c in comps)
    stacked = np.concatenate([c.rows for c in comps]) if comps else np.zeros((0, n * n), np.int64)
    total = stacked.shape[0]
    spans = total == n * n - 1 and rank_codes(F, stacked) == n * n - 1
    note = None
    k = len(comps)
    if (2 * n) % F.p == 0:
        note = f"Killing form 2n Tr(AB) vanishes identically (char {F.p} divides {2 * n})"
        ortho = [[i == j for j in range(k)] for i in range(k)]
    else:
        # Tr(A B) = vec(A) . vec(B^T)
        transposed = [c.rows.reshape(-1, n, n).transpose(0, 2, 1).reshape(-1, n * n)
                      for c in comps]

        def pair_ok(ij):
            i, j = ij
            return not F.matmul(comps[i].rows, transposed[j].T).any()

        pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
        oks = dict(zip(pairs, parallel_map(pair_ok, pairs)))
        ortho = [[True if i == j else oks[(min(i, j), max(i, j))] for j in range(k)]
                 for i in range(k)]
    reports = parallel_map(is_classical_cartan, comps)
    return CodReport(n, spans, dims_ok, ortho, list(reports), list(dec.labels), note)


# -- clock and shift ---------------------------------------------------------

def _check_char(F: FiniteField, p: int) -> None:
    if F.p in (2, 3) or F.p == p:
        raise PreconditionError(f"char(F) = {F.p} must differ from 2, 3 and p = {p}")


def clock_shift(p: int, F: FiniteField, u: FieldElement) -> tuple[Mat, Mat]:
    """D = diag(1, u, ..., u^(p-1)) and the cyclic shift P (P e_j = e_(j+1))."""
    d = Mat.diag(F, [u ** j for j in range(p)])
    shift = np.zeros((p, p), dtype=np.int64)
    for i in range(p):
        shift[i, (i - 1) % p] = F.one_code
    return d, Mat(F, shift)


def build_generators(p: int, F: FiniteField, u: FieldElement
                     ) -> tuple[Mat, Mat, Callable[[int, int], Mat]]:
    """``(D, P, J)`` with J(a, b) = D^a P^b, indices read mod p."""
    u = F(u)
    _check_char(F, p)
    if u.code == 0 or u.order() != p:
        raise PreconditionError(f"u = {u} does not have multiplicative order {p}")
    d, shift = clock_shift(p, F, u)
    dpow = [d ** a for a in range(p)]
    ppow = [shift ** b for b in range(p)]
    table = {(a, b): dpow[a] @ ppow[b] for a in range(p) for b in range(p)}

    def J(a: int, b: int) -> Mat:
        return table[(a % p, b % p)]

    return d, shift, J


def build_shift_X(p: int, F: FiniteField, u: FieldElement) -> Mat:
    """Circulant X with X[i][j] = u^T((i - j) mod p), T(k) = k(k+1)/2."""
    if p == 2:
        raise PreconditionError("X is only defined for odd p")
    u = F(u)
    if u.code == 0 or u.order() != p:
        raise PreconditionError(f"u = {u} does not have multiplicative order {p}")
    return Mat(F, [[u ** (((i - j) % p) * ((i - j) % p + 1) // 2) for j in range(p)]
                   for i in range(p)])


def build_cod_prime(p: int, F: FiniteField, u: FieldElement) -> Decomposition:
    if p == 2:
        raise PreconditionError("use build_sl2_cod for p = 2")
    _, _, J = build_generators(p, F, u)
    comps = [span_close([J(0, a) for a in range(1, p)])]
    labels = ["H_inf"]
    for k in range(p):
        comps.append(span_close([J(a, k * a) for a in range(1, p)]))
        labels.append(f"H_{k}")
    return Decomposition(p, F, comps, labels)


def build_sl2_cod(F: FiniteField) -> Decomposition:
    if F.p <= 3:
        raise PreconditionError(f"char(F) = {F.p} must exceed 3")
    if nth_root(F(-1), 2) is None:
        raise PreconditionError(f"-1 is not a square in {F!r}")
    mats = [Mat(F, [[1, 0], [0, -1]]), Mat(F, [[0, 1], [-1, 0]]), Mat(F, [[0, 1], [1, 0]])]
    return Decomposition(2, F, [span_close([m]) for m in mats], ["H_0", "H_1", "H_2"])


# -- symplectic coordinates on W = K + K, K = GF(p^m) ------------------------

@dataclass(frozen=True)
class SymplecticBasis:
    """e_1..e_m in the first summand, f_1..f_m in the second, <e_i, f_j> = delta_ij."""

    index_field: FiniteField
    e: tuple[tuple[FieldElement, FieldElement], ...]
    f: tuple[tuple[FieldElement, FieldElement], ...]

    def coordinates(self, w: tuple[FieldElement, FieldElement]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(a; b) with w = sum a_i e_i + b_i f_i."""
        a = tuple(trace_form(w, fi) for fi in self.f)
        b = tuple(trace_form(ei, w) for ei in self.e)
        return a, b

    def gram(self) -> list[list[int]]:
        vecs = list(self.e) + list(self.f)
        return [[trace_form(x, y) for y in vecs] for x in vecs]


def trace_form(w, w2) -> int:
    """<(a; b), (a'; b')> = Tr(a b' - a' b) in Z_p."""
    (a, b), (a2, b2) = w, w2
    return int(field_trace(a * b2 - a2 * b))


def symplectic_basis(p: int, m: int, index_field: Optional[FiniteField] = None) -> SymplecticBasis:
    """Symplectic Gram-Schmidt on W, drawing e's from K + 0 and f's from 0 + K."""
    K = index_field if index_field is not None else make_field(p, m)
    if (K.p, K.m) != (p, m):
        raise ValueError("index field does not match (p, m)")
    zero = K.zero
    first = [(K.from_code(K.code_of([1 if i == j else 0 for j in range(m)])), zero)
             for i in range(m)]
    second = [(zero, v) for v, _ in first]

    def comb(terms):
        a = zero
        b = zero
        for c, (x, y) in terms:
            a = a + x * c
            b = b + y * c
        return a, b

    es: list = []
    fs: list = []
    pool_f = list(second)
    for cand in first:
        # orthogonalise against earlier pairs: e <- e - <e, f_j> e_j
        e = comb([(1, cand)] + [(-trace_form(cand, fj), ej) for ej, fj in zip(es, fs)])
        chosen = None
        for g in pool_f:
            g2 = comb([(1, g)] + [(-trace_form(ej, g), fj) for ej, fj in zip(es, fs)])
            s = trace_form(e, g2)
            if s % p:
                chosen = comb([(pow(s, p - 2, p), g2)])
                pool_f.remove(g)
                break
        if chosen is None:
            raise AssertionError("trace form degenerate")  # unreachable: the trace form is nondegenerate
        es.append(e)
        fs.append(chosen)
    return SymplecticBasis(K, tuple(es), tuple(fs))


def tensor_J(J: Callable[[int, int], Mat], a: Sequence[int], b: Sequence[int]) -> Mat:
    """J_{(a_1,b_1)} (x) ... (x) J_{(a_m,b_m)}."""
    out = J(a[0], b[0])
    for ai, bi in zip(a[1:], b[1:]):
        out = kron(out, J(ai, bi))
    return out


def prime_power_root(p: int, F: FiniteField) -> FieldElement:
    """The order-p root used by the prime-power construction (u = -1 when p = 2)."""
    from .field import primitive_root_of_unity
    if p == 2:
        if nth_root(F(-1), 2) is None:
            raise PreconditionError(f"-1 is not a square in {F!r}: q = {F.q} is not 1 mod 4")
        return F(-1)
    u = primitive_root_of_unity(F, p)
    if u is None:
        raise PreconditionError(f"no primitive {p}th root of unity: p does not divide q - 1 "
                                f"({p} \u2224 {F.q - 1})")
    return u


def build_cod_prime_power(p: int, m: int, F: FiniteField, u: FieldElement,
                          index_field: Optional[FiniteField] = None) -> Decomposition:
    if m < 2:
        raise PreconditionError("prime-power construction needs m >= 2")
    u = F(u)
    if p == 2 and nth_root(F(-1), 2) is None:
        raise PreconditionError(f"-1 is not a square in {F!r}")
    _, _, J = build_generators(p, F, u)
    sb = symplectic_basis(p, m, index_field)
    K = sb.index_field

    def J_w(alpha: FieldElement, beta: FieldElement) -> Mat:
        a, b = sb.coordinates((alpha, beta))
        return tensor_J(J, a, b)

    units = list(K.units())
    comps = [span_close([J_w(K.zero, lam) for lam in units])]
    labels = ["H_inf"]
    for alpha in K.elements():
        comps.append(span_close([J_w(lam, alpha * lam) for lam in units]))
        labels.append(f"H_alpha({alpha})")
    return Decomposition(p ** m, F, comps, labels)


def build_cod(n: int, F: FiniteField) -> Decomposition:
    """Dispatch on n = p^m to the matching construction, choosing the root of unity."""
    from .field import prime_power
    pm = prime_power(n)
    if pm is None:
        raise PreconditionError(f"n = {n} is not a prime power")
    p, m = pm
    if F.p in (2, 3) or F.p == p:
        raise PreconditionError(f"char(F) = {F.p} must differ from 2, 3 and p = {p}")
    u = prime_power_root(p, F)
    if m == 1:
        return build_sl2_cod(F) if p == 2 else build_cod_prime(p, F, u)
    return build_cod_prime_power(p, m, F, u)


# -- the J_3(a, b) family ----------------------------------------------------

def lemma_pair(F: FiniteField, a, b) -> tuple[Mat, Mat]:
    """The two basis matrices of the Cartan subalgebra with parameters (a, b)."""
    a, b = F(a), F(b)
    ab = a * b
    x = Mat(F, [[0, 1, 0], [0, 0, a], [ab, 0, 0]])
    y = Mat(F, [[0, 0, 1], [ab, 0, 0], [0, b, 0]])
    return x, y


def lemma_subalgebra(F: FiniteField, a, b) -> Subalgebra:
    return span_close(list(lemma_pair(F, a, b)))


def diagonal_cartan(n: int, F: FiniteField) -> Subalgebra:
    return span_close([Mat.diag(F, [1 if k == i else -1 if k == n - 1 else 0 for k in range(n)])
                       for i in range(n - 1)])


def build_J3(F: FiniteField, u: FieldElement, a, b) -> Decomposition:
    """H_0 plus the three twisted components with parameters (a, b), (ua, ub), (u^2 a, u^2 b)."""
    u = F(u)
    a, b = F(a), F(b)
    if F.p <= 3:
        raise PreconditionError(f"char(F) = {F.p} must exceed 3")
    if (F.q - 1) % 3:
        raise PreconditionError(f"3 does not divide q - 1 = {F.q - 1}")
    if u * u + u + 1 != 0:
        raise PreconditionError(f"u = {u} is not a primitive cube root of unity")
    if not a or not b:
        raise PreconditionError("parameters a, b must be nonzero")
    comps = [diagonal_cartan(3, F)]
    for k in range(3):
        w = u ** k
        comps.append(lemma_subalgebra(F, w * a, w * b))
    return Decomposition(3, F, comps, ["H_0", "H_1", "H_2", "H_3"])


def remark_decomposition(F: Optional[FiniteField] = None) -> Decomposition:
    """The three-term decomposition of sl_2 over Z_7 whose middle term is not classical."""
    F = F or make_field(7)
    mats = [Mat(F, [[1, 0], [0, -1]]), Mat(F, [[0, 1], [-1, 0]]), Mat(F, [[0, 1], [1, 0]])]
    return Decomposition(2, F, [span_close([m]) for m in mats], ["H_0", "H_1", "H_2"])


def maps_components(src: Sequence[Subalgebra], dst: Sequence[Subalgebra],
                    image: Callable[[Subalgebra], Subalgebra]) -> Optional[list[int]]:
    """Index of the dst component hit by each src component, if ``image`` maps one set onto the other."""
    targets = {c: i for i, c in enumerate(dst)}
    out = []
    for c in src:
        i = targets.get(image(c))
        if i is None:
            return None
        out.append(i)
    return out if sorted(out) == list(range(len(dst))) else None
