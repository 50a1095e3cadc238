"""Existence surveys for sl_2 and sl_3 and the conjugacy classification of J_3(a, b).

Conjugacy certificates are explicit: diagonal conjugators for the cube-coset
rescaling, the linear map ``psi`` carrying J_3(1, z^2) onto J_3(1, z), and an
exhaustive scalar search refuting every component-respecting map from
J_3(1, z) onto J_3(1, 1).
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._parallel import parallel_map
from .cod import (Decomposition, PreconditionError, build_J3, build_generators, build_sl2_cod,
                  diagonal_cartan, lemma_subalgebra, verify_cod)
from .field import (FieldElement, FiniteField, cube_coset_index, is_cube, primitive_root_of_unity,
                    smallest_non_cube)
from .lie import Subalgebra, is_classical_cartan, span_close
from .matrix import Mat, inverse_codes

CLASS_11 = "CLASS_11"
CLASS_1Z = "CLASS_1Z"

# Images of J'(1,0), J'(2,0), J'(0,1), J'(0,2) as J-indices (m,n), (k,l), (s,t), (x,y).
CASE_TABLE: tuple[tuple[int, ...], ...] = (
    (1, 0, 2, 0, 0, 1, 0, 2), (1, 0, 2, 0, 0, 2, 0, 1), (1, 0, 2, 0, 1, 1, 2, 2),
    (1, 0, 2, 0, 2, 2, 1, 1), (1, 0, 2, 0, 2, 1, 1, 2), (1, 0, 2, 0, 1, 2, 2, 1),
    (2, 0, 1, 0, 0, 1, 0, 2), (2, 0, 1, 0, 0, 2, 0, 1), (2, 0, 1, 0, 1, 1, 2, 2),
    (2, 0, 1, 0, 2, 2, 1, 1), (2, 0, 1, 0, 2, 1, 1, 2), (2, 0, 1, 0, 1, 2, 2, 1),
    (0, 1, 0, 2, 1, 0, 2, 0), (0, 1, 0, 2, 2, 0, 1, 0), (0, 1, 0, 2, 1, 1, 2, 2),
    (0, 1, 0, 2, 2, 2, 1, 1), (0, 1, 0, 2, 2, 1, 1, 2), (0, 1, 0, 2, 1, 2, 2, 1),
    (0, 2, 0, 1, 1, 0, 2, 0), (0, 2, 0, 1, 2, 0, 1, 0), (0, 2, 0, 1, 1, 1, 2, 2),
    (0, 2, 0, 1, 2, 2, 1, 1), (0, 2, 0, 1, 2, 1, 1, 2), (0, 2, 0, 1, 1, 2, 2, 1),
    (1, 1, 2, 2, 1, 0, 2, 0), (1, 1, 2, 2, 2, 0, 1, 0), (1, 1, 2, 2, 0, 1, 0, 2),
    (1, 1, 2, 2, 0, 2, 0, 1), (1, 1, 2, 2, 2, 1, 1, 2), (1, 1, 2, 2, 1, 2, 2, 1),
    (2, 2, 1, 1, 1, 0, 2, 0), (2, 2, 1, 1, 2, 0, 1, 0), (2, 2, 1, 1, 0, 1, 0, 2),
    (2, 2, 1, 1, 0, 2, 0, 1), (2, 2, 1, 1, 2, 1, 1, 2), (2, 2, 1, 1, 1, 2, 2, 1),
    (2, 1, 1, 2, 1, 0, 2, 0), (2, 1, 1, 2, 2, 0, 1, 0), (2, 1, 1, 2, 0, 1, 0, 2),
    (2, 1, 1, 2, 0, 2, 0, 1), (2, 1, 1, 2, 1, 1, 2, 2), (2, 1, 1, 2, 2, 2, 1, 1),
    (1, 2, 2, 1, 1, 0, 2, 0), (1, 2, 2, 1, 2, 0, 1, 0), (1, 2, 2, 1, 0, 1, 0, 2),
    (1, 2, 2, 1, 0, 2, 0, 1), (1, 2, 2, 1, 1, 1, 2, 2), (1, 2, 2, 1, 2, 2, 1, 1),
)
CASE_TABLE_SHA256 = "8d654242a979535807a6db708fa4c7ba8d0619c11e0533949122967095327b3c"


def case_table_checksum() -> str:
    return hashlib.sha256(json.dumps([list(r) for r in CASE_TABLE]).encode()).hexdigest()


if case_table_checksum() != CASE_TABLE_SHA256:
    raise ImportError("case table does not match its checksum")


def _require_char(F: FiniteField) -> None:
    if F.p <= 3:
        raise PreconditionError(f"char(F) = {F.p} must exceed 3")


def _require_cube_roots(F: FiniteField) -> FieldElement:
    _require_char(F)
    u = primitive_root_of_unity(F, 3)
    if u is None:
        raise PreconditionError(f"3 does not divide q - 1 = {F.q - 1}")
    return u


def _check_u(F: FiniteField, u) -> FieldElement:
    u = F(u)
    if u * u + u + 1 != 0:
        raise PreconditionError(f"u = {u} is not a primitive cube root of unity")
    return u


def _kform_gram(F: FiniteField, xs: np.ndarray, ys: np.ndarray, n: int) -> np.ndarray:
    """Tr(X Y) for flattened X in xs, Y in ys."""
    yt = ys.reshape(-1, n, n).transpose(0, 2, 1).reshape(-1, n * n)
    return F.matmul(xs, yt.T)


# -- existence surveys -------------------------------------------------------

@dataclass
class SurveyRow:
    q: int
    exists: bool
    witness: Optional[Decomposition] = None
    obstruction: Optional[str] = None
    criterion: Optional[bool] = None
    details: dict = field(default_factory=dict)

    @property
    def criterion_agrees(self) -> bool:
        return self.criterion == self.exists

    def to_json(self) -> dict:
        return {"q": self.q, "exists": self.exists, "obstruction": self.obstruction,
                "criterion": self.criterion, "criterion_agrees": self.criterion_agrees,
                "details": self.details}


def sl2_survey(F: FiniteField) -> SurveyRow:
    """Search Cartans <[[0,1],[a,0]]> orthogonal to the diagonal one for a COD of sl_2."""
    _require_char(F)
    units = np.arange(1, F.q, dtype=np.int64)
    one = F.one_code
    # [[0,1],[a,0]] flattened
    xs = np.zeros((len(units), 4), dtype=np.int64)
    xs[:, 1] = one
    xs[:, 2] = units
    h0 = diagonal_cartan(2, F)
    classical = [is_classical_cartan(span_close([Mat(F, x.reshape(2, 2))])).is_classical
                 for x in xs]
    assert not _kform_gram(F, xs, h0.rows, 2).any()  # every H_a is orthogonal to H_0
    ortho = ~_kform_gram(F, xs, xs, 2).astype(bool)
    np.fill_diagonal(ortho, False)
    cl = np.array(classical, dtype=bool)
    good = ortho & cl[:, None] & cl[None, :]
    pairs = [(int(units[i]), int(units[j])) for i, j in zip(*np.nonzero(good)) if i < j]
    forced_negatives = all(F.add(a, b) == 0 for a, b in ortho_pairs(units, ortho))
    # largest mutually orthogonal family of classical Cartans, H_0 included
    best = 1 + (2 if pairs else 1 if cl.any() else 0)
    for i, j, k in itertools.combinations(np.nonzero(cl)[0], 3):
        if good[i, j] and good[i, k] and good[j, k]:
            best = 4
            break
    exists = best >= 3
    criterion = primitive_root_of_unity(F, 4) is not None
    details = {"classical_params": [int(a) for a, c in zip(units, classical) if c],
               "orthogonal_classical_pairs": pairs,
               "orthogonality_forces_negatives": forced_negatives,
               "max_orthogonal_classical": best}
    row = SurveyRow(F.q, exists, criterion=criterion, details=details)
    if exists:
        row.witness = build_sl2_cod(F)
        if not verify_cod(row.witness).is_cod:
            raise AssertionError("sl_2 witness failed verification")
    else:
        row.obstruction = "no primitive 4th root of unity (q = 3 mod 4)"
    return row


def ortho_pairs(units: np.ndarray, ortho: np.ndarray):
    for i, j in zip(*np.nonzero(ortho)):
        yield int(units[i]), int(units[j])


def _lemma_rows(F: FiniteField) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Flattened basis pairs of H(a, b) for every (a, b), in lexicographic order."""
    one = F.one_code
    params = [(a, b) for a in range(1, F.q) for b in range(1, F.q)]
    rows = np.zeros((2 * len(params), 9), dtype=np.int64)
    for k, (a, b) in enumerate(params):
        ab = F.mul(a, b)
        rows[2 * k, [1, 5, 6]] = (one, a, ab)
        rows[2 * k + 1, [2, 3, 7]] = (one, ab, b)
    return rows, params


def lemma_orthogonality(F: FiniteField, chunk: int = 1024) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Boolean matrix: H(a, b) is Killing-orthogonal to H(c, d)."""
    rows, params = _lemma_rows(F)
    n = len(params)
    out = np.empty((n, n), dtype=bool)
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        g = _kform_gram(F, rows[2 * lo:2 * hi], rows, 3).astype(bool)
        out[lo:hi] = ~g.reshape(hi - lo, 2, n, 2).any(axis=(1, 3))
    return out, params


def sl3_survey(F: FiniteField) -> SurveyRow:
    _require_char(F)
    u = primitive_root_of_unity(F, 3)
    criterion = u is not None
    if u is not None:
        wit = build_J3(F, u, 1, 1)
        ok = verify_cod(wit).is_cod
        return SurveyRow(F.q, ok, witness=wit if ok else None, criterion=criterion,
                         obstruction=None if ok else "J_3(1,1) failed verification",
                         details={"u": u.to_json()})
    # t^2 + a t + a^2 has no root for any a != 0
    t = np.arange(F.q, dtype=np.int64)
    a = np.arange(1, F.q, dtype=np.int64)
    vals = F.vadd(F.vadd(F.vmul(t[None, :], t[None, :]), F.vmul(a[:, None], t[None, :])),
                  F.vmul(a[:, None], a[:, None]))
    irreducible = bool(vals.all())
    ortho, params = lemma_orthogonality(F)
    np.fill_diagonal(ortho, False)
    # only members of some orthogonal pair can contribute
    involved = np.flatnonzero(ortho.any(axis=1))
    classical = {int(k): is_classical_cartan(lemma_subalgebra(F, *params[k])).is_classical
                 for k in involved}
    good = [(params[i], params[j]) for i, j in zip(*np.nonzero(ortho))
            if i < j and classical[i] and classical[j]]
    details = {"quadratic_irreducible_for_all_a": irreducible,
               "parameter_tuples_searched": len(params) ** 2,
               "orthogonal_pairs": int(ortho.sum()) // 2,
               "classical_among_orthogonal": sum(classical.values()),
               "orthogonal_classical_pairs": [list(map(list, p)) for p in good]}
    exists = bool(good)
    obstruction = None if exists else "no primitive cube root of unity (3 does not divide q - 1)"
    return SurveyRow(F.q, exists, criterion=criterion, details=details, obstruction=obstruction)


# -- J_3 conjugacy -----------------------------------------------------------

def j3_components(F: FiniteField, u, a, b) -> list[Subalgebra]:
    return build_J3(F, u, a, b).components


def _same_components(xs, ys) -> bool:
    return frozenset(xs) == frozenset(ys) and len(xs) == len(ys)


def lemma_conjugator(F: FiniteField, a, b, c, d) -> Optional[Mat]:
    """diag(1, x, y) conjugating J_3(a, b) onto J_3(c, d), when a^-1 c and b^-1 d share a cube coset."""
    u = _require_cube_roots(F)
    a, b, c, d = F(a), F(b), F(c), F(d)
    if not (a and b and c and d):
        raise PreconditionError("parameters must be nonzero")
    r, s = c / a, d / b
    if cube_coset_index(r)[0] != cube_coset_index(s)[0]:
        return None
    from .field import nth_root
    x = nth_root(r * r * s, 3)
    y = x * x / r
    g = Mat.diag(F, [1, x, y])
    src = [h.conjugate(g) for h in j3_components(F, u, a, b)]
    if not _same_components(src, j3_components(F, u, c, d)):
        raise AssertionError(f"conjugator failed for ({a},{b}) -> ({c},{d})")
    return g


def build_twisted_bases(F: FiniteField, u, z, allow_cube: bool = False
                        ) -> tuple[Callable[[int, int], Mat], Callable[[int, int], Mat]]:
    """J'(a, b) = D^a P_b and J''(a, b) = D^a Q_b, with P_b (resp. Q_b) twisted by z (resp. z^2)."""
    u = _check_u(F, u)
    z = F(z)
    if not z:
        raise PreconditionError("z must be nonzero")
    if is_cube(z) and not allow_cube:
        raise PreconditionError(f"z = {z} is a cube")
    d = Mat.diag(F, [1, u, u * u])

    def twists(w):
        return [Mat.identity(F, 3), Mat(F, [[0, 0, 1], [w, 0, 0], [0, w, 0]]),
                Mat(F, [[0, 1, 0], [0, 0, 1], [w, 0, 0]])]

    dp = [d ** k for k in range(3)]
    p1, p2 = twists(z), twists(z * z)
    t1 = {(a, b): dp[a] @ p1[b] for a in range(3) for b in range(3)}
    t2 = {(a, b): dp[a] @ p2[b] for a in range(3) for b in range(3)}
    return (lambda a, b: t1[(a % 3, b % 3)]), (lambda a, b: t2[(a % 3, b % 3)])


def twisted_structure_check(F: FiniteField, u, z) -> int:
    """Check [J(a,b), J(c,d)] = w^(min(b,d) mod 2) (u^-bc - u^-ad) J(a+c, b+d) for w = z, z^2.

    Returns the number of identities verified; raises on the first failure.
    """
    u = _check_u(F, u)
    z = F(z)
    jp, jpp = build_twisted_bases(F, u, z, allow_cube=True)
    count = 0
    for basis, w in ((jp, z), (jpp, z * z)):
        for a, b, c, d in itertools.product(range(3), repeat=4):
            lhs = basis(a, b) @ basis(c, d) - basis(c, d) @ basis(a, b)
            coeff = w ** (min(b, d) % 2) * (u ** (-b * c) - u ** (-a * d))
            if lhs != basis(a + c, b + d) * coeff:
                raise AssertionError(f"structure constant fails at {(a, b)}, {(c, d)}")
            count += 1
    return count


_SL3_KEYS = [(1, 0), (2, 0), (0, 1), (0, 2), (1, 1), (2, 2), (1, 2), (2, 1)]
_COMPONENT_KEYS = [[(1, 0), (2, 0)], [(0, 1), (0, 2)], [(1, 1), (2, 2)], [(2, 1), (1, 2)]]


def _decomp_from(J: Callable[[int, int], Mat]) -> list[Subalgebra]:
    return [span_close([J(*k) for k in keys]) for keys in _COMPONENT_KEYS]


class LinearMap:
    """A linear map of gl_3 given on the basis J(a, b) (J(0, 0) = I fixed)."""

    def __init__(self, F: FiniteField, source: Callable[[int, int], Mat], images: dict):
        self.field = F
        keys = [(0, 0)] + _SL3_KEYS
        src = np.stack([source(*k).flat() for k in keys], axis=1)
        img = np.stack([(Mat.identity(F, 3) if k == (0, 0) else images[k]).flat() for k in keys],
                       axis=1)
        self.matrix = F.matmul(img, inverse_codes(F, src))
        self.images = images
        self.source = source

    def __call__(self, x: Mat) -> Mat:
        return Mat(self.field, self.field.matmul(self.matrix, x.flat()).reshape(3, 3))

    def is_invertible(self) -> bool:
        from .matrix import rank_codes
        return rank_codes(self.field, self.matrix) == 9

    def apply(self, h: Subalgebra) -> Subalgebra:
        return Subalgebra(3, self.field, self.field.matmul(h.rows, self.matrix.T))

    def bracket_failures(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        bad = []
        for x, y in itertools.combinations(_SL3_KEYS, 2):
            X, Y = self.source(*x), self.source(*y)
            if self(X @ Y - Y @ X) != self(X) @ self(Y) - self(Y) @ self(X):
                bad.append((x, y))
        return bad


# Listed bracket identities for psi: (x, y, coefficient(u, z), target J' index).
PSI_IDENTITIES: tuple = (
    ((1, 0), (0, 1), lambda u, z: z * (1 - u), (1, 2)),
    ((1, 0), (0, 2), lambda u, z: 1 - u * u, (1, 1)),
    ((1, 0), (1, 1), lambda u, z: z * (1 - u * u) * (1 + u), (2, 2)),
    ((1, 0), (2, 2), lambda u, z: -(1 - u), (0, 2)),
    ((1, 0), (1, 2), lambda u, z: -(1 + u) * (1 - u * u), (2, 1)),
    ((1, 0), (2, 1), lambda u, z: -z * (1 - u * u), (0, 2)),
    ((2, 0), (0, 1), lambda u, z: z * (1 - u * u), (2, 2)),
    ((2, 0), (0, 2), lambda u, z: 1 - u, (2, 1)),
    ((2, 0), (1, 1), lambda u, z: -z * (1 - u), (0, 2)),
    ((2, 0), (2, 2), lambda u, z: (1 - u * u) * (1 + u), (1, 1)),
    ((2, 0), (1, 2), lambda u, z: -(1 - u * u), (0, 1)),
    ((2, 0), (2, 1), lambda u, z: -z * (1 + u) * (1 - u * u), (1, 2)),
    ((0, 1), (1, 1), lambda u, z: -z * z * (u - 1), (2, 0)),
    ((0, 1), (1, 2), lambda u, z: -z * z * (u * u - 1), (2, 0)),
    ((0, 1), (2, 1), lambda u, z: -z * z * (u * u - 1) * (1 + u), (2, 1)),
    ((0, 2), (1, 1), lambda u, z: -z * z * (u - 1), (1, 0)),
    ((0, 2), (2, 2), lambda u, z: z * (1 + u) * (u * u - 1), (2, 2)),
    ((0, 2), (1, 2), lambda u, z: -z * (1 + u) * (u * u - 1), (1, 2)),
    ((0, 2), (2, 1), lambda u, z: -z * z * (u * u - 1), (2, 0)),
    ((1, 1), (1, 2), lambda u, z: z * z * (u - u * u), (2, 0)),
    ((1, 1), (2, 1), lambda u, z: -z * z * (u - u * u), (0, 1)),
    ((2, 2), (1, 2), lambda u, z: z * (u * u - u), (0, 2)),
    ((2, 2), (2, 1), lambda u, z: -z * z * (u * u - u), (1, 0)),
)


@dataclass
class IdentityCheck:
    item: int
    pair: tuple[tuple[int, int], tuple[int, int]]
    homomorphism: bool
    matches_listed: bool
    actual: Optional[tuple[list[int], tuple[int, int]]]

    def to_json(self) -> dict:
        return {"item": self.item, "pair": [list(p) for p in self.pair],
                "homomorphism": self.homomorphism, "matches_listed": self.matches_listed,
                "actual": None if self.actual is None
                else {"coefficient": self.actual[0], "target": list(self.actual[1])}}


@dataclass
class PsiReport:
    psi: LinearMap
    bracket_failures: list
    pairs_checked: int
    invertible: bool
    component_map: Optional[list[int]]
    identities: list[IdentityCheck]

    @property
    def ok(self) -> bool:
        return not self.bracket_failures and self.invertible and self.component_map is not None

    def to_json(self) -> dict:
        return {"ok": self.ok, "pairs_checked": self.pairs_checked,
                "bracket_failures": [[list(x), list(y)] for x, y in self.bracket_failures],
                "invertible": self.invertible, "component_map": self.component_map,
                "identities": [c.to_json() for c in self.identities]}


def psi_map(F: FiniteField, u, z) -> LinearMap:
    u, z = _check_u(F, u), F(z)
    jp, jpp = build_twisted_bases(F, u, z, allow_cube=True)
    table = {(1, 0): (-1, (1, 0)), (2, 0): (-1, (2, 0)), (0, 1): (-z, (0, 2)),
             (0, 2): (-1, (0, 1)), (1, 1): (z / (1 + u), (1, 2)), (2, 2): (1 / (1 + u), (2, 1)),
             (1, 2): (1 + u, (1, 1)), (2, 1): (z * (1 + u), (2, 2))}
    images = {k: jp(*t) * c for k, (c, t) in table.items()}
    return LinearMap(F, jpp, images)


def _as_multiple(x: Mat, J: Callable[[int, int], Mat]) -> Optional[tuple[FieldElement, tuple[int, int]]]:
    """(c, k) with x = c J(k), for x in the J basis."""
    F = x.field
    flat = x.flat()
    for k in _SL3_KEYS:
        b = J(*k).flat()
        i = int(np.flatnonzero(b)[0])
        c = F.from_code(F.div(int(flat[i]), int(b[i])))
        if x == J(*k) * c:
            return c, k
    return None


def psi_verify(F: FiniteField, u, z) -> PsiReport:
    u, z = _check_u(F, u), F(z)
    if not z:
        raise PreconditionError("z must be nonzero")
    psi = psi_map(F, u, z)
    jp, jpp = build_twisted_bases(F, u, z, allow_cube=True)
    failures = psi.bracket_failures()
    src = _decomp_from(jpp)
    dst = _decomp_from(jp)
    targets = {h: i for i, h in enumerate(dst)}
    cmap = [targets.get(psi.apply(h)) for h in src]
    if None in cmap or sorted(cmap) != list(range(4)):
        cmap = None
    checks = []
    for item, (x, y, coeff, target) in enumerate(PSI_IDENTITIES, 1):
        X, Y = jpp(*x), jpp(*y)
        lhs = psi(X @ Y - Y @ X)
        rhs = psi(X) @ psi(Y) - psi(Y) @ psi(X)
        listed = jp(*target) * coeff(u, z)
        actual = _as_multiple(lhs, jp)
        checks.append(IdentityCheck(item, (x, y), lhs == rhs, lhs == listed == rhs,
                                    None if actual is None else (actual[0].to_json(), actual[1])))
    return PsiReport(psi, failures, 28, psi.is_invertible(), cmap, checks)


@dataclass
class J3Class:
    a: FieldElement
    b: FieldElement
    tag: str
    target: tuple[FieldElement, FieldElement]
    conjugator: Mat
    via_psi: bool
    z: FieldElement

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "class": self.tag,
                "target": [t.to_json() for t in self.target], "via_psi": self.via_psi,
                "conjugator": self.conjugator.to_json(), "z": self.z.to_json()}


def classify_j3(F: FiniteField, a, b) -> J3Class:
    """Class of J_3(a, b): J_3(1,1) when a, b share a cube coset, else J_3(1, z) (z smallest non-cube)."""
    u = _require_cube_roots(F)
    a, b = F(a), F(b)
    if not (a and b):
        raise PreconditionError("parameters must be nonzero")
    z = smallest_non_cube(F)
    i, j = cube_coset_index(a)[0], cube_coset_index(b)[0]
    one = F.one
    if i == j:
        return J3Class(a, b, CLASS_11, (one, one), lemma_conjugator(F, a, b, 1, 1), False, z)
    if (j - i) % 3 == 1:
        return J3Class(a, b, CLASS_1Z, (one, z), lemma_conjugator(F, a, b, 1, z), False, z)
    g = lemma_conjugator(F, a, b, 1, z * z)
    psi = psi_map(F, u, z)
    image = [psi.apply(h.conjugate(g)) for h in j3_components(F, u, a, b)]
    if not _same_components(image, j3_components(F, u, 1, z)):
        raise AssertionError(f"psi certificate failed for ({a},{b})")
    return J3Class(a, b, CLASS_1Z, (one, z * z), g, True, z)


def j3_classification(F: FiniteField) -> list[J3Class]:
    params = [(a, b) for a in F.units() for b in F.units()]
    return parallel_map(lambda ab: classify_j3(F, *ab), params)


# -- the 48-case non-conjugacy search ----------------------------------------

_VARS = "abcd"  # scalars attached to the images of J'(1,0), J'(2,0), J'(0,1), J'(0,2)


@dataclass(frozen=True)
class _Term:
    """coef * a^e0 b^e1 c^e2 d^e3 * J(idx)."""

    coef: FieldElement
    exps: tuple[int, int, int, int]
    idx: tuple[int, int]


@dataclass
class CaseVerdict:
    case: int
    assignment: tuple[int, ...]
    solvable: bool
    forced: Optional[str] = None
    witness: Optional[tuple[FieldElement, ...]] = None
    candidates: int = 0

    def to_json(self) -> dict:
        return {"case": self.case, "assignment": list(self.assignment),
                "solvable": self.solvable, "forced": self.forced,
                "witness": None if self.witness is None else [w.to_json() for w in self.witness],
                "candidates": self.candidates}


class _CaseSolver:
    def __init__(self, F: FiniteField, u: FieldElement, z: FieldElement):
        self.F, self.u, self.z = F, u, z
        _, _, self.J = build_generators(3, F, u)
        self.jp, _ = build_twisted_bases(F, u, z, allow_cube=True)
        units = np.arange(1, F.q, dtype=np.int64)
        self.units = units
        self.grid = np.meshgrid(units, units, units, units, indexing="ij")

    def bracket(self, s: _Term, t: _Term) -> _Term:
        X, Y = self.J(*s.idx), self.J(*t.idx)
        idx = ((s.idx[0] + t.idx[0]) % 3, (s.idx[1] + t.idx[1]) % 3)
        br = X @ Y - Y @ X
        F = self.F
        if idx == (0, 0):
            if not br.is_zero():
                raise AssertionError("bracket leaves sl_3")
            lam = F.zero
        else:
            target = self.J(*idx)
            k = int(np.flatnonzero(target.flat())[0])
            lam = F.from_code(F.div(int(br.flat()[k]), int(target.flat()[k])))
            if br != target * lam:
                raise AssertionError("J basis is not closed under brackets")
        exps = tuple(x + y for x, y in zip(s.exps, t.exps))
        return _Term(s.coef * t.coef * lam, exps, idx)

    @staticmethod
    def scale(t: _Term, c) -> _Term:
        return _Term(t.coef * c, t.exps, t.idx)

    def images(self, row) -> dict:
        m, n, k, l, s, t, x, y = row
        one = self.F.one
        e = [tuple(int(i == j) for j in range(4)) for i in range(4)]
        return {(1, 0): _Term(one, e[0], (m, n)), (2, 0): _Term(one, e[1], (k, l)),
                (0, 1): _Term(one, e[2], (s, t)), (0, 2): _Term(one, e[3], (x, y))}

    def derived(self, img: dict) -> dict:
        u = self.u
        img = dict(img)
        img[(1, 1)] = self.scale(self.bracket(img[(1, 0)], img[(0, 1)]), 1 / (1 - u * u))
        img[(2, 2)] = self.scale(self.bracket(img[(2, 0)], img[(0, 2)]), 1 / (1 - u * u))
        img[(1, 2)] = self.scale(self.bracket(img[(1, 0)], img[(0, 2)]), 1 / (1 - u))
        return img

    def residuals(self, img: dict) -> list[tuple[_Term, _Term]]:
        u, z = self.u, self.z
        return [(self.scale(img[(1, 2)], z * (u * u - 1)), self.bracket(img[(0, 1)], img[(1, 1)])),
                (self.scale(img[(2, 0)], z * (u - 1)), self.bracket(img[(0, 1)], img[(2, 2)]))]

    def monomial(self, exps) -> np.ndarray:
        F = self.F
        out = np.full(self.grid[0].shape, F.one_code, dtype=np.int64)
        for g, e in zip(self.grid, exps):
            if e:
                out = F.vmul(out, F.vpow(g, e % (F.q - 1)))
        return out

    def mask(self, lhs: _Term, rhs: _Term) -> np.ndarray:
        F = self.F
        if not lhs.coef and not rhs.coef:
            return np.ones(self.grid[0].shape, dtype=bool)
        if lhs.idx != rhs.idx or not lhs.coef or not rhs.coef:
            return np.zeros(self.grid[0].shape, dtype=bool)
        lv = F.vmul(self.monomial(lhs.exps), np.int64(lhs.coef.code))
        rv = F.vmul(self.monomial(rhs.exps), np.int64(rhs.coef.code))
        return lv == rv

    def forced(self, res: list[tuple[_Term, _Term]]) -> Optional[str]:
        """Eliminate down to z = kappa * M^3 when both residuals read z = kappa_i * monomial."""
        z = self.z
        rels = []
        for lhs, rhs in res:
            if lhs.idx != rhs.idx or not lhs.coef or not rhs.coef:
                return None
            kappa = rhs.coef / (lhs.coef / z)
            rels.append((kappa, tuple(r - l for r, l in zip(rhs.exps, lhs.exps))))
        (k1, v1), (k2, v2) = rels
        best = None
        for a in range(-6, 7):
            b = 1 - a
            vec = [a * x + b * y for x, y in zip(v1, v2)]
            if all(e % 3 == 0 for e in vec):
                key = (sum(1 for e in vec if e), abs(a) + abs(b))
                if best is None or key < best[0]:
                    best = (key, a, b, [e // 3 for e in vec])
        if best is None:
            return None
        _, a, b, cube = best
        kappa = k1 ** a * k2 ** b
        return f"z = {_render(cube, kappa, self.u)}"

    def full_map(self, img: dict, scalars: tuple[int, ...]) -> LinearMap:
        F = self.F
        img = dict(img)
        img[(2, 1)] = self.scale(self.bracket(img[(2, 0)], img[(0, 1)]), 1 / (1 - self.u))
        vals = [F.from_code(int(s)) for s in scalars]
        mats = {}
        for k, t in img.items():
            c = t.coef
            for v, e in zip(vals, t.exps):
                c = c * v ** e
            mats[k] = self.J(*t.idx) * c
        return LinearMap(F, self.jp, mats)

    def solve(self, case: int, row) -> CaseVerdict:
        img = self.derived(self.images(row))
        res = self.residuals(img)
        mask = self.mask(*res[0]) & self.mask(*res[1])
        hits = np.argwhere(mask)
        forced = self.forced(res)
        for h in hits:
            scalars = tuple(int(self.units[i]) for i in h)
            phi = self.full_map(img, scalars)
            if phi.is_invertible() and not phi.bracket_failures():
                wit = tuple(self.F.from_code(s) for s in scalars)
                return CaseVerdict(case, tuple(row), True, forced, wit, len(hits))
        return CaseVerdict(case, tuple(row), False, forced, None, len(hits))


def _monomial_str(exps) -> str:
    parts = []
    for v, e in zip(_VARS, exps):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts) or "1"


def _render(cube_exps, kappa: FieldElement, u: FieldElement) -> str:
    mono = _monomial_str(cube_exps)
    base = f"{mono}^3" if mono.count("*") == 0 and "^" not in mono else f"({mono})^3"
    if kappa == 1:
        return base
    # (1+u)^3 = -1 for a primitive cube root u, so it doubles as the sign
    named = [("1+u", 1 + u), ("-1", -1), ("1+u^2", 1 + u * u), ("1-u", 1 - u), ("1-u^2", 1 - u * u),
             ("-(1+u)", -(1 + u)), ("-(1+u^2)", -(1 + u * u)), ("u-1", u - 1), ("u^2-1", u * u - 1)]
    for name, w in named:
        if w ** 3 == kappa:
            if name == "-1":
                return f"-{base}"
            return f"{base}*({name})^3"
    return f"{kappa}*{base}"


def case_check_48(F: FiniteField, u, z, allow_cube: bool = False) -> list[CaseVerdict]:
    """Search each table case for scalars making the assignment a bracket-preserving map J_3(1,z) -> J_3(1,1).

    Only maps that send each basis element to a multiple of a basis element, component to
    component, are searched. Outer (transpose-type) automorphisms are not, so a 48/48
    refutation says nothing about whether one of those could merge the two classes.
    """
    _require_char(F)
    u = _check_u(F, u)
    z = F(z)
    if not z:
        raise PreconditionError("z must be nonzero")
    if is_cube(z) and not allow_cube:
        raise PreconditionError(f"z = {z} is a cube; the classification degenerates")
    solver = _CaseSolver(F, u, z)
    return parallel_map(lambda ir: solver.solve(ir[0], ir[1]),
                        list(enumerate(CASE_TABLE, 1)))


def j3_class_count(F: FiniteField) -> int:
    """Distinct classes among all J_3(a, b), merging the two tags if any case is solvable."""
    u = _require_cube_roots(F)
    tags = {c.tag for c in j3_classification(F)}
    z = smallest_non_cube(F)
    if any(v.solvable for v in case_check_48(F, u, z)):
        tags = {CLASS_11}
    return len(tags)


@dataclass
class UniquenessReport:
    q: int
    triangles: int
    triangles_are_twist_orbits: bool
    cod_pairs: list[tuple[int, int]]
    total_pairs: int
    cod_iff_same_coset: bool
    all_cods_class_11: bool

    @property
    def ok(self) -> bool:
        return self.triangles_are_twist_orbits and self.cod_iff_same_coset and self.all_cods_class_11

    def to_json(self) -> dict:
        return {"q": self.q, "ok": self.ok, "triangles": self.triangles,
                "triangles_are_twist_orbits": self.triangles_are_twist_orbits,
                "cod_count": len(self.cod_pairs), "total_pairs": self.total_pairs,
                "cod_iff_same_coset": self.cod_iff_same_coset,
                "all_cods_class_11": self.all_cods_class_11}


def uniqueness_certificate_sl3(F: FiniteField) -> UniquenessReport:
    u = _require_cube_roots(F)
    ortho, params = lemma_orthogonality(F)
    np.fill_diagonal(ortho, False)
    index = {p: i for i, p in enumerate(params)}
    triangles = set()
    for i in range(len(params)):
        nbrs = np.flatnonzero(ortho[i])
        for j in nbrs[nbrs > i]:
            for k in np.flatnonzero(ortho[i] & ortho[j]):
                if k > j:
                    triangles.add((i, int(j), int(k)))

    def orbit(p):
        a, b = F.from_code(p[0]), F.from_code(p[1])
        return tuple(sorted(index[((u ** t * a).code, (u ** t * b).code)] for t in range(3)))

    orbits = {orbit(p) for p in params}
    twist_ok = triangles == orbits

    cods = []
    cod_iff = True
    for a, b in params:
        fa, fb = F.from_code(a), F.from_code(b)
        rep = verify_cod(build_J3(F, u, fa, fb))
        same = cube_coset_index(fa)[0] == cube_coset_index(fb)[0]
        if rep.is_cod:
            cods.append((a, b))
        cod_iff &= rep.is_cod == same
    classes = parallel_map(lambda ab: classify_j3(F, *ab), cods)
    all11 = all(c.tag == CLASS_11 and c.conjugator is not None for c in classes)
    return UniquenessReport(F.q, len(triangles), twist_ok, cods, len(params), cod_iff, all11)
