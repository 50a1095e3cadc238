"""Exact arithmetic in GF(p) and GF(p^m).

Elements are stored internally as integer *codes* in ``range(q)``.  For an
element with residue polynomial ``c0 + c1 t + ... + c_{m-1} t^{m-1}`` the code
is ``sum(c_i * p**(m-1-i))``, so that comparing codes is the same as comparing
the coefficient tuples ``(c0, c1, ...)`` lexicographically.  That ordering is
the canonical one used whenever a "smallest" element is asked for.

Prime fields use plain modular arithmetic.  Extension fields precompute full
addition and multiplication tables, which keeps every operation (scalar or
vectorised over numpy arrays) a table lookup.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

# Full q x q tables are built for extension fields; keep them desk sized.
MAX_EXTENSION_ORDER = 2048


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """Return ``(p, m)`` with ``q == p**m``, or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p = fs[0]
    m = 0
    while q > 1:
        q //= p
        m += 1
    return p, m


# -- polynomials over GF(p), coefficient lists in ascending order ----------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        f = (a[-1] * inv_lead) % p
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bc) % p
        _trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim([x % p for x in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m, low degree first."""
    for low in itertools.product(range(p), repeat=m):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")  # unreachable


class FiniteField:
    """The finite field GF(p^m) realised as GF(p)[t] / (modulus).

    Parameters
    ----------
    p : int
        Prime characteristic.
    m : int
        Extension degree.
    modulus : sequence of int, optional
        Monic irreducible polynomial of degree ``m``, coefficients ascending.
        Defaults to the lexicographically smallest one; for ``m == 1`` the
        modulus is always ``x``.
    """

    def __init__(self, p: int, m: int = 1, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        if modulus is None:
            modulus = (0, 1) if m == 1 else smallest_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {m}: {list(modulus)}")
        if m > 1 and not is_irreducible(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        if m > 1:
            if self.q > MAX_EXTENSION_ORDER:
                raise ValueError(f"GF({p}^{m}) exceeds the supported size {MAX_EXTENSION_ORDER}")
            self._build_tables()

    # -- construction helpers --------------------------------------------

    def _build_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        weights = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64)
        self._coeffs = coeffs
        self._weights = weights
        self._add = ((coeffs[:, None, :] + coeffs[None, :, :]) % p) @ weights
        self._neg = ((-coeffs) % p) @ weights
        # t^k mod modulus for k < 2m-1, as coefficient rows
        red = np.zeros((2 * m - 1, m), dtype=np.int64)
        cur = [0] * m
        cur[0] = 1
        for k in range(2 * m - 1):
            red[k] = cur
            lead = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(m):
                cur[i] = (cur[i] - lead * self.modulus[i]) % p
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            prod = np.zeros((q, 2 * m - 1), dtype=np.int64)
            for i in range(m):
                if coeffs[a, i]:
                    prod[:, i:i + m] += coeffs[a, i] * coeffs
            mul[a] = ((prod % p) @ red % p) @ weights
        self._mul = mul
        inv = np.zeros(q, dtype=np.int64)
        rows, cols = np.nonzero(mul == self.one_code)
        inv[rows] = cols
        self._inv = inv

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    # -- code <-> coefficients ---------------------------------------------

    @cached_property
    def one_code(self) -> int:
        return self.p ** (self.m - 1)

    def embed_code(self, k: int) -> int:
        """Code of the prime-subfield element ``k mod p``."""
        return (k % self.p) * self.one_code

    def coeffs_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(code % self.p)
            code //= self.p
        return tuple(reversed(out))

    def code_of(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.m:
            coeffs = _poly_mod(list(coeffs), self.modulus, self.p)
        c = [int(x) % self.p for x in coeffs] + [0] * (self.m - len(coeffs))
        code = 0
        for x in c:
            code = code * self.p + x
        return code

    # -- scalar arithmetic on codes ----------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return int(self._add[a, b])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        return int(self._mul[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.m == 1:
            return pow(a, e, self.p)
        result = self.one_code
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # -- vectorised arithmetic on integer arrays -----------------------------

    def vadd(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return self._add[a, b]

    def vneg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self._neg[a]

    def vsub(self, a, b):
        if self.m == 1:
            return (np.asarray(a) - b) % self.p
        return self._add[a, self._neg[b]]

    def vmul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        return self._mul[a, b]

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            # Fermat, elementwise square-and-multiply
            result = np.ones_like(a)
            base = a % self.p
            e = self.p - 2
            while e:
                if e & 1:
                    result = result * base % self.p
                base = base * base % self.p
                e >>= 1
            return result
        return self._inv[a]

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a, e = self.vinv(a), -e
        result = np.full_like(a, self.one_code)
        while e:
            if e & 1:
                result = self.vmul(result, a)
            a = self.vmul(a, a)
            e >>= 1
        return result

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of code arrays; leading axes broadcast like ``np.matmul``."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            if a.shape[-1] * (self.p - 1) ** 2 >= 2 ** 62:
                raise OverflowError(f"GF({self.p}) too large for int64 products")
            return np.matmul(a, b) % self.p
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        out = np.zeros(shape, dtype=np.int64)
        for k in range(a.shape[-1]):
            out = self._add[out, self._mul[a[..., :, k, None], b[..., None, k, :]]]
        return out

    def vsum(self, a, axis=None):
        """Field sum of an array along ``axis``."""
        a = np.asarray(a)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        if axis is None:
            a = a.ravel()
            axis = 0
        a = np.moveaxis(a, axis, 0)
        out = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            out = self._add[out, row]
        return out

    # -- elements ----------------------------------------------------------

    def __call__(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        """Coerce ``value`` into the field.

        An int is read as an element of the prime subfield; a sequence is a
        list of residue-polynomial coefficients, lowest degree first.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError(f"element of {value.field!r} used in {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.embed_code(int(value)))
        return FieldElement(self, self.code_of(list(value)))

    def from_code(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self.one_code)

    @property
    def gen(self) -> "FieldElement":
        """The class of ``t`` (equals the prime-field element 0 when m == 1)."""
        return self([0, 1])

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in canonical order."""
        for c in range(self.q):
            yield FieldElement(self, c)

    def units(self) -> Iterator["FieldElement"]:
        for c in range(1, self.q):
            yield FieldElement(self, c)

    def order_of(self, code: int) -> int:
        """Multiplicative order of a nonzero element given by its code."""
        if code == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.q - 1
        for r in prime_factors(self.q - 1):
            while n % r == 0 and self.pow(code, n // r) == self.one_code:
                n //= r
        return n

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteField":
        return cls(int(obj["p"]), int(obj["m"]), obj.get("modulus"))


class FieldElement:
    """An immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"mixed-field arithmetic: {self.field!r} and {other.field!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.embed_code(int(other))
        return NotImplemented

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Residue-polynomial coefficients, lowest degree first."""
        return self.field.coeffs_of(self.code)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(o, self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, int(e)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.field.embed_code(int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.m, self.code))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < self._other(other)

    def order(self) -> int:
        return self.field.order_of(self.code)

    def is_in_prime_field(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __int__(self) -> int:
        if not self.is_in_prime_field():
            raise ValueError(f"{self} is not in the prime subfield")
        return self.coeffs[0]

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if self.field.m == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


# -- public operations -------------------------------------------------------

def make_field(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None) -> FiniteField:
    return FiniteField(p, m, modulus)


def field_for_order(q: int, modulus: Optional[Sequence[int]] = None) -> FiniteField:
    pm = prime_power(q)
    if pm is None:
        raise ValueError(f"{q} is not a prime power")
    return FiniteField(pm[0], pm[1], modulus)


def field_trace(x: FieldElement) -> FieldElement:
    """Sum of the Galois conjugates x + x^p + ... + x^(p^(m-1))."""
    F = x.field
    total = 0
    y = x.code
    for _ in range(F.m):
        total = F.add(total, y)
        y = F.pow(y, F.p)
    return FieldElement(F, total)


def multiplicative_generator(F: FiniteField) -> FieldElement:
    for c in range(1, F.q):
        if F.order_of(c) == F.q - 1:
            return FieldElement(F, c)
    raise AssertionError("multiplicative group is not cyclic")  # unreachable


def primitive_root_of_unity(F: FiniteField, n: int) -> Optional[FieldElement]:
    """Smallest element of multiplicative order exactly n, or None."""
    if n <= 0:
        raise ValueError("n must be positive")
    if (F.q - 1) % n:
        return None
    for c in range(1, F.q):
        if F.pow(c, n) == F.one_code and all(
                F.pow(c, n // r) != F.one_code for r in prime_factors(n)):
            return FieldElement(F, c)
    return None  # unreachable: the unit group is cyclic


def nth_root(x: FieldElement, n: int) -> Optional[FieldElement]:
    """Smallest y with y**n == x, found by exhaustive scan."""
    if n <= 0:
        raise ValueError("n must be positive")
    F = x.field
    for c in range(F.q):
        if F.pow(c, n) == x.code:
            return FieldElement(F, c)
    return None


def is_cube(x: FieldElement) -> bool:
    F = x.field
    if x.code == 0:
        return True
    if (F.q - 1) % 3:
        return True  # cubing is a bijection
    return F.pow(x.code, (F.q - 1) // 3) == F.one_code


def smallest_non_cube(F: FiniteField) -> FieldElement:
    if (F.q - 1) % 3:
        raise ValueError(f"every element of {F!r} is a cube (3 does not divide q-1)")
    for x in F.units():
        if not is_cube(x):
            return x
    raise AssertionError("no non-cube found")  # unreachable


def cube_coset_index(x: FieldElement) -> tuple[int, FieldElement]:
    """Index i with x in z^i <g^3>, where z is the smallest non-cube.

    Returns ``(i, z)``.
    """
    F = x.field
    if x.code == 0:
        raise ValueError("zero lies in no cube coset")
    z = smallest_non_cube(F)
    zinv = z.inverse()
    y = x
    for i in range(3):
        if is_cube(y):
            return i, z
        y = y * zinv
    raise AssertionError("cube cosets do not cover the unit group")  # unreachable


def elements_from_codes(F: FiniteField, codes: Iterable[int]) -> list[FieldElement]:
    return [FieldElement(F, int(c)) for c in codes]
