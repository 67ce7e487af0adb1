"""Basis-indexed graded vectors for the untwisted and twisted Fock spaces.

Untwisted basis terms are pairs (partition, r): the partition collects the
negative oscillator degrees a(-n1)...a(-nl) and r is the lattice index of
e[r] = e_{r*alpha/2k}.  Twisted terms are (half-odd partition, sector)
with sector picking one of the two irreducible lattice characters.

Conventions fixed here and used everywhere else:

* the Heisenberg generator is alpha itself, <alpha, alpha> = 2k, so all
  module structure constants are rational;
* term weight is sum(parts) + r^2/4k untwisted, sum(parts) + 1/16 twisted;
* the involution theta sends a term of oscillator length l to (-1)^l times
  the term with r negated (untwisted) or the same sector (twisted).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .labels import HALF, LAM, M_LAM, M_VAC, VAC, M1Label, ModuleLabel, validate_label
from .ring import RingParams, Scalar

Parts = tuple  # tuple[int, ...] untwisted, tuple[Fraction, ...] twisted
UKey = tuple  # (Parts, int)
TKey = tuple  # (Parts, int)

HALF_ONE = Fraction(1, 2)
TOP_TW = Fraction(1, 16)


def sort_parts(parts: Iterable) -> Parts:
    return tuple(sorted(parts, reverse=True))


def _coerce(params: RingParams, c) -> Scalar:
    if isinstance(c, Scalar):
        return c
    return params.rational(c)


class _SparseVector:
    """Finite linear combination of basis keys with Scalar coefficients."""

    __slots__ = ("params", "terms")

    def __init__(self, params: RingParams, terms=None):
        self.params = params
        clean = {}
        if terms:
            for key, c in terms.items():
                c = _coerce(params, c)
                if not c.is_zero():
                    clean[key] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _like(self, terms) -> "_SparseVector":
        return type(self)(self.params, terms)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return self._like(out)

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, Scalar)):
            return self._like({k: v * c for k, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self * (Fraction(1) / Fraction(c))
        return NotImplemented

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("graded vectors are not hashable")

    def map_terms(self, fn: Callable) -> "_SparseVector":
        """fn(key, coeff) -> iterable of (key, coeff) contributions."""
        out: dict = {}
        for key, c in self.terms.items():
            for nk, nc in fn(key, c):
                nc = _coerce(self.params, nc)
                s = out.get(nk)
                s = nc if s is None else s + nc
                if s.is_zero():
                    out.pop(nk, None)
                else:
                    out[nk] = s
        return self._like(out)

    def weights(self) -> set:
        return {self.key_weight(key) for key in self.terms}

    def max_weight(self) -> Fraction:
        return max(self.weights(), default=Fraction(0))

    def component(self, weight: Fraction):
        return self._like(
            {k: c for k, c in self.terms.items() if self.key_weight(k) == weight}
        )

    def sorted_keys(self) -> list:
        return sorted(self.terms, key=lambda key: (self.key_weight(key), key))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for key in self.sorted_keys():
            bits.append(f"[{self.key_str(key)}]*({self.terms[key]})")
        return " + ".join(bits)

    __repr__ = __str__


class UVector(_SparseVector):
    """Vector in the untwisted space, keys (partition of ints, lattice r)."""

    def key_weight(self, key: UKey) -> Fraction:
        parts, r = key
        return sum(parts, Fraction(0)) + Fraction(r * r, 4 * self.params.k)

    @staticmethod
    def key_str(key: UKey) -> str:
        parts, r = key
        osc = "".join(f"a(-{n})" for n in parts)
        return f"{osc}e[{r}]" if osc else f"e[{r}]"

    def lattice_indices(self) -> set[int]:
        return {r for (_, r) in self.terms}


class TVector(_SparseVector):
    """Vector in the twisted space, keys (half-odd partition, sector 1|2)."""

    def key_weight(self, key: TKey) -> Fraction:
        parts, _ = key
        return sum(parts, Fraction(0)) + TOP_TW

    @staticmethod
    def key_str(key: TKey) -> str:
        parts, sector = key
        osc = "".join(f"a(-{n})" for n in parts)
        return f"{osc}1tw[{sector}]"


# -- constructors ---------------------------------------------------------------


def lattice_vector(params: RingParams, r: int, coeff=1) -> UVector:
    return UVector(params, {((), r): coeff})


def vacuum(params: RingParams) -> UVector:
    return lattice_vector(params, 0)


def u_term(params: RingParams, parts: Iterable[int], r: int, coeff=1) -> UVector:
    return UVector(params, {(sort_parts(parts), r): coeff})


def tw_vacuum(params: RingParams, sector: int = 1, coeff=1) -> TVector:
    return TVector(params, {((), sector): coeff})


def t_term(params: RingParams, parts: Iterable[Fraction], sector: int, coeff=1) -> TVector:
    parts = sort_parts(Fraction(p) for p in parts)
    return TVector(params, {(parts, sector): coeff})


# -- oscillator action, involution, projections ---------------------------------


def _remove_one(parts: Parts, n) -> Parts:
    out = list(parts)
    out.remove(n)
    return tuple(out)


def _insert(parts: Parts, n) -> Parts:
    return sort_parts(list(parts) + [n])


def heis_act(n, vec):
    """Action of the oscillator mode alpha(n).

    n < 0 creates a part, n > 0 contracts against matching parts with
    [alpha(n), alpha(-n)] = 2kn, and n = 0 (untwisted only) multiplies by
    the lattice pairing <alpha, lambda_r> = r.
    """
    k = vec.params.k
    if isinstance(vec, UVector):
        n = int(n)

        def act(key, c):
            parts, r = key
            if n == 0:
                if r:
                    yield key, c * r
            elif n < 0:
                yield (_insert(parts, -n), r), c
            else:
                mult = parts.count(n)
                if mult:
                    yield (_remove_one(parts, n), r), c * (2 * k * n * mult)

        return vec.map_terms(act)

    if isinstance(vec, TVector):
        n = Fraction(n)
        if n == 0:
            raise ValueError("the twisted oscillator algebra has no zero mode")
        if (2 * n).denominator != 1 or n.denominator != 2:
            raise ValueError(f"twisted modes must be half-odd integers, got {n}")

        def act_t(key, c):
            parts, sector = key
            if n < 0:
                yield (_insert(parts, -n), sector), c
            else:
                mult = parts.count(n)
                if mult:
                    yield (_remove_one(parts, n), sector), c * (2 * k * n * mult)

        return vec.map_terms(act_t)

    raise TypeError(f"heis_act does not apply to {type(vec).__name__}")


def theta(vec):
    """The order-two involution: sign (-1)^length, lattice index negated."""
    if isinstance(vec, UVector):
        return vec.map_terms(
            lambda key, c: [(((key[0]), -key[1]), c if len(key[0]) % 2 == 0 else -c)]
        )
    if isinstance(vec, TVector):
        return vec.map_terms(
            lambda key, c: [(key, c if len(key[0]) % 2 == 0 else -c)]
        )
    raise TypeError(f"theta does not apply to {type(vec).__name__}")


def project_eigen(vec, sign: int):
    """Projection onto the (+1 or -1)-eigenspace of theta."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    half = Fraction(1, 2)
    if sign > 0:
        return (vec + theta(vec)) * half
    return (vec - theta(vec)) * half


# -- partition machinery ----------------------------------------------------------


def partitions_of(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """All integer partitions of n, parts descending."""
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def odd_partitions_of(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n into odd parts (used doubled for half-odd modes)."""
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    if top % 2 == 0:
        top -= 1
    for first in range(top, 0, -2):
        for rest in odd_partitions_of(n - first, first):
            yield (first,) + rest


def half_odd_partitions_of(total: Fraction) -> Iterator[tuple[Fraction, ...]]:
    total = Fraction(total)
    if total < 0:
        return
    if (2 * total).denominator != 1:
        return
    for doubled in odd_partitions_of(int(2 * total)):
        yield tuple(Fraction(p, 2) for p in doubled)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    if n < 0:
        return 0
    return sum(1 for _ in partitions_of(n))


@lru_cache(maxsize=None)
def partition_count_parity(n: int) -> tuple[int, int]:
    """(even-length, odd-length) partition counts of n."""
    even = odd = 0
    for p in partitions_of(n):
        if len(p) % 2 == 0:
            even += 1
        else:
            odd += 1
    return even, odd


@lru_cache(maxsize=None)
def odd_partition_count_parity(n: int) -> tuple[int, int]:
    even = odd = 0
    for p in odd_partitions_of(n):
        if len(p) % 2 == 0:
            even += 1
        else:
            odd += 1
    return even, odd


# -- graded dimensions -------------------------------------------------------------


def _as_int(x: Fraction) -> int | None:
    x = Fraction(x)
    return int(x) if x.denominator == 1 and x >= 0 else None


def graded_dim(params: RingParams, label: ModuleLabel, weight: Fraction) -> int:
    """Dimension of the weight-graded component, by explicit basis counting."""
    validate_label(label, params.k)
    k = params.k
    weight = Fraction(weight)
    if label.kind == VAC:
        total = 0
        # paired lattice points +-m alpha, m >= 1: one vector per eigensign
        m = 1
        while Fraction(k) * m * m <= weight:
            n = _as_int(weight - k * m * m)
            if n is not None:
                total += partition_count(n)
            m += 1
        n = _as_int(weight)
        if n is not None:
            even, odd = partition_count_parity(n)
            total += even if label.sign > 0 else odd
        return total
    if label.kind == LAM:
        total = 0
        for c in _coset_indices(label.r, k, weight):
            n = _as_int(weight - Fraction(c * c, 4 * k))
            if n is not None:
                total += partition_count(n)
        return total
    if label.kind == HALF:
        total = 0
        # representatives c = k + 2km, m >= 0; theta pairs c with -c
        m = 0
        while True:
            c = k + 2 * k * m
            shift = Fraction(c * c, 4 * k)
            if shift > weight:
                break
            n = _as_int(weight - shift)
            if n is not None:
                total += partition_count(n)
            m += 1
        return total
    # twisted: oscillator weight is half-integral; partitions of it into
    # half-odd parts are odd partitions of the doubled weight
    n2 = _as_int(2 * (weight - TOP_TW))
    if n2 is None:
        return 0
    even, odd = odd_partition_count_parity(n2)
    return even if label.sign > 0 else odd


def _coset_indices(r: int, k: int, weight: Fraction) -> Iterator[int]:
    """Indices c = r + 2km with c^2/4k <= weight."""
    m = 0
    while True:
        c = r + 2 * k * m
        if Fraction(c * c, 4 * k) > weight:
            break
        yield c
        m += 1
    m = -1
    while True:
        c = r + 2 * k * m
        if Fraction(c * c, 4 * k) > weight:
            break
        yield c
        m -= 1


def m1_graded_dim(params: RingParams, m1: M1Label, weight: Fraction) -> int:
    """Graded dimension of a Heisenberg-orbifold constituent, by the closed
    partition-counting formulas (independent route from graded_dim)."""
    k = params.k
    weight = Fraction(weight)
    if m1.kind == M_VAC:
        n = _as_int(weight)
        if n is None:
            return 0
        even, odd = partition_count_parity(n)
        return even if m1.sign > 0 else odd
    if m1.kind == M_LAM:
        n = _as_int(weight - m1.norm(k) / 2)
        return partition_count(n) if n is not None else 0
    n2 = _as_int(2 * (weight - TOP_TW))
    if n2 is None:
        return 0
    even, odd = odd_partition_count_parity(n2)
    return even if m1.sign > 0 else odd


# -- basis enumeration and top levels ----------------------------------------------


def coset_basis(params: RingParams, r0: int, max_weight: Fraction) -> list[UKey]:
    """Basis keys of the full untwisted coset lambda_r0 + L, weight <= max."""
    k = params.k
    keys: list[UKey] = []
    for c in _coset_indices(r0 % (2 * k), k, Fraction(max_weight)):
        budget = Fraction(max_weight) - Fraction(c * c, 4 * k)
        n = 0
        while n <= budget:
            for p in partitions_of(n):
                keys.append((p, c))
            n += 1
    return keys


def twisted_basis(params: RingParams, sector: int, max_weight: Fraction) -> list[TKey]:
    keys: list[TKey] = []
    budget = Fraction(max_weight) - TOP_TW
    total = Fraction(0)
    while total <= budget:
        for p in half_odd_partitions_of(total):
            keys.append((p, sector))
        total += HALF_ONE
    return keys


def label_basis(params: RingParams, label: ModuleLabel, max_weight: Fraction) -> list:
    """Vectors spanning the labelled module up to the given weight."""
    validate_label(label, params.k)
    k = params.k
    out = []
    if label.kind in (VAC, HALF):
        r0 = 0 if label.kind == VAC else k
        seen = set()
        for key in coset_basis(params, r0, max_weight):
            rep = (key[0], -key[1]) if key[1] < 0 else key
            if rep in seen:
                continue
            seen.add(rep)
            v = project_eigen(UVector(params, {rep: 1}), label.sign)
            if v:
                out.append(v)
    elif label.kind == LAM:
        for key in coset_basis(params, label.r, max_weight):
            out.append(UVector(params, {key: 1}))
    else:
        for key in twisted_basis(params, label.sector, max_weight):
            v = project_eigen(TVector(params, {key: 1}), label.sign)
            if v:
                out.append(v)
    return out


def top_vector(params: RingParams, label: ModuleLabel):
    """The generating top-level vector (undefined for V- at k=1, which has a
    two-dimensional top level)."""
    validate_label(label, params.k)
    k = params.k
    if label.kind == VAC:
        if label.sign > 0:
            return vacuum(params)
        if k == 1:
            raise ValueError("V- at k=1 has a two-dimensional top level")
        return u_term(params, [1], 0)
    if label.kind == LAM:
        return lattice_vector(params, label.r)
    if label.kind == HALF:
        return lattice_vector(params, k) + lattice_vector(params, -k) * label.sign
    if label.sign > 0:
        return tw_vacuum(params, label.sector)
    return t_term(params, [HALF_ONE], label.sector)
