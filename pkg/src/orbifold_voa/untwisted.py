"""Mode actions of the untwisted vertex operators on the lattice Fock spaces.

A mode is indexed by the rational exponent m with the convention that the
operator attached to u expands as sum_m u_m z^(-m-1); vertex_mode(u, m, v)
returns u_m v exactly.  For u supported at lattice index r acting on terms
at index s the support grid of m is -rs/2k + Z.

Evaluation is by explicit finite expansion: annihilation choices run over
the oscillator content of the target, the lattice shift and the z-power of
the z^{lambda(0)} factor are applied, and the creation side is enumerated
against the exactly determined weight budget.  No series tails are ever
truncated, so results are exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .fock import UVector, coset_basis, heis_act, partitions_of, sort_parts, u_term
from .ring import RingParams


@lru_cache(maxsize=None)
def _dcoef(n: int, j: Fraction) -> Fraction:
    """Coefficient of alpha(j) z^(-j-n) in the (n-1)-th divided z-derivative
    of the oscillator field."""
    q = n - 1
    x = Fraction(j) + n - 1
    prod = Fraction(1)
    for y in range(q):
        prod *= x - y
    return prod * (-1) ** q / factorial(q)


def _exp_coeff(r: int, k: int, created: tuple[int, ...]) -> Fraction:
    """Multiset coefficient of the creation exponential for lambda_r."""
    coeff = Fraction(1)
    seen: dict[int, int] = {}
    for n in created:
        seen[n] = seen.get(n, 0) + 1
    for n, i_n in seen.items():
        coeff *= Fraction(r, 2 * k * n) ** i_n / factorial(i_n)
    return coeff


def _term_mode(
    params: RingParams,
    nu: tuple[int, ...],
    r: int,
    mu: tuple[int, ...],
    s: int,
    m: Fraction,
) -> dict[tuple, Fraction]:
    """Mode action of the term a(-n1)...a(-nl) e[r] on a(-m1)... e[s]."""
    k = params.k
    target = -m - 1
    out: dict[tuple, Fraction] = {}

    counts0: dict[int, int] = {}
    for p in mu:
        counts0[p] = counts0.get(p, 0) + 1

    def emit(parts: list[int], coeff: Fraction) -> None:
        key = (sort_parts(parts), r + s)
        prev = out.get(key)
        total = coeff if prev is None else prev + coeff
        if total:
            out[key] = total
        else:
            out.pop(key, None)

    def stage_create(
        remaining: list[int], pending: tuple[int, ...], budget: Fraction, coeff: Fraction
    ) -> None:
        if budget.denominator != 1 or budget < len(pending):
            return
        w_total = int(budget)

        def rec(i: int, w: int, c: Fraction, created: list[int]) -> None:
            if i == len(pending):
                if r == 0:
                    if w == 0:
                        emit(remaining + created, c)
                    return
                for lam_parts in partitions_of(w):
                    emit(
                        remaining + created + list(lam_parts),
                        c * _exp_coeff(r, k, lam_parts),
                    )
                return
            n_i = pending[i]
            rest = len(pending) - i - 1
            for p in range(1, w - rest + 1):
                dc = _dcoef(n_i, Fraction(-p))
                if dc:
                    rec(i + 1, w - p, c * dc, created + [p])

        rec(0, w_total, coeff, [])

    def stage_aminus(
        counts: dict[int, int], zshift: Fraction, coeff: Fraction, pending: tuple[int, ...]
    ) -> None:
        values = [p for p in sorted(counts) if counts[p] > 0]

        def rec(i: int, cstate: dict[int, int], z: Fraction, c: Fraction) -> None:
            if i == len(values):
                z += Fraction(r * s, 2 * k)  # the z^{lambda(0)} factor
                remaining = [p for p, mult in sorted(cstate.items()) for _ in range(mult)]
                budget = (target - z) + sum(pending)
                stage_create(remaining, pending, budget, c)
                return
            p = values[i]
            m_p = cstate[p]
            rec(i + 1, cstate, z, c)
            if r != 0:
                binom = 1
                for j in range(1, m_p + 1):
                    binom = binom * (m_p - j + 1) // j
                    c_j = c * (-r) ** j * binom
                    c2 = dict(cstate)
                    c2[p] = m_p - j
                    rec(i + 1, c2, z - p * j, c_j)

        rec(0, counts, zshift, coeff)

    def stage_factors(
        idx: int, counts: dict[int, int], zshift: Fraction, coeff: Fraction, pending: tuple[int, ...]
    ) -> None:
        if idx == len(nu):
            stage_aminus(counts, zshift, coeff, pending)
            return
        n_i = nu[idx]
        stage_factors(idx + 1, counts, zshift, coeff, pending + (n_i,))
        if s != 0:
            stage_factors(idx + 1, counts, zshift - n_i, coeff * _dcoef(n_i, Fraction(0)) * s, pending)
        for j in sorted(counts):
            mult = counts[j]
            if mult == 0:
                continue
            dc = _dcoef(n_i, Fraction(j))
            if not dc:
                continue
            c2 = dict(counts)
            c2[j] = mult - 1
            stage_factors(
                idx + 1, c2, zshift - j - n_i, coeff * dc * mult * (2 * k * j), pending
            )

    stage_factors(0, counts0, Fraction(0), Fraction(1), ())
    return out


def vertex_mode(u: UVector, m, v: UVector, cutoff=None) -> UVector:
    """The mode u_m of the untwisted operator of u, applied to v.

    Exact; `cutoff`, when given, must dominate the weight of v (guard
    against accidentally feeding unbounded sweeps).
    """
    params = u.params
    if params != v.params:
        raise ValueError("vertex_mode: mixed ring parameters")
    m = Fraction(m)
    if cutoff is not None and v and v.max_weight() > Fraction(cutoff):
        raise ValueError(
            f"cutoff {cutoff} is below the weight {v.max_weight()} of the target"
        )
    acc: dict = {}
    for (nu, r), cu in u.terms.items():
        for (mu, s), cv in v.terms.items():
            if (m + Fraction(r * s, 2 * params.k)).denominator != 1:
                continue  # outside the support grid of this term pair
            cuv = cu * cv
            for key, q in _term_mode(params, nu, r, mu, s, m).items():
                c = cuv * q
                prev = acc.get(key)
                total = c if prev is None else prev + c
                if total.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = total
    return UVector(params, acc)


def mode_exponents(u: UVector, v: UVector, out_weights) -> list[Fraction]:
    """Exponents m whose mode sends top weights of u tensor v to the listed
    output weights: m = wt(u) + wt(v) - 1 - w."""
    wu = u.max_weight()
    wv = v.max_weight()
    return [wu + wv - 1 - Fraction(w) for w in out_weights]


# -- distinguished vectors -------------------------------------------------------


def omega_vec(params: RingParams) -> UVector:
    """Conformal vector (1/4k) a(-1)^2 e[0]."""
    return u_term(params, [1, 1], 0, Fraction(1, 4 * params.k))


def e_vec(params: RingParams) -> UVector:
    """E = e[2k] + e[-2k], the symmetric weight-k lattice vector."""
    from .fock import lattice_vector

    return lattice_vector(params, 2 * params.k) + lattice_vector(params, -2 * params.k)


def f_vec(params: RingParams) -> UVector:
    """F = e[2k] - e[-2k], the antisymmetric partner of E."""
    from .fock import lattice_vector

    return lattice_vector(params, 2 * params.k) - lattice_vector(params, -2 * params.k)


def j_vec(params: RingParams) -> UVector:
    """The degree-4 singlet generator, written on the alpha basis."""
    k2 = 2 * params.k
    return (
        u_term(params, [1, 1, 1, 1], 0, Fraction(1, k2 * k2))
        + u_term(params, [3, 1], 0, Fraction(-2, k2))
        + u_term(params, [2, 2], 0, Fraction(3, 2) / k2)
    )


def p_coeff_apply(params: RingParams, sign: int, n: int, v: UVector) -> UVector:
    """Degree-n coefficient of the creation exponential for +-alpha,
    as a multiplication operator (independent of the vertex engine)."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return v
    out = UVector(params, {})
    for parts in partitions_of(n):
        coeff = Fraction(1)
        seen: dict[int, int] = {}
        for q in parts:
            seen[q] = seen.get(q, 0) + 1
        for q, i_q in seen.items():
            coeff *= Fraction(sign, q) ** i_q / factorial(i_q)
        out = out + v.map_terms(
            lambda key, c, _p=parts, _c=coeff: [((sort_parts(key[0] + _p), key[1]), c * _c)]
        )
    return out


# -- commutator checks -----------------------------------------------------------


def commutator_check(
    params: RingParams, m: int, b: int, cutoff, coset: int = 0
) -> bool:
    """Check [alpha(m), Y(e_{b*alpha}, z)] = 2kb z^m Y(e_{b*alpha}, z) mode by
    mode on every basis vector of the given untwisted coset up to cutoff."""
    from .fock import lattice_vector

    k = params.k
    u = lattice_vector(params, 2 * k * b)
    pairing = 2 * k * b
    cutoff = Fraction(cutoff)
    for key in coset_basis(params, coset, cutoff):
        w = UVector(params, {key: 1})
        wt_w = w.max_weight()
        wsum = Fraction(k * b * b) + wt_w
        qmin = wsum - 1 - cutoff - abs(m) - 1
        q = wsum - 1 + abs(m) + 1
        while q >= qmin:
            lhs = heis_act(m, vertex_mode(u, q, w)) - vertex_mode(u, q, heis_act(m, w))
            rhs = vertex_mode(u, q + m, w) * pairing
            if lhs != rhs:
                return False
            q -= 1
    return True
