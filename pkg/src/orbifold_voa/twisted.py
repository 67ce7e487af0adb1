"""Twisted vertex operators, the quadratic exponential correction, and the
sector endomorphisms used by the twisted intertwiners.

The operator attached to u at lattice index r acts on the twisted Fock
space through three layers:

1. exp(Delta_z) u, a finite z-polynomial correction whose coefficients
   c[m][n] come from the expansion of -log(((1+x)^(1/2)+(1+y)^(1/2))/2);
2. the normally ordered half-odd-mode expansion with scalar prefactor
   2^(-<lam,lam>) and exponent shift z^(-<lam,lam>/2);
3. a signed permutation of the two sector characters: e_{m*alpha} for
   lattice u, and the swap-based maps psi for general dual-lattice u.

Modes are indexed like the untwisted case (coefficient of z^(-m-1)); for
u at lattice index r the support grid is -r^2/4k + (1/2)Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .fock import (
    TVector,
    UVector,
    half_odd_partitions_of,
    heis_act,
    sort_parts,
)
from .ring import RingParams
from .untwisted import _dcoef

HALF = Fraction(1, 2)


# -- expansion coefficients of the quadratic correction ---------------------------


def _series_mul(a: dict, b: dict, order: int) -> dict:
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), ca in a.items():
        for (p, q), cb in b.items():
            if i + j + p + q > order:
                continue
            key = (i + p, j + q)
            s = out.get(key, Fraction(0)) + ca * cb
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


@lru_cache(maxsize=None)
def delta_table(order: int) -> dict[tuple[int, int], Fraction]:
    """All c[m][n] with m+n <= order, by exact series composition."""
    # (1+x)^(1/2) as a univariate series embedded in two variables
    half_binom = [Fraction(1)]
    for n in range(1, order + 1):
        half_binom.append(half_binom[-1] * (HALF - (n - 1)) / n)
    w: dict[tuple[int, int], Fraction] = {}
    for n in range(1, order + 1):
        c = half_binom[n] / 2
        w[(n, 0)] = c
        w[(0, n)] = c
    # -log(1 + w) = sum_{j>=1} (-1)^j w^j / j; w has no constant term
    acc: dict[tuple[int, int], Fraction] = {}
    wp = {(0, 0): Fraction(1)}
    for j in range(1, order + 1):
        wp = _series_mul(wp, w, order)
        sign = Fraction((-1) ** j, j)
        for key, c in wp.items():
            s = acc.get(key, Fraction(0)) + sign * c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    full = {}
    for mm in range(order + 1):
        for nn in range(order + 1 - mm):
            full[(mm, nn)] = acc.get((mm, nn), Fraction(0))
    return full


def delta_coeff(m: int, n: int) -> Fraction:
    """The exact coefficient c[m][n] of the correction generating function."""
    if m < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    return delta_table(m + n)[(m, n)]


def delta_apply(u: UVector) -> dict[int, UVector]:
    """Finite expansion of exp(Delta_z) u as {d: coefficient of z^(-d)}.

    Delta_z is quadratic in oscillator modes with strictly weight-lowering
    terms, hence nilpotent on finite vectors; nothing is truncated.
    """
    params = u.params
    k = params.k
    if not u:
        return {}
    maxw = max((sum(parts) for (parts, _r) in u.terms), default=0)
    table = delta_table(int(maxw)) if maxw else {}
    pairs = [(mn, c) for mn, c in table.items() if c and sum(mn) >= 1]

    def once(state: dict[int, UVector]) -> dict[int, UVector]:
        out: dict[int, UVector] = {}
        for d, vec in state.items():
            for (mm, nn), c in pairs:
                w = heis_act(mm, heis_act(nn, vec)) * (c / (2 * k))
                if w:
                    key = d + mm + nn
                    out[key] = out[key] + w if key in out else w
        return out

    acc = {0: u}
    cur = {0: u}
    j = 1
    while cur:
        nxt = once(cur)
        cur = {d: v / j for d, v in nxt.items() if v}
        for d, v in cur.items():
            acc[d] = acc[d] + v if d in acc else v
        j += 1
    return {d: v for d, v in acc.items() if v}


# -- sector endomorphisms -----------------------------------------------------------

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))
SWAP: Matrix = ((0, 1), (1, 0))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][l] * b[l][j] for l in range(2)) for j in range(2))
        for i in range(2)
    )  # type: ignore[return-value]


@dataclass(frozen=True)
class PsiMap:
    """Signed permutation of the two sector characters."""

    matrix: Matrix

    def compose(self, other: "PsiMap") -> "PsiMap":
        return PsiMap(_matmul(self.matrix, other.matrix))

    def __mul__(self, other: "PsiMap") -> "PsiMap":
        return self.compose(other)

    def scale(self, sign: int) -> "PsiMap":
        return PsiMap(tuple(tuple(sign * x for x in row) for row in self.matrix))  # type: ignore[arg-type]

    def apply(self, v: TVector) -> TVector:
        mat = self.matrix

        def act(key, c):
            parts, sector = key
            for j in (1, 2):
                entry = mat[j - 1][sector - 1]
                if entry:
                    yield (parts, j), c * entry

        return v.map_terms(act)


def lattice_sector_map(b: int) -> PsiMap:
    """Action of e_{b*alpha} on the sector pair: the identity on the first
    character and (-1)^b on the second."""
    return PsiMap(((1, 0), (0, -1 if b % 2 else 1)))


def psi_map(params: RingParams, r: int) -> PsiMap:
    """The endomorphism attached to lambda_r, via the decomposition
    r = r0 + 2k*m with -k+1 <= r0 <= k."""
    k = params.k
    r0 = ((r + k - 1) % (2 * k)) - (k - 1)
    mshift = (r - r0) // (2 * k)
    out = lattice_sector_map(mshift)
    if r0 % 2:
        out = out.compose(PsiMap(SWAP))
    return out


# -- the half-odd mode engine --------------------------------------------------------


def _exp_coeff_half(r: int, k: int, created: tuple[Fraction, ...]) -> Fraction:
    coeff = Fraction(1)
    seen: dict[Fraction, int] = {}
    for n in created:
        seen[n] = seen.get(n, 0) + 1
    for n, i_n in seen.items():
        coeff *= (Fraction(r, 2 * k) / n) ** i_n / factorial(i_n)
    return coeff


def _wtheta_term_mode(
    params: RingParams,
    nu: tuple[int, ...],
    r: int,
    mu: tuple[Fraction, ...],
    m: Fraction,
) -> dict[tuple, Fraction]:
    """Mode of the normally ordered half-odd expansion (prefactor excluded)
    of a(-n1)...a(-nl) e[r], on the twisted partition mu."""
    k = params.k
    target = -m - 1 + Fraction(r * r, 4 * k)  # z-budget after the exponent shift
    out: dict[tuple, Fraction] = {}

    counts0: dict[Fraction, int] = {}
    for p in mu:
        counts0[p] = counts0.get(p, 0) + 1

    def emit(parts: list[Fraction], coeff: Fraction) -> None:
        key = sort_parts(parts)
        prev = out.get(key)
        total = coeff if prev is None else prev + coeff
        if total:
            out[key] = total
        else:
            out.pop(key, None)

    def stage_create(
        remaining: list[Fraction], pending: tuple[int, ...], budget: Fraction, coeff: Fraction
    ) -> None:
        if (2 * budget).denominator != 1 or budget < HALF * len(pending):
            return

        def rec(i: int, w: Fraction, c: Fraction, created: list[Fraction]) -> None:
            if i == len(pending):
                if r == 0:
                    if w == 0:
                        emit(remaining + created, c)
                    return
                for lam_parts in half_odd_partitions_of(w):
                    emit(
                        remaining + created + list(lam_parts),
                        c * _exp_coeff_half(r, k, lam_parts),
                    )
                return
            n_i = pending[i]
            rest = len(pending) - i - 1
            p = HALF
            while p <= w - HALF * rest:
                dc = _dcoef(n_i, -p)
                if dc:
                    rec(i + 1, w - p, c * dc, created + [p])
                p += 1

        rec(0, budget, coeff, [])

    def stage_aminus(
        counts: dict[Fraction, int], zshift: Fraction, coeff: Fraction, pending: tuple[int, ...]
    ) -> None:
        values = [p for p in sorted(counts) if counts[p] > 0]

        def rec(i: int, cstate: dict[Fraction, int], z: Fraction, c: Fraction) -> None:
            if i == len(values):
                remaining = [p for p, mult in sorted(cstate.items()) for _ in range(mult)]
                budget = (target - z) + sum(n for n in pending)
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
        idx: int, counts: dict[Fraction, int], zshift: Fraction, coeff: Fraction, pending: tuple[int, ...]
    ) -> None:
        if idx == len(nu):
            stage_aminus(counts, zshift, coeff, pending)
            return
        n_i = nu[idx]
        stage_factors(idx + 1, counts, zshift, coeff, pending + (n_i,))
        for j in sorted(counts):
            mult = counts[j]
            if mult == 0:
                continue
            dc = _dcoef(n_i, j)
            if not dc:
                continue
            c2 = dict(counts)
            c2[j] = mult - 1
            stage_factors(
                idx + 1, c2, zshift - j - n_i, coeff * dc * mult * (2 * k * j), pending
            )

    stage_factors(0, counts0, Fraction(0), Fraction(1), ())
    return out


def _sectorwise(params: RingParams, v: TVector) -> dict[int, dict]:
    by_sector: dict[int, dict] = {1: {}, 2: {}}
    for (parts, sector), c in v.terms.items():
        by_sector[sector][parts] = c
    return by_sector


def tilde_mode(u: UVector, m, v: TVector, cutoff=None) -> TVector:
    """Mode of the twisted intertwiner: the corrected half-odd expansion of
    u tensored with the sector map of each lattice component of u."""
    params = u.params
    if params != v.params:
        raise ValueError("tilde_mode: mixed ring parameters")
    m = Fraction(m)
    if cutoff is not None and v and v.max_weight() > Fraction(cutoff):
        raise ValueError(
            f"cutoff {cutoff} is below the weight {v.max_weight()} of the target"
        )
    k = params.k
    out = TVector(params, {})
    by_r: dict[int, list] = {}
    for (nu, r), cu in u.terms.items():
        by_r.setdefault(r, []).append((nu, cu))
    for r, entries in by_r.items():
        if (2 * (m - Fraction(r * r, 4 * k))).denominator != 1:
            continue  # outside the support grid
        psi = psi_map(params, r)
        prefactor = params.two_to(Fraction(-r * r, 2 * k))
        piece = UVector(params, {(nu, r): c for nu, c in entries})
        corrected = delta_apply(piece)
        acc = TVector(params, {})
        for d, uvec in corrected.items():
            for (nu2, _r2), cdel in uvec.terms.items():
                for (mu, sector), cv in v.terms.items():
                    contrib = _wtheta_term_mode(params, nu2, r, mu, m - d)
                    if not contrib:
                        continue
                    cc = cdel * cv
                    tv = TVector(
                        params, {(parts, sector): cc * q for parts, q in contrib.items()}
                    )
                    acc = acc + tv
        out = out + psi.apply(acc) * prefactor
    return out


def twisted_mode(u: UVector, m, v: TVector, cutoff=None) -> TVector:
    """Twisted module action: defined for u supported on the lattice proper
    (index divisible by 2k); general dual-lattice vectors must go through
    tilde_mode, which attaches the sector maps."""
    k = u.params.k
    for (_nu, r) in u.terms:
        if r % (2 * k) != 0:
            raise ValueError(
                f"twisted_mode needs lattice support; index {r} is not a "
                f"multiple of {2 * k} (use tilde_mode)"
            )
    return tilde_mode(u, m, v, cutoff)


def mtheta_mode(u: UVector, m, v: TVector, cutoff=None) -> TVector:
    """The bare corrected twisted operator with no sector action: the
    intertwiner for the oscillator subalgebra alone.  Sector labels of v
    pass through untouched."""
    params = u.params
    m = Fraction(m)
    k = params.k
    out = TVector(params, {})
    for (nu, r), cu in u.terms.items():
        if (2 * (m - Fraction(r * r, 4 * k))).denominator != 1:
            continue
        prefactor = params.two_to(Fraction(-r * r, 2 * k))
        corrected = delta_apply(UVector(params, {(nu, r): cu}))
        for d, uvec in corrected.items():
            for (nu2, _r2), cdel in uvec.terms.items():
                for (mu, sector), cv in v.terms.items():
                    contrib = _wtheta_term_mode(params, nu2, r, mu, m - d)
                    if not contrib:
                        continue
                    cc = cdel * cv * prefactor
                    out = out + TVector(
                        params, {(parts, sector): cc * q for parts, q in contrib.items()}
                    )
    return out
