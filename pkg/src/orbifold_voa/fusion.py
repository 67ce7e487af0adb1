"""The fusion-rule decision procedure.

Two generating tables (one for triples of untwisted labels, one for
twisted first label) are transcribed as data, closed under the two fusion
symmetries

    N(W1, W2, W3) = N(W2, W1, W3) = N(W1, W3', W2')

and the closure is required to coincide exactly with a transcription of
the full published table; any divergence is a build failure carrying the
offending triples.  Queries are then set membership.

The independent upper bound comes from restricting to constituents of the
Heisenberg-orbifold decomposition: the bound of a triple is the minimum
over constituent pairs of the summed constituent fusion numbers in the
target.  Three zeros of the full table are invisible to this bound (the
matched-sign half-shift triples against the odd lattice piece); they are
exposed by `bound_blind_zeros`.
"""

from __future__ import annotations

from functools import lru_cache

from . import labels as lb
from .labels import (
    M1Label,
    ModuleLabel,
    all_labels,
    half,
    lam,
    m_lam,
    m_tw,
    m_vac,
    normalize_lam_index,
    tw,
    u_minus,
    u_plus,
)
from .zhu import contragredient


class EngineInconsistencyError(RuntimeError):
    """The symmetry closure of the generating tables and the transcribed
    full table disagree; carries the offending triples."""

    def __init__(self, missing, extra):
        self.missing = sorted(missing)
        self.extra = sorted(extra)
        msg = []
        if missing:
            msg.append(f"{len(missing)} closure triples missing from the table")
        if extra:
            msg.append(f"{len(extra)} table triples not generated by closure")
        sample = (self.missing + self.extra)[:5]
        detail = "; ".join(t1.code + "," + t2.code + "," + t3.code for t1, t2, t3 in sample)
        super().__init__("; ".join(msg) + f" (e.g. {detail})")


# Literal-source divergences resolved during transcription; parsed by the
# CLI report, asserted stable by the tests.
TRANSCRIPTION_NOTES = (
    "generating table, lattice-coset case: the printed first pair family "
    "reads (V+-,V+-); symmetry closure forces (V+-,Vl<r>) and that "
    "correction is transcribed",
    "full table, lattice-coset case: the printed pair family (V+-,Vl<r>) "
    "appears twice; transcribed once",
    "pair families with target index r+s = 0 mod 2k expand to both V+ and "
    "V-, and with target index k mod 2k to both Va+ and Va-, matching the "
    "eigenspace split of the reducible coset",
)

Triple = tuple[ModuleLabel, ModuleLabel, ModuleLabel]


def _lam_targets(t: int, k: int) -> list[ModuleLabel]:
    """Labels carrying the coset of lambda_t: one middle label, or both
    eigenspace labels at the reducible boundary cosets."""
    t0 = t % (2 * k)
    if t0 > k:
        t0 = 2 * k - t0
    if t0 == 0:
        return [u_plus(), u_minus()]
    if t0 == k:
        return [half(+1), half(-1)]
    return [lam(t0)]


def _untwisted_base(k: int) -> set[Triple]:
    """Generating table for triples of untwisted labels."""
    vp, vm = u_plus(), u_minus()
    out: set[Triple] = set()
    untw = [vp, vm] + [lam(r) for r in range(1, k)] + [half(+1), half(-1)]
    for w in untw:
        out.add((vp, w, w))
    # first label the odd lattice piece
    out |= {(vm, vp, vm), (vm, vm, vp), (vm, half(+1), half(-1)), (vm, half(-1), half(+1))}
    for r in range(1, k):
        out.add((vm, lam(r), lam(r)))
    # first label a half-shift eigenspace
    for e in (+1, -1):
        va = half(e)
        out |= {(va, vp, half(e)), (va, vm, half(-e))}
        for s in (+1, -1):
            out.add((va, contragredient(half(s), k), vp if e * s > 0 else vm))
        for r in range(1, k):
            out.add((va, lam(r), lam(k - r)))
    # first label a middle coset
    for r in range(1, k):
        w1 = lam(r)
        out |= {(w1, vp, lam(r)), (w1, vm, lam(r))}
        for e in (+1, -1):
            out.add((w1, half(e), lam(k - r)))
            out.add((w1, lam(k - r), half(e)))
        for s in range(1, k):
            for t in (r + s, r - s):
                for target in _lam_targets(t, k):
                    out.add((w1, lam(s), target))
    return out


def _twisted_base(k: int) -> set[Triple]:
    """Generating table for twisted first label; the four cases are indexed
    by the contragredients of the twisted labels."""
    vp, vm = u_plus(), u_minus()

    def dual(label: ModuleLabel) -> ModuleLabel:
        return contragredient(label, k)

    out: set[Triple] = set()
    for i in (1, 2):
        for e in (+1, -1):
            w1 = dual(tw(i, e))
            # lattice-eigenspace pairs
            out.add((w1, vp, dual(tw(i, e))))
            out.add((w1, vm, dual(tw(i, -e))))
            out.add((w1, tw(i, e), vp))
            out.add((w1, tw(i, -e), vm))
            # half-shift pairs; the sector flips the matching sign
            flip = 1 if i == 1 else -1
            out.add((w1, half(+1), tw(i, e * flip if flip > 0 else -e)))
            out.add((w1, half(-1), tw(i, -e if flip > 0 else e)))
            out.add((w1, dual(tw(i, e if flip > 0 else -e)), dual(half(+1))))
            out.add((w1, dual(tw(i, -e if flip > 0 else e)), dual(half(-1))))
            # middle cosets, gated by index parity
            for r in range(1, k):
                j = i if r % 2 == 0 else 3 - i
                for e2 in (+1, -1):
                    out.add((w1, lam(r), dual(tw(j, e2))))
                    out.add((w1, tw(j, e2), lam(r)))
    return out


def _transcribed_full(k: int) -> set[Triple]:
    """The published full table, primes resolved for this k."""
    vp, vm = u_plus(), u_minus()

    def dual(label: ModuleLabel) -> ModuleLabel:
        return contragredient(label, k)

    out: set[Triple] = set()
    # identity row, all labels
    for w in all_labels(k):
        out.add((vp, w, w))
    # odd lattice piece
    out |= {(vm, vp, vm), (vm, vm, vp), (vm, half(+1), half(-1)), (vm, half(-1), half(+1))}
    for r in range(1, k):
        out.add((vm, lam(r), lam(r)))
    for i in (1, 2):
        for e in (+1, -1):
            out.add((vm, tw(i, e), tw(i, -e)))
    # half-shift eigenspaces
    for e in (+1, -1):
        va = half(e)
        out |= {(va, vp, half(e)), (va, vm, half(-e))}
        for s in (+1, -1):
            out.add((va, dual(half(s)), vp if e * s > 0 else vm))
        for r in range(1, k):
            out.add((va, lam(r), lam(k - r)))
        for e2 in (+1, -1):
            out.add((va, dual(tw(1, e2)), tw(1, e2 * e)))
            out.add((va, dual(tw(2, e2)), tw(2, -e2 * e)))
    # middle cosets
    for r in range(1, k):
        w1 = lam(r)
        out |= {(w1, vp, lam(r)), (w1, vm, lam(r))}
        for e in (+1, -1):
            out.add((w1, half(e), lam(k - r)))
            out.add((w1, lam(k - r), half(e)))
        for s in range(1, k):
            for t in (r + s, r - s):
                for target in _lam_targets(t, k):
                    out.add((w1, lam(s), target))
        for i in (1, 2):
            j = i if r % 2 == 0 else 3 - i
            for e in (+1, -1):
                for e2 in (+1, -1):
                    out.add((w1, tw(i, e), tw(j, e2)))
    # twisted first label: same shape as the generating table
    out |= _twisted_base(k)
    return out


def _closure(base: set[Triple], k: int) -> frozenset[Triple]:
    table = set(base)
    frontier = set(base)
    while frontier:
        new: set[Triple] = set()
        for (w1, w2, w3) in frontier:
            for img in (
                (w2, w1, w3),
                (w1, contragredient(w3, k), contragredient(w2, k)),
            ):
                if img not in table:
                    new.add(img)
        table |= new
        frontier = new
    return frozenset(table)


class FusionEngine:
    """Queryable fusion table for a fixed k, built by symmetry closure of
    the generating tables and cross-checked against the full transcription
    at construction time."""

    def __init__(self, k: int, check: bool = True):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.k = k
        self.labels = all_labels(k)
        self.base = frozenset(_untwisted_base(k) | _twisted_base(k))
        self.table = _closure(set(self.base), k)
        self.transcribed = frozenset(_transcribed_full(k))
        self.notes = TRANSCRIPTION_NOTES
        if check and self.table != self.transcribed:
            raise EngineInconsistencyError(
                self.table - self.transcribed, self.transcribed - self.table
            )

    def _norm(self, label: ModuleLabel) -> ModuleLabel:
        if label.kind == lb.LAM:
            return lam(normalize_lam_index(label.r, self.k))
        lb.validate_label(label, self.k)
        return label

    def fusion(self, w1: ModuleLabel, w2: ModuleLabel, w3: ModuleLabel) -> int:
        triple = (self._norm(w1), self._norm(w2), self._norm(w3))
        return 1 if triple in self.table else 0

    def all_triples(self):
        for w1 in self.labels:
            for w2 in self.labels:
                for w3 in self.labels:
                    yield (w1, w2, w3)


@lru_cache(maxsize=None)
def get_engine(k: int) -> FusionEngine:
    return FusionEngine(k)


def fusion(k: int, w1: ModuleLabel, w2: ModuleLabel, w3: ModuleLabel) -> int:
    return get_engine(k).fusion(w1, w2, w3)


def quasi_admissible(r: int, i: int, j: int) -> bool:
    """Parity gate for the twisted intertwiners: the sign (-1)^(r+d_ij+1)
    must be +1."""
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError("sectors must be 1 or 2")
    return (r + (1 if i == j else 0) + 1) % 2 == 0


# -- decompositions and the restriction bound ------------------------------------


def decompose(label: ModuleLabel, k: int, window: int | None = None) -> list[tuple[M1Label, int | None]]:
    """Constituents of the label as (constituent, lattice index) pairs;
    infinite families are listed for |shift| <= window (default 2k+2).
    Each constituent occurs with multiplicity one."""
    lb.validate_label(label, k)
    w = 2 * k + 2 if window is None else window
    if label.kind == lb.VAC:
        out: list[tuple[M1Label, int | None]] = [(m_vac(label.sign), 0)]
        out += [(m_lam(2 * k * m), 2 * k * m) for m in range(1, w + 1)]
        return out
    if label.kind == lb.LAM:
        return [
            (m_lam(label.r + 2 * k * m), label.r + 2 * k * m)
            for m in range(-w, w + 1)
        ]
    if label.kind == lb.HALF:
        return [(m_lam(k + 2 * k * m), k + 2 * k * m) for m in range(0, w + 1)]
    return [(m_tw(label.sign), None)]


def m1_fusion(m: M1Label, n: M1Label, l: M1Label) -> int:
    """Fusion numbers of the Heisenberg-orbifold constituents."""
    if m.kind == lb.M_VAC:
        if m.sign > 0:
            return 1 if n == l else 0
        if n.kind == lb.M_VAC and l.kind == lb.M_VAC:
            return 1 if n.sign != l.sign else 0
        if n.kind == lb.M_TW and l.kind == lb.M_TW:
            return 1 if n.sign != l.sign else 0
        if n.kind == lb.M_LAM and l.kind == lb.M_LAM:
            return 1 if n.index == l.index else 0
        return 0
    if m.kind == lb.M_LAM:
        c = m.index
        if n.kind == lb.M_VAC and l.kind == lb.M_LAM:
            return 1 if l.index == c else 0
        if n.kind == lb.M_LAM and l.kind == lb.M_VAC:
            return 1 if n.index == c else 0
        if n.kind == lb.M_LAM and l.kind == lb.M_LAM:
            return 1 if l.index in (c + n.index, abs(c - n.index)) else 0
        if n.kind == lb.M_TW and l.kind == lb.M_TW:
            return 1
        return 0
    # twisted first constituent
    if n.kind == lb.M_VAC and l.kind == lb.M_TW:
        return 1 if (n.sign == l.sign) == (m.sign > 0) else 0
    if n.kind == lb.M_TW and l.kind == lb.M_VAC:
        return 1 if (n.sign == l.sign) == (m.sign > 0) else 0
    if n.kind == lb.M_LAM and l.kind == lb.M_TW:
        return 1
    if n.kind == lb.M_TW and l.kind == lb.M_LAM:
        return 1
    return 0


def upper_bound(w1: ModuleLabel, w2: ModuleLabel, w3: ModuleLabel, k: int) -> int:
    """Injectivity bound: minimum over constituent pairs of the summed
    constituent fusion numbers into the target's constituents.

    The target enumeration window is exact for each chosen pair (index sums
    bound the reachable constituents); the minimization window on the
    sources is 2k+2, beyond which the repeating norm pattern cannot lower
    the minimum further.
    """
    dec1 = decompose(w1, k)
    dec2 = decompose(w2, k)
    max_idx = max(
        (abs(c) for _, c in dec1 + dec2 if c is not None), default=0
    )
    win3 = max_idx // k + 3
    dec3 = decompose(w3, k, window=win3)
    best: int | None = None
    for m, _ in dec1:
        for n, _ in dec2:
            total = sum(m1_fusion(m, n, l) for l, _ in dec3)
            if best is None or total < best:
                best = total
            if best == 0:
                return 0
    return best if best is not None else 0


def bound_blind_zeros(k: int) -> list[Triple]:
    """The position rotations of the matched-sign half-shift triples against
    the odd lattice piece: fusion zero, restriction bound >= 1."""
    vm = u_minus()
    out: list[Triple] = []
    for e in (+1, -1):
        va = half(e)
        out.append((vm, va, va))
        out.append((va, vm, va))
        out.append((va, contragredient(va, k), vm))
    return out
