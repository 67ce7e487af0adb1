"""Explicit intertwining operators between the irreducible modules, with
nonvanishing witnesses and the forced-zero verification for the one case
the restriction bound cannot see.

Untwisted intertwiners compose the plain vertex operator with a phase
twist: the operator attached to u at lattice index a multiplies a target
term at index s by zeta^(a*s) before acting.  The theta-composed variant
feeds theta(v) instead of v and lands in the difference coset.  Twisted
ones are the tilde operators of the twisted module layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import labels as lb
from .fock import (
    TVector,
    UVector,
    heis_act,
    lattice_vector,
    project_eigen,
    theta,
    top_vector,
)
from .ring import RingParams
from .twisted import tilde_mode
from .untwisted import e_vec, vertex_mode

# intertwiner kinds
Y_RS = "Y_rs"                  # vertex operator with phase twist
Y_RS_THETA = "Y_rs_theta"      # same, precomposed with theta on the target
TILDE = "tilde_Y"              # twisted, sector maps attached
TILDE_THETA = "tilde_Y_theta"  # twisted, precomposed with theta

KINDS = (Y_RS, Y_RS_THETA, TILDE, TILDE_THETA)


def phase_apply(r: int, v: UVector) -> UVector:
    """Multiply each term at lattice index s by zeta^(r*s)."""
    params = v.params

    def act(key, c):
        _parts, s = key
        yield key, c * params.zeta(r * s)

    return v.map_terms(act)


@dataclass(frozen=True)
class IntertwinerSpec:
    """A named explicit intertwiner: kind plus the lattice coset data.

    r is the coset index of the first module; s of the second (unused by
    the twisted kinds, which read sector data off the vectors).
    """

    kind: str
    r: int = 0
    s: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown intertwiner kind {self.kind!r}")

    @property
    def name(self) -> str:
        if self.kind == Y_RS:
            return f"Y[{self.r},{self.s}]"
        if self.kind == Y_RS_THETA:
            return f"Y[{self.r},{-self.s}]∘theta"
        if self.kind == TILDE:
            return f"Ytilde[{self.r}]"
        return f"Ytilde[{self.r}]∘theta"


def intertwiner_mode(spec: IntertwinerSpec, u: UVector, m, v, cutoff=None):
    """Exact mode action of the chosen intertwiner."""
    params = u.params
    k = params.k
    for (_parts, a) in u.terms:
        if (a - spec.r) % (2 * k) != 0:
            raise ValueError(
                f"first input lives at lattice index {a}, not in the coset "
                f"{spec.r} mod {2 * k} declared by {spec.name}"
            )
    if spec.kind in (Y_RS, Y_RS_THETA):
        if not isinstance(v, UVector):
            raise ValueError(f"{spec.name} needs an untwisted second input")
        for (_parts, s) in v.terms:
            if (s - spec.s) % (2 * k) != 0:
                raise ValueError(
                    f"second input lives at lattice index {s}, not in the "
                    f"coset {spec.s} mod {2 * k} declared by {spec.name}"
                )
        target = v if spec.kind == Y_RS else theta(v)
        return vertex_mode(u, m, phase_apply(spec.r, target), cutoff)
    if not isinstance(v, TVector):
        raise ValueError(f"{spec.name} needs a twisted second input")
    target = v if spec.kind == TILDE else theta(v)
    return tilde_mode(u, m, target, cutoff)


def support_modes(spec: IntertwinerSpec, u, v, cutoff) -> list[Fraction]:
    """Mode exponents on the support grid of (u, v) whose output weight lies
    in [0, cutoff], highest (lowest output weight) first."""
    from math import floor

    params = u.params
    k = params.k
    m_high = u.max_weight() + v.max_weight() - 1
    m_low = m_high - Fraction(cutoff)
    offsets: set[Fraction] = set()
    if spec.kind in (Y_RS, Y_RS_THETA):
        step = Fraction(1)
        vv = v if spec.kind == Y_RS else theta(v)
        for (_p, a) in u.terms:
            for (_q, s) in vv.terms:
                offsets.add(Fraction(-a * s, 2 * k) % step)
    else:
        step = Fraction(1, 2)
        for (_p, a) in u.terms:
            offsets.add(Fraction(a * a, 4 * k) % step)
    modes: set[Fraction] = set()
    for off in offsets:
        m = off + step * floor((m_high - off) / step)
        while m >= m_low:
            modes.add(m)
            m -= step
    return sorted(modes, reverse=True)


def nonvanishing_witness(spec: IntertwinerSpec, u, v, cutoff, target_sign: int = 0) -> bool:
    """Scan modes on the support grid down to output weight `cutoff` and
    report whether any image is nonzero (projected onto a target eigenspace
    when target_sign is +-1)."""
    if not u or not v:
        raise ValueError("witness inputs must be nonzero")
    for m in support_modes(spec, u, v, cutoff):
        img = intertwiner_mode(spec, u, m, v)
        if target_sign and img:
            img = project_eigen(img, target_sign)
        if img:
            return True
    return False


def first_nonzero_mode(spec: IntertwinerSpec, u, v, cutoff):
    """(mode, image) of the first nonzero mode in the scan window, or None."""
    for m in support_modes(spec, u, v, cutoff):
        img = intertwiner_mode(spec, u, m, v)
        if img:
            return m, img
    return None


# -- the one bound-blind vanishing ------------------------------------------------


def _phi_restrict(x: UVector, k: int) -> UVector:
    """Isomorphism from the zero-layer of the half-shift eigenmodule onto the
    single coset component: keep the terms at lattice index +k."""
    return UVector(x.params, {key: c for key, c in x.terms.items() if key[1] == k})


def _phi_inverse(y: UVector) -> UVector:
    """Inverse of _phi_restrict on its image: symmetrize with theta."""
    return y + theta(y)


def forced_zero_coupling(params: RingParams, cutoff=None) -> bool:
    """Decide whether the coupling constant of the unique candidate
    intertwiner from the odd lattice piece into the plus half-shift module
    is forced to vanish.

    The candidate is the one-parameter family d * phi^{-1} Y(u, z) phi(v)
    on the zero layer.  Commuting the weight-k symmetric lattice mode
    through the degree-one oscillator modes expresses the same auxiliary
    mode two ways; the difference of the two evaluations multiplies d, so
    d = 0 is forced exactly when that difference is nonzero.  All the
    ingredient identities are recomputed here, not assumed.
    """
    k = params.k
    E = e_vec(params)
    v0 = lattice_vector(params, k) + lattice_vector(params, -k)

    # ingredient identities of the commutation argument
    a1 = UVector(params, {((1,), 0): 1})
    f = lattice_vector(params, 2 * k) - lattice_vector(params, -2 * k)
    if vertex_mode(E, 0, a1) != f * (-2 * k):
        return False
    for i in range(1, k + 1):
        if vertex_mode(E, i, a1):
            return False
    if vertex_mode(E, k - 1, v0) != v0:
        return False
    w = heis_act(-1, lattice_vector(params, k)) - heis_act(-1, lattice_vector(params, -k))
    if vertex_mode(E, k, w) != v0 * (2 * k):
        return False
    if vertex_mode(E, k, v0):
        return False

    def conj(mode_n: int, e_mode: int, x: UVector) -> UVector:
        # E_{e_mode} phi^{-1} alpha(mode_n) phi (x)  minus the other order
        lhs = vertex_mode(E, e_mode, _phi_inverse(heis_act(mode_n, _phi_restrict(x, k))))
        rhs = _phi_inverse(heis_act(mode_n, _phi_restrict(vertex_mode(E, e_mode, x), k)))
        return lhs - rhs

    a_side = conj(-1, k, v0)
    b_side = conj(0, k - 1, v0)
    return bool(a_side - b_side)


# -- matching explicit constructions to fusion triples ------------------------------


def _witness_vector(params: RingParams, label: lb.ModuleLabel):
    """A nonzero low-weight vector of the labelled module; falls back to the
    degree-one oscillator state for the two-dimensional top level at k=1."""
    if params.k == 1 and label == lb.u_minus():
        return UVector(params, {((1,), 0): 1})
    return top_vector(params, label)


def _coset_and_top(params: RingParams, label: lb.ModuleLabel):
    k = params.k
    return lb.lattice_coset(label, k), _witness_vector(params, label)


def direct_witness(params: RingParams, triple) -> tuple[IntertwinerSpec, object, object, int] | None:
    """The explicit construction covering a triple, if one applies directly.

    Returns (spec, u, v, target_sign) with target_sign 0 when the target is
    a full lattice coset rather than an eigenspace.  Triples whose first
    label is twisted (reachable only through the fusion symmetries) get
    None.
    """
    k = params.k
    w1, w2, w3 = triple
    if w1.is_twisted:
        return None
    n_twisted = sum(1 for w in triple if w.is_twisted)
    if n_twisted == 2 and not w2.is_twisted:
        return None  # positions (1, 3): no direct construction
    if n_twisted in (1, 3):
        return None  # these fusion rules all vanish; nothing to witness
    r1, u = _coset_and_top(params, w1)
    if n_twisted == 2:
        v = _witness_vector(params, w2)
        spec = IntertwinerSpec(TILDE, r1)
        return spec, u, v, w3.sign
    r2, v = _coset_and_top(params, w2)
    r3 = lb.lattice_coset(w3, k)
    sign = w3.sign if w3.kind in (lb.VAC, lb.HALF) else 0
    if (r1 + r2 - r3) % (2 * k) == 0:
        return IntertwinerSpec(Y_RS, r1, r2), u, v, sign
    if (r1 - r2 - r3) % (2 * k) == 0:
        return IntertwinerSpec(Y_RS_THETA, r1, r2), u, v, sign
    return None


# -- residue form of the defining commutation -----------------------------------


def jacobi_commutator_check(
    spec: IntertwinerSpec,
    a: UVector,
    n: int,
    u: UVector,
    v,
    mode_window: int = 3,
) -> bool:
    """Check [a_n, Y(u)_q] = sum_i C(n, i) Y(a_i u)_{n+q-i} for the spec'd
    intertwiner, where a acts through its module vertex operator on both
    sides.  Valid for untwisted kinds and integer modes of a."""
    if spec.kind not in (Y_RS, Y_RS_THETA):
        raise ValueError("residue check implemented for untwisted kinds")
    params = u.params
    wa = a.max_weight()
    wu = u.max_weight()
    i_max = int(wa + wu) + 1
    a_images = {}
    for i in range(0, i_max + 1):
        ai_u = vertex_mode(a, i, u)
        if ai_u:
            a_images[i] = ai_u
    wsum = wu + v.max_weight()
    q0 = wsum - 1
    for dq in range(mode_window + 1):
        q = q0 - dq
        lhs = vertex_mode(a, n, intertwiner_mode(spec, u, q, v)) - intertwiner_mode(
            spec, u, q, vertex_mode(a, n, v)
        )
        rhs = UVector(params, {})
        for i, ai_u in a_images.items():
            binom = Fraction(1)
            for y in range(i):
                binom *= Fraction(n - y, y + 1)
            if binom:
                rhs = rhs + intertwiner_mode(spec, ai_u, n + q - i, v) * binom
        if lhs != rhs:
            return False
    return True
