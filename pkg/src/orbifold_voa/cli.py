"""Batch command-line surface: fusion queries and table dumps, computed
top-level actions, decomposition listings, and the verification suites.

Output is deterministic: fixed term ordering, fixed JSON key order, and
per-item buffering when suite items run on the worker pool capped by
ORBIFOLD_VOA_THREADS.  Exit codes: 0 success / all pass, 1 usage errors or
failing suite items, 2 fusion-table inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import labels as lb
from . import zhu
from .fock import (
    TVector,
    graded_dim,
    heis_act,
    lattice_vector,
    m1_graded_dim,
    theta,
    twisted_basis,
)
from .fusion import (
    EngineInconsistencyError,
    bound_blind_zeros,
    decompose,
    get_engine,
    upper_bound,
)
from .intertwine import (
    direct_witness,
    first_nonzero_mode,
    forced_zero_coupling,
)
from .ring import RingParams
from .twisted import (
    delta_coeff,
    delta_table,
    lattice_sector_map,
    mtheta_mode,
    psi_map,
    tilde_mode,
)
from .untwisted import commutator_check, e_vec, p_coeff_apply, vertex_mode

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONSISTENT = 2

SUITES = (
    "table1",
    "identities",
    "closure",
    "bounds",
    "decomp",
    "delta",
    "psi",
    "p31",
    "jacobi",
)


def _threads() -> int:
    raw = os.environ.get("ORBIFOLD_VOA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_items(jobs):
    """Run (name, thunk) pairs, possibly on a worker pool, emitting results
    in submission order.  Each thunk returns (status, detail)."""
    n = _threads()
    if n == 1:
        return [(name,) + fn() for name, fn in jobs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = [(name, pool.submit(fn)) for name, fn in jobs]
        return [(name,) + fut.result() for name, fut in futures]


def _emit_report(k: int, command: str, items, fmt: str) -> None:
    if fmt == "json":
        payload = {
            "k": k,
            "command": command,
            "results": [
                {"name": name, "status": status, "detail": detail}
                for name, status, detail in items
            ],
        }
        print(json.dumps(payload))
        return
    for name, status, detail in items:
        line = f"{status.upper():5s} {name}"
        print(line + (f": {detail}" if detail else ""))


def _failed(items) -> bool:
    return any(status == "fail" for _n, status, _d in items)


def _check(ok: bool, detail_pass: str = "", detail_fail: str = ""):
    return ("pass", detail_pass) if ok else ("fail", detail_fail or detail_pass)


# -- verification suites -------------------------------------------------------


def suite_table1(k: int, cutoff, seed: int):
    params = RingParams(k)
    jobs = []
    for label in lb.all_labels(k):
        for gen in zhu.GENERATORS:
            name = f"top action o({gen}) on {label.code}"
            if k == 1 and label == lb.u_minus():
                jobs.append((name, lambda: ("skip", "two-dimensional top level at k=1")))
                continue

            def fn(label=label, gen=gen):
                got = zhu.top_action(params, gen, label)
                want = zhu.expected_top_actions(params, label)[gen]
                return _check(got == want, str(got), f"computed {got}, expected {want}")

            jobs.append((name, fn))
    return _run_items(jobs)


def suite_identities(k: int, cutoff, seed: int):
    params = RingParams(k)
    E = e_vec(params)
    v0 = lattice_vector(params, k) + lattice_vector(params, -k)
    w = heis_act(-1, lattice_vector(params, k)) - heis_act(-1, lattice_vector(params, -k))

    def fixed_point():
        got = vertex_mode(E, k - 1, v0)
        return _check(got == v0, "weight-preserving mode fixes the half-shift top")

    def oscillator_transfer():
        got = vertex_mode(E, k, w)
        return _check(got == v0 * (2 * k), "degree-one oscillator transfer matches")

    def creation_expansion():
        lhs = vertex_mode(E, 0, v0)
        rhs = p_coeff_apply(params, +1, k - 1, lattice_vector(params, k)) + p_coeff_apply(
            params, -1, k - 1, lattice_vector(params, -k)
        )
        return _check(lhs == rhs, "zero mode equals the creation-series coefficient")

    return _run_items(
        [
            ("half-shift top fixed by the symmetric lattice mode", fixed_point),
            ("oscillator transfer identity", oscillator_transfer),
            ("creation-series expansion of the zero mode", creation_expansion),
        ]
    )


def suite_closure(k: int, cutoff, seed: int):
    eng = get_engine(k)

    def build():
        return "pass", f"{len(eng.table)} nonzero triples; closure equals transcription"

    def symmetries():
        for (w1, w2, w3) in eng.all_triples():
            f = eng.fusion(w1, w2, w3)
            if f != eng.fusion(w2, w1, w3):
                return "fail", f"swap symmetry broken at {w1.code},{w2.code},{w3.code}"
            if f != eng.fusion(
                w1, zhu.contragredient(w3, k), zhu.contragredient(w2, k)
            ):
                return "fail", f"dual symmetry broken at {w1.code},{w2.code},{w3.code}"
        return "pass", f"all {(k + 7) ** 3} triples symmetric"

    def notes():
        return "pass", "; ".join(eng.notes)

    return _run_items(
        [
            ("closure fixed point", build),
            ("symmetry sweep", symmetries),
            ("transcription notes", notes),
        ]
    )


def suite_bounds(k: int, cutoff, seed: int):
    eng = get_engine(k)

    def soundness():
        for (w1, w2, w3) in eng.all_triples():
            f = eng.fusion(w1, w2, w3)
            b = upper_bound(w1, w2, w3, k)
            if f > b:
                return "fail", f"fusion {f} > bound {b} at {w1.code},{w2.code},{w3.code}"
        return "pass", f"fusion <= bound on all {(k + 7) ** 3} triples"

    jobs = [("bound soundness", soundness)]
    for t in bound_blind_zeros(k):
        name = f"bound-blind zero {t[0].code},{t[1].code},{t[2].code}"

        def fn(t=t):
            f = eng.fusion(*t)
            b = upper_bound(*t, k)
            return _check(f == 0 and b >= 1, f"fusion {f}, bound {b}")

        jobs.append((name, fn))
    return _run_items(jobs)


def suite_decomp(k: int, cutoff, seed: int):
    params = RingParams(k)
    extra = Fraction(cutoff) if cutoff is not None else Fraction(10)
    jobs = []
    for label in lb.all_labels(k):
        name = f"decomposition character of {label.code}"

        def fn(label=label):
            top = lb.top_weight(label, k)
            steps = int(2 * extra)
            for j in range(steps + 1):
                w = top + Fraction(j, 2)
                lhs = graded_dim(params, label, w)
                rhs = 0
                winw = int(w) + 1
                for m1, _idx in decompose(label, k, window=2 * k * winw + 2):
                    rhs += m1_graded_dim(params, m1, w)
                if lhs != rhs:
                    return "fail", f"weight {w}: module {lhs} != constituents {rhs}"
            return "pass", f"weights up to top+{extra} agree"

        jobs.append((name, fn))
    return _run_items(jobs)


def suite_delta(k: int, cutoff, seed: int):
    order = int(cutoff) if cutoff is not None else 8

    def low_order():
        ok = (
            delta_coeff(0, 0) == 0
            and delta_coeff(1, 0) == Fraction(-1, 4)
            and delta_coeff(0, 1) == Fraction(-1, 4)
            and delta_coeff(1, 1) == Fraction(1, 16)
        )
        return _check(ok, "c00=0, c10=c01=-1/4, c11=1/16")

    def symmetry():
        tab = delta_table(order)
        ok = all(tab[(m, n)] == tab[(n, m)] for (m, n) in tab)
        return _check(ok, f"c[m][n] symmetric through total order {order}")

    def defining_equation():
        # -4 (1+x)^(1/2) g_x u = 1 for g the computed expansion and u the
        # average of the two square roots; checked as truncated series
        from .twisted import _series_mul

        half = Fraction(1, 2)
        binom = [Fraction(1)]
        for n in range(1, order + 2):
            binom.append(binom[-1] * (half - (n - 1)) / n)
        sqrt_x = {(n, 0): binom[n] for n in range(order + 2)}
        u = dict(sqrt_x)
        for n in range(order + 2):
            u[(0, n)] = u.get((0, n), Fraction(0)) + binom[n]
        u = {kk: c / 2 for kk, c in u.items() if c}
        tab = delta_table(order + 1)
        gx = {}
        for (m, n), c in tab.items():
            if m >= 1 and c:
                gx[(m - 1, n)] = c * m
        lhs = _series_mul(_series_mul(gx, sqrt_x, order), u, order)
        lhs = {kk: -4 * c for kk, c in lhs.items() if c}
        ok = lhs.get((0, 0)) == 1 and all(
            c == 0 for kk, c in lhs.items() if kk != (0, 0)
        )
        return _check(ok, f"series satisfies the defining equation to order {order}")

    return _run_items(
        [
            ("low-order values", low_order),
            ("index symmetry", symmetry),
            ("defining equation residual", defining_equation),
        ]
    )


def suite_psi(k: int, cutoff, seed: int):
    params = RingParams(k)

    def relations():
        for b in range(-3, 4):
            eb = lattice_sector_map(b)
            for r in range(-6 * k, 6 * k + 1):
                ps = psi_map(params, r)
                sign = -1 if (b * r) % 2 else 1
                if eb.compose(ps) != ps.compose(eb).scale(sign):
                    return "fail", f"commutation broken at b={b}, r={r}"
                if eb.compose(ps) != psi_map(params, r + 2 * k * b):
                    return "fail", f"translation broken at b={b}, r={r}"
        return "pass", f"|b| <= 3, |r| <= {6 * k} all hold"

    def special_cases():
        for m in range(-3, 4):
            if psi_map(params, -2 * k * m) != psi_map(params, 2 * k * m):
                return "fail", f"lattice symmetry broken at m={m}"
            lhs = psi_map(params, -(k + 2 * k * m))
            rhs = lattice_sector_map(-1).compose(psi_map(params, k + 2 * k * m))
            if lhs != rhs:
                return "fail", f"half-shift reflection broken at m={m}"
        return "pass", "reflection identities hold"

    return _run_items(
        [("signed-permutation relations", relations), ("reflection special cases", special_cases)]
    )


def suite_p31(k: int, cutoff, seed: int):
    params = RingParams(k)

    def forced():
        return _check(forced_zero_coupling(params), "coupling constant forced to zero")

    return _run_items([("forced zero coupling", forced)])


def suite_jacobi(k: int, cutoff, seed: int):
    params = RingParams(k)
    cut = Fraction(cutoff) if cutoff is not None else Fraction(4)
    rng = random.Random(seed)

    def untwisted():
        for m in (-2, -1, 0, 1, 2):
            for coset in (0, 1):
                if not commutator_check(params, m, 1, cut - 1, coset=coset):
                    return "fail", f"mode {m}, coset {coset}"
        return "pass", "oscillator commutators with the lattice operator hold"

    def twisted():
        for r in (1, k, 2 * k):
            u = lattice_vector(params, r)
            basis = twisted_basis(params, 1, Fraction(3, 2))
            for mp in (Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)):
                for key in basis:
                    w = TVector(params, {key: 1})
                    q0 = Fraction(r * r, 4 * k) + w.max_weight() - 1
                    for j in range(int(2 * cut) + 1):
                        q = q0 + 1 - Fraction(j, 2)
                        lhs = heis_act(mp, mtheta_mode(u, q, w)) - mtheta_mode(
                            u, q, heis_act(mp, w)
                        )
                        rhs = mtheta_mode(u, q + mp, w) * r
                        if lhs != rhs:
                            return "fail", f"r={r}, mode {mp}, exponent {q}"
        return "pass", "twisted commutators hold"

    def conjugation():
        vectors = [
            lattice_vector(params, 1),
            heis_act(-1, lattice_vector(params, 1)),
            lattice_vector(params, 2 * k),
        ]
        basis = twisted_basis(params, 1, Fraction(3, 2))
        sample = basis if len(basis) <= 6 else rng.sample(basis, 6)
        for u in vectors:
            r = next(iter(u.terms))[1]
            for key in sample:
                w = TVector(params, {key: 1})
                q0 = u.max_weight() + w.max_weight() - 1
                for j in range(int(2 * cut) + 1):
                    q = q0 - Fraction(j, 2)
                    lhs = theta(mtheta_mode(u, q, theta(w)))
                    rhs = mtheta_mode(theta(u), q, w)
                    if lhs != rhs:
                        return "fail", f"u at index {r}, exponent {q}"
        return "pass", "conjugation identity holds on the oscillator part"

    def tilde_conjugation():
        basis = twisted_basis(params, 1, Fraction(3, 2)) + twisted_basis(
            params, 2, Fraction(3, 2)
        )
        sample = basis if len(basis) <= 8 else rng.sample(basis, 8)
        cases = [(lattice_vector(params, 2 * k), None), (lattice_vector(params, k), lattice_sector_map(1))]
        for u, extra in cases:
            r = next(iter(u.terms))[1]
            for key in sample:
                w = TVector(params, {key: 1})
                q0 = u.max_weight() + w.max_weight() - 1
                for j in range(int(2 * cut) + 1):
                    q = q0 - Fraction(j, 2)
                    lhs = theta(tilde_mode(u, q, theta(w)))
                    rhs = tilde_mode(theta(u), q, w)
                    if extra is not None:
                        rhs = extra.apply(rhs)
                    if lhs != rhs:
                        return "fail", f"u at index {r}, exponent {q}"
        return "pass", "conjugation identities with sector maps hold"

    return _run_items(
        [
            ("untwisted commutators", untwisted),
            ("twisted commutators", twisted),
            ("conjugation, oscillator part", conjugation),
            ("conjugation, sector maps", tilde_conjugation),
        ]
    )


SUITE_FNS = {
    "table1": suite_table1,
    "identities": suite_identities,
    "closure": suite_closure,
    "bounds": suite_bounds,
    "decomp": suite_decomp,
    "delta": suite_delta,
    "psi": suite_psi,
    "p31": suite_p31,
    "jacobi": suite_jacobi,
}


# -- commands -------------------------------------------------------------------


def cmd_fusion(args) -> int:
    k = args.k
    try:
        eng = get_engine(k)
    except EngineInconsistencyError as exc:
        print(f"fusion table inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if args.which == "query":
        try:
            labels = [lb.parse_label(t, k) for t in args.labels]
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        w1, w2, w3 = labels
        value = eng.fusion(w1, w2, w3)
        bound = upper_bound(w1, w2, w3, k)
        witnesses = witness_names(k, (w1, w2, w3)) if value else []
        record = {
            "k": k,
            "triple": [w1.code, w2.code, w3.code],
            "value": value,
            "bound": bound,
            "witnesses": witnesses,
        }
        if args.format == "json":
            print(json.dumps(record))
        else:
            wtxt = f" witnesses: {', '.join(witnesses)}" if witnesses else ""
            print(f"{w1.code} x {w2.code} -> {w3.code}: value {value} (bound {bound}){wtxt}")
        return EXIT_OK
    # table dump
    rows = [
        (w1.code, w2.code, w3.code, eng.fusion(w1, w2, w3))
        for (w1, w2, w3) in eng.all_triples()
    ]
    if args.format == "csv":
        print("w1,w2,w3,value")
        for row in rows:
            print(",".join(str(x) for x in row))
    else:
        print(
            json.dumps(
                {
                    "k": k,
                    "command": "fusion table",
                    "triples": [
                        {"triple": [a, b, c], "value": v} for a, b, c, v in rows
                    ],
                }
            )
        )
    return EXIT_OK


def witness_names(k: int, triple) -> list[str]:
    """Names of explicit constructions witnessing a nonzero fusion value,
    searching the symmetry orbit when the triple itself is not covered."""
    params = RingParams(k)
    seen = set()
    frontier = [(triple, "")]
    while frontier:
        (t, via), frontier = frontier[0], frontier[1:]
        if t in seen:
            continue
        seen.add(t)
        try:
            hit = direct_witness(params, t)
        except ValueError:
            hit = None
        if hit is not None:
            name = hit[0].name
            return [name if not via else f"{name} (via symmetry)"]
        w1, w2, w3 = t
        frontier.append(((w2, w1, w3), "s"))
        frontier.append(
            ((w1, zhu.contragredient(w3, k), zhu.contragredient(w2, k)), "s")
        )
    return []


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_FAIL
    try:
        items = SUITE_FNS[args.suite](args.k, args.cutoff, args.seed)
    except EngineInconsistencyError as exc:
        print(f"fusion table inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    _emit_report(args.k, f"verify {args.suite}", items, args.format)
    return EXIT_FAIL if _failed(items) else EXIT_OK


def cmd_dump(args) -> int:
    k = args.k
    params = RingParams(k)
    if args.what == "delta":
        order = args.order if args.order is not None else 8
        tab = delta_table(order)
        print("m,n,c")
        for (m, n) in sorted(tab):
            print(f"{m},{n},{tab[(m, n)]}")
        return EXIT_OK
    if args.what == "decompose":
        if not args.module:
            print("error: dump decompose needs --module", file=sys.stderr)
            return EXIT_FAIL
        try:
            label = lb.parse_label(args.module, k)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        window = args.window if args.window is not None else 2
        rows = decompose(label, k, window=window)
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "k": k,
                        "module": label.code,
                        "window": window,
                        "constituents": [
                            {
                                "constituent": m1.code,
                                "lattice_index": idx,
                                "norm": str(m1.norm(k)),
                            }
                            for m1, idx in rows
                        ],
                    }
                )
            )
        else:
            print("constituent,lattice_index,norm")
            for m1, idx in rows:
                print(f"{m1.code},{'' if idx is None else idx},{m1.norm(k)}")
        return EXIT_OK
    if args.what == "zhu":
        table = zhu.top_action_table(params)
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "k": k,
                        "command": "dump zhu",
                        "actions": {
                            code: {g: str(v) for g, v in gens.items()}
                            for code, gens in table.items()
                        },
                    }
                )
            )
        else:
            print("label,omega,J,E")
            for code, gens in table.items():
                print(f"{code},{gens['omega']},{gens['J']},{gens['E']}")
        return EXIT_OK
    if args.what == "table":
        args.which = "table"
        if args.format == "text":
            args.format = "csv"
        return cmd_fusion(args)
    print(f"error: unknown dump target {args.what!r}", file=sys.stderr)
    return EXIT_FAIL


def cmd_zhu(args) -> int:
    if args.which != "table":
        print("error: the zhu command only knows 'table'", file=sys.stderr)
        return EXIT_FAIL
    params = RingParams(args.k)
    table = zhu.top_action_table(params)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "k": args.k,
                    "command": "zhu table",
                    "actions": {
                        code: {g: str(v) for g, v in gens.items()}
                        for code, gens in table.items()
                    },
                }
            )
        )
    else:
        width = max(len(code) for code in table)
        for code, gens in table.items():
            print(
                f"{code:<{width}}  omega={gens['omega']}  J={gens['J']}  E={gens['E']}"
            )
    return EXIT_OK


def cmd_witness(args) -> int:
    k = args.k
    params = RingParams(k)
    parts = [t.strip() for t in args.type.split(",")]
    if len(parts) != 3:
        print("error: --type wants W1,W2,W3", file=sys.stderr)
        return EXIT_FAIL
    try:
        triple = tuple(lb.parse_label(t, k) for t in parts)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    hit = direct_witness(params, triple)
    if hit is None:
        print("NO-DIRECT-CONSTRUCTION")
        return EXIT_FAIL
    spec, u, v, _sign = hit
    cutoff = args.cutoff if args.cutoff is not None else 4
    res = first_nonzero_mode(spec, u, v, cutoff)
    if res is None:
        print("ZERO-UP-TO-CUTOFF")
    else:
        m, img = res
        print(f"{spec.name} mode {m}: {img}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbifold-voa",
        description="exact fusion-rule engine for the rank-one charge "
        "conjugation orbifold",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fus = sub.add_parser("fusion", help="fusion queries and table dumps")
    fsub = fus.add_subparsers(dest="which", required=True)
    q = fsub.add_parser("query", help="value of one triple")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--format", choices=("text", "json"), default="text")
    q.add_argument("labels", nargs=3, metavar="LABEL")
    q.set_defaults(fn=cmd_fusion)
    t = fsub.add_parser("table", help="all label triples")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--format", choices=("json", "csv"), default="csv")
    t.set_defaults(fn=cmd_fusion)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--k", type=int, default=2)
    ver.add_argument("--cutoff", type=Fraction, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--format", choices=("text", "json"), default="text")
    ver.set_defaults(fn=cmd_verify)

    dmp = sub.add_parser("dump", help="machine-readable data dumps")
    dmp.add_argument("what", choices=("decompose", "delta", "zhu", "table"))
    dmp.add_argument("--k", type=int, default=2)
    dmp.add_argument("--order", type=int, default=None)
    dmp.add_argument("--window", type=int, default=None)
    dmp.add_argument("--module", type=str, default=None)
    dmp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    dmp.set_defaults(fn=cmd_dump)

    zh = sub.add_parser("zhu", help="computed generator actions on top levels")
    zsub = zh.add_subparsers(dest="which", required=True)
    zt = zsub.add_parser("table", help="all labels at once")
    zt.add_argument("--k", type=int, required=True)
    zt.add_argument("--format", choices=("text", "json"), default="text")
    zt.set_defaults(fn=cmd_zhu)

    wit = sub.add_parser("witness", help="first nonzero mode of a construction")
    wit.add_argument("--type", required=True, metavar="W1,W2,W3")
    wit.add_argument("--k", type=int, required=True)
    wit.add_argument("--cutoff", type=Fraction, default=None)
    wit.set_defaults(fn=cmd_witness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_FAIL if exc.code else EXIT_OK
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
