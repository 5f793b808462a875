"""Command-line front end: ``theta-lab <command> ...``.

Exit status: 0 when every checked value matches, 1 on a mismatch or a
rejected certificate, 2 on usage errors, 3 when a resource cap or the time
budget is hit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import signal
import sys
import time
from contextlib import contextmanager

from . import tables
from .complex import enumerate_faces, independence_complex, theta
from .errors import DomainError, ResourceError
from .euler import DEFAULT_MAX_STATES, METHODS, euler_record
from .faces import DEFAULT_FACE_CAP
from .groups import (
    check_mod_p_congruence,
    cyclic_cube_action,
    face_rotation_action,
    orbits,
    quotient,
    translation_action,
)
from .homology import betti_mod_p, chain_complex, homology
from .hypergraph import FAMILIES, build_family, minimalize
from .morse import (
    Certificate,
    contractibility_search,
    default_order,
    is_gradient,
    morse_reduce,
    sequential_field,
    theta_homology_via_duality,
    verify_certificate,
)
from .sat import enumerate_clauses, sat_complex, satisfiable_formulas, to_dimacs

FORMATS = ("table", "json", "csv", "md")
ONE_PARAM = {"path": "n", "polygon": "n", "dodec": "k", "icos": "k"}


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- output


def _cell(v):
    if isinstance(v, (list, dict, tuple)):
        return json.dumps(v)
    if v is None:
        return ""
    return str(v)


def render(records, fmt, meta=None):
    """Render a list of flat dict records; key order follows the first record."""
    if fmt == "json":
        payload = dict(meta or {})
        payload["records"] = records
        return json.dumps(payload, indent=2) + "\n"
    columns = []
    for r in records:
        for key in r:
            if key not in columns:
                columns.append(key)
    rows = [[_cell(r.get(c)) for c in columns] for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in rows]
    head = [f"# {k}: {_cell(v)}" for k, v in (meta or {}).items()]
    return "\n".join(head + lines) + "\n"


def _seconds(args, start):
    return None if args.no_timings else round(time.perf_counter() - start, 3)


# ------------------------------------------------------------- arguments


def _family_params(args):
    family = args.family
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}")
    names = (ONE_PARAM[family],) if family in ONE_PARAM else ("n", "k")
    params = []
    for name in names:
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"family {family} needs --{name}")
        params.append(value)
    return tuple(params)


def _hypergraph(args):
    params = _family_params(args)
    return args.family, params, build_family(args.family, params)


def _parse_order(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad vertex order {text!r}") from None


def _parse_action(text, family, params):
    name, _, arg = text.partition(":")
    if name == "cyclic":
        if family != "cube":
            raise UsageError("the cyclic action is defined on cube families")
        try:
            p = int(arg)
        except ValueError:
            raise UsageError("use --action cyclic:P") from None
        return cyclic_cube_action(params[0], p)
    if name == "translation":
        if family != "cube":
            raise UsageError("the translation action is defined on cube families")
        return translation_action(params[0])
    if name == "rotation":
        solids = {"dodec": "dodecahedron", "icos": "icosahedron"}
        if family not in solids:
            raise UsageError("the rotation action is defined on dodec and icos")
        return face_rotation_action(solids[family], int(arg) if arg else 0)
    raise UsageError(f"unknown action {text!r}; use cyclic:P, translation or rotation[:FACE]")


@contextmanager
def time_budget(seconds):
    """Raise ResourceError in the main thread once ``seconds`` have passed."""
    if not seconds:
        yield
        return

    def _expire(signum, frame):
        raise ResourceError(f"time budget of {seconds} s exceeded")

    old = signal.signal(signal.SIGALRM, _expire)
    signal.setitimer(signal.ITIMER_REAL, float(seconds))
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


# -------------------------------------------------------------- commands


def _homology_of(X, args):
    """Homology record list plus metadata, with optional Morse pre-reduction."""
    faces = enumerate_faces(X, args.face_cap)
    C = chain_complex(faces, reduced=True)
    meta = {"faces": len(faces), "f_vector": list(faces.f_vector)}
    if not args.no_morse:
        M = sequential_field(faces, default_order(faces))
        meta["critical"] = {str(d): c for d, c in sorted(M.critical_counts.items())}
        C = morse_reduce(C, M)
    if args.mod_p:
        betti = betti_mod_p(C, args.mod_p)
        records = [{"degree": d, "betti": b} for d, b in sorted(betti.items()) if b]
        return records, meta, None
    H = homology(C)
    records = [r for r in H.to_records() if r["betti"] or r["torsion"]]
    return records, meta, H


def cmd_euler(args):
    family, params, H = _hypergraph(args)
    rec = euler_record(family, params, H, method=args.method, workers=args.workers,
                       max_states=args.max_states)
    if args.no_timings:
        rec["seconds"] = None
    expected = tables.expected_euler(family, params)
    status = 0
    if expected is not None:
        rec["expected"] = expected
        rec["match"] = expected == rec["chi_reduced"]
        status = 0 if rec["match"] else 1
    return [rec], {"command": "euler"}, status


def cmd_homology(args):
    family, params, H = _hypergraph(args)
    X = None
    if not args.via_dual:
        X = theta(H) if args.complex == "theta" else independence_complex(H).to_facet_form()
    if args.dump and X is not None:
        with open(args.dump, "w") as fh:
            json.dump(X.to_dict(), fh)
    start = time.perf_counter()
    if args.via_dual:
        if args.complex != "theta":
            raise UsageError("--via-dual computes theta homology from the independence complex")
        summary = theta_homology_via_duality(H, args.face_cap)
        records = [r for r in summary.to_records() if r["betti"] or r["torsion"]]
        meta = {"route": "alexander-duality"}
    else:
        records, meta, summary = _homology_of(X, args)
    meta = {"command": "homology", "family": family, "params": list(params),
            "complex": args.complex, **meta, "seconds": _seconds(args, start)}
    status = 0
    expected = tables.expected_homology(family, params) if args.complex == "theta" else None
    if expected is not None and summary is not None:
        meta["expected"] = {str(d): [b, list(t)] for d, (b, t) in expected.items()}
        meta["match"] = tables.homology_matches(summary, expected)
        status = 0 if meta["match"] else 1
    return records, meta, status


def cmd_morse(args):
    family, params, H = _hypergraph(args)
    X = theta(H)
    faces = enumerate_faces(X, args.face_cap)
    meta = {"command": "morse", "family": family, "params": list(params)}
    status = 0
    if args.search:
        result = contractibility_search(X, budget=args.search, seed=args.seed, cap=args.face_cap)
        meta["attempts"] = result.attempts
        meta["found"] = result.found
        meta["best_critical"] = result.best_critical
        order = result.best_order
        if result.found and args.dump:
            with open(args.dump, "w") as fh:
                fh.write(result.certificate.dumps())
    else:
        order = _parse_order(args.order) or default_order(faces)
    M = sequential_field(faces, order)
    meta["order"] = list(order)
    ok, loop = is_gradient(faces, M)
    meta["is_gradient"] = ok
    if not ok:
        meta["loop"] = [list(c) for c in loop]
        status = 1
    records = [{"dimension": d, "critical": c} for d, c in sorted(M.critical_counts.items())]
    meta["morse_euler"] = M.morse_euler()
    if args.list_critical:
        meta["critical_cells"] = [list(c) for c in M.critical]
    if args.dump and not args.search:
        # store a certificate-shaped record even when it is not a single vertex
        cert = Certificate(X, list(order), M.pairs, M.critical)
        with open(args.dump, "w") as fh:
            fh.write(cert.dumps())
    return records, meta, status


def cmd_quotient(args):
    family, params, H = _hypergraph(args)
    A = _parse_action(args.action, family, params)
    part = orbits(H, A)
    Q = quotient(H, A)
    if args.minimalize:
        Q = minimalize(Q)
    rec = {
        "family": family,
        "params": list(params),
        "action": args.action,
        "orbits": len(part),
        "hyperedges": len(Q.hyperedges),
    }
    status = 0
    meta = {"command": "quotient", "quotient": Q.to_dict()}
    if args.check_mod_p:
        report = check_mod_p_congruence(H, A, args.check_mod_p, method=args.method,
                                        workers=args.workers, max_states=args.max_states)
        rec.update({k: v for k, v in report.to_dict().items() if k != "quotient"})
        status = 0 if report.holds else 1
    if args.homology:
        X = theta(Q)
        hrecs, hmeta, summary = _homology_of(X, args)
        rec["quotient_homology"] = summary.describe() if summary else hrecs
        rec["acyclic"] = bool(summary and summary.is_acyclic())
        search = contractibility_search(X, budget=args.search or 50, seed=args.seed,
                                        cap=args.face_cap)
        rec["certificate_found"] = search.found
        if search.found and args.dump:
            with open(args.dump, "w") as fh:
                fh.write(search.certificate.dumps())
    return [rec], meta, status


def cmd_sat(args):
    start = time.perf_counter()
    forms = satisfiable_formulas(args.n, args.ell)
    n_clauses = len(enumerate_clauses(args.n, args.ell))
    X, formulas = sat_complex(args.n, args.ell)
    rec = {
        "n": args.n,
        "ell": args.ell,
        "clauses": n_clauses,
        "vertices": len(formulas),
        "brute_force_vertices": len(forms),
        "facets": len(X.facets),
        "dimension": X.dimension,
    }
    status = 0 if rec["vertices"] == rec["brute_force_vertices"] else 1
    if args.dump_dimacs:
        with open(args.dump_dimacs, "w") as fh:
            for i, phi in enumerate(formulas):
                fh.write(f"c formula {i}\n")
                fh.write(to_dimacs(phi, args.n))
    if args.homology:
        _, _, summary = _homology_of(X, args)
        rec["homology"] = summary.describe()
        # compare with the matching cube theta complex
        cube_expect = tables.expected_homology("cube", (args.n, args.n - args.ell))
        if cube_expect is not None:
            rec["matches_cube_theta"] = tables.homology_matches(summary, cube_expect)
            status = status or (0 if rec["matches_cube_theta"] else 1)
    rec["seconds"] = _seconds(args, start)
    return [rec], {"command": "sat"}, status


def cmd_verify(args):
    try:
        with open(args.certificate) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        meta = {"command": "verify-certificate"}
        return [{"ok": False, "reason": f"cannot read certificate: {exc}"}], meta, 1
    ok, reason = verify_certificate(data)
    return [{"ok": ok, "reason": reason}], {"command": "verify-certificate"}, 0 if ok else 1


def _reproduce_cube2(args):
    records, status = [], 0
    for (n, k), expected in sorted(tables.CUBE2_EULER.items()):
        if n > args.max_n or ((n, k) in tables.CUBE2_STRETCH and not args.stretch):
            continue
        H = build_family("cube", (n, k))
        rec = euler_record("cube", (n, k), H, method=args.method, workers=args.workers,
                           max_states=args.max_states)
        if args.no_timings:
            rec["seconds"] = None
        rec["expected"] = expected
        rec["match"] = rec["chi_reduced"] == expected
        status = status or (0 if rec["match"] else 1)
        records.append(rec)
    return records, status


def _reproduce_homology(args, items):
    records, status = [], 0
    for family, params, expected in items:
        start = time.perf_counter()
        rec = {"family": family, "params": list(params)}
        try:
            hrecs, meta, summary = _homology_of(theta(build_family(family, params)), args)
        except ResourceError as exc:
            rec.update({"homology": None, "expected": None, "match": None,
                        "status": f"skipped: {exc}", "seconds": None})
            records.append(rec)
            continue
        ok = tables.homology_matches(summary, expected)
        status = status or (0 if ok else 1)
        rec.update({
            "faces": meta["faces"],
            "homology": summary.describe(),
            "expected": _describe(expected),
            "match": ok,
            "status": "checked",
            "seconds": _seconds(args, start),
        })
        records.append(rec)
    return records, status


def _describe(expected):
    parts = []
    for d, (b, t) in sorted(expected.items()):
        terms = ([f"Z^{b}" if b > 1 else "Z"] if b else []) + [f"Z_{q}" for q in t]
        parts.append(f"H{d} = " + " + ".join(terms))
    return ", ".join(parts) if parts else "acyclic"


def cmd_reproduce(args):
    if args.table == "cube2":
        records, status = _reproduce_cube2(args)
    elif args.table == "cube1":
        items = [("cube", nk, h) for nk, h in sorted(tables.CUBE1_HOMOLOGY.items())
                 if nk[0] <= args.max_n]
        records, status = _reproduce_homology(args, items)
    elif args.table == "platonic":
        items = [(f, (k,), h) for (f, k), h in sorted(tables.PLATONIC_HOMOLOGY.items())]
        records, status = _reproduce_homology(args, items)
    else:  # families
        items = [("path", (n,), tables.path_homology(n)) for n in range(1, 9)]
        items += [("polygon", (n,), tables.polygon_homology(n)) for n in range(3, 10)]
        items += [("simp", (n, k), tables.simp_homology(n, k))
                  for n in range(1, min(args.max_n, 6) + 1) for k in range(n + 1)]
        items += [("crosspoly", (n, k), tables.crosspoly_homology(n, k))
                  for n in range(1, min(args.max_n, 4) + 1) for k in range(n)]
        records, status = _reproduce_homology(args, items)
    return records, {"command": "reproduce", "table": args.table}, status


# ----------------------------------------------------------------- parser


def _common(p):
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--face-cap", type=int, default=DEFAULT_FACE_CAP)
    p.add_argument("--time-budget-secs", type=float, default=None)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--no-timings", action="store_true",
                   help="report seconds as null so output is byte-stable")


def _family_args(p):
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)


def _euler_args(p):
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)


def _homology_args(p):
    p.add_argument("--no-morse", action="store_true", help="skip Morse pre-reduction")
    p.add_argument("--mod-p", type=int, default=None, help="Betti numbers over Z/p instead")


def build_parser():
    parser = argparse.ArgumentParser(prog="theta-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("euler", help="reduced Euler characteristic of a theta complex")
    _family_args(p), _euler_args(p), _common(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("homology", help="reduced integer homology")
    _family_args(p), _homology_args(p), _common(p)
    p.add_argument("--complex", choices=("theta", "independence"), default="theta")
    p.add_argument("--dump", metavar="PATH", help="write the complex as JSON")
    p.add_argument("--via-dual", action="store_true",
                   help="derive theta homology from the independence complex by duality")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("morse", help="sequential vector field and critical cells")
    _family_args(p), _common(p)
    p.add_argument("--order", help="comma-separated vertex order (default: by frequency)")
    p.add_argument("--search", type=int, default=0, metavar="BUDGET",
                   help="try BUDGET orders looking for a single critical vertex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--list-critical", action="store_true")
    p.add_argument("--dump", metavar="PATH", help="write the matching as a certificate JSON")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("quotient", help="quotient by a group action")
    _family_args(p), _euler_args(p), _homology_args(p), _common(p)
    p.add_argument("--action", required=True, help="cyclic:P, translation or rotation[:FACE]")
    p.add_argument("--check-mod-p", type=int, default=None, metavar="P")
    p.add_argument("--minimalize", action="store_true")
    p.add_argument("--homology", action="store_true")
    p.add_argument("--search", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump", metavar="PATH", help="write a contractibility certificate")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("sat", help="complex of satisfiable l-CNF formulas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--homology", action="store_true")
    p.add_argument("--dump-dimacs", metavar="PATH")
    _homology_args(p), _common(p)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("verify-certificate", help="re-check a contractibility certificate")
    p.add_argument("certificate")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="recompute a table of known values")
    p.add_argument("--table", choices=("cube2", "cube1", "families", "platonic"), required=True)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--stretch", action="store_true", help="include the slow n = 6, 7 cells")
    _euler_args(p), _homology_args(p), _common(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with time_budget(args.time_budget_secs):
            records, meta, status = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ResourceError as exc:
        print(f"theta-lab: resource limit: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"theta-lab: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(records, args.format, meta))
    return status


if __name__ == "__main__":
    sys.exit(main())
