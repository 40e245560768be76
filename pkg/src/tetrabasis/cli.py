"""Command-line interface: build, verify, classify, and reproduce tetrahedral bases.

Reports are deterministic: fixed key order, numbers at 12 significant digits,
no timestamps.  Exit codes: 0 success/pass, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .basisgen import build_tetra_group, check_orthonormal, orbit_basis
from .entanglement import invariant_fingerprint
from .fiducial import PolynomialParseError, build_fiducial, parse_polynomial
from .geometry import basis_bloch_table, classify_geometry
from .hierarchy import DEFAULT_CAP, clifford_level_test, diagonal_clifford_level
from .qcore import CapacityError
from .reproduce import SUITE_NAMES, reproduce_suite
from .search import (
    SearchConfig,
    SearchHit,
    conjugate_partner_key,
    group_into_classes,
    lc_equivalence_witness,
    search_regular,
)

CSV_COLUMNS = ["poly", "level", "r", "tangle", "c2_1", "c2_2", "c2_3",
               "stab", "chirality", "conjugate_key"]


def fmt_number(x):
    """Round to 12 significant digits for byte-stable serialization."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    return float(f"{float(x):.12g}")


def _formatted(obj):
    if isinstance(obj, dict):
        return {k: _formatted(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_formatted(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return fmt_number(obj.item())
    if isinstance(obj, float):
        return fmt_number(obj)
    return obj


def render_json(obj) -> str:
    return json.dumps(_formatted(obj), indent=2)


def complex_pairs(vec: np.ndarray) -> list[list[float]]:
    return [[fmt_number(z.real), fmt_number(z.imag)] for z in vec]


def basis_json(basis) -> dict:
    return {
        "n": basis.n,
        "polynomial": basis.polynomial.to_text() if basis.polynomial is not None else None,
        "fiducial": complex_pairs(basis.fiducial),
        "columns": [complex_pairs(basis.column(g)) for g in range(basis.size)],
    }


def hit_csv_row(hit: SearchHit, conjugate_key: str | None) -> list:
    fp = hit.fingerprint
    c2 = list(fp.concurrence_sq[:3])
    c2 += [None] * (3 - len(c2))
    return [
        hit.key,
        hit.level,
        fmt_number(fp.r),
        fmt_number(fp.tangle) if fp.tangle is not None else None,
        fmt_number(c2[0]) if c2[0] is not None else None,
        fmt_number(c2[1]) if c2[1] is not None else None,
        fmt_number(c2[2]) if c2[2] is not None else None,
        fp.stabilizer_order,
        fp.chirality_signature,
        conjugate_key,
    ]


def hits_csv(hits: list[SearchHit]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for hit in hits:
        partner = conjugate_partner_key(hit, hits)
        writer.writerow(["" if v is None else v for v in hit_csv_row(hit, partner)])
    return out.getvalue()


def _parse_tolerances(entries: list[str]) -> dict[str, float]:
    tols = {}
    for entry in entries or []:
        name, _, value = entry.partition("=")
        if not value:
            raise ValueError(f"tolerance override {entry!r} is not name=value")
        tols[name.strip()] = float(value)
    return tols


def _load_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"config line {line!r} is not key=value")
            values[key.strip()] = value.strip().strip('"')
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tetrabasis",
        description="Construct, verify, and classify multiqubit tetrahedral measurement bases.",
    )
    parser.add_argument("--config", help="key=value config file; explicit flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, poly=True):
        p.add_argument("--n", type=int, required=True, help="qubit count")
        p.add_argument("--m", type=int, default=2, help="phase precision (default 2)")
        if poly:
            p.add_argument("--poly", required=True, help="phase polynomial text, e.g. 'z1 z2'")
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        p.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                       help="tolerance override (norm, geo); repeatable")

    p_build = sub.add_parser("build", help="fiducial state and orbit basis of a polynomial")
    add_common(p_build)

    p_verify = sub.add_parser("verify", help="orthonormality check of the orbit basis")
    add_common(p_verify)

    p_gekm = sub.add_parser("geometry", help="Bloch geometry report of the orbit basis")
    add_common(p_gekm)

    p_inv = sub.add_parser("invariants", help="invariant fingerprint of the orbit basis")
    add_common(p_inv)

    p_level = sub.add_parser("level", help="Clifford-hierarchy level of the diagonal gate")
    add_common(p_level)
    p_level.add_argument("--matrix", action="store_true",
                         help="also run the recursive membership test on M_psi")
    p_level.add_argument("--mode", choices=["generator", "full"], default="generator")
    p_level.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p_search = sub.add_parser("search", help="enumerate polynomials and filter bases")
    add_common(p_search, poly=False)
    p_search.add_argument("--filter", action="append", choices=["regular", "nonzero"],
                          default=None, help="filters; default regular")
    p_search.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    p_search.add_argument("--sample", type=int, default=None,
                          help="sampled search size (needed for n >= 4 full spaces)")
    p_search.add_argument("--seed", type=int, default=0)

    p_classify = sub.add_parser("classify", help="search and group hits into classes")
    add_common(p_classify, poly=False)
    p_classify.add_argument("--filter", action="append", choices=["regular", "nonzero"],
                            default=None)
    p_classify.add_argument("--jobs", type=int, default=1)
    p_classify.add_argument("--sample", type=int, default=None)
    p_classify.add_argument("--seed", type=int, default=0)

    p_wit = sub.add_parser("witness", help="local-Clifford witness between two bases")
    add_common(p_wit)
    p_wit.add_argument("--target", required=True, help="polynomial of the target basis")
    p_wit.add_argument("--conjugation", action="store_true",
                       help="also search conjugated candidates")

    p_rep = sub.add_parser("reproduce", help="run a named reproduction suite")
    p_rep.add_argument("suite", choices=list(SUITE_NAMES))
    p_rep.add_argument("--format", choices=["json", "csv", "text"], default="text")
    return parser


def _apply_config_defaults(parser, argv):
    """Pull --config before full parsing so file values become defaults."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return argv
    values = _load_config(known.config)
    extra = []
    for key, value in values.items():
        flag = f"--{key}"
        # config only fills flags the user did not pass, so flags always win
        if flag not in argv and not any(a.startswith(flag + "=") for a in argv):
            extra.extend([flag, value])
    return argv + extra


def _poly(args):
    return parse_polynomial(args.poly, args.n, args.m)


def _basis(args):
    f = _poly(args)
    return orbit_basis(build_fiducial(f), build_tetra_group(args.n), f)


def cmd_build(args) -> int:
    basis = _basis(args)
    payload = basis_json(basis)
    if args.format == "text":
        print(f"polynomial: {payload['polynomial']}")
        print(f"fiducial: {payload['fiducial']}")
        print(f"columns: {basis.size}")
    else:
        print(render_json(payload))
    return 0


def cmd_verify(args) -> int:
    tols = _parse_tolerances(args.tolerance)
    report = check_orthonormal(_basis(args), tol=tols.get("norm", 1e-10))
    payload = {"ok": report.ok, "max_violation": report.max_violation}
    print(render_json(payload) if args.format != "text"
          else f"orthonormal: {report.ok} (max violation {report.max_violation:.3e})")
    return 0 if report.ok else 1


def cmd_geometry(args) -> int:
    tols = _parse_tolerances(args.tolerance)
    report = classify_geometry(basis_bloch_table(_basis(args)), tol=tols.get("geo", 1e-8))
    payload = report.to_json_dict()
    if args.format == "text":
        print(f"classes: {', '.join(report.classes)}")
        print(f"r: {report.r}")
        print(f"chirality: {report.chirality_signature()}")
    else:
        print(render_json(payload))
    return 0


def cmd_invariants(args) -> int:
    basis = _basis(args)
    fingerprint = invariant_fingerprint(basis)
    print(render_json(fingerprint.to_json_dict()) if args.format != "text"
          else fingerprint)
    return 0


def cmd_level(args) -> int:
    f = _poly(args)
    payload = {"polynomial": f.to_text(), "formula_level": diagonal_clifford_level(f)}
    if args.matrix:
        from .basisgen import measurement_unitary
        result = clifford_level_test(measurement_unitary(_basis(args)),
                                     cap=args.cap, mode=args.mode)
        payload["matrix"] = result.to_json_dict()
    if args.format == "text":
        print(payload["formula_level"])
        if args.matrix:
            print(f"matrix level: {payload['matrix']['level']} (mode {args.mode})")
    else:
        print(render_json(payload))
    return 0


def _search_config(args) -> SearchConfig:
    filters = args.filter if args.filter is not None else ["regular"]
    return SearchConfig(
        n=args.n,
        m=args.m,
        require_regular="regular" in filters,
        require_nonzero="nonzero" in filters,
        jobs=args.jobs,
        sample=args.sample,
        seed=args.seed,
    )


def cmd_search(args) -> int:
    hits = search_regular(_search_config(args))
    if args.format == "csv":
        sys.stdout.write(hits_csv(hits))
    elif args.format == "text":
        for hit in hits:
            print(f"{hit.key}  level={hit.level}  r={hit.fingerprint.r}")
        print(f"{len(hits)} hits")
    else:
        rows = [dict(zip(CSV_COLUMNS, hit_csv_row(h, conjugate_partner_key(h, hits))))
                for h in hits]
        print(render_json({"n": args.n, "m": args.m, "hits": rows}))
    return 0


def cmd_classify(args) -> int:
    hits = search_regular(_search_config(args))
    records = group_into_classes(hits)
    payload = {"n": args.n, "m": args.m, "classes": [r.to_json_dict() for r in records]}
    if args.format == "text":
        for record in records:
            fp = record.fingerprint
            print(f"class {record.key!r}: tangle={fp.tangle} r={fp.r} "
                  f"reps={len(record.representatives)} conjugate_of={record.conjugate_partner!r}")
        print(f"{len(records)} classes")
    else:
        print(render_json(payload))
    return 0


def cmd_witness(args) -> int:
    psi = build_fiducial(_poly(args))
    target = parse_polynomial(args.target, args.n, args.m)
    basis = orbit_basis(build_fiducial(target), build_tetra_group(args.n), target)
    witness = lc_equivalence_witness(psi, basis, allow_conjugation=args.conjugation)
    payload = {
        "poly": args.poly,
        "target": args.target,
        "witness": witness.to_json_dict() if witness is not None else None,
    }
    if args.format == "text":
        print("no witness" if witness is None else
              f"witness: cliffords {witness.clifford_indices} conjugated={witness.conjugated} "
              f"column={witness.column}")
    else:
        print(render_json(payload))
    return 0


def cmd_reproduce(args) -> int:
    suite = reproduce_suite(args.suite)
    if args.format == "json":
        print(render_json(suite.to_json_dict()))
    elif args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["description", "expected", "actual", "tolerance", "pass"])
        for c in suite.checks:
            writer.writerow([c.description, c.expected, c.actual, c.tolerance, c.passed])
        sys.stdout.write(out.getvalue())
    else:
        print(suite.format_text())
    return 0 if suite.passed else 1


_COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "geometry": cmd_geometry,
    "invariants": cmd_invariants,
    "level": cmd_level,
    "search": cmd_search,
    "classify": cmd_classify,
    "witness": cmd_witness,
    "reproduce": cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_defaults(parser, argv)
    except (OSError, ValueError) as exc:
        parser.exit(2, f"config error: {exc}\n")
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PolynomialParseError as exc:
        print(f"polynomial error: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
