"""Command line front end.

    periodalg run <file> [--json OUT] [--bound N] [--depth D] [--eps Q]
    periodalg selfcheck [--json OUT] [--scenario-dir DIR]

`run` executes one scenario file and prints its report to stdout; the
report is a pure function of the scenario text, so repeated runs emit
identical bytes.  Timing goes to stderr only.  Exit codes: 0 success,
2 scenario problem (unreadable file, syntax, names, missing options),
3 analysis failure.

`selfcheck` re-runs the bundled scenarios, compares their reports
byte-for-byte against the frozen expected output, runs a quick
invariant suite over every module, and exits 1 on any mismatch.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import approx, funcalg, lattice, pointsets, scenario
from .errors import AnalysisError, PeriodalgError, ScenarioError
from .exactreal import ExactReal
from .funcalg import parse_real
from .lattice import CoeffLattice, Dense, Discrete
from .pointsets import IntervalPattern
from .scenario import RunOptions, parse_scenario, run_scenario


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="periodalg",
        description="exact periodicity analysis for functions on "
        "finitely generated subgroups of the reals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario file")
    run_p.add_argument("file", help="scenario file to execute")
    run_p.add_argument("--json", metavar="OUT", help="also write the report as JSON")
    run_p.add_argument(
        "--bound", type=int, metavar="N",
        help="default search box bound for counterexample analyses",
    )
    run_p.add_argument(
        "--depth", type=int, metavar="D",
        help="default depth for continued fraction analyses",
    )
    run_p.add_argument(
        "--eps", metavar="Q",
        help="default tolerance for dirichlet/kronecker analyses, "
        "an exact expression such as 1/10000",
    )

    check_p = sub.add_parser(
        "selfcheck", help="re-run bundled scenarios against frozen reports"
    )
    check_p.add_argument("--json", metavar="OUT", help="write results as JSON")
    check_p.add_argument(
        "--scenario-dir", metavar="DIR",
        help="read scenarios from DIR instead of the bundled set",
    )

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_selfcheck(args)


def _cmd_run(args) -> int:
    options = RunOptions(bound=args.bound, depth=args.depth)
    if args.eps is not None:
        try:
            eps = parse_real(args.eps)
        except PeriodalgError as exc:
            print(f"error: bad --eps: {exc}", file=sys.stderr)
            return 2
        if eps.sign() <= 0:
            print("error: --eps must be positive", file=sys.stderr)
            return 2
        options.eps = eps
    if args.bound is not None and args.bound < 1:
        print("error: --bound must be at least 1", file=sys.stderr)
        return 2
    if args.depth is not None and args.depth < 1:
        print("error: --depth must be at least 1", file=sys.stderr)
        return 2

    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 2
    try:
        sc = parse_scenario(text, default_name=path.stem)
    except ScenarioError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 2
    except PeriodalgError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 2

    t0 = time.perf_counter()
    try:
        report = run_scenario(sc, options)
    except ScenarioError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 2
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    total = time.perf_counter() - t0

    sys.stdout.write(report.to_text())
    if args.json:
        Path(args.json).write_text(report.to_json())
    for idx, (kind, dt) in enumerate(report.timings, 1):
        print(f"# timing [{idx}] {kind}: {dt * 1000:.3f} ms", file=sys.stderr)
    print(f"# timing total: {total * 1000:.3f} ms", file=sys.stderr)
    return 0


# -- selfcheck ---------------------------------------------------------------


def _bundled_dir():
    return resources.files("periodalg").joinpath("scenarios")


def _cmd_selfcheck(args) -> int:
    src = Path(args.scenario_dir) if args.scenario_dir else _bundled_dir()
    rows: list[dict] = []

    entries = sorted(
        (p for p in src.iterdir() if p.name.endswith(".scn")),
        key=lambda p: p.name,
    )
    if not entries:
        rows.append(
            {
                "kind": "scenario",
                "name": str(src),
                "verdict": "fail",
                "detail": "no .scn files found",
            }
        )
    for entry in entries:
        name = entry.name[: -len(".scn")]
        row = {"kind": "scenario", "name": name}
        try:
            sc = parse_scenario(entry.read_text(), default_name=name)
            got = run_scenario(sc, RunOptions()).to_json()
            want = src.joinpath(name + ".expected.json").read_text()
        except (PeriodalgError, OSError) as exc:
            row["verdict"] = "fail"
            row["detail"] = str(exc)
            rows.append(row)
            continue
        if got == want:
            row["verdict"] = "pass"
        else:
            row["verdict"] = "fail"
            row["detail"] = _first_diff(want, got)
        rows.append(row)

    for name, check in _INVARIANTS:
        row = {"kind": "invariant", "name": name}
        try:
            check()
            row["verdict"] = "pass"
        except Exception as exc:
            row["verdict"] = "fail"
            row["detail"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)

    failed = [r for r in rows if r["verdict"] == "fail"]
    for r in rows:
        line = f"{r['verdict']:4s}  {r['kind']:9s}  {r['name']}"
        if "detail" in r:
            line += f"  ({r['detail']})"
        print(line)
    print(f"selfcheck: {len(rows) - len(failed)}/{len(rows)} checks passed")

    if args.json:
        import json

        payload = {
            "selfcheck": "pass" if not failed else "fail",
            "version": scenario._VERSION,
            "results": rows,
        }
        Path(args.json).write_text(json.dumps(payload, indent=2) + "\n")
    return 1 if failed else 0


def _first_diff(want: str, got: str) -> str:
    want_lines = want.splitlines()
    got_lines = got.splitlines()
    for i, (w, g) in enumerate(zip(want_lines, got_lines), 1):
        if w != g:
            return f"first difference at line {i}: expected {w.strip()!r}, got {g.strip()!r}"
    if len(want_lines) != len(got_lines):
        return (
            f"line counts differ: expected {len(want_lines)}, got {len(got_lines)}"
        )
    return "outputs differ"


# -- invariant quick-suite ---------------------------------------------------


def _check_inversion():
    basis = ExactReal.sqrt(2).basis
    x = ExactReal.rational(1, basis) + ExactReal.sqrt(2, basis)
    assert x * x.invert() == ExactReal.rational(1, basis)
    assert x.invert() == ExactReal.sqrt(2, basis) - ExactReal.rational(1, basis)


def _check_floor_and_sign():
    v = ExactReal.sqrt(2) + ExactReal.sqrt(3)
    assert v.floor() == 3
    assert (v - ExactReal.sqrt(5)).sign() == 1


def _check_classify():
    got = lattice.classify_group(
        [ExactReal.rational(Fraction(1, 2)), ExactReal.rational(Fraction(3, 4))]
    )
    assert isinstance(got, Discrete)
    assert got.T0 == ExactReal.rational(Fraction(1, 4))
    dense = lattice.classify_group([ExactReal.rational(1), ExactReal.sqrt(2)])
    assert isinstance(dense, Dense)


def _check_intersect_idempotent():
    lat = CoeffLattice([(2, 0), (1, 3)], dim=2)
    assert lattice.intersect(lat, lat) == lat


def _check_formula_roundtrip():
    from .exactreal import RadicalBasis

    basis = RadicalBasis([1, 2, 3])
    dom = CoeffLattice([(1, 0, 0), (0, 1, 0), (0, 0, 1)], basis=basis)
    f = funcalg.parse("recip(sqrt(2)) + sgn(sqrt(3))*abs1(one+1)", dom)
    assert funcalg.parse(f.text(), dom) == f


def _check_period_module():
    from .exactreal import RadicalBasis

    basis = RadicalBasis([1, 2, 3])
    dom = CoeffLattice([(1, 0, 0), (0, 1, 0), (0, 0, 1)], basis=basis)
    f = funcalg.parse("sgn(sqrt(3))", dom)
    pm = funcalg.period_module(f)
    want = (
        ExactReal.rational(1, basis),
        ExactReal.sqrt(2, basis),
        ExactReal.sqrt(3, basis).scale(2),
    )
    assert pm.generators_real == want


def _check_rotation_roundtrip():
    one = ExactReal.rational(1)
    q = Fraction(1, 4)
    pat = IntervalPattern(
        one,
        [
            (ExactReal.rational(0), ExactReal.rational(q)),
            (ExactReal.rational(Fraction(1, 2)), ExactReal.rational(Fraction(3, 4))),
        ],
    )
    alpha = ExactReal.sqrt(2)
    back = pointsets.rotate(pointsets.rotate(pat, alpha), -alpha)
    assert back == pat
    assert pointsets.fundamental_period(pat) == ExactReal.rational(Fraction(1, 2))


def _check_cfrac():
    cf = approx.continued_fraction(ExactReal.sqrt(2), 5)
    assert list(cf.quotients) == [1, 2, 2, 2, 2]
    assert not cf.terminated


def _check_dirichlet():
    eps = ExactReal.rational(Fraction(1, 1000))
    m, n = approx.dirichlet_find(
        ExactReal.rational(1), ExactReal.sqrt(2), ExactReal.sqrt(3), eps
    )
    err = ExactReal.rational(m) + ExactReal.sqrt(2).scale(n) - ExactReal.sqrt(3)
    assert (err - eps).sign() < 0 and (err + eps).sign() > 0


def _check_kronecker():
    got = approx.kronecker_find(
        ExactReal.sqrt(2),
        [ExactReal.rational(1)],
        ExactReal.rational(0),
        ExactReal.rational(Fraction(1, 10)),
        bound=100,
    )
    assert got == (5, [7])


def _check_discrepancy():
    alpha = ExactReal.sqrt(2) - ExactReal.rational(1)
    d = approx.orbit_discrepancy(alpha, 50)
    assert Fraction(1, 100) <= d <= 1


_INVARIANTS = [
    ("exactreal inversion", _check_inversion),
    ("exactreal floor and sign", _check_floor_and_sign),
    ("lattice classify", _check_classify),
    ("lattice intersect idempotent", _check_intersect_idempotent),
    ("funcalg parse roundtrip", _check_formula_roundtrip),
    ("funcalg period module", _check_period_module),
    ("pointsets rotation roundtrip", _check_rotation_roundtrip),
    ("approx continued fraction", _check_cfrac),
    ("approx dirichlet witness", _check_dirichlet),
    ("approx kronecker witness", _check_kronecker),
    ("approx discrepancy bound", _check_discrepancy),
]


if __name__ == "__main__":
    sys.exit(main())
