"""Command-line front end.

Every command prints a plain-text report (one line per named check, exact
rational witnesses) and exits 0 iff all checks pass.  Input errors exit 2.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import charvar as cv
from . import dual_complex as dc
from . import fenchel_nielsen as fn
from .exact_linear import Mat2

EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


@dataclass
class Check:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class Report:
    command: str
    digest: str
    checks: list[Check] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, witness: str = "") -> bool:
        self.checks.append(Check(name, bool(ok), witness))
        return bool(ok)

    def note(self, line: str) -> None:
        self.lines.append(line)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def render(self) -> str:
        out = [f"command: {self.command}", f"inputs: sha256:{self.digest}"]
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            out.append(f"[{status}] {c.name}" + (f": {c.witness}" if c.witness else ""))
        out.extend(self.lines)
        out.append(f"status: {'pass' if self.ok else 'fail'}")
        return "\n".join(out) + "\n"


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(json.dumps(part, sort_keys=True, ensure_ascii=False).encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def _parse(loader: Callable, data, what: str):
    try:
        return loader(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"invalid {what}: {exc}") from None


def _load_problem(path: str) -> tuple[cv.Problem, dict]:
    raw = load_json(path)
    return _parse(cv.Problem.from_json, raw, "problem"), raw


def _load_rep(path: str) -> tuple[cv.RepTuple, dict]:
    raw = load_json(path)
    return _parse(lambda d: cv.RepTuple.from_json(d, check=False), raw, "representation"), raw


def _fmt_eps(eps) -> str:
    return "(" + ",".join(str(e) for e in eps) + ")"


def _write(path: str | None, data) -> None:
    if path:
        Path(path).write_text(dumps(data), encoding="utf-8")


# ---------------------------------------------------------------- commands


def cmd_check_generic(args) -> Report:
    problem, raw = _load_problem(args.problem)
    rep = Report(f"check-generic {args.problem}", digest(raw))
    kw = cv.kostov_witness(problem.classes)
    rep.check("kostov_generic", kw is None, "" if kw is None else f"eps={_fmt_eps(kw)} gives product 1")
    vw = cv.very_generic_witness(problem.classes)
    if vw is None:
        rep.check("very_generic", True)
    else:
        side, i, eps, prod = vw
        rep.check("very_generic", False, f"{side} at i={i}, eps={_fmt_eps(eps)} gives product {prod}")
    return rep


def _decode_checks(report: Report, problem: cv.Problem, coords: fn.FNCoords, rep: cv.RepTuple) -> None:
    try:
        cv.rep_validate(rep, problem)
        report.check("rep_validate", True)
    except cv.RepValidationError as exc:
        report.check("rep_validate", False, str(exc))
        return
    bad = [i for i in range(2, problem.k - 1) if cv.circle_trace(rep, i) != coords[i].t]
    report.check("prefix traces equal coordinates", not bad, f"mismatch at {bad}" if bad else "")
    datum = cv.classify_stratum(rep, problem)
    unstable = [i for i, s in enumerate(datum.sigma, 2) if s is cv.Stability.UNSTABLE]
    report.check("all pants stable", not unstable, f"unstable at {unstable}" if unstable else "")
    irregular = [i for i, g in enumerate(datum.gclass, 2) if g.tag is not cv.ClassTag.REGULAR]
    report.check("all circles regular", not irregular, f"non-regular at {irregular}" if irregular else "")
    report.check("irreducible", cv.is_irreducible(rep))


def cmd_fn(args) -> Report:
    problem, praw = _load_problem(args.problem)
    data = load_json(args.input)
    report = Report(f"fn {args.direction} {args.problem} {args.input}", digest(praw, data))
    if args.direction == "decode":
        coords = _parse(fn.FNCoords.from_json, data, "coordinates")
        try:
            rep = fn.fn_decode(coords, problem)
        except fn.FenchelNielsenError as exc:
            raise InputError(str(exc)) from None
        _decode_checks(report, problem, coords, rep)
        report.note("rep: " + json.dumps(rep.to_json()))
        _write(args.output, rep.to_json())
    else:
        rep = _parse(lambda d: cv.RepTuple.from_json(d, check=False), data, "representation")
        try:
            cv.rep_validate(rep, problem)
        except cv.RepValidationError as exc:
            raise InputError(f"invalid representation: {exc}") from None
        rep = cv.RepTuple(rep.matrices)
        try:
            coords = fn.fn_encode(rep, problem)
        except fn.StratumError as exc:
            report.check("open stratum", False, str(exc))
            return report
        report.check("open stratum", True)
        report.note("coords: " + json.dumps(coords.to_json()))
        _write(args.output, coords.to_json())
    return report


def cmd_roundtrip(args) -> Report:
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    if args.height < 1:
        raise InputError("--height must be >= 1")
    problem, raw = _load_problem(args.problem)
    report = Report(
        f"roundtrip {args.problem} --seed {args.seed} --trials {args.trials} --height {args.height}",
        digest(raw, args.seed, args.trials, args.height),
    )
    if not cv.very_generic(problem.classes):
        raise InputError("classes are not very generic")
    names = ["decode validates", "open stratum", "prefix traces", "irreducible", "encode(decode(x)) = x", "decode(encode(r)) ~ r"]
    passed = dict.fromkeys(names, 0)
    first_failure: dict[str, int] = {}
    samples = fn.sample_fn_many(problem, args.seed, args.height, args.trials)
    conj_rng = fn.seeded_rng(args.seed, "conjugator")
    for trial, x in enumerate(samples):
        results = _roundtrip_trial(problem, x, conj_rng)
        for name in names:
            if results.get(name):
                passed[name] += 1
            else:
                first_failure.setdefault(name, trial)
    for name in names:
        witness = f"{passed[name]}/{args.trials}"
        if name in first_failure:
            witness += f" (first failure: seed {args.seed}, trial {first_failure[name]})"
        report.check(name, passed[name] == args.trials, witness)
    return report


def _random_gl2(rng) -> Mat2:
    while True:
        g = Mat2(*(rng.randint(-5, 5) for _ in range(4)))
        if g.det() != 0:
            return g


def _roundtrip_trial(problem: cv.Problem, x: fn.FNCoords, rng) -> dict[str, bool]:
    out: dict[str, bool] = {}
    try:
        rep = fn.fn_decode(x, problem)
        cv.rep_validate(rep, problem)
        out["decode validates"] = True
        out["open stratum"] = cv.classify_stratum(rep, problem).is_open_stratum
        out["prefix traces"] = all(cv.circle_trace(rep, i) == x[i].t for i in range(2, problem.k - 1))
        out["irreducible"] = cv.is_irreducible(rep)
        out["encode(decode(x)) = x"] = fn.fn_encode(rep, problem) == x
        moved = rep.conjugated(_random_gl2(rng))
        back = fn.fn_decode(fn.fn_encode(moved, problem), problem)
        g = cv.find_conjugator(moved, back)
        out["decode(encode(r)) ~ r"] = g is not None and all(
            g.rep @ b == b2 @ g.rep for b, b2 in zip(moved.matrices, back.matrices)
        )
    except (ValueError, ZeroDivisionError):
        pass
    return out


def cmd_homology(args) -> Report:
    if args.model == "q":
        K, label = dc.q_boundary_model(), "model q"
        report = Report("homology --model q", digest("q"))
    elif args.model == "sphere-check":
        if args.k is None or args.k < 4:
            raise InputError("--model sphere-check needs --k K with K >= 4")
        K, label = dc.mprime_boundary_model(args.k), f"model sphere-check k={args.k}"
        report = Report(f"homology --model sphere-check --k {args.k}", digest("sphere-check", args.k))
    elif args.complex:
        raw = load_json(args.complex)
        K = _parse(dc.DeltaComplex.from_json, raw, "complex")
        label = args.complex
        report = Report(f"homology {args.complex}", digest(raw))
    else:
        raise InputError("give a complex file or --model")
    h = dc.reduced_homology(K)
    report.note(f"complex: {label}, cells per dimension {K.counts()}")
    report.note("reduced homology: " + json.dumps(h.to_json(), sort_keys=True))
    if args.model == "sphere-check":
        n = 2 * (args.k - 3) - 1
        report.check(f"homology sphere S^{n}", dc.is_homology_sphere(K, n))
    else:
        report.check("boundary of boundary = 0", True)
    return report


def cmd_stratify(args) -> Report:
    problem, praw = _load_problem(args.problem)
    rep, rraw = _load_rep(args.rep)
    report = Report(f"stratify {args.problem} {args.rep}", digest(praw, rraw))
    try:
        cv.rep_validate(rep, problem)
    except cv.RepValidationError as exc:
        report.check("rep_validate", False, str(exc))
        return report
    report.check("rep_validate", True)
    datum = cv.classify_stratum(cv.RepTuple(rep.matrices), problem)
    report.note("stratum: " + json.dumps(datum.to_json()))
    report.note(f"M-prime: {'yes' if datum.is_open_stratum else 'no'}")
    return report


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fnsphere", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-generic", help="Kostov and very-generic conditions")
    p.add_argument("problem")
    p.set_defaults(func=cmd_check_generic)

    p = sub.add_parser("fn", help="Fenchel-Nielsen decode/encode")
    p.add_argument("direction", choices=["decode", "encode"])
    p.add_argument("problem")
    p.add_argument("input", help="coordinates file (decode) or representation file (encode)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fn)

    p = sub.add_parser("roundtrip", help="seeded decode/encode property suite")
    p.add_argument("problem")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--height", type=int, default=10)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("homology", help="reduced integer homology of a Delta-complex")
    p.add_argument("complex", nargs="?")
    p.add_argument("--model", choices=["q", "sphere-check"])
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("stratify", help="stratum datum of a representation tuple")
    p.add_argument("problem")
    p.add_argument("rep")
    p.set_defaults(func=cmd_stratify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.render())
    return 0 if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
