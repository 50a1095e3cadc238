"""Command-line front end.

JSON goes to ``--out`` (or stdout); the human-readable report goes to stderr
unless ``--json`` is given.  Exit status: 0 when the verdict holds, 1 when it
does not, 2 for usage and precondition errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .classify import (CLASS_11, case_check_48, classify_j3, j3_class_count, j3_classification,
                       psi_verify, sl2_survey, sl3_survey)
from .cod import Decomposition, PreconditionError, build_cod, verify_cod
from .field import (FiniteField, field_for_order, prime_power, primitive_root_of_unity,
                    smallest_non_cube)

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_coeffs(text: str) -> list[int]:
    try:
        return [int(c) for c in text.replace(" ", "").split(",") if c != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _field(args) -> FiniteField:
    if args.q is None:
        raise UsageError("--q is required")
    try:
        q = int(args.q)
    except ValueError:
        raise UsageError(f"--q must be an integer here, got {args.q!r}") from None
    modulus = _parse_coeffs(args.modulus) if args.modulus else None
    try:
        return field_for_order(q, modulus)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _element(F: FiniteField, text: str):
    coeffs = _parse_coeffs(text)
    return F(coeffs[0]) if len(coeffs) == 1 else F(coeffs)


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return range(int(text), int(text) + 1)
        return range(int(lo), int(hi) + 1)
    except ValueError:
        raise UsageError(f"invalid range {text!r}; use LO..HI") from None


def _emit(args, payload, text: str) -> None:
    data = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
    if not args.json and text:
        sys.stderr.write(text.rstrip("\n") + "\n")


def cmd_construct(args) -> int:
    F = _field(args)
    if args.n is not None:
        n = args.n
    elif args.p is not None:
        n = args.p ** (args.m or 1)
    else:
        raise UsageError("give --n or --p/--m")
    if prime_power(n) is None:
        raise UsageError(f"n = {n} is not a prime power")
    dec = build_cod(n, F)
    report = verify_cod(dec)
    payload = dec.to_json()
    payload["report"] = report.to_json()
    _emit(args, payload, report.summary())
    return EXIT_OK if report.is_cod else EXIT_FALSE


def cmd_verify(args) -> int:
    try:
        with open(args.file) as fh:
            obj = json.load(fh)
        dec = Decomposition.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot read decomposition from {args.file}: {e}") from None
    report = verify_cod(dec)
    _emit(args, report.to_json(), report.summary())
    return EXIT_OK if report.is_cod else EXIT_FALSE


def cmd_survey(args) -> int:
    if args.n not in (2, 3):
        raise UsageError("survey needs --n 2 or --n 3")
    range_text = args.q_range or args.q
    if range_text is None:
        raise UsageError("give --q LO..HI or --q-range LO..HI")
    survey = sl2_survey if args.n == 2 else sl3_survey
    rows = []
    for q in _parse_range(range_text):
        pm = prime_power(q) if q > 1 else None
        if pm is None or pm[0] <= 3:
            continue
        rows.append(survey(field_for_order(q)))
    lines = [f"{'q':>5}  exists  obstruction"]
    lines += [f"{r.q:>5}  {'yes' if r.exists else 'no ':<6}  {r.obstruction or ''}" for r in rows]
    _emit(args, [r.to_json() for r in rows], "\n".join(lines))
    return EXIT_OK if all(r.criterion_agrees for r in rows) else EXIT_FALSE


def cmd_classify_j3(args) -> int:
    F = _field(args)
    if (args.a is None) != (args.b is None):
        raise UsageError("give both --a and --b, or neither")
    if args.a is not None:
        c = classify_j3(F, _element(F, args.a), _element(F, args.b))
        _emit(args, c.to_json(), f"J_3({c.a}, {c.b}) ~ J_3({c.target[0]}, {c.target[1]})"
                                 f"{' then psi' if c.via_psi else ''}: {c.tag}")
        return EXIT_OK
    table = j3_classification(F)
    count = j3_class_count(F)
    n11 = sum(c.tag == CLASS_11 for c in table)
    payload = {"q": F.q, "z": smallest_non_cube(F).to_json(), "class_count": count,
               "pairs": [c.to_json() for c in table]}
    text = (f"GF({F.q}): {len(table)} pairs, {n11} in {CLASS_11}, "
            f"{len(table) - n11} in CLASS_1Z; {count} classes")
    _emit(args, payload, text)
    return EXIT_OK if count == 2 else EXIT_FALSE


def _cube_setup(args):
    F = _field(args)
    u = primitive_root_of_unity(F, 3)
    if u is None or F.p <= 3:
        raise PreconditionError(f"need 3 | q - 1 and char > 3 (q = {F.q})")
    return F, u, smallest_non_cube(F)


def cmd_case_check(args) -> int:
    F, u, z = _cube_setup(args)
    verdicts = case_check_48(F, u, z)
    unsolvable = sum(not v.solvable for v in verdicts)
    lines = [f"case {v.case:>2}: {'SOLVABLE' if v.solvable else 'unsolvable'}"
             f"{'  (' + v.forced + ')' if v.forced else ''}" for v in verdicts]
    lines.append(f"{unsolvable}/48 unsolvable over GF({F.q}) with u = {u}, z = {z}")
    _emit(args, [v.to_json() for v in verdicts], "\n".join(lines))
    return EXIT_OK if unsolvable == 48 else EXIT_FALSE


def cmd_psi_check(args) -> int:
    F, u, z = _cube_setup(args)
    rep = psi_verify(F, u, z)
    lines = [f"bracket checks: {rep.pairs_checked - len(rep.bracket_failures)}/{rep.pairs_checked}",
             f"invertible: {rep.invertible}",
             f"component map: {rep.component_map}"]
    lines += [f"listed identity ({c.item}) differs from the computed bracket: {c.actual}"
              for c in rep.identities if not c.matches_listed]
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FALSE


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "survey": cmd_survey,
            "classify-j3": cmd_classify_j3, "case-check": cmd_case_check,
            "psi-check": cmd_psi_check}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slcod", description="Classical orthogonal "
                                     "decompositions of sl_n over finite fields")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", help="field size (survey also takes LO..HI)")
    common.add_argument("--modulus", help="irreducible modulus coefficients, low degree first")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--json", action="store_true", help="suppress the text report")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("construct", parents=[common], help="build and verify a COD of sl_n")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p = sub.add_parser("verify", parents=[common], help="verify a decomposition file")
    p.add_argument("file")
    p = sub.add_parser("survey", parents=[common], help="existence survey for sl_2 or sl_3")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q-range", dest="q_range")
    p = sub.add_parser("classify-j3", parents=[common], help="conjugacy class of J_3(a, b)")
    p.add_argument("--a")
    p.add_argument("--b")
    sub.add_parser("case-check", parents=[common], help="48-case non-conjugacy search")
    sub.add_parser("psi-check", parents=[common], help="verify the map J_3(1,z^2) -> J_3(1,z)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
