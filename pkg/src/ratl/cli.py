"""Command-line interface.

Exit status: 0 on success (for ``check``, the formula holds at the initial
state), 1 when ``check`` finds the formula false at the initial state or
``validate`` finds violations, 2 for usage and input errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bridge import DEFAULT_TRANSLATION_CAP, TranslationCapError, cgs_mcheck, translate
from .cgs import validate_cgs
from .checker import DEFAULT_NAIVE_LIMIT, StrategyLimitError, mcheck, mcheck_naive
from .core import ModelError, validate
from .formula import BindError, FormulaSyntaxError, bind, parse_formula, to_text
from .modelfile import model_kind, parse_cgs, parse_model, serialize_cgs, serialize_model
from .workbench import gen_autonomous_trains, gen_train_controller, measure, random_model, size_report

OK, FALSE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(text: str, out: str | None, stdout) -> None:
    if out is None or out == "-":
        stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load(path: str):
    text = _read(path)
    try:
        kind = model_kind(text)
        return kind, parse_model(text) if kind == "rcgs" else parse_cgs(text)
    except ModelError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _formula(args) -> str:
    if (args.formula is None) == (args.formula_file is None):
        raise UsageError("give exactly one of --formula and --formula-file")
    return args.formula if args.formula is not None else _read(args.formula_file).strip()


def cmd_check(args, stdout) -> int:
    kind, model = _load(args.model)
    try:
        phi = bind(parse_formula(_formula(args)), model)
    except (FormulaSyntaxError, BindError) as exc:
        raise UsageError(f"formula: {exc}") from None
    initial = args.initial or model.states[0]
    if initial not in model.states:
        raise UsageError(f"unknown initial state {initial!r}")

    engine = args.engine
    if kind == "cgs":
        if engine not in ("cgs", "fixpoint"):
            raise UsageError(f"engine {engine!r} needs a role-based model")
        result = cgs_mcheck(model, phi)
    elif engine == "fixpoint":
        result = mcheck(model, phi)
    elif engine == "naive":
        result = mcheck_naive(model, phi, limit=args.cap_naive)
    else:
        result = cgs_mcheck(translate(model, cap=args.cap_translate), phi)

    holds = initial in result
    ordered = [q for q in model.states if q in result]
    if args.format == "structured":
        lines = [f"formula={to_text(phi)}", f"engine={engine}"]
        lines += [f"state={q} holds={'true' if q in result else 'false'}" for q in model.states]
        lines.append(f"initial={initial} holds={'true' if holds else 'false'}")
        stdout.write("\n".join(lines) + "\n")
    else:
        stdout.write(f"formula: {to_text(phi)}\n")
        stdout.write("satisfying states: " + (" ".join(ordered) if ordered else "(none)") + "\n")
        stdout.write(f"at {initial}: {'true' if holds else 'false'}\n")
    return OK if holds else FALSE


def cmd_translate(args, stdout) -> int:
    kind, model = _load(args.model)
    if kind != "rcgs":
        raise UsageError("translate needs a role-based model")
    _write(serialize_cgs(translate(model, cap=args.cap_translate)), args.output, stdout)
    return OK


def cmd_stats(args, stdout) -> int:
    kind, model = _load(args.model)
    if kind != "rcgs":
        raise UsageError("stats needs a role-based model")
    paired = translate(model, cap=args.cap_translate) if args.paired else None
    report = size_report(model, paired)
    stdout.write(report.to_records() if args.format == "structured" else report.to_table())
    return OK


def cmd_measure(args, stdout) -> int:
    kind, model = _load(args.model)
    if kind != "rcgs":
        raise UsageError("measure needs a role-based model")
    try:
        phi = bind(parse_formula(_formula(args)), model)
    except (FormulaSyntaxError, BindError) as exc:
        raise UsageError(f"formula: {exc}") from None
    cgs = translate(model, cap=args.cap_translate) if args.paired else None
    stdout.write(measure(model, phi, cgs=cgs).to_records())
    return OK


def cmd_gen(args, stdout) -> int:
    if args.family == "random":
        model = random_model(args.seed, n_agents=args.n, n_states=args.states,
                             n_roles=args.roles, max_actions=args.max_actions)
    else:
        if args.n is None:
            raise UsageError("-n is required")
        build = gen_train_controller if args.family == "train" else gen_autonomous_trains
        model = build(args.n)
    _write(serialize_model(model), args.output, stdout)
    return OK


def cmd_validate(args, stdout) -> int:
    text = _read(args.model)
    try:
        kind = model_kind(text)
        model = parse_model(text, check=False) if kind == "rcgs" else parse_cgs(text, check=False)
    except ModelError as exc:
        raise UsageError(f"{args.model}: {exc}") from None
    problems = validate(model) if kind == "rcgs" else validate_cgs(model)
    for p in problems:
        stdout.write(p + "\n")
    if not problems:
        stdout.write("valid\n")
    return FALSE if problems else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratl", description="ATL model checking with roles")
    sub = parser.add_subparsers(dest="command", required=True)

    def formula_args(p):
        p.add_argument("--formula", help="formula text")
        p.add_argument("--formula-file", help="file holding the formula")

    p = sub.add_parser("check", help="compute the states satisfying a formula")
    p.add_argument("model")
    formula_args(p)
    p.add_argument("--initial", help="state whose verdict sets the exit status (default: first state)")
    p.add_argument("--engine", choices=("fixpoint", "naive", "cgs"), default="fixpoint")
    p.add_argument("--format", choices=("plain", "structured"), default="plain")
    p.add_argument("--cap-translate", type=int, default=DEFAULT_TRANSLATION_CAP)
    p.add_argument("--cap-naive", type=int, default=DEFAULT_NAIVE_LIMIT)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("translate", help="write the equivalent model without roles")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    p.add_argument("--cap-translate", type=int, default=DEFAULT_TRANSLATION_CAP)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("stats", help="per-state model sizes with and without roles")
    p.add_argument("model")
    p.add_argument("--format", choices=("plain", "structured"), default="plain")
    p.add_argument("--paired", action="store_true", help="build the translation and read sizes off it")
    p.add_argument("--cap-translate", type=int, default=DEFAULT_TRANSLATION_CAP)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("measure", help="count checking work for a formula")
    p.add_argument("model")
    formula_args(p)
    p.add_argument("--paired", action="store_true", help="also run the classical checker")
    p.add_argument("--cap-translate", type=int, default=DEFAULT_TRANSLATION_CAP)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("gen", help="write a generated model")
    p.add_argument("family", choices=("train", "autotrains", "random"))
    p.add_argument("-n", type=int, help="number of trains (train, autotrains) or agents (random)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--roles", type=int, default=2)
    p.add_argument("--max-actions", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="list structural problems of a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    if args.command == "gen" and args.family == "random" and args.n is None:
        args.n = 3
    try:
        return args.func(args, stdout)
    except (UsageError, TranslationCapError, StrategyLimitError, ValueError) as exc:
        stderr.write(f"ratl: {exc}\n")
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
