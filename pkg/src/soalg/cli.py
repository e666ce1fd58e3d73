"""Batch command-line front end.

Exit codes: 0 success, 1 validation failure, 2 certificate failure,
3 resource guard.  ``--format records`` emits one JSON object per result with
stable field names; human output is line-oriented.  The seed and resource caps
are echoed in a header so every run is reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .eqlogic import DerivationError, check_derivation, validate_presentation
from .finsem import ResourceGuardError, enumerate_models, satisfies
from .formats import FormatError
from .kernel import KernelError
from .syntax import ParseError, parse_judgement, print_judgement, print_term
from .theorycat import (
    SOType,
    TheoryError,
    compose,
    curry,
    eval_map,
    identity,
    uncurry,
)
from .translate import TranslationError, apply, check_equational
from .formats import parse_morphism

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CERTIFICATE = 2
EXIT_RESOURCE = 3


class Emitter:
    def __init__(self, fmt: str, quiet: bool):
        self.fmt = fmt
        self.quiet = quiet

    def record(self, **fields) -> None:
        if self.fmt == "records":
            print(json.dumps(fields, sort_keys=True))
        elif not self.quiet:
            print(fields.get("text", ""))

    def header(self, args) -> None:
        if self.fmt == "records":
            print(
                json.dumps(
                    {"cmd": "config", "max_enum": args.max_enum, "seed": args.seed},
                    sort_keys=True,
                )
            )
        elif not self.quiet:
            print(f"# seed {args.seed} max-enum {args.max_enum}")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_check(args, out: Emitter) -> int:
    p = formats.load_presentation(_read(args.presentation))
    problems = validate_presentation(p)
    if problems:
        for problem in problems:
            out.record(cmd="check", status="invalid", text=problem, detail=problem)
        return EXIT_VALIDATION
    out.record(
        cmd="check",
        status="ok",
        presentation=p.name,
        operators=len(p.sig.operators),
        axioms=len(p.axioms),
        text=f"{p.name}: ok ({len(p.sig.operators)} operators, {len(p.axioms)} axioms)",
    )
    return EXIT_OK


def cmd_prove(args, out: Emitter) -> int:
    p = formats.load_presentation(_read(args.presentation))
    d = formats.load_derivation(p, _read(args.derivation))
    eq = check_derivation(p, d, max_depth=args.max_depth)
    judgement = (
        f"{print_judgement(eq.theta, eq.gamma, eq.lhs)}"
        f" == {print_term(eq.theta, eq.gamma, eq.rhs)}"
    )
    out.record(cmd="prove", status="verified", equation=judgement, text=judgement)
    return EXIT_OK


def cmd_translate(args, out: Emitter) -> int:
    src = formats.load_presentation(_read(args.src))
    dst = formats.load_presentation(_read(args.dst))
    tr = formats.load_translation(src.sig, dst.sig, _read(args.translation))
    theta, gamma, t = parse_judgement(src.sig, args.judgement)
    image = apply(tr, t, gamma.size)
    rendered = print_judgement(theta, gamma, image)
    out.record(cmd="translate", status="ok", image=rendered, text=rendered)
    return EXIT_OK


def cmd_check_translation(args, out: Emitter) -> int:
    src = formats.load_presentation(_read(args.src))
    dst = formats.load_presentation(_read(args.dst))
    tr = formats.load_translation(src.sig, dst.sig, _read(args.translation))
    certs = {}
    cert_dir = Path(args.certs)
    for ax in src.axioms:
        path = cert_dir / f"{ax.label}.soderiv"
        if path.exists():
            certs[ax.label] = formats.load_derivation(dst, path.read_text("utf-8"))
    problems = check_equational(tr, src, dst, certs)
    if problems:
        for problem in problems:
            out.record(
                cmd="check-translation", status="failed", text=problem, detail=problem
            )
        return EXIT_CERTIFICATE
    out.record(
        cmd="check-translation",
        status="verified",
        axioms=len(src.axioms),
        text=f"equational: all {len(src.axioms)} axioms certified",
    )
    return EXIT_OK


def cmd_model(args, out: Emitter) -> int:
    p = formats.load_presentation(_read(args.presentation))
    if args.subcommand in ("check", "witness") and not args.model:
        raise FormatError(f"model {args.subcommand} needs --model")
    if args.subcommand == "enumerate":
        models = enumerate_models(p, args.size, args.max_enum)
        out.record(
            cmd="model-enumerate",
            status="ok",
            size=args.size,
            count=len(models),
            text=f"{len(models)} models of {p.name} on carrier size {args.size}",
        )
        return EXIT_OK
    model = formats.load_model(p.sig, _read(args.model))
    failures = []
    for ax in p.axioms:
        ok, witness = satisfies(model, ax, args.max_enum)
        if not ok:
            failures.append((ax, witness))
    if args.subcommand == "check":
        if failures:
            for ax, _ in failures:
                out.record(
                    cmd="model-check",
                    status="failed",
                    axiom=ax.label,
                    text=f"fails axiom {ax.label}",
                )
            return EXIT_VALIDATION
        out.record(
            cmd="model-check",
            status="ok",
            axioms=len(p.axioms),
            text="satisfies all axioms",
        )
        return EXIT_OK
    # witness
    if not failures:
        out.record(cmd="model-witness", status="ok", text="satisfies all axioms")
        return EXIT_OK
    ax, witness = failures[0]
    metas = [list(f.values) for f in witness.metas]
    out.record(
        cmd="model-witness",
        status="witness",
        axiom=ax.label,
        metas=metas,
        vars=list(witness.vars),
        text=f"axiom {ax.label} fails at metas={metas} vars={list(witness.vars)}",
    )
    return EXIT_VALIDATION


def _load_morphism_arg(args, text: str):
    presentations = {}
    if args.presentation:
        p = formats.load_presentation(_read(args.presentation))
        presentations[p.name] = p
    return parse_morphism(text, presentations)


def cmd_mcat(args, out: Emitter) -> int:
    if args.subcommand in ("id", "eval"):
        cleaned = args.object.replace("(", " ").replace(")", " ").replace(",", " ")
        obj = SOType(tuple(int(w) for w in cleaned.split()))
        m = identity(obj) if args.subcommand == "id" else eval_map(obj)
    elif args.subcommand == "compose":
        f = _load_morphism_arg(args, _read(args.f))
        g = _load_morphism_arg(args, _read(args.g))
        m = compose(f, g)
    elif args.subcommand == "curry":
        m = curry(_load_morphism_arg(args, _read(args.f)))
    else:
        m = uncurry(_load_morphism_arg(args, _read(args.f)))
    rendered = formats.morphism_text(m)
    out.record(cmd=f"mcat-{args.subcommand}", status="ok", morphism=rendered, text=rendered)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soalg")
    parser.add_argument("--max-enum", type=int, default=10**7, dest="max_enum")
    parser.add_argument("--max-depth", type=int, default=10**4, dest="max_depth")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("human", "records"), default="human")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check")
    s.add_argument("presentation")

    s = sub.add_parser("prove")
    s.add_argument("presentation")
    s.add_argument("derivation")

    s = sub.add_parser("translate")
    s.add_argument("translation")
    s.add_argument("judgement")
    s.add_argument("--src", required=True)
    s.add_argument("--dst", required=True)

    s = sub.add_parser("check-translation")
    s.add_argument("translation")
    s.add_argument("--src", required=True)
    s.add_argument("--dst", required=True)
    s.add_argument("--certs", required=True)

    s = sub.add_parser("model")
    s.add_argument("subcommand", choices=("check", "enumerate", "witness"))
    s.add_argument("presentation")
    s.add_argument("--model")
    s.add_argument("--size", type=int, default=2)

    s = sub.add_parser("mcat")
    s.add_argument("subcommand", choices=("id", "compose", "eval", "curry", "uncurry"))
    s.add_argument("--object", default="")
    s.add_argument("--f")
    s.add_argument("--g")
    s.add_argument("--presentation")

    return parser


_HANDLERS = {
    "check": cmd_check,
    "prove": cmd_prove,
    "translate": cmd_translate,
    "check-translation": cmd_check_translation,
    "model": cmd_model,
    "mcat": cmd_mcat,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Emitter(args.format, args.quiet)
    out.header(args)
    try:
        return _HANDLERS[args.command](args, out)
    except ResourceGuardError as e:
        out.record(cmd=args.command, status="resource-guard", text=str(e), detail=str(e))
        return EXIT_RESOURCE
    except (DerivationError, TranslationError) as e:
        out.record(cmd=args.command, status="certificate-failure", text=str(e), detail=str(e))
        return EXIT_CERTIFICATE
    except (FormatError, ParseError, KernelError, TheoryError, FileNotFoundError) as e:
        out.record(cmd=args.command, status="invalid", text=str(e), detail=str(e))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
