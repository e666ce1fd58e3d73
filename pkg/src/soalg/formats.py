"""Text formats: .soep presentations, .soderiv certificates, .sotr translations,
.somod models, .sofrag fragments, and the morphism format.

All formats are line-oriented except derivation certificates, which are nested
parenthesized trees.  ``#`` starts a comment.  Model tables are dense, listed
in the documented mixed-radix order: argument tuples ascend with the leftmost
argument most significant, and operator keys ascend componentwise by table
value tuples.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from .eqlogic import (
    Axiom,
    Derivation,
    Equation,
    ExtMetasubst,
    Presentation,
    Refl,
    Sym,
    Trans,
    check_derivation,
)
from .finsem import Carrier, FiniteModel, FnTable, all_tables, count_tables
from .kernel import (
    EMPTY_VARS,
    MetaContext,
    OperatorArity,
    Signature,
    Term,
    VarContext,
    alpha_eq,
)
from .intlang import FragmentSpec, Triple
from .syntax import (
    ParseError,
    TokenStream,
    default_meta_names,
    default_var_names,
    parse_meta_context,
    parse_term,
    parse_var_context,
    print_judgement,
    print_meta_context,
    print_term,
    print_var_context,
)
from .theorycat import THEORY_OF_EQUALITY, Morphism, SOType
from .translate import Translation

__all__ = [
    "FormatError",
    "load_presentation",
    "dump_presentation",
    "load_derivation",
    "dump_derivation",
    "load_translation",
    "dump_translation",
    "load_model",
    "dump_model",
    "morphism_text",
    "parse_morphism",
    "load_fragment",
    "dump_fragment",
]


class FormatError(Exception):
    pass


def _strip_comment(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def _logical_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line:
            yield number, line


# --- presentations (.soep) ---


def load_presentation(text: str) -> Presentation:
    name = None
    operators: dict[str, OperatorArity] = {}
    axiom_lines: list[tuple[int, str]] = []
    mode = None
    for number, line in _logical_lines(text):
        if line.startswith("signature"):
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"line {number}: expected 'signature <name>'")
            name = parts[1]
            mode = "signature"
        elif line == "axioms":
            mode = "axioms"
        elif mode == "signature" and line.startswith("op "):
            ts = TokenStream(line[3:])
            opname = ts.expect_word("operator name")
            ts.expect(":")
            ts.expect("(")
            depths = []
            if not ts.at(")"):
                word = ts.expect_word("binder depth")
                depths.append(int(word))
                while ts.eat(","):
                    depths.append(int(ts.expect_word("binder depth")))
            ts.expect(")")
            ts.expect_end()
            if opname in operators:
                raise FormatError(f"line {number}: duplicate operator {opname}")
            operators[opname] = OperatorArity(tuple(depths))
        elif mode == "axioms":
            axiom_lines.append((number, line))
        else:
            raise FormatError(f"line {number}: unexpected line {line!r}")
    if name is None:
        raise FormatError("no signature block")
    sig = Signature(operators)
    axioms = []
    for number, line in axiom_lines:
        try:
            ts = TokenStream(line)
            ts.expect("(")
            label = ts.expect_word("axiom label")
            ts.expect(")")
            theta = parse_meta_context(ts)
            ts.expect("|>")
            gamma = parse_var_context(ts)
            ts.expect("|-")
            lhs = parse_term(sig, theta, gamma, ts)
            ts.expect("==")
            rhs = parse_term(sig, theta, gamma, ts)
            ts.expect_end()
        except ParseError as e:
            raise FormatError(f"line {number}: {e}") from None
        axioms.append(Equation(theta, gamma, lhs, rhs, label=label))
    return Presentation(sig, tuple(axioms), name=name)


def dump_presentation(p: Presentation) -> str:
    lines = [f"signature {p.name}"]
    for name, arity in p.sig.operators.items():
        lines.append(f"op {name} : ({', '.join(str(n) for n in arity)})")
    if p.axioms:
        lines.append("")
        lines.append("axioms")
        for i, ax in enumerate(p.axioms, start=1):
            label = ax.label or f"ax{i}"
            lines.append(
                f"({label}) {print_meta_context(ax.theta)}"
                f" |> {print_var_context(ax.gamma)}"
                f" |- {print_term(ax.theta, ax.gamma, ax.lhs)}"
                f" == {print_term(ax.theta, ax.gamma, ax.rhs)}"
            )
    return "\n".join(lines) + "\n"


# --- derivation certificates (.soderiv) ---


def load_derivation(p: Presentation, text: str) -> Derivation:
    """Parse a certificate tree; inline side terms are verified against the
    checked side premises as they are resolved."""
    ts = TokenStream("\n".join(line for _, line in _logical_lines(text)))

    def node() -> Derivation:
        ts.expect("(")
        kind = ts.expect_word("rule name")
        if kind == "axiom":
            label = ts.expect_word("axiom label")
            out: Derivation = Axiom(label)
        elif kind == "refl":
            theta = parse_meta_context(ts)
            ts.expect("|>")
            gamma = parse_var_context(ts)
            ts.expect("|-")
            term = parse_term(p.sig, theta, gamma, ts, check=False)
            out = Refl(theta, gamma, term)
        elif kind == "sym":
            out = Sym(node())
        elif kind == "trans":
            left = node()
            right = node()
            out = Trans(left, right)
        elif kind == "msub":
            out = msub()
        else:
            ts.error(f"unknown rule {kind!r}")
        ts.expect(")")
        return out

    def msub() -> Derivation:
        main = node()
        kind, word, _, _ = ts.peek()
        if kind == "word" and word == "at":
            ts.next()
            theta = parse_meta_context(ts)
            ts.expect("|>")
            delta = parse_var_context(ts)
            return ExtMetasubst(main, (), target_theta=theta, delta=delta)
        main_eq = check_derivation(p, main)
        theta0 = main_eq.theta
        names = theta0.hints or default_meta_names(len(theta0))
        sides = []
        for i, m in enumerate(theta0.arities, start=1):
            ts.expect("(")
            name = ts.expect_word("metavariable name")
            if name != names[i - 1]:
                ts.error(
                    f"side premise {i} is for {names[i - 1]!r}, found {name!r}"
                )
            ts.expect(":")
            ts.expect("=")
            ts.expect("(")
            binder_names = []
            if not ts.at(")"):
                binder_names.append(ts.expect_word("binder name"))
                while ts.eat(","):
                    binder_names.append(ts.expect_word("binder name"))
            ts.expect(")")
            if len(binder_names) != m:
                ts.error(
                    f"side premise {i} declares {len(binder_names)} binders, "
                    f"metavariable arity is {m}"
                )
            marker = ts.pos
            # the inline term is re-parsed once the side's contexts are known
            depth = 0
            while True:
                kind, value, _, _ = ts.peek()
                if kind == "end":
                    ts.error("unterminated side premise")
                if kind == "punct" and value == ":" and depth == 0:
                    break
                if kind == "punct" and value in "([":
                    depth += 1
                if kind == "punct" and value in ")]":
                    depth -= 1
                ts.next()
            end = ts.pos
            ts.expect(":")
            side = node()
            side_eq = check_derivation(p, side)
            delta_size = side_eq.gamma.size - m
            if delta_size < 0:
                ts.error(f"side premise {i} context smaller than the binder list")
            base = side_eq.gamma.hints or default_var_names(side_eq.gamma.size)
            env_names = base[:delta_size] + tuple(binder_names)
            sub = TokenStream("")
            sub.tokens = ts.tokens[marker:end] + [("end", "", 0, 0)]
            try:
                gamma = VarContext(side_eq.gamma.size, env_names)
            except ValueError as e:
                ts.error(str(e))
            stated = parse_term(p.sig, side_eq.theta, gamma, sub, check=False)
            sub.expect_end()
            if not alpha_eq(stated, side_eq.lhs):
                ts.error(f"side premise {i}: stated term differs from the premise")
            sides.append(side)
            ts.expect(")")
        return ExtMetasubst(main, tuple(sides))

    d = node()
    ts.expect_end()
    return d


def dump_derivation(p: Presentation, d: Derivation) -> str:
    def show(d: Derivation) -> str:
        if isinstance(d, Axiom):
            return f"(axiom {d.label})"
        if isinstance(d, Refl):
            return f"(refl {print_judgement(d.theta, d.gamma, d.term)})"
        if isinstance(d, Sym):
            return f"(sym {show(d.child)})"
        if isinstance(d, Trans):
            return f"(trans {show(d.left)} {show(d.right)})"
        if isinstance(d, ExtMetasubst):
            main = show(d.main)
            if not d.sides:
                return (
                    f"(msub {main} at {print_meta_context(d.target_theta)}"
                    f" |> {print_var_context(d.delta)})"
                )
            main_eq = check_derivation(p, d.main)
            names = main_eq.theta.hints or default_meta_names(len(main_eq.theta))
            parts = [main]
            for name, m, side in zip(names, main_eq.theta.arities, d.sides):
                side_eq = check_derivation(p, side)
                delta_size = side_eq.gamma.size - m
                base = side_eq.gamma.hints or default_var_names(side_eq.gamma.size)
                binder_names = base[delta_size:]
                gamma = VarContext(side_eq.gamma.size, base)
                stated = print_term(side_eq.theta, gamma, side_eq.lhs)
                parts.append(
                    f"({name} := ({', '.join(binder_names)}) {stated} : {show(side)})"
                )
            return f"(msub {' '.join(parts)})"
        raise FormatError(f"not a derivation node: {d!r}")

    return show(d) + "\n"


# --- translations (.sotr) ---


def load_translation(src_sig: Signature, dst_sig: Signature, text: str) -> Translation:
    mapping: dict[str, Term] = {}
    name = None
    for number, line in _logical_lines(text):
        if line.startswith("translation"):
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"line {number}: expected 'translation <name>'")
            name = parts[1]
            continue
        if not line.startswith("op "):
            raise FormatError(f"line {number}: unexpected line {line!r}")
        try:
            ts = TokenStream(line[3:])
            opname = ts.expect_word("operator name")
            ts.expect("=>")
            theta = parse_meta_context(ts)
            ts.expect("|-")
            image = parse_term(dst_sig, theta, EMPTY_VARS, ts)
            ts.expect_end()
        except ParseError as e:
            raise FormatError(f"line {number}: {e}") from None
        if opname not in src_sig:
            raise FormatError(f"line {number}: unknown operator {opname}")
        if theta.arities != src_sig.arity(opname).binder_depths:
            raise FormatError(
                f"line {number}: metacontext does not match the arity of {opname}"
            )
        if opname in mapping:
            raise FormatError(f"line {number}: duplicate image for {opname}")
        mapping[opname] = image
    missing = [name_ for name_ in src_sig.operators if name_ not in mapping]
    if missing:
        raise FormatError(f"no image for operators: {', '.join(missing)}")
    return Translation(src_sig, dst_sig, mapping)


def dump_translation(tr: Translation, name: str = "translation") -> str:
    lines = [f"translation {name}"]
    for opname, arity in tr.src_sig.operators.items():
        theta = MetaContext(arity.binder_depths)
        lines.append(
            f"op {opname} => {print_meta_context(theta)}"
            f" |- {print_term(theta, EMPTY_VARS, tr.mapping[opname])}"
        )
    return "\n".join(lines) + "\n"


# --- finite models (.somod) ---


def _operator_keys(arity: OperatorArity, size: int):
    spaces = [tuple(all_tables(m, size)) for m in arity.binder_depths]
    return itertools.product(*spaces)


def load_model(sig: Signature, text: str) -> FiniteModel:
    lines = list(_logical_lines(text))
    if not lines:
        raise FormatError("empty model file")
    number, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "model" or parts[2] != "size":
        raise FormatError(f"line {number}: expected 'model <name> size <n>'")
    size = int(parts[3])
    interp: dict[str, dict[tuple[FnTable, ...], int]] = {}
    for number, line in lines[1:]:
        if not line.startswith("op "):
            raise FormatError(f"line {number}: unexpected line {line!r}")
        rest = line[3:].split(":")
        if len(rest) != 2:
            raise FormatError(f"line {number}: expected 'op <name> : <values>'")
        opname = rest[0].strip()
        if opname not in sig:
            raise FormatError(f"line {number}: unknown operator {opname}")
        values = [int(w) for w in rest[1].split()]
        keys = list(_operator_keys(sig.arity(opname), size))
        if len(values) != len(keys):
            raise FormatError(
                f"line {number}: {len(values)} values for {len(keys)} entries"
            )
        interp[opname] = dict(zip(keys, values))
    model = FiniteModel(sig, Carrier(size), interp)
    model.validate()
    return model


def dump_model(model: FiniteModel, name: str = "model") -> str:
    lines = [f"model {name} size {model.carrier.size}"]
    for opname, arity in model.sig.operators.items():
        keys = _operator_keys(arity, model.carrier.size)
        values = " ".join(str(model.interp[opname][key]) for key in keys)
        lines.append(f"op {opname} : {values}")
    return "\n".join(lines) + "\n"


# --- morphisms ---


def _object_text(a: SOType) -> str:
    return f"({', '.join(str(m) for m in a.arities)})"


def _parse_object(ts: TokenStream) -> SOType:
    ts.expect("(")
    arities = []
    if not ts.at(")"):
        arities.append(int(ts.expect_word("arity")))
        while ts.eat(","):
            arities.append(int(ts.expect_word("arity")))
    ts.expect(")")
    return SOType(tuple(arities))


def morphism_text(m: Morphism, theory_name: str | None = "") -> str:
    """Canonical text for a morphism; hints are ignored so equal morphisms
    print identically.  ``theory_name=None`` omits the theory clause."""
    theta = m.src.meta_context()
    comps = "; ".join(
        print_term(theta, VarContext(n), t) for t, n in zip(m.components, m.dst)
    )
    base = f"{_object_text(m.src)} -> {_object_text(m.dst)} where {{ {comps} }}"
    if theory_name is None:
        return base
    name = theory_name or m.theory.name
    return f"{base} in {name}"


def parse_morphism(
    text: str, presentations: Mapping[str, Presentation] | None = None
) -> Morphism:
    ts = TokenStream(text)
    src = _parse_object(ts)
    ts.expect("->")
    dst = _parse_object(ts)
    word = ts.expect_word("'where'")
    if word != "where":
        ts.error(f"expected 'where', found {word!r}")
    ts.expect("{")
    theory = THEORY_OF_EQUALITY
    # peek past the braces for the theory clause before parsing components
    brace_end = None
    depth = 1
    for idx in range(ts.pos, len(ts.tokens)):
        kind, value, _, _ = ts.tokens[idx]
        if kind == "punct" and value == "{":
            depth += 1
        if kind == "punct" and value == "}":
            depth -= 1
            if depth == 0:
                brace_end = idx
                break
    if brace_end is None:
        ts.error("unterminated component list")
    tail = ts.tokens[brace_end + 1 :]
    if tail and tail[0][:2] == ("word", "in"):
        name = tail[1][1]
        if name != "M":
            if presentations is None or name not in presentations:
                raise FormatError(f"unknown presentation {name!r}")
            theory = presentations[name]
    theta = src.meta_context()
    comps = []
    for i, n in enumerate(dst.arities):
        comps.append(parse_term(theory.sig, theta, VarContext(n), ts))
        if i < len(dst) - 1:
            ts.expect(";")
    ts.expect("}")
    if ts.peek()[:2] == ("word", "in"):
        ts.next()
        ts.expect_word("theory name")
    ts.expect_end()
    return Morphism(src, dst, tuple(comps), theory)


# --- fragments (.sofrag) ---


def load_fragment(text: str, theory: Presentation) -> tuple[FragmentSpec, dict[str, Morphism]]:
    labels: dict[str, Morphism] = {}
    morphisms: list[Morphism] = []
    triples: list[Triple] = []
    header_seen = False
    for number, line in _logical_lines(text):
        if line.startswith("fragment"):
            parts = line.split()
            if len(parts) != 4 or parts[2] != "in":
                raise FormatError(f"line {number}: expected 'fragment <name> in <theory>'")
            if parts[3] not in ("M", theory.name):
                raise FormatError(
                    f"line {number}: fragment is over {parts[3]!r}, "
                    f"loaded theory is {theory.name!r}"
                )
            header_seen = True
        elif line.startswith("morphism "):
            head, _, rest = line[len("morphism ") :].partition(":")
            label = head.strip()
            if not label or label in labels:
                raise FormatError(f"line {number}: bad or duplicate label {label!r}")
            try:
                m = parse_morphism(rest.strip(), {theory.name: theory})
            except (ParseError, FormatError) as e:
                raise FormatError(f"line {number}: {e}") from None
            if m.theory != theory and m.theory == THEORY_OF_EQUALITY:
                m = Morphism(m.src, m.dst, m.components, theory)
            labels[label] = m
            morphisms.append(m)
        elif line.startswith("triple "):
            head, _, rest = line[len("triple ") :].partition(":")
            ts = TokenStream(rest)
            h_label = ts.expect_word("morphism label")
            ts.expect("=")
            g_label = ts.expect_word("morphism label")
            word = ts.expect_word("'o'")
            if word != "o":
                ts.error(f"expected 'o', found {word!r}")
            ts.expect("(")
            f_labels = []
            if not ts.at(")"):
                f_labels.append(ts.expect_word("morphism label"))
                while ts.eat(","):
                    f_labels.append(ts.expect_word("morphism label"))
            ts.expect(")")
            word = ts.expect_word("'cert'")
            if word != "cert":
                ts.error(f"expected 'cert', found {word!r}")
            for lab in [h_label, g_label, *f_labels]:
                if lab not in labels:
                    raise FormatError(f"line {number}: unknown morphism label {lab!r}")
            kind, value, _, _ = ts.peek()
            if kind == "word" and value == "refl":
                cert = None
            else:
                rest_tokens = rest
                cert_text = rest[rest.index("cert") + 4 :].strip()
                cert = (load_derivation(theory, cert_text),)
            triples.append(
                Triple(
                    labels[h_label],
                    labels[g_label],
                    tuple(labels[f] for f in f_labels),
                    cert,
                )
            )
        else:
            raise FormatError(f"line {number}: unexpected line {line!r}")
    if not header_seen:
        raise FormatError("no fragment header")
    return FragmentSpec(theory, tuple(morphisms), tuple(triples)), labels


def dump_fragment(spec: FragmentSpec, name: str = "fragment") -> str:
    lines = [f"fragment {name} in {spec.theory.name}"]
    labels: dict[str, str] = {}
    for i, m in enumerate(spec.morphisms, start=1):
        label = f"f{i}"
        labels[morphism_text(m, theory_name=None)] = label
        lines.append(f"morphism {label} : {morphism_text(m, theory_name=None)}")
    for i, tr in enumerate(spec.triples, start=1):
        h = labels[morphism_text(tr.h, theory_name=None)]
        g = labels[morphism_text(tr.g, theory_name=None)]
        fs = ", ".join(labels[morphism_text(f, theory_name=None)] for f in tr.factors)
        if tr.cert is None:
            cert = "refl"
        else:
            cert = dump_derivation(spec.theory, tr.cert[0]).strip()
        lines.append(f"triple t{i} : {h} = {g} o ({fs}) cert {cert}")
    return "\n".join(lines) + "\n"
