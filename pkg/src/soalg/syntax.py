"""Surface syntax for terms, contexts, and judgements.

Grammar (UTF-8 text, ASCII punctuation)::

    term     := var | meta '[' terms? ']' | op '(' bindargs? ')'
    bindarg  := ('(' names ')')? term
    judgement: <theta> |> <gamma> |- <term>

Metavariable declarations are written ``m:[k]`` lists, variable contexts as
comma-separated names, and ``.`` denotes an empty context.  Identifiers are
words over [A-Za-z0-9_] with optional trailing primes (primes appear only in
printer-generated fresh names).
"""

from __future__ import annotations

import re
from typing import Sequence

from .kernel import (
    EMPTY_META,
    EMPTY_VARS,
    MetaApp,
    MetaContext,
    OpApp,
    Signature,
    Term,
    Var,
    VarContext,
    check_term,
)

__all__ = [
    "ParseError",
    "tokenize",
    "TokenStream",
    "parse_meta_context",
    "parse_var_context",
    "parse_term",
    "parse_judgement",
    "print_term",
    "print_meta_context",
    "print_var_context",
    "print_judgement",
    "default_var_names",
    "default_meta_names",
]


class ParseError(Exception):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<word>[A-Za-z0-9_]+'*)
  | (?P<punct>\|>|\|-|==|=>|->|[()\[\]{},:.;=])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append((kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(("end", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.pos]
        if tok[0] != "end":
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        kind, val, _, _ = self.peek()
        return kind == "punct" and val == value

    def eat(self, value: str) -> bool:
        if self.at(value):
            self.next()
            return True
        return False

    def expect(self, value: str) -> None:
        kind, val, line, col = self.peek()
        if kind != "punct" or val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", line, col)
        self.next()

    def expect_word(self, what: str = "identifier") -> str:
        kind, val, line, col = self.peek()
        if kind != "word":
            raise ParseError(f"expected {what}, found {val or 'end of input'!r}", line, col)
        self.next()
        return val

    def expect_end(self) -> None:
        kind, val, line, col = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", line, col)

    def error(self, message: str):
        _, _, line, col = self.peek()
        raise ParseError(message, line, col)


def default_var_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def default_meta_names(k: int) -> tuple[str, ...]:
    return tuple(f"m{i}" for i in range(1, k + 1))


def _nat(ts: TokenStream, what: str) -> int:
    word = ts.expect_word(what)
    if not word.isdigit():
        ts.error(f"expected {what}, found {word!r}")
    return int(word)


def parse_meta_context(source: str | TokenStream) -> MetaContext:
    """Parse ``m:[1], n:[0]`` or ``.`` (empty)."""
    ts = TokenStream(source) if isinstance(source, str) else source
    standalone = isinstance(source, str)
    if ts.eat("."):
        ctx = EMPTY_META
    else:
        names, arities = [], []
        while True:
            names.append(ts.expect_word("metavariable name"))
            ts.expect(":")
            ts.expect("[")
            arities.append(_nat(ts, "metavariable arity"))
            ts.expect("]")
            if not ts.eat(","):
                break
        ctx = MetaContext(tuple(arities), tuple(names))
    if standalone:
        ts.expect_end()
    return ctx


def parse_var_context(source: str | TokenStream) -> VarContext:
    """Parse a comma-separated name list or ``.`` (empty)."""
    ts = TokenStream(source) if isinstance(source, str) else source
    standalone = isinstance(source, str)
    if ts.eat("."):
        ctx = EMPTY_VARS
    else:
        names = [ts.expect_word("variable name")]
        while ts.eat(","):
            names.append(ts.expect_word("variable name"))
        ctx = VarContext(len(names), tuple(names))
    if standalone:
        ts.expect_end()
    return ctx


def _meta_names(theta: MetaContext) -> tuple[str, ...]:
    return theta.hints if theta.hints is not None else default_meta_names(len(theta))


def _var_names(gamma: VarContext) -> tuple[str, ...]:
    return gamma.hints if gamma.hints is not None else default_var_names(gamma.size)


def parse_term(
    sig: Signature,
    theta: MetaContext,
    gamma: VarContext,
    source: str | TokenStream,
    check: bool = True,
) -> Term:
    """Parse a term; with ``check`` the result is also validated against the contexts."""
    ts = TokenStream(source) if isinstance(source, str) else source
    standalone = isinstance(source, str)
    metas = {name: i for i, name in enumerate(_meta_names(theta), start=1)}

    def term(env: tuple[str, ...]) -> Term:
        kind, word, line, col = ts.peek()
        if kind != "word":
            ts.error(f"expected a term, found {word or 'end of input'!r}")
        ts.next()
        if ts.at("["):
            if word not in metas:
                raise ParseError(f"unknown identifier {word!r}", line, col)
            ts.expect("[")
            args = []
            if not ts.at("]"):
                args.append(term(env))
                while ts.eat(","):
                    args.append(term(env))
            ts.expect("]")
            return MetaApp(metas[word], tuple(args))
        if ts.at("("):
            ts.expect("(")
            args = []
            if not ts.at(")"):
                args.append(bindarg(env))
                while ts.eat(","):
                    args.append(bindarg(env))
            ts.expect(")")
            return OpApp(word, tuple(args))
        for pos in range(len(env), 0, -1):
            if env[pos - 1] == word:
                return Var(pos)
        raise ParseError(f"unknown identifier {word!r}", line, col)

    def bindarg(env: tuple[str, ...]) -> tuple[int, Term]:
        if ts.eat("("):
            names = []
            if not ts.at(")"):
                names.append(ts.expect_word("binder name"))
                while ts.eat(","):
                    names.append(ts.expect_word("binder name"))
            ts.expect(")")
            return (len(names), term(env + tuple(names)))
        return (0, term(env))

    t = term(_var_names(gamma))
    if standalone:
        ts.expect_end()
    if check:
        check_term(sig, theta, gamma, t)
    return t


def parse_judgement(
    sig: Signature, source: str, check: bool = True
) -> tuple[MetaContext, VarContext, Term]:
    """Parse ``<theta> |> <gamma> |- <term>``."""
    ts = TokenStream(source)
    theta = parse_meta_context(ts)
    ts.expect("|>")
    gamma = parse_var_context(ts)
    ts.expect("|-")
    t = parse_term(sig, theta, gamma, ts, check=check)
    ts.expect_end()
    return theta, gamma, t


def _fresh(candidate: str, used: set[str]) -> str:
    while candidate in used:
        candidate += "'"
    return candidate


def print_term(theta: MetaContext, gamma: VarContext, t: Term) -> str:
    """Deterministic printing; bound slots get names x<position>, primed on clash."""
    metas = _meta_names(theta)
    base = _var_names(gamma)

    def show(t: Term, env: tuple[str, ...]) -> str:
        if isinstance(t, Var):
            if not 1 <= t.index <= len(env):
                raise ValueError(f"variable index {t.index} out of scope in printer")
            return env[t.index - 1]
        if isinstance(t, MetaApp):
            if not 1 <= t.index <= len(metas):
                raise ValueError(f"metavariable index {t.index} out of scope in printer")
            return f"{metas[t.index - 1]}[{', '.join(show(a, env) for a in t.args)}]"
        if isinstance(t, OpApp):
            parts = []
            for binders, body in t.args:
                if binders == 0:
                    parts.append(show(body, env))
                else:
                    used = set(env) | set(metas)
                    names = []
                    for i in range(1, binders + 1):
                        name = _fresh(f"x{len(env) + i}", used)
                        used.add(name)
                        names.append(name)
                    parts.append(f"({', '.join(names)}) {show(body, env + tuple(names))}")
            return f"{t.op}({', '.join(parts)})"
        raise ValueError(f"not a term: {t!r}")

    return show(t, base)


def print_meta_context(theta: MetaContext) -> str:
    if len(theta) == 0:
        return "."
    names = _meta_names(theta)
    return ", ".join(f"{name}:[{m}]" for name, m in zip(names, theta.arities))


def print_var_context(gamma: VarContext) -> str:
    if gamma.size == 0:
        return "."
    return ", ".join(_var_names(gamma))


def print_judgement(theta: MetaContext, gamma: VarContext, t: Term) -> str:
    return (
        f"{print_meta_context(theta)} |> {print_var_context(gamma)}"
        f" |- {print_term(theta, gamma, t)}"
    )
