"""Second-order terms: signatures, contexts, and the two-level substitution calculus.

Terms are indexed positionally.  A variable carries the 1-based position of
its slot in the ambient variable context; binders extend that context on the
right, so the i-th binder slot of an operator argument occupies position
``ambient + i`` inside the argument body.  Metavariables carry their 1-based
position in the metavariable context.  Surface names live only in the
parser/printer, which makes alpha-equivalence plain structural equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "KernelError",
    "IllFormedTermError",
    "SubstitutionError",
    "OperatorArity",
    "Signature",
    "MetaContext",
    "VarContext",
    "EMPTY_META",
    "EMPTY_VARS",
    "Var",
    "MetaApp",
    "OpApp",
    "Term",
    "var",
    "mvar",
    "op",
    "check_term",
    "is_well_formed",
    "alpha_eq",
    "term_size",
    "is_pure",
    "shift_above",
    "weaken",
    "subst_vars",
    "subst_metas",
    "identity_bodies",
]

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class KernelError(Exception):
    """Base class for term-level failures."""


class IllFormedTermError(KernelError):
    """A term violates the formation rules; carries the path to the bad node."""

    def __init__(self, message: str, path: Sequence[int] = ()):
        self.message = message
        self.path = tuple(path)
        super().__init__(f"{message} at {format_path(self.path)}")


class SubstitutionError(KernelError):
    pass


def format_path(path: Sequence[int]) -> str:
    if not path:
        return "root"
    return "root." + ".".join(str(i) for i in path)


@dataclass(frozen=True)
class OperatorArity:
    """Binder depths (n1,...,nk): argument i binds n_i variables."""

    binder_depths: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "binder_depths", tuple(self.binder_depths))
        if any(n < 0 for n in self.binder_depths):
            raise ValueError(f"negative binder depth in {self.binder_depths}")

    def __len__(self) -> int:
        return len(self.binder_depths)

    def __iter__(self) -> Iterator[int]:
        return iter(self.binder_depths)

    def __getitem__(self, i: int) -> int:
        return self.binder_depths[i]


@dataclass(frozen=True)
class Signature:
    """Finite ordered map from operator name to arity."""

    operators: dict[str, OperatorArity]

    def __post_init__(self):
        fixed = {}
        for name, ar in self.operators.items():
            if not _NAME_RE.match(name):
                raise ValueError(f"bad operator name {name!r}")
            if not isinstance(ar, OperatorArity):
                ar = OperatorArity(tuple(ar))
            fixed[name] = ar
        object.__setattr__(self, "operators", fixed)

    @classmethod
    def of(cls, **ops: Iterable[int]) -> "Signature":
        return cls({name: OperatorArity(tuple(ar)) for name, ar in ops.items()})

    def __contains__(self, name: str) -> bool:
        return name in self.operators

    def arity(self, name: str) -> OperatorArity:
        return self.operators[name]


EMPTY_SIGNATURE = Signature({})


def _check_hints(hints, n, what):
    if hints is None:
        return None
    hints = tuple(hints)
    if len(hints) != n:
        raise ValueError(f"{what}: {len(hints)} hints for {n} entries")
    if len(set(hints)) != len(hints):
        raise ValueError(f"{what}: duplicate hints {hints}")
    return hints


@dataclass(frozen=True, eq=False)
class MetaContext:
    """Metavariable context: the i-th entry is the arity of metavariable i.

    Name hints are presentation sugar; equality ignores them.
    """

    arities: tuple[int, ...] = ()
    hints: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(self.arities))
        object.__setattr__(
            self, "hints", _check_hints(self.hints, len(self.arities), "metacontext")
        )

    def __len__(self) -> int:
        return len(self.arities)

    def __eq__(self, other) -> bool:
        return isinstance(other, MetaContext) and self.arities == other.arities

    def __hash__(self) -> int:
        return hash(("MetaContext", self.arities))

    def concat(self, other: "MetaContext") -> "MetaContext":
        return MetaContext(self.arities + other.arities, _merge_hints(self, other, len))


@dataclass(frozen=True, eq=False)
class VarContext:
    """Variable context of a given size.  Name hints are sugar; equality ignores them."""

    size: int = 0
    hints: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative context size")
        object.__setattr__(self, "hints", _check_hints(self.hints, self.size, "context"))

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, VarContext) and self.size == other.size

    def __hash__(self) -> int:
        return hash(("VarContext", self.size))

    def concat(self, other: "VarContext") -> "VarContext":
        return VarContext(self.size + other.size, _merge_hints(self, other, len))

    def extend(self, extra: int, hints: Sequence[str] | None = None) -> "VarContext":
        return self.concat(VarContext(extra, hints))


def _merge_hints(a, b, _len):
    ah = a.hints if a.hints is not None else (() if _len(a) == 0 else None)
    bh = b.hints if b.hints is not None else (() if _len(b) == 0 else None)
    if ah is None or bh is None:
        return None
    merged = ah + bh
    if len(set(merged)) != len(merged):
        return None
    return merged


EMPTY_META = MetaContext()
EMPTY_VARS = VarContext(0)


@dataclass(frozen=True)
class Var:
    index: int  # 1-based position in the ambient variable context


@dataclass(frozen=True)
class MetaApp:
    index: int  # 1-based position in the metavariable context
    args: tuple["Term", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class OpApp:
    op: str
    args: tuple[tuple[int, "Term"], ...] = ()  # (binder count, body) per argument

    def __post_init__(self):
        object.__setattr__(self, "args", tuple((int(b), t) for b, t in self.args))


Term = Union[Var, MetaApp, OpApp]


def var(index: int) -> Var:
    return Var(index)


def mvar(index: int, *args: Term) -> MetaApp:
    return MetaApp(index, tuple(args))


def op(name: str, *args) -> OpApp:
    """Build an operator application; a bare term argument binds nothing."""
    fixed = []
    for a in args:
        if isinstance(a, tuple):
            fixed.append(a)
        else:
            fixed.append((0, a))
    return OpApp(name, tuple(fixed))


def check_term(sig: Signature, theta: MetaContext, gamma: VarContext, t: Term) -> None:
    """Check the three formation rules; raise IllFormedTermError at the first bad node."""

    def go(t: Term, amb: int, path: tuple[int, ...]) -> None:
        if isinstance(t, Var):
            if not 1 <= t.index <= amb:
                raise IllFormedTermError(
                    f"variable index {t.index} out of range (context size {amb})", path
                )
        elif isinstance(t, MetaApp):
            if not 1 <= t.index <= len(theta):
                raise IllFormedTermError(
                    f"metavariable index {t.index} out of range "
                    f"(metacontext size {len(theta)})",
                    path,
                )
            want = theta.arities[t.index - 1]
            if len(t.args) != want:
                raise IllFormedTermError(
                    f"metavariable arity mismatch: metavariable {t.index} expects "
                    f"{want} arguments, got {len(t.args)}",
                    path,
                )
            for i, a in enumerate(t.args, start=1):
                go(a, amb, path + (i,))
        elif isinstance(t, OpApp):
            if t.op not in sig:
                raise IllFormedTermError(f"unknown operator {t.op!r}", path)
            ar = sig.arity(t.op)
            if len(t.args) != len(ar):
                raise IllFormedTermError(
                    f"operator arity mismatch: {t.op} expects {len(ar)} arguments, "
                    f"got {len(t.args)}",
                    path,
                )
            for i, ((binders, body), want) in enumerate(zip(t.args, ar), start=1):
                if binders != want:
                    raise IllFormedTermError(
                        f"binder mismatch: argument {i} of {t.op} binds {binders}, "
                        f"expected {want}",
                        path + (i,),
                    )
                go(body, amb + binders, path + (i,))
        else:
            raise IllFormedTermError(f"not a term: {t!r}", path)

    go(t, gamma.size, ())


def is_well_formed(sig: Signature, theta: MetaContext, gamma: VarContext, t: Term) -> bool:
    try:
        check_term(sig, theta, gamma, t)
        return True
    except IllFormedTermError:
        return False


def alpha_eq(t: Term, u: Term) -> bool:
    """With positional indices alpha-equivalence is structural equality."""
    return t == u


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, MetaApp):
        return 1 + sum(term_size(a) for a in t.args)
    return 1 + sum(term_size(b) for _, b in t.args)


def is_pure(t: Term) -> bool:
    """True when the term contains no operator applications."""
    if isinstance(t, Var):
        return True
    if isinstance(t, MetaApp):
        return all(is_pure(a) for a in t.args)
    return False


def shift_above(t: Term, cutoff: int, offset: int) -> Term:
    """Renumber every variable position strictly above ``cutoff`` by ``offset``.

    This is the context renaming induced by inserting ``offset`` fresh slots
    right after position ``cutoff``.
    """
    if offset == 0:
        return t
    if isinstance(t, Var):
        if t.index > cutoff:
            new = t.index + offset
            if new < 1:
                raise SubstitutionError(f"shift drops variable {t.index} below 1")
            return Var(new)
        return t
    if isinstance(t, MetaApp):
        return MetaApp(t.index, tuple(shift_above(a, cutoff, offset) for a in t.args))
    return OpApp(
        t.op, tuple((b, shift_above(body, cutoff, offset)) for b, body in t.args)
    )


def weaken(t: Term, size: int, extra: int) -> Term:
    """Weaken ``t`` from a context of ``size`` slots to ``size + extra``.

    Free variables (positions <= size) keep their indices; positions
    introduced by binders inside ``t`` move up to stay past the new slots.
    """
    if extra < 0:
        raise SubstitutionError("cannot weaken by a negative amount")
    return shift_above(t, size, extra)


def subst_vars(t: Term, replacements: Sequence[Term], target_size: int) -> Term:
    """Capture-avoiding simultaneous substitution of terms for variables.

    ``t`` is over a variable context of size ``len(replacements)``; replacement
    j is over the target context of size ``target_size``.  Under a binder the
    replacements are weakened (a no-op on their free indices) and the bound
    slots map to fresh positions appended to the target context.
    """
    reps = tuple(replacements)

    def go(t: Term, reps: tuple[Term, ...], tsize: int) -> Term:
        if isinstance(t, Var):
            if not 1 <= t.index <= len(reps):
                raise SubstitutionError(
                    f"variable index {t.index} exceeds {len(reps)} replacements"
                )
            return reps[t.index - 1]
        if isinstance(t, MetaApp):
            return MetaApp(t.index, tuple(go(a, reps, tsize) for a in t.args))
        out = []
        for binders, body in t.args:
            inner = reps + tuple(Var(tsize + i) for i in range(1, binders + 1))
            out.append((binders, go(body, inner, tsize + binders)))
        return OpApp(t.op, tuple(out))

    return go(t, reps, target_size)


def subst_metas(
    t: Term,
    bodies: Sequence[Term],
    gamma_size: int,
    arities: Sequence[int] | None = None,
) -> Term:
    """Metasubstitution of abstracted terms for metavariables.

    ``t`` is over a metacontext of ``len(bodies)`` entries and a variable
    context of size ``gamma_size``; body i is over the same variable context
    extended on the right by that metavariable's argument slots.  When
    ``arities`` is given, metavariable applications are validated against it.
    """
    bodies = tuple(bodies)
    if arities is not None and len(arities) != len(bodies):
        raise SubstitutionError(
            f"{len(bodies)} bodies for {len(arities)} metavariables"
        )

    def go(t: Term, bodies: tuple[Term, ...], g: int) -> Term:
        if isinstance(t, Var):
            return t
        if isinstance(t, MetaApp):
            if not 1 <= t.index <= len(bodies):
                raise SubstitutionError(
                    f"metavariable index {t.index} exceeds {len(bodies)} bodies"
                )
            if arities is not None and len(t.args) != arities[t.index - 1]:
                raise SubstitutionError(
                    f"metavariable {t.index} applied to {len(t.args)} arguments, "
                    f"declared arity {arities[t.index - 1]}"
                )
            done = tuple(go(a, bodies, g) for a in t.args)
            prefix = tuple(Var(j) for j in range(1, g + 1))
            return subst_vars(bodies[t.index - 1], prefix + done, g)
        out = []
        for binders, body in t.args:
            inner = tuple(shift_above(b, g, binders) for b in bodies)
            out.append((binders, go(body, inner, g + binders)))
        return OpApp(t.op, tuple(out))

    return go(t, bodies, gamma_size)


def identity_bodies(arities: Sequence[int], gamma_size: int) -> tuple[Term, ...]:
    """Bodies m_i := (x...) m_i[x...] that make subst_metas the identity."""
    return tuple(
        MetaApp(i, tuple(Var(gamma_size + j) for j in range(1, m + 1)))
        for i, m in enumerate(arities, start=1)
    )
