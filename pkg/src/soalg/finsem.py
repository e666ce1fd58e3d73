"""Finite functorial semantics over the clone of operations on a finite carrier.

Carrier elements are 0-based naturals.  An n-ary operation is stored as a
dense table indexed by mixed-radix encoding of its argument tuple, leftmost
argument most significant.  Operator interpretations are extensional: a total
map from tuples of argument tables to carrier elements.  Everything here is a
finite table walk, guarded against combinatorial blowups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .eqlogic import Equation, Presentation
from .kernel import (
    MetaApp,
    MetaContext,
    OpApp,
    Signature,
    Term,
    Var,
    VarContext,
)
from .theorycat import Morphism
from .translate import Translation

__all__ = [
    "ResourceGuardError",
    "DEFAULT_MAX_INSTANCES",
    "Carrier",
    "FnTable",
    "tuple_index",
    "all_tables",
    "count_tables",
    "clone_iota",
    "clone_sigma",
    "clone_rename",
    "FiniteModel",
    "pure_model",
    "Assignment",
    "interpret",
    "satisfies",
    "enumerate_models",
    "CloneMap",
    "term_clone_map",
    "morphism_map",
    "tilde_lift",
    "w_map",
    "check_w_coherence",
    "precompose",
]

DEFAULT_MAX_INSTANCES = 10**7


class ResourceGuardError(Exception):
    pass


def _guard(count: int, bound: int | None, what: str) -> None:
    bound = DEFAULT_MAX_INSTANCES if bound is None else bound
    if count > bound:
        raise ResourceGuardError(f"{what} needs {count} instances, bound is {bound}")


@dataclass(frozen=True)
class Carrier:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("carrier must have at least one element")

    def elements(self) -> range:
        return range(self.size)


def tuple_index(args: Sequence[int], size: int) -> int:
    """Mixed-radix index of an argument tuple, leftmost argument most significant."""
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


@dataclass(frozen=True)
class FnTable:
    """An n-ary operation on the carrier as a dense value table."""

    arity: int
    size: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.size**self.arity:
            raise ValueError(
                f"table for arity {self.arity} over {self.size} elements needs "
                f"{self.size ** self.arity} entries, got {len(self.values)}"
            )
        if any(not 0 <= v < self.size for v in self.values):
            raise ValueError("table value outside the carrier")

    def __call__(self, args: Sequence[int]) -> int:
        return self.values[tuple_index(args, self.size)]

    def restrict_prefix(self, prefix: Sequence[int]) -> "FnTable":
        """Fix the first len(prefix) arguments; contiguous slice of the table."""
        rest = self.arity - len(prefix)
        block = self.size**rest
        base = tuple_index(prefix, self.size) * block
        return FnTable(rest, self.size, self.values[base : base + block])


def count_tables(arity: int, size: int) -> int:
    return size ** (size**arity)


def all_tables(arity: int, size: int, max_instances: int | None = None) -> Iterator[FnTable]:
    """All operations of one arity, ascending by value tuple."""
    _guard(count_tables(arity, size), max_instances, f"enumerating O_{arity}")
    for values in itertools.product(range(size), repeat=size**arity):
        yield FnTable(arity, size, values)


def clone_iota(n: int, i: int, size: int) -> FnTable:
    """The i-th of the n projections (1-based)."""
    if not 1 <= i <= n:
        raise ValueError(f"projection {i} out of range for arity {n}")
    values = tuple(args[i - 1] for args in itertools.product(range(size), repeat=n))
    return FnTable(n, size, values)


def clone_sigma(f: FnTable, gs: Sequence[FnTable]) -> FnTable:
    """Clone substitution: sigma(f, g1..gm)(c) = f(g1(c), ..., gm(c))."""
    gs = tuple(gs)
    if len(gs) != f.arity:
        raise ValueError(f"{len(gs)} inner operations for arity {f.arity}")
    if not gs:
        return f
    n = gs[0].arity
    if any(g.arity != n or g.size != f.size for g in gs):
        raise ValueError("inner operations must share arity and carrier")
    values = tuple(
        f([g(args) for g in gs])
        for args in itertools.product(range(f.size), repeat=n)
    )
    return FnTable(n, f.size, values)


def clone_rename(f: FnTable, rho: Sequence[int], n: int) -> FnTable:
    """Reindex arguments: rename(f, rho)(c1..cn) = f(c_rho(1), ..., c_rho(m))."""
    if len(rho) != f.arity:
        raise ValueError(f"renaming of length {len(rho)} for arity {f.arity}")
    if any(not 1 <= r <= n for r in rho):
        raise ValueError(f"renaming {rho} not into [{n}]")
    values = tuple(
        f([args[r - 1] for r in rho])
        for args in itertools.product(range(f.size), repeat=n)
    )
    return FnTable(n, f.size, values)


@dataclass(frozen=True)
class FiniteModel:
    """Extensional operator interpretations over a finite carrier."""

    sig: Signature
    carrier: Carrier
    interp: dict[str, dict[tuple[FnTable, ...], int]]

    def validate(self) -> None:
        s = self.carrier.size
        for name, arity in self.sig.operators.items():
            if name not in self.interp:
                raise ValueError(f"no interpretation for operator {name}")
            table = self.interp[name]
            want = 1
            for m in arity.binder_depths:
                want *= count_tables(m, s)
            if len(table) != want:
                raise ValueError(
                    f"interpretation of {name} has {len(table)} entries, needs {want}"
                )
            for key, value in table.items():
                if len(key) != len(arity):
                    raise ValueError(f"bad key length for {name}")
                if not 0 <= value < s:
                    raise ValueError(f"value outside carrier for {name}")


def pure_model(carrier_size: int) -> FiniteModel:
    """The model of the empty signature; interprets operator-free terms."""
    return FiniteModel(Signature({}), Carrier(carrier_size), {})


@dataclass(frozen=True)
class Assignment:
    metas: tuple[FnTable, ...] = ()
    vars: tuple[int, ...] = ()


def interpret(
    model: FiniteModel,
    theta: MetaContext,
    gamma: VarContext,
    t: Term,
    asg: Assignment,
) -> int:
    """Evaluate a term at an assignment of tables to metavariables and elements to variables."""
    if len(asg.metas) != len(theta):
        raise ValueError(f"{len(asg.metas)} tables for {len(theta)} metavariables")
    if any(f.arity != m for f, m in zip(asg.metas, theta.arities)):
        raise ValueError("assignment table arities do not match the metacontext")
    if len(asg.vars) != gamma.size:
        raise ValueError(f"{len(asg.vars)} values for context of size {gamma.size}")
    s = model.carrier.size

    def go(t: Term, env: tuple[int, ...]) -> int:
        if isinstance(t, Var):
            return env[t.index - 1]
        if isinstance(t, MetaApp):
            return asg.metas[t.index - 1]([go(a, env) for a in t.args])
        if isinstance(t, OpApp):
            key = []
            for binders, body in t.args:
                values = tuple(
                    go(body, env + extra)
                    for extra in itertools.product(range(s), repeat=binders)
                )
                key.append(FnTable(binders, s, values))
            return model.interp[t.op][tuple(key)]
        raise ValueError(f"not a term: {t!r}")

    return go(t, tuple(asg.vars))


def _assignment_space(
    theta: MetaContext, gamma: VarContext, size: int
) -> tuple[int, Iterator[Assignment]]:
    count = size**gamma.size
    for m in theta.arities:
        count *= count_tables(m, size)

    def gen() -> Iterator[Assignment]:
        meta_spaces = [tuple(all_tables(m, size)) for m in theta.arities]
        for metas in itertools.product(*meta_spaces):
            for vars_ in itertools.product(range(size), repeat=gamma.size):
                yield Assignment(tuple(metas), tuple(vars_))

    return count, gen()


def satisfies(
    model: FiniteModel, eq: Equation, max_instances: int | None = None
) -> tuple[bool, Assignment | None]:
    """Exhaustively test an equation; on failure return the first witness."""
    count, assignments = _assignment_space(eq.theta, eq.gamma, model.carrier.size)
    _guard(count, max_instances, "satisfaction check")
    for asg in assignments:
        left = interpret(model, eq.theta, eq.gamma, eq.lhs, asg)
        right = interpret(model, eq.theta, eq.gamma, eq.rhs, asg)
        if left != right:
            return False, asg
    return True, None


def enumerate_models(
    presentation: Presentation,
    carrier_size: int,
    max_instances: int | None = None,
) -> list[FiniteModel]:
    """All models of the presentation on the given carrier, in a fixed order."""
    sig = presentation.sig
    s = carrier_size
    keys = {}
    total_cells = 0
    for name, arity in sig.operators.items():
        spaces = [tuple(all_tables(m, s, max_instances)) for m in arity.binder_depths]
        keys[name] = tuple(itertools.product(*spaces))
        total_cells += len(keys[name])
    _guard(s**total_cells if total_cells else 1, max_instances, "model enumeration")

    flat = [(name, key) for name in keys for key in keys[name]]
    models = []
    for values in itertools.product(range(s), repeat=len(flat)):
        interp: dict[str, dict[tuple[FnTable, ...], int]] = {name: {} for name in keys}
        for (name, key), v in zip(flat, values):
            interp[name][key] = v
        model = FiniteModel(sig, Carrier(s), interp)
        if all(
            satisfies(model, ax, max_instances)[0] for ax in presentation.axioms
        ):
            models.append(model)
    return models


@dataclass(frozen=True)
class CloneMap:
    """A map prod_i O_{m_i} -> O_n, e.g. the interpretation of a term."""

    size: int
    src_arities: tuple[int, ...]
    dst_arity: int
    fn: Callable[[tuple[FnTable, ...]], FnTable]

    def __call__(self, gs: Sequence[FnTable]) -> FnTable:
        gs = tuple(gs)
        if len(gs) != len(self.src_arities):
            raise ValueError(f"{len(gs)} tables for {len(self.src_arities)} slots")
        if any(g.arity != m for g, m in zip(gs, self.src_arities)):
            raise ValueError("table arities do not match the map's source")
        out = self.fn(gs)
        if out.arity != self.dst_arity:
            raise ValueError("map produced a table of the wrong arity")
        return out


def term_clone_map(
    model: FiniteModel, theta: MetaContext, n: int, t: Term
) -> CloneMap:
    """The clone map induced by a term over (theta |> x1..xn)."""
    s = model.carrier.size
    gamma = VarContext(n)

    def fn(gs: tuple[FnTable, ...]) -> FnTable:
        values = tuple(
            interpret(model, theta, gamma, t, Assignment(gs, xs))
            for xs in itertools.product(range(s), repeat=n)
        )
        return FnTable(n, s, values)

    return CloneMap(s, theta.arities, n, fn)


def morphism_map(
    model: FiniteModel, m: Morphism
) -> Callable[[tuple[FnTable, ...]], tuple[FnTable, ...]]:
    """The action of a term tuple on clone elements, one table per component."""
    theta = m.src.meta_context()
    maps = [
        term_clone_map(model, theta, n, t) for t, n in zip(m.components, m.dst)
    ]

    def fn(gs: tuple[FnTable, ...]) -> tuple[FnTable, ...]:
        return tuple(cm(gs) for cm in maps)

    return fn


def tilde_lift(cm: CloneMap, ell: int) -> CloneMap:
    """Lift a clone map uniformly in ell extra leading arguments.

    The lifted map sends tables of arity ell+m_i to a table of arity ell+n by
    fixing each leading tuple, applying the map to the partially applied
    inputs, and gluing the resulting tables back together.
    """
    if ell < 0:
        raise ValueError("negative lift")
    if ell == 0:
        return cm
    s = cm.size

    def fn(gs: tuple[FnTable, ...]) -> FnTable:
        values: list[int] = []
        for prefix in itertools.product(range(s), repeat=ell):
            partial = tuple(g.restrict_prefix(prefix) for g in gs)
            values.extend(cm(partial).values)
        return FnTable(ell + cm.dst_arity, s, tuple(values))

    return CloneMap(s, tuple(ell + m for m in cm.src_arities), ell + cm.dst_arity, fn)


def w_map(hs: Sequence[FnTable], q: int, ell: int, size: int) -> tuple[FnTable, ...]:
    """Pad p tables of arity q with ell fresh arguments and the fresh projections."""
    if any(h.arity != q for h in hs):
        raise ValueError("w expects tables of a uniform arity")
    block = size**ell
    padded = tuple(
        FnTable(q + ell, size, tuple(v for v in h.values for _ in range(block)))
        for h in hs
    )
    iotas = tuple(clone_iota(q + ell, q + i, size) for i in range(1, ell + 1))
    return padded + iotas


def check_w_coherence(
    cm: CloneMap, p: int, q: int, max_instances: int | None = None
) -> bool:
    """Exhaustively verify that the lift interacts with clone substitution.

    For all g_i of arity p+m_i and h_1..h_p of arity q: substituting the padded
    h's into each g_i and then applying the q-lift agrees with applying the
    p-lift first and substituting the padded h's into the result.
    """
    s = cm.size
    count = count_tables(q, s) ** p
    for m in cm.src_arities:
        count *= count_tables(p + m, s)
    _guard(count, max_instances, "coherence check")

    lift_p = tilde_lift(cm, p)
    lift_q = tilde_lift(cm, q)
    g_spaces = [tuple(all_tables(p + m, s)) for m in cm.src_arities]
    h_space = tuple(all_tables(q, s))
    for gs in itertools.product(*g_spaces):
        for hs in itertools.product(h_space, repeat=p):
            upper = tuple(
                clone_sigma(g, w_map(hs, q, m, s))
                for g, m in zip(gs, cm.src_arities)
            )
            left = lift_q(upper)
            right = clone_sigma(lift_p(gs), w_map(hs, q, cm.dst_arity, s))
            if left != right:
                return False
    return True


def precompose(tr: Translation, model_prime: FiniteModel) -> FiniteModel:
    """Pull a model of the target signature back along a translation.

    The source operator o is interpreted by evaluating its image term with the
    operator's arguments assigned to the image's metavariables.
    """
    s = model_prime.carrier.size
    interp: dict[str, dict[tuple[FnTable, ...], int]] = {}
    for name, arity in tr.src_sig.operators.items():
        image = tr.mapping[name]
        theta = MetaContext(arity.binder_depths)
        spaces = [tuple(all_tables(m, s)) for m in arity.binder_depths]
        table = {}
        for key in itertools.product(*spaces):
            table[key] = interpret(
                model_prime, theta, VarContext(0), image, Assignment(key, ())
            )
        interp[name] = table
    return FiniteModel(tr.src_sig, model_prime.carrier, interp)
