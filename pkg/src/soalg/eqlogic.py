"""Equational presentations and a checker for explicit derivation trees.

A derivation is a certificate: every node carries enough data for the checker
to recompute its conclusion bottom-up and verify that the children's
conclusions are exactly the premises the rule demands.  There is no proof
search.

The congruence rule substitutes a family of proven equations, one per
metavariable of the main premise, into both sides of that premise.  The main
premise is stated over a variable context G, the side premises over D extended
by each metavariable's argument slots, and the conclusion over G ++ D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .kernel import (
    EMPTY_META,
    EMPTY_VARS,
    IllFormedTermError,
    MetaContext,
    Signature,
    Term,
    VarContext,
    alpha_eq,
    check_term,
    identity_bodies,
    shift_above,
    subst_metas,
    weaken,
)

__all__ = [
    "Equation",
    "Presentation",
    "PresentationError",
    "DerivationError",
    "Axiom",
    "Refl",
    "Sym",
    "Trans",
    "ExtMetasubst",
    "Derivation",
    "validate_presentation",
    "check_derivation",
    "instantiate_axiom",
    "identity_instance",
    "derivation_depth",
]


@dataclass(frozen=True)
class Equation:
    theta: MetaContext
    gamma: VarContext
    lhs: Term
    rhs: Term
    label: str | None = None

    def flip(self) -> "Equation":
        return Equation(self.theta, self.gamma, self.rhs, self.lhs)

    def same_judgement(self, other: "Equation") -> bool:
        # contexts compare structurally (hints ignored), terms up to alpha
        return (
            self.theta == other.theta
            and self.gamma == other.gamma
            and alpha_eq(self.lhs, other.lhs)
            and alpha_eq(self.rhs, other.rhs)
        )


@dataclass(frozen=True)
class Presentation:
    sig: Signature
    axioms: tuple[Equation, ...] = ()
    name: str = "unnamed"

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))

    def axiom(self, label: str) -> Equation:
        for ax in self.axioms:
            if ax.label == label:
                return ax
        raise KeyError(f"no axiom labelled {label!r}")

    def has_axiom(self, label: str) -> bool:
        return any(ax.label == label for ax in self.axioms)


class PresentationError(Exception):
    def __init__(self, diagnostics: Sequence[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def validate_presentation(p: Presentation) -> list[str]:
    """Return a list of diagnostics; empty means the presentation is valid."""
    diagnostics = []
    seen = set()
    for i, ax in enumerate(p.axioms, start=1):
        where = f"axiom {ax.label or '#' + str(i)}"
        if ax.label is not None:
            if ax.label in seen:
                diagnostics.append(f"{where}: duplicate label")
            seen.add(ax.label)
        for side, t in (("lhs", ax.lhs), ("rhs", ax.rhs)):
            try:
                check_term(p.sig, ax.theta, ax.gamma, t)
            except IllFormedTermError as e:
                diagnostics.append(f"{where} {side}: {e}")
    return diagnostics


@dataclass(frozen=True)
class Axiom:
    label: str


@dataclass(frozen=True)
class Refl:
    theta: MetaContext
    gamma: VarContext
    term: Term


@dataclass(frozen=True)
class Sym:
    child: "Derivation"


@dataclass(frozen=True)
class Trans:
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class ExtMetasubst:
    """Congruence of metasubstitution in extended variable contexts.

    ``sides[i]`` proves the equation substituted for metavariable i+1 of the
    main premise.  With no sides the rule degenerates to weakening, and the
    target metacontext and context extension must be supplied explicitly.
    """

    main: "Derivation"
    sides: tuple["Derivation", ...] = ()
    target_theta: MetaContext = EMPTY_META
    delta: VarContext = EMPTY_VARS

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(self.sides))


Derivation = Union[Axiom, Refl, Sym, Trans, ExtMetasubst]


class DerivationError(Exception):
    def __init__(self, message: str, path: Sequence[str] = ()):
        self.message = message
        self.path = tuple(path)
        where = "/".join(self.path) if self.path else "root"
        super().__init__(f"[{where}] {message}")


def derivation_depth(d: Derivation) -> int:
    if isinstance(d, (Axiom, Refl)):
        return 1
    if isinstance(d, Sym):
        return 1 + derivation_depth(d.child)
    if isinstance(d, Trans):
        return 1 + max(derivation_depth(d.left), derivation_depth(d.right))
    return 1 + max(
        [derivation_depth(d.main)] + [derivation_depth(s) for s in d.sides]
    )


def check_derivation(
    p: Presentation, d: Derivation, max_depth: int | None = None
) -> Equation:
    """Verify every node and return the conclusion, or raise DerivationError."""

    def go(d: Derivation, path: tuple[str, ...], depth: int) -> Equation:
        if max_depth is not None and depth > max_depth:
            raise DerivationError(f"derivation deeper than {max_depth}", path)
        if isinstance(d, Axiom):
            try:
                return p.axiom(d.label)
            except KeyError:
                raise DerivationError(f"unknown axiom {d.label!r}", path) from None
        if isinstance(d, Refl):
            try:
                check_term(p.sig, d.theta, d.gamma, d.term)
            except IllFormedTermError as e:
                raise DerivationError(f"refl of ill-formed term: {e}", path) from None
            return Equation(d.theta, d.gamma, d.term, d.term)
        if isinstance(d, Sym):
            return go(d.child, path + ("sym",), depth + 1).flip()
        if isinstance(d, Trans):
            left = go(d.left, path + ("trans.left",), depth + 1)
            right = go(d.right, path + ("trans.right",), depth + 1)
            if left.theta != right.theta or left.gamma != right.gamma:
                raise DerivationError("trans premises in different contexts", path)
            if not alpha_eq(left.rhs, right.lhs):
                raise DerivationError(
                    "trans premises do not meet: left rhs differs from right lhs", path
                )
            return Equation(left.theta, left.gamma, left.lhs, right.rhs)
        if isinstance(d, ExtMetasubst):
            return ext_metasubst(d, path, depth)
        raise DerivationError(f"not a derivation node: {d!r}", path)

    def ext_metasubst(d: ExtMetasubst, path: tuple[str, ...], depth: int) -> Equation:
        main = go(d.main, path + ("msub.main",), depth + 1)
        arities = main.theta.arities
        if len(d.sides) != len(arities):
            raise DerivationError(
                f"{len(d.sides)} side premises for {len(arities)} metavariables", path
            )
        sides = [
            go(s, path + (f"msub.side[{i}]",), depth + 1)
            for i, s in enumerate(d.sides, start=1)
        ]
        if sides:
            theta = sides[0].theta
            delta_size = sides[0].gamma.size - arities[0]
            if delta_size < 0:
                raise DerivationError(
                    "side premise 1 context smaller than its metavariable arity", path
                )
            for i, (eq, m) in enumerate(zip(sides, arities), start=1):
                if eq.theta != theta:
                    raise DerivationError(
                        f"side premise {i} metacontext differs from side premise 1", path
                    )
                if eq.gamma.size != delta_size + m:
                    raise DerivationError(
                        f"side premise {i} context size {eq.gamma.size}, "
                        f"expected {delta_size + m}",
                        path,
                    )
            hints = sides[0].gamma.hints
            delta = VarContext(delta_size, hints[:delta_size] if hints else None)
        else:
            theta = d.target_theta
            delta = d.delta
        g = main.gamma.size
        lhs_bodies = [shift_above(eq.lhs, 0, g) for eq in sides]
        rhs_bodies = [shift_above(eq.rhs, 0, g) for eq in sides]
        total = g + delta.size
        lhs = subst_metas(weaken(main.lhs, g, delta.size), lhs_bodies, total, arities)
        rhs = subst_metas(weaken(main.rhs, g, delta.size), rhs_bodies, total, arities)
        return Equation(theta, main.gamma.concat(delta), lhs, rhs)

    return go(d, (), 1)


def instantiate_axiom(
    p: Presentation,
    label: str,
    bodies: Sequence[Term],
    theta: MetaContext = EMPTY_META,
    delta: VarContext = EMPTY_VARS,
) -> Derivation:
    """Build the derivation that metasubstitutes ``bodies`` into an axiom.

    Body i is a term over ``theta`` and ``delta`` extended by the axiom's i-th
    metavariable arity; reflexivity side premises turn it into a congruence
    instance whose conclusion is the substituted axiom.
    """
    ax = p.axiom(label)
    bodies = tuple(bodies)
    if len(bodies) != len(ax.theta):
        raise ValueError(
            f"{len(bodies)} bodies for axiom with {len(ax.theta)} metavariables"
        )
    if not bodies:
        return ExtMetasubst(Axiom(label), (), target_theta=theta, delta=delta)
    sides = tuple(
        Refl(theta, delta.extend(m), body)
        for body, m in zip(bodies, ax.theta.arities)
    )
    return ExtMetasubst(Axiom(label), sides)


def identity_instance(p: Presentation, label: str) -> Derivation:
    """Instantiate an axiom with identity bodies; concludes the axiom itself."""
    ax = p.axiom(label)
    return instantiate_axiom(
        p, label, identity_bodies(ax.theta.arities, 0), theta=ax.theta
    )
