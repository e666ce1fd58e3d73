"""The algebraic theory of equality and classifying categories of presentations.

Objects are finite lists of naturals.  A morphism (m1,...,mk) -> (n1,...,nl)
is a tuple of l terms, the i-th over the metacontext (m1,...,mk) and a
variable context of size n_i.  Composition substitutes the source tuple's
components for the target tuple's metavariables.  Over the empty presentation
equality of morphisms is structural; over a presentation with axioms it is
provable equality, so equality checks demand derivation certificates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .eqlogic import (
    Derivation,
    Equation,
    Presentation,
    check_derivation,
)
from .kernel import (
    EMPTY_SIGNATURE,
    MetaApp,
    MetaContext,
    Signature,
    Term,
    Var,
    VarContext,
    alpha_eq,
    check_term,
    identity_bodies,
    is_pure,
    shift_above,
    subst_metas,
    subst_vars,
    weaken,
)

__all__ = [
    "SOType",
    "Morphism",
    "TheoryError",
    "THEORY_OF_EQUALITY",
    "is_theory_of_equality",
    "check_morphism",
    "identity",
    "compose",
    "terminal",
    "product",
    "proj1",
    "proj2",
    "pair",
    "bang",
    "exponential",
    "eval_map",
    "curry",
    "uncurry",
    "EqStatus",
    "morphism_eq",
]


class TheoryError(Exception):
    pass


@dataclass(frozen=True)
class SOType:
    """An object: a finite list of metavariable arities; () is terminal."""

    arities: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(self.arities))
        if any(m < 0 for m in self.arities):
            raise ValueError(f"negative arity in {self.arities}")

    def __len__(self) -> int:
        return len(self.arities)

    def __iter__(self):
        return iter(self.arities)

    def meta_context(self, hints: Sequence[str] | None = None) -> MetaContext:
        return MetaContext(self.arities, hints)


THEORY_OF_EQUALITY = Presentation(EMPTY_SIGNATURE, (), name="M")


def is_theory_of_equality(p: Presentation) -> bool:
    return not p.sig.operators and not p.axioms


@dataclass(frozen=True)
class Morphism:
    src: SOType
    dst: SOType
    components: tuple[Term, ...]
    theory: Presentation = THEORY_OF_EQUALITY

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != len(self.dst):
            raise TheoryError(
                f"{len(self.components)} components for target of length {len(self.dst)}"
            )


def check_morphism(m: Morphism) -> None:
    """Validate every component against the source metacontext and the theory's signature."""
    theta = m.src.meta_context()
    for i, (t, n) in enumerate(zip(m.components, m.dst), start=1):
        check_term(m.theory.sig, theta, VarContext(n), t)
        if is_theory_of_equality(m.theory) and not is_pure(t):
            raise TheoryError(f"component {i} uses operators but the theory has none")


def identity(a: SOType, theory: Presentation = THEORY_OF_EQUALITY) -> Morphism:
    comps = tuple(
        MetaApp(i, tuple(Var(j) for j in range(1, m + 1)))
        for i, m in enumerate(a.arities, start=1)
    )
    return Morphism(a, a, comps, theory)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """The composite of f : a -> b followed by g : b -> c."""
    if f.dst != g.src:
        raise TheoryError(f"cannot compose: {f.dst} is not {g.src}")
    if f.theory != g.theory:
        raise TheoryError("cannot compose morphisms over different theories")
    comps = []
    for t, n in zip(g.components, g.dst):
        bodies = [shift_above(c, 0, n) for c in f.components]
        comps.append(subst_metas(t, bodies, n, g.src.arities))
    return Morphism(f.src, g.dst, tuple(comps), f.theory)


def terminal() -> SOType:
    return SOType(())


def product(a: SOType, b: SOType) -> SOType:
    return SOType(a.arities + b.arities)


def _projection(a: SOType, b: SOType, offset: int, picked: SOType, theory) -> Morphism:
    comps = tuple(
        MetaApp(offset + i, tuple(Var(j) for j in range(1, m + 1)))
        for i, m in enumerate(picked.arities, start=1)
    )
    return Morphism(product(a, b), picked, comps, theory)


def proj1(a: SOType, b: SOType, theory: Presentation = THEORY_OF_EQUALITY) -> Morphism:
    return _projection(a, b, 0, a, theory)


def proj2(a: SOType, b: SOType, theory: Presentation = THEORY_OF_EQUALITY) -> Morphism:
    return _projection(a, b, len(a), b, theory)


def pair(f: Morphism, g: Morphism) -> Morphism:
    if f.src != g.src:
        raise TheoryError(f"pairing needs a shared source: {f.src} vs {g.src}")
    if f.theory != g.theory:
        raise TheoryError("cannot pair morphisms over different theories")
    return Morphism(f.src, product(f.dst, g.dst), f.components + g.components, f.theory)


def bang(a: SOType, theory: Presentation = THEORY_OF_EQUALITY) -> Morphism:
    return Morphism(a, terminal(), (), theory)


def exponential(b: SOType) -> SOType:
    """The exponential of b by the exponentiable object (0)."""
    return SOType(tuple(m + 1 for m in b.arities))


def eval_map(b: SOType, theory: Presentation = THEORY_OF_EQUALITY) -> Morphism:
    """Evaluation ((0) => b) x (0) -> b."""
    k = len(b)
    comps = tuple(
        MetaApp(i, tuple(Var(j) for j in range(1, m + 1)) + (MetaApp(k + 1, ()),))
        for i, m in enumerate(b.arities, start=1)
    )
    return Morphism(product(exponential(b), SOType((0,))), b, comps, theory)


def curry(f: Morphism) -> Morphism:
    """Transpose f : a x (0) -> b into a -> ((0) => b).

    Component i trades every occurrence of the last (nullary) metavariable for
    a fresh final variable.
    """
    if not f.src.arities or f.src.arities[-1] != 0:
        raise TheoryError(f"source {f.src} does not end in a nullary entry")
    a = SOType(f.src.arities[:-1])
    k = len(a)
    comps = []
    for t, n in zip(f.components, f.dst):
        lifted = weaken(t, n, 1)
        bodies = identity_bodies(a.arities, n + 1) + (Var(n + 1),)
        comps.append(subst_metas(lifted, bodies, n + 1, f.src.arities))
    return Morphism(a, exponential(f.dst), tuple(comps), f.theory)


def uncurry(g: Morphism) -> Morphism:
    """Inverse transpose of g : a -> ((0) => b): a x (0) -> b."""
    if any(m == 0 for m in g.dst.arities):
        raise TheoryError(f"target {g.dst} is not an exponential by (0)")
    b = SOType(tuple(m - 1 for m in g.dst.arities))
    k = len(g.src)
    src = product(g.src, SOType((0,)))
    comps = []
    for t, n in zip(g.components, b.arities):
        reps = tuple(Var(j) for j in range(1, n + 1)) + (MetaApp(k + 1, ()),)
        comps.append(subst_vars(t, reps, n))
    return Morphism(src, b, tuple(comps), g.theory)


class EqStatus(enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    NEEDS_CERTIFICATE = "needs-certificate"


def morphism_eq(
    f: Morphism, g: Morphism, certs: Sequence[Derivation] | None = None
) -> EqStatus:
    """Decide equality in the theory of equality; elsewhere check certificates.

    Over a presentation with axioms, structurally equal morphisms are EQUAL,
    certificates proving componentwise equality give EQUAL, and without them
    the answer is NEEDS_CERTIFICATE.  A certificate concluding anything other
    than the required componentwise equation raises TheoryError.
    """
    if f.src != g.src or f.dst != g.dst or f.theory != g.theory:
        raise TheoryError("morphism equality needs equal types and theory")
    structural = all(alpha_eq(s, t) for s, t in zip(f.components, g.components))
    if is_theory_of_equality(f.theory):
        return EqStatus.EQUAL if structural else EqStatus.UNEQUAL
    if structural:
        return EqStatus.EQUAL
    if certs is None:
        return EqStatus.NEEDS_CERTIFICATE
    if len(certs) != len(f.dst):
        raise TheoryError(f"{len(certs)} certificates for {len(f.dst)} components")
    theta = f.src.meta_context()
    for i, (cert, s, t, n) in enumerate(
        zip(certs, f.components, g.components, f.dst), start=1
    ):
        concluded = check_derivation(f.theory, cert)
        required = Equation(theta, VarContext(n), s, t)
        if not concluded.same_judgement(required):
            raise TheoryError(
                f"certificate {i} concludes a different equation than required"
            )
    return EqStatus.EQUAL
