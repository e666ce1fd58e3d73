"""Internal-language fragments of an algebraic theory, plus round-trip constructions.

A fragment names finitely many morphisms of a theory.  Each listed morphism f
becomes an operator whose arity is the source arities followed by one nullary
slot per target variable; the generated presentation then equates every pure
listed morphism with its operator expansion and records each certified
composition h = g . (f1,...,fl) as an equation between expansions.

``certify_roundtrip`` builds, for a source presentation, a fragment rich
enough to derive the translated image of every source axiom, together with the
derivations themselves.  The construction works on closed promoted forms
(variables traded for fresh nullary metavariables), decomposes terms through
refl-certified composition triples, and un-promotes at the end through the
metasubstitution congruence.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

from .eqlogic import (
    Axiom,
    Derivation,
    Equation,
    ExtMetasubst,
    Presentation,
    Refl,
    Sym,
    Trans,
)
from .kernel import (
    EMPTY_VARS,
    MetaApp,
    MetaContext,
    OpApp,
    OperatorArity,
    Signature,
    Term,
    Var,
    VarContext,
    check_term,
    is_pure,
    shift_above,
    subst_metas,
    subst_vars,
)
from .theorycat import (
    EqStatus,
    Morphism,
    SOType,
    TheoryError,
    bang,
    compose,
    morphism_eq,
    pair,
)
from .translate import Translation

__all__ = [
    "FragmentError",
    "GeneratedOperator",
    "operator_of",
    "t_of",
    "Triple",
    "FragmentSpec",
    "validate_fragment",
    "emit_fragment",
    "generator_morphism",
    "canonical_generators",
    "promote_vars",
    "roundtrip_unit",
    "inverse_dictionary",
    "RoundtripResult",
    "certify_roundtrip",
]


class FragmentError(Exception):
    pass


def _morphism_key(m: Morphism) -> str:
    from .formats import morphism_text

    return morphism_text(m, theory_name=None)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:10]


@dataclass(frozen=True)
class GeneratedOperator:
    name: str
    arity: OperatorArity


def operator_of(f: Morphism) -> GeneratedOperator:
    """The operator standing for a morphism into a singleton object.

    The arity is the source arities followed by one nullary entry per target
    variable; the name hashes a canonical print of the morphism.
    """
    if len(f.dst) != 1:
        raise FragmentError(f"target {f.dst} is not a singleton")
    n = f.dst.arities[0]
    arity = OperatorArity(f.src.arities + (0,) * n)
    return GeneratedOperator("o_" + _digest(_morphism_key(f)), arity)


def t_of(f: Morphism) -> Term:
    """The operator expansion of a listed morphism.

    Over the source metacontext and n target variables this is the operator
    applied to the identity abstraction of each metavariable and then to the
    variables themselves.
    """
    gen = operator_of(f)
    n = f.dst.arities[0]
    args: list[tuple[int, Term]] = [
        (m, MetaApp(i, tuple(Var(n + j) for j in range(1, m + 1))))
        for i, m in enumerate(f.src.arities, start=1)
    ]
    args.extend((0, Var(j)) for j in range(1, n + 1))
    return OpApp(gen.name, tuple(args))


@dataclass(frozen=True)
class Triple:
    """A certified factorisation h = g . (f1,...,fl)."""

    h: Morphism
    g: Morphism
    factors: tuple[Morphism, ...]
    cert: tuple[Derivation, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class FragmentSpec:
    theory: Presentation
    morphisms: tuple[Morphism, ...] = ()
    triples: tuple[Triple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "morphisms", tuple(self.morphisms))
        object.__setattr__(self, "triples", tuple(self.triples))


def _composite(tr: Triple) -> Morphism:
    if not tr.factors:
        tupled = bang(tr.h.src, tr.h.theory)
    else:
        tupled = tr.factors[0]
        for f in tr.factors[1:]:
            tupled = pair(tupled, f)
    return compose(tupled, tr.g)


def validate_fragment(spec: FragmentSpec) -> list[str]:
    diagnostics = []
    for i, m in enumerate(spec.morphisms, start=1):
        if m.theory != spec.theory:
            diagnostics.append(f"morphism {i} is over a different theory")
        if len(m.dst) != 1:
            diagnostics.append(f"morphism {i} target {m.dst} is not a singleton")
    for i, tr in enumerate(spec.triples, start=1):
        try:
            composite = _composite(tr)
        except TheoryError as e:
            diagnostics.append(f"triple {i} does not type-check: {e}")
            continue
        if composite.src != tr.h.src or composite.dst != tr.h.dst:
            diagnostics.append(f"triple {i}: composite has the wrong type")
            continue
        status = morphism_eq(tr.h, composite, tr.cert)
        if status is not EqStatus.EQUAL:
            diagnostics.append(f"triple {i}: h is not certified equal to the composite")
    return diagnostics


def _taut_label(name: str) -> str:
    return "taut_" + name[2:]


def _comp_label(h_name: str, g_name: str, factor_names: Sequence[str]) -> str:
    return "comp_" + _digest(" ".join([h_name, g_name, *factor_names]))


def _comp_equation(tr: Triple) -> Equation:
    n = tr.h.dst.arities[0]
    bodies = [shift_above(t_of(f), 0, n) for f in tr.factors]
    rhs = subst_metas(t_of(tr.g), bodies, n, tr.g.src.arities)
    label = _comp_label(
        operator_of(tr.h).name,
        operator_of(tr.g).name,
        [operator_of(f).name for f in tr.factors],
    )
    return Equation(
        tr.h.src.meta_context(), VarContext(n), t_of(tr.h), rhs, label=label
    )


def emit_fragment(spec: FragmentSpec) -> Presentation:
    """Generate the fragment presentation: one operator per listed morphism,
    a tautology equation per pure listed morphism, and one equation per triple.
    """
    operators: dict[str, OperatorArity] = {}
    axioms: list[Equation] = []
    seen_morphisms: dict[str, Morphism] = {}
    for m in spec.morphisms:
        gen = operator_of(m)
        if gen.name in operators:
            if operators[gen.name] != gen.arity:
                raise FragmentError(f"operator name collision on {gen.name}")
            continue
        operators[gen.name] = gen.arity
        seen_morphisms[gen.name] = m
        if all(is_pure(t) for t in m.components):
            n = m.dst.arities[0]
            axioms.append(
                Equation(
                    m.src.meta_context(),
                    VarContext(n),
                    m.components[0],
                    t_of(m),
                    label=_taut_label(gen.name),
                )
            )
    seen_triples = set()
    for tr in spec.triples:
        eq = _comp_equation(tr)
        if eq.label in seen_triples:
            continue
        seen_triples.add(eq.label)
        axioms.append(eq)
    return Presentation(
        Signature(operators), tuple(axioms), name=f"{spec.theory.name}_fragment"
    )


def generator_morphism(p: Presentation, name: str) -> Morphism:
    """The operator-shaped generator: the operator applied to identity abstractions."""
    arity = p.sig.arity(name)
    args = tuple(
        (m, MetaApp(i, tuple(Var(j) for j in range(1, m + 1))))
        for i, m in enumerate(arity.binder_depths, start=1)
    )
    return Morphism(
        SOType(arity.binder_depths), SOType((0,)), (OpApp(name, args),), p
    )


def canonical_generators(p: Presentation) -> dict[str, Morphism]:
    return {name: generator_morphism(p, name) for name in p.sig.operators}


def promote_vars(t: Term, k: int, n: int) -> Term:
    """Trade the n context variables for fresh nullary metavariables k+1..k+n."""
    return subst_vars(t, tuple(MetaApp(k + j, ()) for j in range(1, n + 1)), 0)


def roundtrip_unit(p: Presentation, fragment: Presentation | None = None) -> Translation:
    """The translation sending each operator to its generator's expansion."""
    generators = canonical_generators(p)
    mapping = {name: t_of(f) for name, f in generators.items()}
    if fragment is None:
        fragment = emit_fragment(
            FragmentSpec(p, tuple(generators.values()), ())
        )
    return Translation(p.sig, fragment.sig, mapping)


def inverse_dictionary(spec: FragmentSpec, fragment: Presentation) -> Translation:
    """The dictionary reading each fragment operator back as its promoted morphism."""
    mapping: dict[str, Term] = {}
    for m in spec.morphisms:
        gen = operator_of(m)
        if gen.name in mapping:
            continue
        n = m.dst.arities[0]
        mapping[gen.name] = promote_vars(m.components[0], len(m.src), n)
    return Translation(fragment.sig, spec.theory.sig, mapping)


# --- mechanical certification of the round-trip translation ---


class _Builder:
    def __init__(self, theory: Presentation):
        self.theory = theory
        self.morphisms: dict[str, Morphism] = {}
        self.order: list[str] = []
        self.triples: list[Triple] = []
        self.triple_labels: set[str] = set()

    def add(self, m: Morphism) -> str:
        name = operator_of(m).name
        if name not in self.morphisms:
            self.morphisms[name] = m
            self.order.append(name)
        return name

    def taut(self, m: Morphism) -> str:
        if not all(is_pure(t) for t in m.components):
            raise FragmentError("tautology equation requires a pure morphism")
        return _taut_label(self.add(m))

    def triple(
        self,
        h: Morphism,
        g: Morphism,
        factors: Sequence[Morphism],
        cert: tuple[Derivation, ...] | None = None,
    ) -> str:
        tr = Triple(h, g, tuple(factors), cert)
        if cert is None:
            # the composite must be the listed representative on the nose
            composite = _composite(tr)
            if composite.components != h.components:
                raise FragmentError("refl triple does not compose to h structurally")
        label = _comp_label(
            self.add(h), self.add(g), [self.add(f) for f in factors]
        )
        if label not in self.triple_labels:
            self.triple_labels.add(label)
            self.triples.append(tr)
        return label

    def spec(self) -> FragmentSpec:
        return FragmentSpec(
            self.theory,
            tuple(self.morphisms[name] for name in self.order),
            tuple(self.triples),
        )


@dataclass
class _Ctx:
    p: Presentation
    builder: _Builder
    translation: Translation
    generators: dict[str, Morphism]


def _tau(ctx: _Ctx, t: Term, g: int) -> Term:
    from .translate import apply

    return apply(ctx.translation, t, g)


def _single(ctx: _Ctx, phi: MetaContext, n: int, component: Term) -> Morphism:
    return Morphism(SOType(phi.arities), SOType((n,)), (component,), ctx.p)


def _meta_weaken(ctx: _Ctx, label: str, phi: MetaContext) -> Derivation:
    """From an axiom over (theta |> gamma), the same equation over (phi |> gamma).

    phi must extend the axiom's metacontext on the right; identity side
    premises re-target the metavariables.
    """
    ax = ctx.p.axiom(label)
    arities = ax.theta.arities
    if phi.arities[: len(arities)] != arities:
        raise FragmentError("weakening target does not extend the metacontext")
    if not arities:
        return ExtMetasubst(Axiom(label), (), target_theta=phi, delta=EMPTY_VARS)
    sides = tuple(
        Refl(phi, VarContext(m), MetaApp(i, tuple(Var(j) for j in range(1, m + 1))))
        for i, m in enumerate(arities, start=1)
    )
    return ExtMetasubst(Axiom(label), sides)


def _promoted_axiom(ctx: _Ctx, label: str) -> Derivation:
    """Derive the axiom's closed form: variables traded for fresh nullary metas."""
    ax = ctx.p.axiom(label)
    k, n = len(ax.theta), ax.gamma.size
    if n == 0:
        return Axiom(label)
    phi = MetaContext(ax.theta.arities + (0,) * n)
    weakened = _meta_weaken(ctx, label, phi)
    # template S[X1[],...,Xn[]]: substituting (x...)s for S and the promoted
    # metavariables for the X's lands on the promoted equation
    template_theta = MetaContext((n,) + (0,) * n)
    template = MetaApp(1, tuple(MetaApp(1 + j, ()) for j in range(1, n + 1)))
    sides = [weakened]
    sides.extend(Refl(phi, EMPTY_VARS, MetaApp(k + j, ())) for j in range(1, n + 1))
    return ExtMetasubst(Refl(template_theta, EMPTY_VARS, template), tuple(sides))


def _unpromote(
    ctx: _Ctx, d: Derivation, theta: MetaContext, gamma: VarContext
) -> Derivation:
    """Map a closed derivation over theta ++ 0^n back to (theta |> gamma)."""
    n = gamma.size
    sides = [
        Refl(
            theta,
            gamma.extend(m),
            MetaApp(i, tuple(Var(n + j) for j in range(1, m + 1))),
        )
        for i, m in enumerate(theta.arities, start=1)
    ]
    sides.extend(Refl(theta, gamma, Var(j)) for j in range(1, n + 1))
    return ExtMetasubst(d, tuple(sides))


def _identity_refl(phi: MetaContext, index: int, m: int) -> Refl:
    return Refl(
        phi, VarContext(m), MetaApp(index, tuple(Var(j) for j in range(1, m + 1)))
    )


def _epsilon(ctx: _Ctx, m: int) -> Morphism:
    """The pure applicator (Y:[m], Z1..Zm:[0] |> . |- Y[Z1[],...,Zm[]])."""
    component = MetaApp(1, tuple(MetaApp(1 + j, ()) for j in range(1, m + 1)))
    return _single(ctx, MetaContext((m,) + (0,) * m), 0, component)


def _closed(ctx: _Ctx, phi: MetaContext, u: Term) -> Derivation:
    """Derivation of (phi |> .) tau(u) == t_of(<u>) in the growing fragment."""
    mu = _single(ctx, phi, 0, u)
    if is_pure(u):
        return Axiom(ctx.builder.taut(mu))
    if isinstance(u, OpApp):
        f_o = ctx.generators[u.op]
        arities = f_o.src.arities
        factors = []
        sides = []
        for binders, body in u.args:
            w = _single(ctx, phi, binders, body)
            factors.append(w)
            sides.append(_open(ctx, phi, binders, body, w))
        comp_label = ctx.builder.triple(mu, f_o, factors)
        if sides:
            cong = ExtMetasubst(
                Refl(MetaContext(arities), EMPTY_VARS, t_of(f_o)), tuple(sides)
            )
        else:
            cong = ExtMetasubst(
                Refl(MetaContext(()), EMPTY_VARS, t_of(f_o)),
                (),
                target_theta=phi,
                delta=EMPTY_VARS,
            )
        return Trans(cong, Sym(Axiom(comp_label)))
    # impure metavariable application: decompose through the pure applicator
    m = len(u.args)
    eps = _epsilon(ctx, m)
    eps_label = ctx.builder.taut(eps)
    projection = _single(
        ctx, phi, m, MetaApp(u.index, tuple(Var(j) for j in range(1, m + 1)))
    )
    projection_label = ctx.builder.taut(projection)
    arg_morphisms = [_single(ctx, phi, 0, a) for a in u.args]
    arg_derivs = [_closed(ctx, phi, a) for a in u.args]
    comp_label = ctx.builder.triple(mu, eps, [projection, *arg_morphisms])
    step1 = ExtMetasubst(
        Axiom(eps_label),
        (_identity_refl(phi, u.index, m), *arg_derivs),
    )
    step2 = ExtMetasubst(
        Refl(eps.src.meta_context(), EMPTY_VARS, t_of(eps)),
        (
            Axiom(projection_label),
            *[Refl(phi, EMPTY_VARS, t_of(a)) for a in arg_morphisms],
        ),
    )
    return Trans(step1, Trans(step2, Sym(Axiom(comp_label))))


def _open(
    ctx: _Ctx, phi: MetaContext, binders: int, body: Term, w: Morphism
) -> Derivation:
    """Derivation of (phi |> x1..xb) tau(body) == t_of(w) for an operator argument."""
    if is_pure(body):
        return Axiom(ctx.builder.taut(w))
    if binders == 0:
        return _closed(ctx, phi, body)
    k = len(phi)
    phi_ext = MetaContext(phi.arities + (0,) * binders)
    promoted = promote_vars(body, k, binders)
    d_closed = _closed(ctx, phi_ext, promoted)
    mu_hat = _single(ctx, phi_ext, 0, promoted)
    w_up = _single(ctx, phi_ext, binders, body)
    projections = [
        _single(
            ctx, phi_ext, m, MetaApp(a, tuple(Var(j) for j in range(1, m + 1)))
        )
        for a, m in enumerate(phi.arities, start=1)
    ]
    taut_projections = [ctx.builder.taut(pi) for pi in projections]
    j_label = ctx.builder.triple(w_up, w, projections)
    j_clean = ExtMetasubst(
        Refl(phi, VarContext(binders), t_of(w)),
        tuple(Sym(Axiom(lab)) for lab in taut_projections),
    )
    j_link = Trans(Axiom(j_label), j_clean)
    eps = _epsilon(ctx, binders)
    eps_label = ctx.builder.taut(eps)
    chis = [
        _single(ctx, phi_ext, 0, MetaApp(k + j, ())) for j in range(1, binders + 1)
    ]
    chi_labels = [ctx.builder.taut(chi) for chi in chis]
    sigma_label = ctx.builder.triple(mu_hat, eps, [w_up, *chis])
    collapse = ExtMetasubst(
        Sym(Axiom(eps_label)),
        (j_link, *[Sym(Axiom(lab)) for lab in chi_labels]),
    )
    closed_chain = Trans(d_closed, Trans(Axiom(sigma_label), collapse))
    return _unpromote(ctx, closed_chain, phi, VarContext(binders))


def _certify_axiom(ctx: _Ctx, ax: Equation) -> Derivation:
    k, n = len(ax.theta), ax.gamma.size
    phi = MetaContext(ax.theta.arities + (0,) * n)
    lhs_hat = promote_vars(ax.lhs, k, n)
    rhs_hat = promote_vars(ax.rhs, k, n)
    d_lhs = _closed(ctx, phi, lhs_hat)
    d_rhs = _closed(ctx, phi, rhs_hat)
    ms = _single(ctx, phi, 0, lhs_hat)
    mt = _single(ctx, phi, 0, rhs_hat)
    projections = [
        _single(ctx, phi, m, MetaApp(i, tuple(Var(j) for j in range(1, m + 1))))
        for i, m in enumerate(phi.arities, start=1)
    ]
    taut_labels = [ctx.builder.taut(pi) for pi in projections]
    bridge_cert = _promoted_axiom(ctx, ax.label)
    bridge_label = ctx.builder.triple(ms, mt, projections, cert=(bridge_cert,))
    cleanup = ExtMetasubst(
        Refl(phi, EMPTY_VARS, t_of(mt)),
        tuple(Sym(Axiom(lab)) for lab in taut_labels),
    )
    bridge = Trans(Axiom(bridge_label), cleanup)
    closed = Trans(d_lhs, Trans(bridge, Sym(d_rhs)))
    if n == 0:
        return closed
    return _unpromote(ctx, closed, ax.theta, ax.gamma)


@dataclass(frozen=True)
class RoundtripResult:
    translation: Translation
    fragment: Presentation
    spec: FragmentSpec
    certs: dict[str, Derivation]


def certify_roundtrip(p: Presentation) -> RoundtripResult:
    """Build the enriched canonical fragment of p and certify the round-trip
    translation equational, one derivation per source axiom."""
    for ax in p.axioms:
        if ax.label is None:
            raise FragmentError("certification needs labelled axioms")
    builder = _Builder(p)
    generators = canonical_generators(p)
    for g in generators.values():
        builder.add(g)
    mapping = {name: t_of(f) for name, f in generators.items()}
    provisional = Translation(p.sig, Signature({}), mapping)
    ctx = _Ctx(p, builder, provisional, generators)
    certs = {ax.label: _certify_axiom(ctx, ax) for ax in p.axioms}
    spec = builder.spec()
    fragment = emit_fragment(spec)
    translation = Translation(p.sig, fragment.sig, mapping)
    return RoundtripResult(translation, fragment, spec, certs)
