"""Syntactic translations: operator-to-term mappings and their extension to terms.

A translation sends each source operator to a target term whose metacontext is
the operator's arity and whose variable context is empty.  It extends
homomorphically: variables and metavariable applications are fixed, and an
operator application becomes the operator's image with each abstracted
translated argument metasubstituted in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

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
from .kernel import (
    EMPTY_VARS,
    IllFormedTermError,
    MetaApp,
    MetaContext,
    OpApp,
    Signature,
    Term,
    Var,
    VarContext,
    check_term,
    shift_above,
    subst_metas,
)
from .lambdas import lambda_signature
from .theorycat import Morphism

__all__ = [
    "Translation",
    "TranslationError",
    "validate_translation",
    "apply",
    "identity",
    "compose",
    "check_equational",
    "CertifiedTranslation",
    "translate_derivation",
    "induced_theory_map",
    "builtin_cps",
]


class TranslationError(Exception):
    pass


@dataclass(frozen=True)
class Translation:
    src_sig: Signature
    dst_sig: Signature
    mapping: dict[str, Term]  # operator name -> image over (arity |> .)


def validate_translation(tr: Translation) -> list[str]:
    diagnostics = []
    for name, arity in tr.src_sig.operators.items():
        if name not in tr.mapping:
            diagnostics.append(f"operator {name}: no image")
            continue
        theta = MetaContext(arity.binder_depths)
        try:
            check_term(tr.dst_sig, theta, EMPTY_VARS, tr.mapping[name])
        except IllFormedTermError as e:
            diagnostics.append(f"operator {name}: ill-formed image: {e}")
    for name in tr.mapping:
        if name not in tr.src_sig:
            diagnostics.append(f"image for unknown operator {name}")
    return diagnostics


def apply(tr: Translation, t: Term, gamma_size: int = 0) -> Term:
    """Extend the translation to a term over a context of ``gamma_size`` variables."""

    def go(t: Term, g: int) -> Term:
        if isinstance(t, Var):
            return t
        if isinstance(t, MetaApp):
            return MetaApp(t.index, tuple(go(a, g) for a in t.args))
        if t.op not in tr.mapping:
            raise TranslationError(f"no image for operator {t.op!r}")
        arities = tr.src_sig.arity(t.op).binder_depths
        bodies = [go(body, g + binders) for binders, body in t.args]
        image = shift_above(tr.mapping[t.op], 0, g)
        return subst_metas(image, bodies, g, arities)

    return go(t, gamma_size)


def identity(sig: Signature) -> Translation:
    mapping = {}
    for name, arity in sig.operators.items():
        args = tuple(
            (m, MetaApp(i, tuple(Var(j) for j in range(1, m + 1))))
            for i, m in enumerate(arity.binder_depths, start=1)
        )
        mapping[name] = OpApp(name, args)
    return Translation(sig, sig, mapping)


def compose(tr1: Translation, tr2: Translation) -> Translation:
    """First tr1, then tr2."""
    if tr1.dst_sig != tr2.src_sig:
        raise TranslationError("translations do not compose: signature mismatch")
    mapping = {name: apply(tr2, image) for name, image in tr1.mapping.items()}
    return Translation(tr1.src_sig, tr2.dst_sig, mapping)


def check_equational(
    tr: Translation,
    src_pres: Presentation,
    dst_pres: Presentation,
    certs: Mapping[str, Derivation],
) -> list[str]:
    """Check that each source axiom's translated equation has a valid certificate.

    Returns diagnostics; an empty list means the translation is equational.
    """
    diagnostics = []
    if tr.src_sig != src_pres.sig:
        diagnostics.append("translation source signature differs from presentation")
    if tr.dst_sig != dst_pres.sig:
        diagnostics.append("translation target signature differs from presentation")
    if diagnostics:
        return diagnostics
    for i, ax in enumerate(src_pres.axioms, start=1):
        label = ax.label or f"#{i}"
        if label not in certs:
            diagnostics.append(f"axiom {label}: missing certificate")
            continue
        want = Equation(
            ax.theta,
            ax.gamma,
            apply(tr, ax.lhs, ax.gamma.size),
            apply(tr, ax.rhs, ax.gamma.size),
        )
        try:
            got = check_derivation(dst_pres, certs[label])
        except Exception as e:
            diagnostics.append(f"axiom {label}: certificate fails: {e}")
            continue
        if not got.same_judgement(want):
            diagnostics.append(
                f"axiom {label}: certificate concludes a different equation"
            )
    return diagnostics


@dataclass(frozen=True)
class CertifiedTranslation:
    """A translation bundled with per-axiom derivations in the target theory."""

    translation: Translation
    src_pres: Presentation
    dst_pres: Presentation
    certs: dict[str, Derivation]

    def verify(self) -> None:
        problems = check_equational(
            self.translation, self.src_pres, self.dst_pres, self.certs
        )
        if problems:
            raise TranslationError("; ".join(problems))


def translate_derivation(
    ct: CertifiedTranslation, d: Derivation
) -> Derivation:
    """Map a derivation over the source presentation to one over the target.

    Axiom leaves become the certificate trees; every other node translates its
    terms.  The result concludes the translated equation of the original
    conclusion.
    """
    tr = ct.translation

    def go(d: Derivation) -> Derivation:
        if isinstance(d, Axiom):
            if d.label not in ct.certs:
                raise TranslationError(f"missing certificate for axiom {d.label!r}")
            return ct.certs[d.label]
        if isinstance(d, Refl):
            return Refl(d.theta, d.gamma, apply(tr, d.term, d.gamma.size))
        if isinstance(d, Sym):
            return Sym(go(d.child))
        if isinstance(d, Trans):
            return Trans(go(d.left), go(d.right))
        if isinstance(d, ExtMetasubst):
            return ExtMetasubst(
                go(d.main),
                tuple(go(s) for s in d.sides),
                target_theta=d.target_theta,
                delta=d.delta,
            )
        raise TranslationError(f"not a derivation node: {d!r}")

    return go(d)


def induced_theory_map(
    tr: Translation, src_pres: Presentation, dst_pres: Presentation
) -> Callable[[Morphism], Morphism]:
    """The identity-on-objects functor between classifying categories."""

    def on_morphism(m: Morphism) -> Morphism:
        if m.theory != src_pres:
            raise TranslationError("morphism is not over the source presentation")
        comps = tuple(
            apply(tr, t, n) for t, n in zip(m.components, m.dst)
        )
        return Morphism(m.src, m.dst, comps, dst_pres)

    return on_morphism


def builtin_cps() -> Translation:
    """Continuation-passing-style transform of the lambda calculus.

    app:(0,0) maps to the image of "lambda k. m (lambda v. v (lambda l. n l) k)"
    and abs:(1) to "lambda k. k (lambda x. lambda l. f[x] l)", desugared into
    abs/app with left-associated application.
    """
    from .syntax import parse_term

    sig = lambda_signature()
    theta_app = MetaContext((0, 0), ("m", "n"))
    tau_app = parse_term(
        sig,
        theta_app,
        EMPTY_VARS,
        "abs((k) app(m[], abs((v) app(app(v, abs((l) app(n[], l))), k))))",
    )
    theta_abs = MetaContext((1,), ("f",))
    tau_abs = parse_term(
        sig,
        theta_abs,
        EMPTY_VARS,
        "abs((k) app(k, abs((x) abs((l) app(f[x], l)))))",
    )
    return Translation(sig, sig, {"abs": tau_abs, "app": tau_app})
