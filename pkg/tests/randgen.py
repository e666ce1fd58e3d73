"""Seeded random generators for terms, morphisms, translations, and derivations."""

from __future__ import annotations

import random

from soalg.eqlogic import (
    Axiom,
    Derivation,
    Equation,
    ExtMetasubst,
    Presentation,
    Refl,
    Sym,
    Trans,
)
from soalg.kernel import (
    EMPTY_VARS,
    MetaApp,
    MetaContext,
    OpApp,
    Signature,
    Term,
    Var,
    VarContext,
)
from soalg.theorycat import Morphism, SOType, THEORY_OF_EQUALITY
from soalg.translate import Translation


def random_signature(rng: random.Random, n_ops: int = 3) -> Signature:
    ops = {"c": ()}  # a constant keeps random terms constructible anywhere
    for i in range(n_ops):
        k = rng.randint(1, 2)
        ops[f"g{i}"] = tuple(rng.randint(0, 2) for _ in range(k))
    return Signature.of(**ops)


def random_contexts(
    rng: random.Random, max_metas: int = 3, max_vars: int = 3
) -> tuple[MetaContext, VarContext]:
    k = rng.randint(0, max_metas)
    arities = tuple(rng.randint(0, 2) for _ in range(k))
    n = rng.randint(0, max_vars)
    return MetaContext(arities), VarContext(n)


def random_term(
    rng: random.Random,
    sig: Signature,
    theta: MetaContext,
    gamma_size: int,
    size: int,
) -> Term:
    def leaf(g: int) -> Term:
        if g > 0 and rng.random() < 0.7:
            return Var(rng.randint(1, g))
        zero_metas = [i for i, m in enumerate(theta.arities, start=1) if m == 0]
        if zero_metas and rng.random() < 0.7:
            return MetaApp(rng.choice(zero_metas))
        constants = [o for o, a in sig.operators.items() if len(a) == 0]
        if constants:
            return OpApp(rng.choice(constants))
        if g > 0:
            return Var(rng.randint(1, g))
        if zero_metas:
            return MetaApp(rng.choice(zero_metas))
        raise ValueError("no leaf term exists in this context")

    def go(g: int, budget: int) -> Term:
        if budget <= 1:
            return leaf(g)
        choice = rng.random()
        if choice < 0.25 and len(theta) > 0:
            i = rng.randint(1, len(theta))
            m = theta.arities[i - 1]
            args = tuple(go(g, max(1, budget // (m + 1))) for _ in range(m))
            return MetaApp(i, args)
        if choice < 0.75 and sig.operators:
            name = rng.choice(list(sig.operators))
            depths = sig.arity(name).binder_depths
            args = tuple(
                (b, go(g + b, max(1, budget // (len(depths) + 1))))
                for b in depths
            )
            return OpApp(name, args)
        return leaf(g)

    return go(gamma_size, size)


def random_pure_term(
    rng: random.Random, arities: tuple[int, ...], gamma_size: int, size: int
) -> Term:
    return random_term(
        rng, Signature({}), MetaContext(arities), gamma_size, size
    )


def has_pure_terms(arities: tuple[int, ...], gamma_size: int) -> bool:
    return gamma_size > 0 or any(m == 0 for m in arities)


def random_object(rng: random.Random, max_len: int = 3, max_entry: int = 3) -> SOType:
    return SOType(tuple(rng.randint(0, max_entry) for _ in range(rng.randint(0, max_len))))


def random_morphism(
    rng: random.Random,
    src: SOType,
    dst: SOType,
    size: int = 12,
    theory: Presentation = THEORY_OF_EQUALITY,
) -> Morphism:
    comps = []
    for n in dst.arities:
        if not has_pure_terms(src.arities, n):
            n = max(n, 1)  # repair an empty hom component
        comps.append(random_pure_term(rng, src.arities, n, size))
    fixed_dst = SOType(
        tuple(
            n if has_pure_terms(src.arities, n) else max(n, 1)
            for n in dst.arities
        )
    )
    return Morphism(src, fixed_dst, tuple(comps), theory)


def random_hom_pair(
    rng: random.Random, max_entry: int = 3, size: int = 12
) -> Morphism:
    src = random_object(rng, max_entry=max_entry)
    dst = random_object(rng, max_entry=max_entry)
    return random_morphism(rng, src, dst, size)


def random_translation(
    rng: random.Random, src_sig: Signature, dst_sig: Signature, size: int = 8
) -> Translation:
    mapping = {}
    for name, arity in src_sig.operators.items():
        theta = MetaContext(arity.binder_depths)
        mapping[name] = random_term(rng, dst_sig, theta, 0, size)
    return Translation(src_sig, dst_sig, mapping)


def random_derivation(
    rng: random.Random,
    p: Presentation,
    max_depth: int = 4,
    term_size: int = 8,
) -> Derivation:
    """A random checkable derivation built from axioms, refl, sym, trans, msub."""

    def base() -> Derivation:
        if p.axioms and rng.random() < 0.6:
            return Axiom(rng.choice(p.axioms).label)
        theta, gamma = random_contexts(rng)
        try:
            t = random_term(rng, p.sig, theta, gamma.size, term_size)
        except ValueError:
            t = random_term(rng, p.sig, MetaContext((0,)), 0, term_size)
            theta, gamma = MetaContext((0,)), EMPTY_VARS
        return Refl(theta, gamma, t)

    def conclusion_contexts(d: Derivation) -> tuple[MetaContext, VarContext]:
        from soalg.eqlogic import check_derivation

        eq = check_derivation(p, d)
        return eq.theta, eq.gamma

    def go(depth: int) -> Derivation:
        if depth <= 1:
            return base()
        roll = rng.random()
        if roll < 0.25:
            return Sym(go(depth - 1))
        if roll < 0.45:
            child = go(depth - 1)
            return Trans(child, Sym(child))
        if roll < 0.75:
            main = go(depth - 1)
            theta, _ = conclusion_contexts(main)
            delta_n = rng.randint(0, 2)
            sides = []
            for i, m in enumerate(theta.arities, start=1):
                gamma_i = VarContext(delta_n + m)
                try:
                    body = random_term(rng, p.sig, theta, gamma_i.size, term_size)
                except ValueError:
                    body = MetaApp(
                        i, tuple(Var(delta_n + j) for j in range(1, m + 1))
                    )
                sides.append(Refl(theta, gamma_i, body))
            if sides:
                return ExtMetasubst(main, tuple(sides))
            return ExtMetasubst(
                main, (), target_theta=theta, delta=VarContext(delta_n)
            )
        return base()

    return go(max_depth)
