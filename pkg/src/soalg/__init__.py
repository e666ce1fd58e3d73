"""Workbench for second-order universal algebra.

Modules: :mod:`soalg.kernel` (terms and substitution), :mod:`soalg.syntax`
(parser/printer), :mod:`soalg.eqlogic` (presentations and derivations),
:mod:`soalg.theorycat` (the term-tuple category and classifying categories),
:mod:`soalg.translate` (syntactic translations), :mod:`soalg.intlang`
(internal-language fragments), :mod:`soalg.finsem` (finite clone semantics),
:mod:`soalg.formats` (file formats), :mod:`soalg.cli` (command line).
"""

from .kernel import (
    EMPTY_META,
    EMPTY_VARS,
    IllFormedTermError,
    MetaApp,
    MetaContext,
    OpApp,
    OperatorArity,
    Signature,
    SubstitutionError,
    Term,
    Var,
    VarContext,
    alpha_eq,
    check_term,
    identity_bodies,
    is_pure,
    is_well_formed,
    mvar,
    op,
    subst_metas,
    subst_vars,
    term_size,
    var,
    weaken,
)
from .syntax import ParseError, parse_judgement, parse_term, print_judgement, print_term
from .eqlogic import (
    Axiom,
    Derivation,
    DerivationError,
    Equation,
    ExtMetasubst,
    Presentation,
    Refl,
    Sym,
    Trans,
    check_derivation,
    identity_instance,
    instantiate_axiom,
    validate_presentation,
)
from .theorycat import (
    EqStatus,
    Morphism,
    SOType,
    THEORY_OF_EQUALITY,
    TheoryError,
    morphism_eq,
)
from .translate import CertifiedTranslation, Translation, TranslationError, builtin_cps
from .intlang import (
    FragmentSpec,
    RoundtripResult,
    Triple,
    certify_roundtrip,
    emit_fragment,
    operator_of,
    roundtrip_unit,
    t_of,
)
from .finsem import (
    Assignment,
    Carrier,
    FiniteModel,
    FnTable,
    ResourceGuardError,
    enumerate_models,
    interpret,
    satisfies,
)
from .lambdas import lambda_presentation, lambda_signature

__version__ = "0.1.0"
