"""Exact computational group theory for weakly-mixing group constructions:
orderable shift/wreath/HNN machinery, Magnus-style F'/N' arithmetic, and
bounded finite-presentation audits."""

from .config import DEFAULT_LIMITS, Limits
from .errors import (
    CapabilityError,
    DepthBoundError,
    GroupError,
    ResourceLimitError,
    VariantMismatchError,
    WordSyntaxError,
)
from .groupcore import (
    AltFin,
    FinitePermutationGroup,
    GroupDesc,
    Integers,
    Ordering,
    alternating_group,
    symmetric_group,
)
from .lamplighter import (
    LampElement,
    LampGroup,
    RestrictedWreathGroup,
    StepFunction,
    TowerElement,
    TowerGroup,
    WreathElement,
    last_nontrivial_value,
)
from .magnus import (
    CrystallographicReport,
    FiberLattice,
    GroupRingElement,
    MagnusElement,
    MagnusGroup,
    ModPMagnusGroup,
    QuotientMap,
    crystallographic_report,
    cyclic_quotient,
    fiber_lattice,
    fox_derivative,
    in_fprime,
    in_nprime,
    load_qmap,
    magnus_image,
    mod_p_quotient,
    parse_quotient_spec,
    schreier_generators,
    torsion_probe,
)
from .perms import Permutation, parse_permutation
from .presentation import (
    CosetTable,
    Exhausted,
    LowIndexResult,
    Presentation,
    WMReport,
    abelianization,
    load_presentation,
    low_index_subgroups,
    parse_presentation,
    todd_coxeter,
    verbal_subgroup,
    wm_necessary_report,
)
from .intlinalg import SmithForm, smith_normal_form
from .theta import (
    CElement,
    ConjugateWord,
    ThetaGroup,
    ThetaLimitGroup,
    WElement,
    evaluate_conjugate_word,
    format_conjugate_word,
    normal_closure_witness,
)
from .words import FreeWord, WordParser

__all__ = [name for name in dir() if not name.startswith("_")]
