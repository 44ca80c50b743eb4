"""Exact rational toolkit for totally positive and totally nonnegative matrices."""

from .exact import MinorIndex, RatMatrix, all_minors, as_rat, cauchy_binet_check, minor
from .radical import RadicalScalar, ScaledMatrix, rational_power, rational_root
from .classify import (
    Certificate,
    ClassLabel,
    classify_full,
    is_itn,
    is_itn_fast,
    is_tp,
    is_tp_fekete,
    principal_minors_positive,
    whitney_perturb,
)
from .factor import (
    BidiagonalFactorization,
    DiagonalFactor,
    ElementaryBidiagonal,
    NotITNError,
    factorize,
    ldu,
    random_factorization,
    random_itn,
    synthesize,
)
from .structure import (
    CentralizerShape,
    block_membership,
    centralizer_shape,
    in_centralizer,
    maximal_subgroup_witness,
    two_by_two_conjugation_test,
)
from .automorph import (
    AutomorphismSpec,
    GeneratorImageTable,
    InconsistentTableError,
    apply,
    extend_tp_automorphism,
    recover,
    tabulate,
    verify_homomorphism,
)
from .battery import PropertyReport, RunConfig, check_all

__version__ = "0.1.0"
