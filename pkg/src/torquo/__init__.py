"""Exact toric engine for covering quasi-unsplit families and their quotients."""

from .classes import (
    CurveClass,
    DivisorClass,
    ExtremalityCertificate,
    MoriCone,
    class_space,
    is_geometric_extremal,
    is_interior,
    mori_cone,
    pairing,
    wall_class,
)
from .errors import (
    ClassNotInCone,
    ConditionBFailed,
    InternalConsistencyError,
    InvalidFan,
    NotACircuit,
    NotPositive,
    TorquoError,
)
from .family import (
    FamilyRelation,
    build_quotient,
    check_condition_b,
    full_report,
    make_family,
    verify_inductively,
    zero_divisors,
)
from .fan import (
    Fan,
    divisor_fan,
    flip,
    is_projective,
    is_smooth,
    product,
    star_subdivision,
    validate,
    walls,
)
from .gallery import build_z2, enumerate_test_fans, projective_space

__version__ = "0.1.0"
