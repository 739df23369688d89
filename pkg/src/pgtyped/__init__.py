"""Permutation groups, conjugacy classes and type-D tests.

Composition is left to right: ``(p * q)(x) == q(p(x))``.  Conjugation is
``a ** x == x**-1 * a * x``.  Points are 1-based in every public interface.
"""

__version__ = "0.1.0"

from .perm import Permutation, PermutationError, compose, cycle_type, inverse, parse_perm
from .group import (
    GroupError,
    PermGroup,
    RandomSource,
    contains,
    group_from_generators,
    orbit,
    random_element,
)
from .search import are_conjugate, centralizer
from .classes import (
    ClassTable,
    ClassTableError,
    ConjugacyClass,
    QuasiRealInfo,
    class_of,
    conjugacy_classes,
    power_map,
    quasi_real_classes,
    real_classes,
    structure_constant,
)
from .typed import (
    FusionMap,
    MaximalResult,
    NotTypeD,
    SearchConfig,
    TypeD,
    TypeDWitness,
    Unknown,
    check_pair,
    classify_class,
    direct_product,
    fusion_map,
    typed_exhaustive,
    typed_maximal,
    typed_random,
    verify_witness,
)
from .basecodec import CodecError, EncodedElement, base_of, decode, encode, is_base
from .groupio import LogRecord, catalog, load_group, read_log, write_log

__all__ = [name for name in dir() if not name.startswith("_")]
