"""Exact Weingarten integration over easy quantum groups, their spheres and related spaces."""

from .categories import (
    BoundExceeded, CategoryId, EasyGroupId, category_of, closure, enumerate_category, member,
    parse_category, parse_group,
)
from .laws import (
    CumulantSeq, LawId, MomentSeq, bp_check, classical_sphere_moment, cumulants_to_moments,
    free_hyperspherical_moment, law_moments, moments_to_cumulants, parse_law,
)
from .partitions import (
    Partition, compose, enumerate_partitions, fatten, format_partition, join, mobius,
    parse_partition, shrink, signature,
)
from .weingarten import (
    AffineSpaceSpec, AffineValue, HomSpaceSpec, IntegralSpec, PartitionMatrix, SingularGramError,
    char_moment, gram, integrate, integrate_affine, integrate_group, integrate_homspace,
    integrate_sphere, weingarten,
)

__version__ = "0.1.0"

__all__ = [
    "AffineSpaceSpec", "AffineValue", "BoundExceeded", "CategoryId", "CumulantSeq",
    "EasyGroupId", "HomSpaceSpec", "IntegralSpec", "LawId", "MomentSeq", "Partition",
    "PartitionMatrix", "SingularGramError", "bp_check", "category_of", "char_moment",
    "classical_sphere_moment", "closure", "compose", "cumulants_to_moments",
    "enumerate_category", "enumerate_partitions", "fatten", "format_partition",
    "free_hyperspherical_moment", "gram", "integrate", "integrate_affine", "integrate_group",
    "integrate_homspace", "integrate_sphere", "join", "law_moments", "member", "mobius",
    "moments_to_cumulants", "parse_category", "parse_group", "parse_law", "parse_partition",
    "shrink", "signature", "weingarten",
]
