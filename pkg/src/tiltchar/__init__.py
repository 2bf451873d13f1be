"""Exact characters of indecomposable SL3 tilting modules at mixed levels,
with certified inductive steps, closed-form character families, symmetric
group decomposition numbers, and a brute-force modular oracle."""

from .alcove import ParamSet, dvec, facet_classify, orbit_rep
from .certify import Certificate, TiltingChar
from .charring import weyl_character, weyl_dimension
from .errors import (
    BadLevel,
    BadParams,
    CertificateFailure,
    NoLift,
    NotDominant,
    NotInClosure,
    NotLinked,
    NotWInvariant,
    OutOfImplementedRange,
    OutOfRegion,
    OutOfValidatedRange,
    TiltcharError,
    TooLarge,
)
from .tilting import (
    TableParams,
    all_table_params,
    chain_reproduction,
    table_char,
    table_weight,
    tilting_certificates,
    tilting_char,
)

__version__ = "0.1.0"

__all__ = [
    "BadLevel",
    "BadParams",
    "Certificate",
    "CertificateFailure",
    "NoLift",
    "NotDominant",
    "NotInClosure",
    "NotLinked",
    "NotWInvariant",
    "OutOfImplementedRange",
    "OutOfRegion",
    "OutOfValidatedRange",
    "ParamSet",
    "TableParams",
    "TiltcharError",
    "TiltingChar",
    "TooLarge",
    "all_table_params",
    "chain_reproduction",
    "dvec",
    "facet_classify",
    "orbit_rep",
    "table_char",
    "table_weight",
    "tilting_certificates",
    "tilting_char",
    "weyl_character",
    "weyl_dimension",
]
