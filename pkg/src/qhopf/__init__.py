"""Exact Chern number computations for quantum Heegaard and Podles sphere bundles.

The package computes index pairings of line bundles over two families of
quantum two-spheres, given by strong connections on quantum principal
U(1)-bundles, entirely in exact arithmetic over Q(p, q, s).
"""

from .connection import (
    ell_family1,
    ell_family2,
    idempotent,
    trace_element,
    verify_connection,
)
from .field import (
    BigRational,
    DivisionByZero,
    FieldError,
    MultiPoly,
    ParseError,
    PoleAtPoint,
    RationalFunction,
    format_rf,
    gcd_reduction,
    parse_rf,
    rf,
)
from .fredholm import (
    chern_number,
    numeric_pairing,
    rank_pairing,
    rep_check,
    restriction_check,
    trace_pairing,
)
from .hopf import antipode, coproduct, counit, quotient_basis
from .rewriting import check_confluence, heegaard, qsu2
from .span import express_in_base

__version__ = "0.1.0"

__all__ = [
    "BigRational",
    "DivisionByZero",
    "FieldError",
    "MultiPoly",
    "ParseError",
    "PoleAtPoint",
    "RationalFunction",
    "antipode",
    "check_confluence",
    "chern_number",
    "coproduct",
    "counit",
    "ell_family1",
    "ell_family2",
    "express_in_base",
    "format_rf",
    "gcd_reduction",
    "heegaard",
    "idempotent",
    "numeric_pairing",
    "parse_rf",
    "qsu2",
    "quotient_basis",
    "rank_pairing",
    "rep_check",
    "restriction_check",
    "rf",
    "trace_element",
    "trace_pairing",
    "verify_connection",
    "__version__",
]
