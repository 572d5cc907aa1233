"""fdq: exact symbolic workbench for formal deformation quantization.

Star-product arithmetic over truncated series with exact rational
coefficients, positivity and GNS machinery, pre-Hilbert modules with Rieffel
induction, deformed projections, and a characteristic-class equivalence
decision.
"""

from .errors import FdqError
from .observables import (PhaseSpaceSignature, PolyObservable, eval_at_point,
                          involution, poisson_bracket, to_holomorphic, to_real)
from .series import DEFAULT_ORDER, FormalSeries, GaussianRational, Sign
from .star import (EquivOperatorSpec, StarProductSpec, apply_equiv,
                   check_star_axioms, commutator, op_n, op_s,
                   star_exponential_beta, star_multiply, std,
                   transported_product, weyl, wick)

__all__ = [
    "DEFAULT_ORDER", "EquivOperatorSpec", "FdqError", "FormalSeries",
    "GaussianRational", "PhaseSpaceSignature", "PolyObservable", "Sign",
    "StarProductSpec", "apply_equiv", "check_star_axioms", "commutator",
    "eval_at_point", "involution", "op_n", "op_s", "poisson_bracket",
    "star_exponential_beta", "star_multiply", "std", "to_holomorphic",
    "to_real", "transported_product", "weyl", "wick",
]

__version__ = "0.1.0"
