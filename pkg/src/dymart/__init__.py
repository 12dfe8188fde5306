"""dymart: exact dyadic-rational martingale machinery.

Subpackages follow the functional split:

- ``dyadic``     exact numbers, words, intervals, grid rounding, covers
- ``martingale`` betting strategies, conservative transform, traces
- ``funcs``      exact/approximate real-function contracts
- ``tightness``  zero-insertion functions and their betting strategies
- ``pullback``   interval shifts and the pullback martingale approximation
- ``patch``      monotonization of non-monotone functions
- ``analytic``   certified power-series evaluation and root finding
- ``measure``    probability measures on words vs. cumulative functions
- ``cli``        command-line front end
"""

from .dyadic import (Dyadic, Word, GridPoint, word_value, gamma,
                     lex_successor, round_to_grid, clamp_unit, minimal_cover,
                     affine_transform, parse_rational, fmt_rational)

__all__ = [
    "Dyadic", "Word", "GridPoint", "word_value", "gamma", "lex_successor",
    "round_to_grid", "clamp_unit", "minimal_cover", "affine_transform",
    "parse_rational", "fmt_rational",
]

__version__ = "0.1.0"
