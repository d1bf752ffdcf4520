"""Refined floor-diagram counts relative to a conic.

Exact q-refined counts of curves on blow-ups of the plane at up to six
points on a conic, computed two independent ways — direct enumeration of
marked floor diagrams, and a Caporaso–Harris style recursion — together
with the derived higher-genus relative BPS polynomials.
"""

from .qalgebra import HalfLaurent, quantum_integer, div_exact, eval_q1, eval_qm1
from .classes import CurveClass, line, conic, exceptional

__all__ = [
    "HalfLaurent",
    "quantum_integer",
    "div_exact",
    "eval_q1",
    "eval_qm1",
    "CurveClass",
    "line",
    "conic",
    "exceptional",
]

__version__ = "0.1.0"
