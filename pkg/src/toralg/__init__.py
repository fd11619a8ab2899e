"""Classification of the uniform algebras A_alpha on the 2-torus.

A_alpha is the algebra of continuous functions on T^2 whose Fourier
coefficients vanish at (m, n) whenever m + alpha*n < 0.
"""

from .autgroup import AutElement, GLMatrix, TorusPoint, eigen_check, generator, is_automorphism_matrix
from .errors import DomainError, NonQuadraticError, ParseError, UnsolvableError
from .fourier import TrigPoly
from .iso import aut_isomorphic, conjecture_scan, gl2_conjugate, is_isomorphic
from .pell import PellSolution, fundamental, negative_solvable
from .quad import QuadNumber, QuadraticIrrational, continued_fraction, normalize, parse

__version__ = "0.1.0"
