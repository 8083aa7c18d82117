"""Joint spectra of commuting matrix tuples.

Subpackages cover dense matrix kernels (`matrix_core`), sparse multivariate
polynomials (`mpoly`), joint eigenvalues and the Koszul test
(`tuple_spectrum`), determinantal annihilators (`cayley_hamilton`), pencil
isometry models (`bcl_model`), rational matrix symbols (`rational_symbols`)
and ideal supports (`ideal_support`).
"""

from .errors import (CertificationError, ConvergenceError, DegreeOverflowError,
                     InconclusiveError, JointSpecError, NotCommutingError,
                     ShapeError)
from .mpoly import MPoly, PolyMatrix
from .tuple_spectrum import CommutingTuple, joint_eigenvalues
from .cayley_hamilton import build_annihilators, moment_curve_alphas
from .bcl_model import BCLData, sample_variety
from .sampling import DiskGrid, VarietySample

__version__ = '0.1.0'

__all__ = ['JointSpecError', 'ShapeError', 'ConvergenceError',
           'NotCommutingError', 'CertificationError', 'InconclusiveError',
           'DegreeOverflowError', 'MPoly', 'PolyMatrix', 'CommutingTuple',
           'joint_eigenvalues', 'build_annihilators', 'moment_curve_alphas',
           'BCLData', 'sample_variety', 'DiskGrid', 'VarietySample']
