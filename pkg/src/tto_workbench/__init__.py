"""Numerical workbench for truncated Toeplitz operators on model spaces K_Theta.

Theta is always a finite Blaschke product, so every space here is finite
dimensional and every operator is a matrix in the Takenaka-Malmquist basis.
"""

from .config import DEFAULT, Tolerances
from .exceptions import InvalidInput, NumericalFailure, WorkbenchError
from .kernels import BACKEND
from .disk import *  # noqa: F401,F403
from .model_space import *  # noqa: F401,F403
from .tto import *  # noqa: F401,F403
from .isomorphism import *  # noqa: F401,F403
from .realize import *  # noqa: F401,F403
from . import disk, isomorphism, model_space, realize, tto

__version__ = "0.1.0"

__all__ = (["DEFAULT", "Tolerances", "InvalidInput", "NumericalFailure", "WorkbenchError",
            "BACKEND", "__version__"]
           + disk.__all__ + model_space.__all__ + tto.__all__ + isomorphism.__all__
           + realize.__all__)
