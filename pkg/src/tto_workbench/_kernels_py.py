"""Pure numpy implementation of the grid kernels.

Used when the compiled extension is unavailable; ``kernels`` picks one at
import.  Both implementations must agree to rounding.
"""

import numpy as np


def blaschke_grid(zeros, constant, points, derivative=False):
    """Evaluate ``constant * prod (z - a)/(1 - conj(a) z)`` on an array.

    The derivative is accumulated with the product rule alongside the value,
    which stays finite at the zeros themselves.
    """
    z = np.asarray(points, dtype=complex)
    val = np.full(z.shape, complex(constant))
    der = np.zeros(z.shape, dtype=complex)
    for a in np.asarray(zeros, dtype=complex):
        den = 1.0 - np.conj(a) * z
        factor = (z - a) / den
        if derivative:
            der = der * factor + val * ((1.0 - abs(a) ** 2) / den ** 2)
        val = val * factor
    if derivative:
        return val, der
    return val


def tm_table(zeros, points):
    """Takenaka-Malmquist basis values, shape ``(len(zeros), len(points))``."""
    z = np.asarray(points, dtype=complex).ravel()
    zeros = np.asarray(zeros, dtype=complex)
    out = np.empty((zeros.size, z.size), dtype=complex)
    prod = np.ones(z.size, dtype=complex)
    for k, a in enumerate(zeros):
        den = 1.0 - np.conj(a) * z
        out[k] = np.sqrt(1.0 - abs(a) ** 2) / den * prod
        prod = prod * (z - a) / den
    return out
