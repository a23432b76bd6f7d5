"""Two-photon polarization states: HOM dips, NOON states and ML tomography.

Density matrices are 4x4 complex numpy arrays in the symmetry-ordered basis
(|HH>, |psi+>, |VV>, |psi->). Angles are radians unless a name says ``_deg``.
"""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    Error,
    FormatError,
    IncompleteSettingsError,
    InvalidStateError,
    UndefinedVisibilityError,
)

__version__ = "0.1.0"
