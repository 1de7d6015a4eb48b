"""fbstokes: explicit resolvent solvers and desk-scale verification for
free-boundary Stokes model problems.

Subpackages, one per concern:

- ``symbols``: scalar symbols A, B, B0, D, E_kappa, multiplier classes
- ``halfspace``: half-space boundary-value solution formulas
- ``wholespace``: whole-space resolvent and weak Laplace/Dirichlet solvers
- ``geometry``: hypersurface frames, curvature, sphere spectra
- ``transforms``: domain maps and their Jacobian algebra
- ``nonlinear``: transformed-equation nonlinear term assembly
- ``harness``: grid sweeps, reports, determinism plumbing
- ``cli``: the ``fbstokes`` command

The compiled kernel backend in use is reported by
``fbstokes.kernel_backend()``.
"""

from ._kernels import BACKEND as _BACKEND

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Name of the active low-level kernel implementation."""
    return _BACKEND
