"""Extremal eigenvalues of sparse random graphs: generation, spectra,
approximate eigenvectors, pruning, nonbacktracking bounds and degree
order-statistics predictions."""

from sparsespec._core import *  # noqa: F401,F403
from sparsespec._core import __doc__ as _core_doc  # noqa: F401
