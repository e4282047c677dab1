"""Kernel regularization toolkit: representer-theorem solvers, GCV/LOO tuning,
randomized trace estimation, SS-ANOVA decompositions, RKE embeddings from
dissimilarities, and distance correlation."""

from ._rkhskit import *  # noqa: F401,F403
from ._rkhskit import __version__  # noqa: F401
