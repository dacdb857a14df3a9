"""Synchronization-rate policies for distributed SDN control planes.

Thin Python surface over the C++ core: analytic consistency model,
multiple-choice-knapsack solvers, the stochastic-greedy learner, the slotted
network simulator, and the experiment runner.
"""

from syncrate._core import *  # noqa: F401,F403
from syncrate._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = __doc__ or _core_doc
