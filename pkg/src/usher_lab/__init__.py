"""usher-lab - tabular multi-goal reinforcement-learning laboratory.

Implements goal-conditioned Q-learning, hindsight experience replay and its
importance-sampling correction on small enumerable environments, together with
dynamic-programming oracles that make the bias claims checkable.
"""

__version__ = "0.1.0"
__description__ = "Tabular multi-goal RL laboratory for hindsight bias correction"

__all__ = ["__version__"]
