"""State-vector simulation of probabilistic quantum resetting with four probes."""

__version__ = "0.1.0"
