"""Meta-RL suite for peg-in-hole insertion with unknown hole pose."""

__version__ = "0.1.0"
