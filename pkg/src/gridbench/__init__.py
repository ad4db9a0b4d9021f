"""Procedural 2D grid benchmark engine.

Seeded task generation, deterministic rendering, a multiple-choice episode
harness for model and human players, capability scoring, and an HTTP play
service.
"""

__version__ = "0.1.0"
