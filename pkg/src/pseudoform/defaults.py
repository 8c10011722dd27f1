"""Shared deterministic defaults for everything randomized."""

DEFAULT_SEED = 1729
