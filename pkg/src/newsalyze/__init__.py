"""Bias-aware news analysis engine and reader backend."""

__version__ = "0.1.0"

# Recorded in every analysis bundle; a bundle written by a different engine
# version is treated as stale and must be recomputed.
ENGINE_VERSION = __version__
