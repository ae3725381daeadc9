"""Wagerbench - A persona-conditioned gambling benchmark for language models."""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("wagerbench")
except importlib.metadata.PackageNotFoundError:
    # Fallback for development when package is not installed
    __version__ = "0.1.0-dev"
