"""Fixed-point spectra, conjugacies and orbit-space geometry for group actions on the line."""

__version__ = "0.1.0"
