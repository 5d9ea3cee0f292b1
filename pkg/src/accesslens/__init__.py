"""Accessibility-opinion mining and socio-spatial analysis over
place-review corpora."""

__version__ = "0.1.0"
