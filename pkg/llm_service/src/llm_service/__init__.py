"""Classification sidecar: wire-protocol inference service and the
fine-tune recipe for the accessibility-attitude model."""

__version__ = "0.1.0"
