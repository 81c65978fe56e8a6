"""Tree mapping schemes for hyperbolic rational maps with finitely connected Fatou sets."""

__version__ = "0.1.0"
