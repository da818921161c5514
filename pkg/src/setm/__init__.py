"""Set Turing machines over hereditarily finite sets."""
__version__ = "0.1.0"
