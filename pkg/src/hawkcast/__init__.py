"""Hybrid decomposition / multi-objective Harris hawks / ELM forecasting toolkit."""

__version__ = "0.1.0"
