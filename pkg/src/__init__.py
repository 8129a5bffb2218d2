"""FEI bounds toolkit - exact profiles of Boolean functions and lower bounds on the entropy/influence constant."""

__version__ = "1.0.0"
