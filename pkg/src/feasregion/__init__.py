"""feasregion - inverse linear programming for unknown constraints."""

__version__ = "0.1.0"
