"""Hamilton cycles and 1-factors in oriented graphs near the semi-degree threshold."""

__version__ = "0.1.0"
