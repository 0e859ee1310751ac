"""Character-theory engine for irreducible restrictions of 2F4(q) representations."""

__version__ = "0.1.0"
