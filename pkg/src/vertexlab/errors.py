"""Exceptions shared across the library."""


class GuardExceeded(Exception):
    """A combinatorial size guard was exceeded (raise instead of exploding)."""


class DegreeOverflow(ValueError):
    """A vertex degree exceeds the weight table's maximum degree."""
