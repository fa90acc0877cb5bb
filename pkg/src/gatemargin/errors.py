"""Shared exception types.

Invalid values raise plain ``ValueError`` with a diagnostic message;
``CapacityError`` marks inputs that are well-formed but exceed a hard
size budget (dense simulation width, census width, LP width).
"""


class CapacityError(Exception):
    """Input exceeds a documented size limit of the requested operation."""
