class CapExceeded(RuntimeError):
    """A computation would exceed a configured size cap.

    Raised instead of returning a truncated or approximate answer.
    """
