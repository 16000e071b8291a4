class InputError(ValueError):
    """Malformed input or an unmet precondition of a check."""


class UndefinedConditional(InputError):
    """Conditioning on an event of probability zero."""
