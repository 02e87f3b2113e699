"""Exception hierarchy shared by all modules."""


class HWEntError(Exception):
    """Base class for errors raised by hwent."""


class InputError(HWEntError, ValueError):
    """Malformed or out-of-range input (bad index, invalid state, bad subset)."""


class CriterionInapplicable(HWEntError):
    """A criterion's dimension precondition does not hold for the given state.

    This is distinct from a negative detection result: the bound is simply
    not established for these dimensions.
    """


class NumericalError(HWEntError, ArithmeticError):
    """A numerical routine produced a result outside its accuracy contract."""
