"""Exception types shared across the package."""


class ShapeError(ValueError):
    """An argument has the wrong length, shape, or index range."""


class FieldMismatchError(ValueError):
    """Two operands belong to different prime fields."""


class ZeroCodeError(ValueError):
    """A construction would produce a code of dimension zero."""


class CapacityError(RuntimeError):
    """An exact brute-force computation would exceed the enumeration caps.

    Raised instead of silently degrading to an estimate; callers that can
    live with a bound must opt in explicitly.
    """
