"""Exception hierarchy shared across the package."""


class ZetaError(Exception):
    """Base class for all errors raised by weighted_zeta."""


class GraphFormatError(ZetaError, ValueError):
    """Malformed graph or family document (bad JSON or schema violation)."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InvalidGraphError(ZetaError, ValueError):
    """A graph failed validation where a valid graph is required."""


class CensusLimitError(ZetaError, RuntimeError):
    """Cycle enumeration exceeded the configured class cap."""


class DegenerateRadiusError(ZetaError, ValueError):
    """The spectral radius (or every cycle count) vanishes."""


class HypothesisError(ZetaError, ValueError):
    """The input does not meet a precondition such as irreducibility or r > 1."""


class NumericalError(ZetaError, ArithmeticError):
    """An eigen-solver or verification step did not converge or agree."""


class LatticeMembershipError(ZetaError, ValueError):
    """A translation index does not lie in the sublattice."""


class NonCommutingError(ZetaError, ValueError):
    """Two generators of a translation family do not commute."""

    def __init__(self, pair, deviation):
        i, j = pair
        super().__init__(
            f"generators {i} and {j} do not commute (max |[G_{i}, G_{j}]| = {deviation:.3g})"
        )
        self.pair = pair
        self.deviation = deviation


class SingularPointError(ZetaError, ValueError):
    """The evaluation point lies on the singular set of a zeta function."""

    def __init__(self, offending, message=None):
        self.offending = list(offending)
        if message is None:
            desc = ", ".join(f"(j={j}, z={z})" for j, z in self.offending)
            message = f"u is singular for {desc}"
        super().__init__(message)
