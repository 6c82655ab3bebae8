"""Exception hierarchy shared by every module."""


class SwccaError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SwccaError, ValueError):
    """Invalid parameters: penalty specs, solver settings, radii."""


class InvalidK(ConfigError):
    def __init__(self, k, length):
        super().__init__(f"k={k} out of range for vector of length {length}")
        self.k = k
        self.length = length


class InfeasibleRadius(ConfigError):
    def __init__(self, radius, upper):
        super().__init__(
            f"L1 radius {radius} outside the feasible range [1, {upper}]"
        )
        self.radius = radius
        self.upper = upper


class DataError(SwccaError, ValueError):
    """Problems with the input matrices themselves."""


class DimensionMismatch(DataError):
    pass


class ConstantColumn(DataError):
    def __init__(self, index):
        super().__init__(f"column {index} has zero variance")
        self.index = index


class DataFormatError(DataError):
    def __init__(self, message, path=None, line=None, column=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        if column is not None:
            where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line
        self.column = column


class SolverError(SwccaError, ArithmeticError):
    """A fit degenerated numerically."""


class ZeroProjection(SolverError):
    """A projection step had nothing to keep: the retained entries are all zero.

    ``vector`` names the block being updated ('u', 'v', 'w', 'u2', ...) and
    ``iteration`` is the 1-based sweep index, when known.
    """

    def __init__(self, message="projection of an all-zero vector", vector=None,
                 iteration=None):
        self.vector = vector
        self.iteration = iteration
        self.base_message = message
        super().__init__(self._format())

    def _format(self):
        parts = [self.base_message]
        if self.vector is not None:
            parts.append(f"vector={self.vector}")
        if self.iteration is not None:
            parts.append(f"iteration={self.iteration}")
        return " ".join(parts[:1]) + (
            " (" + ", ".join(parts[1:]) + ")" if len(parts) > 1 else ""
        )

    def located(self, vector=None, iteration=None):
        """Return a copy annotated with where the degeneracy happened."""
        return ZeroProjection(
            self.base_message,
            vector=self.vector if vector is None else vector,
            iteration=self.iteration if iteration is None else iteration,
        )


class NonFiniteValue(SolverError):
    pass


class DegenerateVariance(SolverError):
    pass
