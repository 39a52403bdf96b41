"""Exception hierarchy.

Everything raised deliberately by the library derives from
:class:`QHeatNetError`; the CLI maps subclasses onto exit codes.
"""


class QHeatNetError(Exception):
    """Base class for library errors."""


class ParameterDomainError(QHeatNetError, ValueError):
    """A parameter lies outside its physical domain."""


class NumericalError(QHeatNetError):
    """Base for failures of a numerical evaluation (CLI exit code 3)."""


class SingularElementError(NumericalError):
    """An element matrix or impedance diverges at the requested point."""


class SingularInductanceError(SingularElementError):
    """Josephson inductance diverges (zero asymmetry at half flux)."""


class NumericalSingularityError(NumericalError):
    """A conversion denominator vanished.

    ``frequency`` holds the offending frequency in hertz when known.
    """

    def __init__(self, message, frequency=None):
        super().__init__(message)
        self.frequency = frequency


class QuadratureError(NumericalError):
    """Adaptive integration ran out of budget before converging.

    ``partial`` is the :class:`~qheatnet.thermal.HeatResult` reached so far.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DescriptorError(QHeatNetError, ValueError):
    """A device descriptor was used inconsistently (e.g. wrong flux arity)."""


class TouchstoneError(QHeatNetError, ValueError):
    """Malformed or unsupported Touchstone content."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ReferenceImpedanceError(QHeatNetError, ValueError):
    """Requested port resistance differs from a table's reference impedance."""


class ConfigError(QHeatNetError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""


class ExportError(QHeatNetError, OSError):
    """Writing or reading a results file failed; message carries the path."""
