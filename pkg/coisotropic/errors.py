"""Exception hierarchy shared by the library and the command line."""


class CoisotropicError(Exception):
    """Root of every error raised by this package."""


class ConfigError(CoisotropicError, ValueError):
    """An environment variable holds a value that cannot be used."""


class SchemaError(CoisotropicError):
    """A document does not match the ingredient or orbit-space schema."""

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        super().__init__(message)
        self.field = field
        self.line = line

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.field:
            where.append(f"field '{self.field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        return f"{prefix}{self.args[0]}"


class PreconditionError(CoisotropicError):
    """A mathematical precondition of an operation does not hold."""


class NotSaturated(PreconditionError):
    pass


class NotComplementary(PreconditionError):
    pass


class ShapeMismatch(PreconditionError, ValueError):
    pass


class Unbounded(PreconditionError):
    pass


class EmptyPolyhedron(PreconditionError):
    """The constraints admit no point."""


class NotFullDimensional(PreconditionError):
    pass


class IrrationalKernel(PreconditionError):
    """sigma_t is not antisymmetric, so its kernel gives no usable frame."""


class NotContained(PreconditionError):
    """The Hamiltonian torus is not contained in the kernel of sigma_t."""


class FrameMismatch(PreconditionError):
    pass


class Condition5aViolated(PreconditionError):
    pass


class OracleMissing(PreconditionError):
    pass


class SingularChart(PreconditionError):
    pass


class SplittingAbsent(PreconditionError):
    pass


class PeriodsNotInLineality(PreconditionError):
    pass
