class MetaWardError(Exception):
    """Base exception for metawardpy errors."""
    pass


class RingMismatchError(MetaWardError, TypeError):
    """Raised when two operands live over different variable rings."""

    def __init__(self, left, right) -> None:
        super().__init__(f"Ring mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class NonDifferentiableError(MetaWardError, ValueError):
    """Raised when differentiating with respect to a parameter."""

    def __init__(self, name: str) -> None:
        super().__init__(f"'{name}' is not a differentiable variable")
        self.name = name


class PoleAtContractionError(MetaWardError, ZeroDivisionError):
    """Raised when zero is substituted into a negative power.

    Signals a generator that is not regular at mu=0.
    """

    def __init__(self, name: str, exponent: int) -> None:
        super().__init__(f"Pole at {name}=0 (exponent {exponent})")
        self.name = name
        self.exponent = exponent


class MissingAssignmentError(MetaWardError, KeyError):
    """Raised when a numeric evaluation lacks a value for a variable."""

    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"No value assigned to '{self.name}'"


class UnsupportedIndexError(MetaWardError, ValueError):
    """Raised for generator indices below -1."""

    def __init__(self, index: int) -> None:
        super().__init__(
            f"Generator index {index} < -1 needs Laurent coefficients in t")
        self.index = index


class UnsupportedGeneratorError(MetaWardError, ValueError):
    """Raised for a family/kind combination that has no generator."""

    def __init__(self, family, kind) -> None:
        super().__init__(f"No generator of kind {kind} in family {family}")
        self.family = family
        self.kind = kind


class AlreadyLiftedError(MetaWardError):
    """Raised when lifting an operator that already acts on two bodies."""
    pass


class DomainError(MetaWardError, ValueError):
    """Raised when an input violates a domain constraint.

    ``constraint`` holds the violated condition in readable form, e.g.
    ``"1 + mu*r/t > 0"``.
    """

    def __init__(self, constraint: str, detail: str = "") -> None:
        message = f"Domain violation: {constraint}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.constraint = constraint
        self.detail = detail


class NonDifferentiablePointError(DomainError):
    """Raised when a gradient is requested on a non-smooth locus."""
    pass


class UnsupportedFamilyError(MetaWardError, ValueError):
    """Raised when a check does not apply to a correlator family."""

    def __init__(self, family, check: str) -> None:
        super().__init__(f"{check} is not defined for family {family}")
        self.family = family
        self.check = check


class EmptyGridError(MetaWardError, ValueError):
    """Raised when no sample point survives domain filtering."""

    def __init__(self, domain: str) -> None:
        super().__init__(f"No grid point inside {domain}")
        self.domain = domain


class DivergenceError(MetaWardError, ArithmeticError):
    """Raised when a requested integral does not converge."""

    def __init__(self, nu_sum: float) -> None:
        super().__init__(
            f"Integral diverges for nu_sum={nu_sum} (requires nu_sum > 1/2)")
        self.nu_sum = nu_sum


class QuadratureError(MetaWardError, ArithmeticError):
    """Raised when adaptive quadrature misses its target.

    ``result`` is the last QuadratureResult, estimate included.
    """

    def __init__(self, result) -> None:
        super().__init__(
            f"Quadrature did not converge: value={result.value} "
            f"error estimate={result.abs_error_estimate}")
        self.result = result


class ExprSyntaxError(MetaWardError, SyntaxError):
    """Raised on malformed operator expressions. Carries line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class UnknownSymbolError(ExprSyntaxError):
    """Raised when an expression names a symbol outside every ring."""

    def __init__(self, symbol: str, line: int, column: int) -> None:
        super().__init__(f"Unknown symbol '{symbol}'", line, column)
        self.symbol = symbol
