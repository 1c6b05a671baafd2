"""Exception types shared across the package."""


class StencilError(ValueError):
    """Stencil spacing or placement makes the radial derivative ill-posed."""


class EvaluationError(ArithmeticError):
    """An integrand or field produced non-finite values."""


class DomainSizeError(ValueError):
    """Periodic box too small for the requested data support and time."""


class ConfigError(ValueError):
    """Invalid run configuration; ``keys`` lists the offending entries."""

    def __init__(self, message: str, keys: list[str] | None = None):
        super().__init__(message)
        self.keys = list(keys or [])

    def __str__(self) -> str:  # pragma: no cover - formatting only
        base = super().__str__()
        if self.keys:
            return f"{base} [keys: {', '.join(self.keys)}]"
        return base
