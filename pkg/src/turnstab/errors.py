"""Exception types shared across the package."""


class TurnstabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TurnstabError):
    """An input parameter is outside its physical/mathematical domain."""


class NoSignChange(TurnstabError):
    """A bracket does not enclose a sign change."""


class MaxIterations(TurnstabError):
    """An iterative solver exhausted its iteration budget."""


class Diverged(TurnstabError):
    """An open iteration left its guard interval or blew up."""


class PoleAt(TurnstabError):
    """A parameterization was evaluated at (or too close to) a pole."""

    def __init__(self, beta: float, detail: str = ""):
        self.beta = beta
        msg = f"pole of the boundary parameterization at beta={beta!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnsupportedParameters(TurnstabError):
    """Parameter combination excluded by the theory (e.g. xi = 2q)."""


class DegenerateTangency(TurnstabError):
    """Two isolated zeros coincide beyond resolution (threshold case)."""


class ContourTooClose(TurnstabError):
    """A characteristic root lies on or too near the counting contour."""


class TransformViolated(TurnstabError):
    """A positivity precondition of the time-domain transform failed."""

    def __init__(self, eta: float, condition: str):
        self.eta = eta
        self.condition = condition
        super().__init__(f"transform precondition '{condition}' violated at eta={eta!r}")


class NegativeChipThickness(TurnstabError):
    """Chip thickness went non-positive; the force law h^q is undefined."""

    def __init__(self, eta: float, value: float):
        self.eta = eta
        self.value = value
        super().__init__(f"chip thickness {value!r} <= 0 at eta={eta!r}")
