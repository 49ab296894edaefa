"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CosseratPlateError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(CosseratPlateError, ValueError):
    """Malformed input: non-finite numbers, bad shapes, unknown config keys."""


class SingularModuliError(CosseratPlateError, ValueError):
    """A constant needed for an inverse or reciprocal vanishes."""

    def __init__(self, constant: str, detail: str = ""):
        self.constant = constant
        msg = f"singular moduli: {constant} must be nonzero"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DomainError(CosseratPlateError, ValueError):
    """Argument outside its mathematical domain (e.g. |zeta| > 1, h <= 0)."""


class StencilError(CosseratPlateError, ValueError):
    """Grid too small, or point too close to the boundary, for a stencil."""


class AdmissibilityError(CosseratPlateError, ValueError):
    """State whose strains are not generated by its displacement fields."""


class SolverError(CosseratPlateError, RuntimeError):
    """Linear solve failed; carries a diagnosis and optional residual history."""

    def __init__(self, message: str, history: list[float] | None = None):
        self.history = list(history or [])
        super().__init__(message)
