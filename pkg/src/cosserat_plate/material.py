"""Isotropic micropolar moduli, admissibility classes and inverse constants."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import SingularModuliError, ValidationError

__all__ = [
    "CosseratModuli",
    "PrimedModuli",
    "Admissibility",
    "AdmissibilityClass",
    "classify_material",
    "primed_constants",
    "beta_prime_diagnostic",
]


@dataclass(frozen=True)
class CosseratModuli:
    """The six elastic constants of an isotropic micropolar solid.

    ``lam``, ``mu`` and ``mu_c`` have stress units; ``beta``, ``gamma`` and
    ``epsilon`` have force units (couple-stress moduli).
    """

    lam: float
    mu: float
    mu_c: float
    beta: float
    gamma: float
    epsilon: float

    def __post_init__(self) -> None:
        for name in ("lam", "mu", "mu_c", "beta", "gamma", "epsilon"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"modulus {name} is not a number: {value!r}") from exc
            if not math.isfinite(value):
                raise ValidationError(f"modulus {name} is not finite: {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_tuple(cls, values) -> "CosseratModuli":
        """Build from ``(lambda, mu, mu_c, beta, gamma, epsilon)``."""
        values = tuple(values)
        if len(values) != 6:
            raise ValidationError(f"expected 6 moduli, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.lam, self.mu, self.mu_c, self.beta, self.gamma, self.epsilon)

    def replace(self, **changes) -> "CosseratModuli":
        data = dict(zip(("lam", "mu", "mu_c", "beta", "gamma", "epsilon"), self.as_tuple()))
        data.update(changes)
        return CosseratModuli(**data)

    @property
    def young(self) -> float:
        """Young's modulus of the classical (symmetric) part."""
        return self.mu * (3.0 * self.lam + 2.0 * self.mu) / (self.lam + self.mu)

    @property
    def poisson(self) -> float:
        return self.lam / (2.0 * (self.lam + self.mu))

    @property
    def flags(self) -> list[str]:
        """Warnings for degenerate-but-accepted values."""
        out = []
        if self.mu_c == 0.0:
            out.append("mu_c = 0: full plate model singular, use the decoupled reduced model")
        if self.epsilon == 0.0:
            out.append("epsilon = 0: couple-stress compliance singular")
        return out


@dataclass(frozen=True)
class PrimedModuli:
    """Constants of the inverse law.

    gamma = (mu_p + mu_c_p) sigma + (mu_p - mu_c_p) sigma^T + lambda_p tr(sigma) 1
    chi = (gamma_p + epsilon_p) m + (gamma_p - epsilon_p) m^T + beta_p tr(m) 1
    """

    mu_p: float
    mu_c_p: float
    gamma_p: float
    epsilon_p: float
    lambda_p: float
    beta_p: float


class Admissibility(str, enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    UNIQUENESS_ONLY = "UniquenessOnly"
    INVALID = "Invalid"


@dataclass(frozen=True)
class AdmissibilityClass:
    klass: Admissibility
    violated: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return self.klass.value


def _strict_checks(m: CosseratModuli) -> list[tuple[str, bool]]:
    return [
        ("μ>0", m.mu > 0),
        ("3λ+2μ>0", 3 * m.lam + 2 * m.mu > 0),
        ("γ>0", m.gamma > 0),
        ("3β+2γ>0", 3 * m.beta + 2 * m.gamma > 0),
        ("μc>0", m.mu_c > 0),
        ("μ+μc>0", m.mu + m.mu_c > 0),
        ("ε>0", m.epsilon > 0),
    ]


def classify_material(m: CosseratModuli) -> AdmissibilityClass:
    """Sort moduli into positive-definite, uniqueness-only or invalid.

    ``violated`` names every strict inequality of the positive-definite set
    that fails.
    """
    if not isinstance(m, CosseratModuli):
        raise ValidationError("classify_material expects CosseratModuli")
    failed = [name for name, ok in _strict_checks(m) if not ok]
    if not failed:
        return AdmissibilityClass(Admissibility.POSITIVE_DEFINITE, [])
    weak = [
        ("μ>0", m.mu > 0),
        ("3λ+2μ>0", 3 * m.lam + 2 * m.mu > 0),
        ("γ>0", m.gamma > 0),
        ("3β+2γ>0", 3 * m.beta + 2 * m.gamma > 0),
        ("μc≥0", m.mu_c >= 0),
        ("ε≥0", m.epsilon >= 0),
    ]
    if all(ok for _, ok in weak):
        return AdmissibilityClass(Admissibility.UNIQUENESS_ONLY, failed)
    return AdmissibilityClass(Admissibility.INVALID, failed)


def _require_nonzero(value: float, name: str) -> None:
    if value == 0.0:
        raise SingularModuliError(name)


def primed_constants(m: CosseratModuli) -> PrimedModuli:
    """Constants of the inverse constitutive law.

    lambda_p and beta_p come from inverting the trace part of the forward law:
    tr(sigma) = (2 mu + 3 lambda) tr(gamma), so 2 mu_p + 3 lambda_p must equal
    1 / (2 mu + 3 lambda). The same holds for the couple-stress pair.
    """
    _require_nonzero(m.mu, "mu")
    _require_nonzero(m.mu_c, "mu_c")
    _require_nonzero(m.gamma, "gamma")
    _require_nonzero(m.epsilon, "epsilon")
    _require_nonzero(3 * m.lam + 2 * m.mu, "3*lambda+2*mu")
    _require_nonzero(3 * m.beta + 2 * m.gamma, "3*beta+2*gamma")
    mu_p = 1.0 / (4.0 * m.mu)
    gamma_p = 1.0 / (4.0 * m.gamma)
    # closed forms of (1/(2a+3b) - 2a') / 3, written to avoid cancellation
    lambda_p = -m.lam / (2.0 * m.mu * (3.0 * m.lam + 2.0 * m.mu))
    beta_p = -m.beta / (2.0 * m.gamma * (3.0 * m.beta + 2.0 * m.gamma))
    return PrimedModuli(
        mu_p=mu_p,
        mu_c_p=1.0 / (4.0 * m.mu_c),
        gamma_p=gamma_p,
        epsilon_p=1.0 / (4.0 * m.epsilon),
        lambda_p=lambda_p,
        beta_p=beta_p,
    )


def beta_prime_diagnostic(m: CosseratModuli) -> dict[str, float | bool]:
    """Compare beta_p with the variant whose denominator carries mu instead of gamma.

    The two agree only when mu == gamma; the inverse law needs the gamma form.
    """
    derived = primed_constants(m).beta_p
    alternative = -m.beta / (6.0 * m.mu * (m.beta + 2.0 * m.gamma / 3.0))
    return {
        "beta_p_derived": derived,
        "beta_p_mu_denominator": alternative,
        "match": math.isclose(derived, alternative, rel_tol=1e-12, abs_tol=1e-300),
    }
