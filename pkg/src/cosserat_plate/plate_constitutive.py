"""Plate stress energy density and the compliance map E = K S + L(loads).

The ground truth is built by exact rational integration of the 3D stress
energy over the thickness ansatz.  Each 3D stress component is a linear form
in 24 generalized coordinates (the 20 resultants plus the loads p, sigma_0,
t, v) with polynomial coefficients in zeta.  The 3D energy splits into six
quadratic forms (symmetric, skew and trace parts of sigma and of mu); each
is integrated exactly into a rational Gram matrix and then weighted by the
matching inverse constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, SingularModuliError, ValidationError
from .material import CosseratModuli
from .profiles import PlateLoads
from .sets import STRESS_NAMES, StrainSet, StressSet

__all__ = [
    "LOAD_NAMES",
    "ComplianceMap",
    "build_compliance",
    "build_reduced_compliance",
    "energy_density",
    "quadrature_energy_density",
    "compliance_apply",
    "stiffness_apply",
    "gradient_check",
    "closed_form_coefficients",
    "closed_form_energy_density",
    "diagnostic_report",
    "load_vector",
]

LOAD_NAMES = ("p", "sigma_0", "t", "v")
_NVAR = 24
_IDX = {n: i for i, n in enumerate(STRESS_NAMES + LOAD_NAMES)}
_GRAM_KEYS = ("s_sym", "s_skew", "s_tr", "c_sym", "c_skew", "c_tr")


def _poly(*coeffs) -> list[Fraction]:
    return [Fraction(c) for c in coeffs] + [Fraction(0)] * (4 - len(coeffs))


def _forms(h: Fraction):
    """Linear forms of sigma[j][i] and mu[j][i] as {var index: zeta polynomial}."""
    sig = [[{} for _ in range(3)] for _ in range(3)]
    cou = [[{} for _ in range(3)] for _ in range(3)]
    for a in range(2):
        for b in range(2):
            sig[a][b][_IDX[f"N{a + 1}{b + 1}"]] = _poly(1 / h)
            sig[a][b][_IDX[f"M{a + 1}{b + 1}"]] = _poly(0, 6 / h ** 2)
            cou[a][b][_IDX[f"R{a + 1}{b + 1}"]] = _poly(Fraction(3, 2) / h, 0, Fraction(-3, 2) / h)
        sig[2][a][_IDX[f"Q{a + 1}"]] = _poly(Fraction(3, 2) / h, 0, Fraction(-3, 2) / h)
        sig[a][2][_IDX[f"Qs{a + 1}"]] = _poly(Fraction(3, 2) / h, 0, Fraction(-3, 2) / h)
        cou[a][2][_IDX[f"Ss{a + 1}"]] = _poly(0, 6 / h ** 2)
        cou[a][2][_IDX[f"Ms{a + 1}"]] = _poly(1 / h)
    sig[2][2][_IDX["p"]] = _poly(0, Fraction(3, 4), 0, Fraction(-1, 4))
    sig[2][2][_IDX["sigma_0"]] = _poly(1)
    cou[2][2][_IDX["v"]] = _poly(0, 1)
    cou[2][2][_IDX["t"]] = _poly(1)
    return sig, cou


def _combine(*terms):
    """Sum of scaled forms: terms are (scale, form)."""
    out: dict[int, list[Fraction]] = {}
    for scale, form in terms:
        for k, poly in form.items():
            acc = out.setdefault(k, [Fraction(0)] * 4)
            for d in range(4):
                acc[d] += scale * poly[d]
    return out


def _moment(k: int) -> Fraction:
    return Fraction(0) if k % 2 else Fraction(2, k + 1)


def _gram(forms) -> list[list[Fraction]]:
    """Matrix G with x^T G x = sum over forms of the integral of form(x)^2."""
    G = [[Fraction(0)] * _NVAR for _ in range(_NVAR)]
    for form in forms:
        items = list(form.items())
        for a, pa in items:
            for b, pb in items:
                s = Fraction(0)
                for i in range(4):
                    if pa[i]:
                        for j in range(4):
                            if pb[j]:
                                s += pa[i] * pb[j] * _moment(i + j)
                G[a][b] += s
    return G


def _split(t) -> tuple[list, list, list]:
    half = Fraction(1, 2)
    sym, skew = [], []
    for i in range(3):
        for j in range(3):
            sym.append(_combine((half, t[i][j]), (half, t[j][i])))
            skew.append(_combine((half, t[i][j]), (-half, t[j][i])))
    tr = [_combine(*[(Fraction(1), t[i][i]) for i in range(3)])]
    return sym, skew, tr


@lru_cache(maxsize=64)
def _grams(h: Fraction) -> dict[str, tuple[tuple[Fraction, ...], ...]]:
    sig, cou = _forms(h)
    out = {}
    for prefix, t in (("s", sig), ("c", cou)):
        sym, skew, tr = _split(t)
        for name, forms in (("sym", sym), ("skew", skew), ("tr", tr)):
            out[f"{prefix}_{name}"] = tuple(tuple(r) for r in _gram(forms))
    return out


def _frac(x: float) -> Fraction:
    return Fraction(float(x))


def _exact_primed(m: CosseratModuli) -> dict[str, Fraction | None]:
    """Inverse constants in exact arithmetic; None marks an infinite reciprocal."""
    lam, mu, muc, beta, gam, eps = (_frac(v) for v in m.as_tuple())
    if mu == 0:
        raise SingularModuliError("mu")
    if gam == 0:
        raise SingularModuliError("gamma")
    if 3 * lam + 2 * mu == 0:
        raise SingularModuliError("3*lambda+2*mu")
    if 3 * beta + 2 * gam == 0:
        raise SingularModuliError("3*beta+2*gamma")
    return {
        "s_sym": 1 / (4 * mu),
        "s_skew": None if muc == 0 else 1 / (4 * muc),
        "s_tr": -lam / (2 * mu * (3 * lam + 2 * mu)) / 2,
        "c_sym": 1 / (4 * gam),
        "c_skew": None if eps == 0 else 1 / (4 * eps),
        "c_tr": -beta / (2 * gam * (3 * beta + 2 * gam)) / 2,
    }


def _exact_hessian(m: CosseratModuli, h: float, basis: np.ndarray | None):
    """Exact 24x24 (or reduced) Hessian of the integrated energy."""
    hf = _frac(h)
    grams = _grams(hf)
    consts = _exact_primed(m)
    if basis is None:
        B = None
        ncol = _NVAR
    else:
        B = [[Fraction(int(v)) if float(v).is_integer() else _frac(v) for v in row] for row in basis]
        ncol = len(B[0])

    def project(G):
        if B is None:
            return G
        GB = [[sum(G[i][k] * B[k][j] for k in range(_NVAR) if B[k][j]) for j in range(ncol)]
              for i in range(_NVAR)]
        return [[sum(B[k][i] * GB[k][j] for k in range(_NVAR) if B[k][i]) for j in range(ncol)]
                for i in range(ncol)]

    H = [[Fraction(0)] * ncol for _ in range(ncol)]
    for key in _GRAM_KEYS:
        G = project(grams[key])
        c = consts[key]
        if c is None:
            if any(G[i][j] for i in range(ncol) for j in range(ncol)):
                name = "mu_c" if key.startswith("s") else "epsilon"
                raise SingularModuliError(
                    name, "the full plate model needs it; use a reduced model whose stresses have no skew part"
                )
            continue
        for i in range(ncol):
            for j in range(ncol):
                if G[i][j]:
                    H[i][j] += hf * c * G[i][j]
    return H


@dataclass(frozen=True)
class ComplianceMap:
    """Affine map E = K S + Lm @ (p, sigma_0, t) and the energy's pure-load part.

    ``K`` is ``n x n`` where ``n`` is 20 for the full model and the number of
    basis columns for a reduced model.  ``basis`` (20 x n) maps reduced
    coordinates to full stress sets; ``None`` for the full model.
    """

    K: np.ndarray
    Lm: np.ndarray
    P_load: np.ndarray
    h: float
    moduli: CosseratModuli
    basis: np.ndarray | None = None
    K_exact: tuple = field(default=(), repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.K.shape[0]

    def load_values(self, loads: PlateLoads) -> np.ndarray:
        """(p, sigma_0, t, v) stacked on the first axis."""
        vals = [np.asarray(getattr(loads, n), dtype=float) for n in LOAD_NAMES]
        shape = np.broadcast_shapes(*(v.shape for v in vals))
        return np.stack([np.broadcast_to(v, shape) for v in vals])

    def L(self, loads: PlateLoads) -> np.ndarray:
        lv = self.load_values(loads)
        return np.tensordot(self.Lm, lv[:3], axes=(1, 0))

    @property
    def invertible(self) -> bool:
        return bool(np.all(np.linalg.eigvalsh(self.K) > 0))

    @property
    def stiffness(self) -> np.ndarray:
        try:
            return self._stiffness
        except AttributeError:
            if not self.invertible:
                raise SingularModuliError(
                    "mu_c/epsilon", "compliance not invertible; use the symmetric-m or decoupled reduced model"
                ) from None
            Kinv = np.linalg.inv(self.K)
            Kinv = 0.5 * (Kinv + Kinv.T)
            object.__setattr__(self, "_stiffness", Kinv)
            return Kinv


def _check_h(h: float) -> float:
    h = float(h)
    if not (h > 0 and math.isfinite(h)):
        raise DomainError(f"thickness must be positive, got {h}")
    return h


def _to_map(H, m, h, basis) -> ComplianceMap:
    n = len(H) - 4
    Hf = np.array([[float(x) for x in row] for row in H])
    Hf = 0.5 * (Hf + Hf.T)
    return ComplianceMap(
        K=Hf[:n, :n].copy(),
        Lm=Hf[:n, n:n + 3].copy(),
        P_load=Hf[n:, n:].copy(),
        h=h,
        moduli=m,
        basis=basis,
        K_exact=tuple(tuple(r[:n]) for r in H[:n]),
    )


@lru_cache(maxsize=32)
def _build_cached(m: CosseratModuli, h: float) -> ComplianceMap:
    return _to_map(_exact_hessian(m, h, None), m, h, None)


def build_compliance(m: CosseratModuli, h: float) -> ComplianceMap:
    """Full 20x20 compliance from exact thickness integration."""
    h = _check_h(h)
    if m.mu_c == 0:
        raise SingularModuliError("mu_c", "use the decoupled reduced model")
    if m.epsilon == 0:
        raise SingularModuliError("epsilon")
    return _build_cached(m, h)


def build_reduced_compliance(m: CosseratModuli, h: float, basis) -> ComplianceMap:
    """Compliance restricted to stresses S = basis @ s_red.

    ``basis`` is 20 x k.  When mu_c (or epsilon) is zero the subspace must
    carry no skew stress (or couple stress); otherwise a singular-moduli
    error is raised.
    """
    h = _check_h(h)
    B = np.asarray(basis, dtype=float)
    if B.ndim != 2 or B.shape[0] != 20:
        raise ValidationError(f"basis must be 20 x k, got {B.shape}")
    return _reduced_cached(m, h, B.tobytes(), B.shape[1])


@lru_cache(maxsize=32)
def _reduced_cached(m: CosseratModuli, h: float, raw: bytes, k: int) -> ComplianceMap:
    B = np.frombuffer(raw, dtype=float).reshape(20, k).copy()
    full = np.zeros((_NVAR, k + 4))
    full[:20, :k] = B
    full[20:, k:] = np.eye(4)
    H = _exact_hessian(m, h, full)
    return _to_map(H, m, h, B)


def load_vector(cmap: ComplianceMap, loads: PlateLoads) -> np.ndarray:
    return cmap.L(loads)


def _svec(S, cmap: ComplianceMap) -> np.ndarray:
    arr = S.array if isinstance(S, StressSet) else np.asarray(S, dtype=float)
    if arr.shape[0] != cmap.size:
        raise ValidationError(f"stress vector needs {cmap.size} components, got {arr.shape[0]}")
    return arr


def energy_density(S, loads: PlateLoads, cmap: ComplianceMap):
    """Phi(S) = 1/2 S.K.S + S.L + 1/2 l.P.l with l = (p, sigma_0, t, v)."""
    s = _svec(S, cmap)
    lv = cmap.load_values(loads)
    quad = 0.5 * np.einsum("i...,ij,j...->...", s, cmap.K, s)
    lin = np.einsum("i...,ij,j...->...", s, cmap.Lm, lv[:3])
    pure = 0.5 * np.einsum("i...,ij,j...->...", lv, cmap.P_load, lv)
    out = quad + lin + pure
    return out if np.ndim(out) else float(out)


def quadrature_energy_density(S: StressSet, loads: PlateLoads, m: CosseratModuli, h: float) -> float:
    """Independent value of Phi(S): 5-point Gauss rule over the 3D complementary energy."""
    from .cosserat3d import energy_stress
    from .material import primed_constants
    from .profiles import couple_stress_at, stress_at
    from .resultants import GAUSS_NODES, GAUSS_WEIGHTS, densities_from_stress_set

    p = primed_constants(m)
    d = densities_from_stress_set(S, h)
    total = 0.0
    for z, w in zip(GAUSS_NODES, GAUSS_WEIGHTS):
        total = total + w * energy_stress(stress_at(d, loads, z), couple_stress_at(d, loads, z), p)
    return 0.5 * h * total


def compliance_apply(S, loads: PlateLoads, cmap: ComplianceMap):
    """E = K S + L(loads).  Returns a StrainSet for the full model, an array otherwise."""
    s = _svec(S, cmap)
    E = np.tensordot(cmap.K, s, axes=(1, 0)) + cmap.L(loads).reshape((cmap.size,) + (1,) * (s.ndim - 1))
    return StrainSet(E) if cmap.basis is None else E


def stiffness_apply(E, loads: PlateLoads, cmap: ComplianceMap):
    """S = K^-1 (E - L(loads))."""
    e = E.array if isinstance(E, StrainSet) else np.asarray(E, dtype=float)
    rhs = e - cmap.L(loads).reshape((cmap.size,) + (1,) * (e.ndim - 1))
    S = np.tensordot(cmap.stiffness, rhs, axes=(1, 0))
    return StressSet(S) if cmap.basis is None else S


def gradient_check(cmap: ComplianceMap, energy, S0, loads: PlateLoads, step: float | None = None) -> float:
    """Max relative deviation between central differences of ``energy`` and K S0 + L.

    ``energy(s_vector) -> float``.  The step defaults to 1e-4 times the scale
    of S0 (central differences are exact on quadratics).
    """
    s0 = np.array(_svec(S0, cmap), dtype=float)
    scale = max(1.0, float(np.max(np.abs(s0))))
    hstep = step if step is not None else 1e-4 * scale
    grad = cmap.K @ s0 + cmap.L(loads)
    fd = np.empty_like(s0)
    for i in range(s0.size):
        e = np.zeros_like(s0)
        e[i] = hstep
        fd[i] = (energy(s0 + e) - energy(s0 - e)) / (2 * hstep)
    denom = max(float(np.max(np.abs(grad))), 1e-300)
    return float(np.max(np.abs(fd - grad)) / denom)


# -- term-by-term closed forms, kept as a cross-check ----------------------------

def closed_form_coefficients(m: CosseratModuli, h: float) -> dict[str, tuple[float, tuple[str, str]]]:
    """Reference closed-form constitutive coefficients, keyed by term.

    Each value is ``(coefficient, (row, column))`` where ``row`` is a strain
    component and ``column`` a stress component or load name.
    """
    lam, mu, muc, beta, gam, eps = m.as_tuple()
    c1 = mu * (3 * lam + 2 * mu)
    c2 = gam * (3 * beta + 2 * gam)
    return {
        "e11/M11": (12 * (lam + mu) / (h ** 3 * c1), ("e11", "M11")),
        "e11/M22": (-6 * lam / (h ** 3 * c1), ("e11", "M22")),
        "e11/p": (-3 * lam / (5 * h * c1), ("e11", "p")),
        "e12/M12": (3 * (muc + mu) / (h ** 3 * muc * mu), ("e12", "M12")),
        "e12/M21": (3 * (muc - mu) / (h ** 3 * muc * mu), ("e12", "M21")),
        "om1/Q1": (3 * (muc + mu) / (10 * h * muc * mu), ("om1", "Q1")),
        "om1/Qs1": (3 * (muc - mu) / (10 * h * muc * mu), ("om1", "Qs1")),
        "tau0_11/R11": (6 * (beta + gam) / (5 * h * c2), ("tau0_11", "R11")),
        "tau0_11/R22": (-3 * beta / (5 * h * c2), ("tau0_11", "R22")),
        "tau0_11/t": (-beta / (2 * c2), ("tau0_11", "t")),
        "tau0_12/R12": (3 * (gam + eps) / (10 * h * gam * eps), ("tau0_12", "R12")),
        "tau0_12/R21": (3 * (eps - gam) / (10 * h * gam * eps), ("tau0_12", "R21")),
        "tau31/Ss1": (3 * (gam + eps) / (h ** 3 * gam * eps), ("tau31", "Ss1")),
        "ups11/N11": ((lam + mu) / (h * c1), ("ups11", "N11")),
        "ups11/N22": (-lam / (2 * h * c1), ("ups11", "N22")),
        "ups11/sigma_0": (-lam / (2 * c1), ("ups11", "sigma_0")),
        "ups12/N12": ((muc + mu) / (4 * h * muc * mu), ("ups12", "N12")),
        "ups12/N21": ((muc - mu) / (4 * h * muc * mu), ("ups12", "N21")),
        "tau0_31/Ms1": ((gam + eps) / (4 * h * gam * eps), ("tau0_31", "Ms1")),
    }


def closed_form_energy_density(S, loads: PlateLoads, m: CosseratModuli, h: float,
                               couple_bracket_sign: float = -1.0) -> float:
    """The reference closed form of Phi(S), evaluated term by term.

    ``couple_bracket_sign`` multiplies the bracket holding the M*, S* and
    off-diagonal R squares; the reference form uses -1.  The constitutive
    coefficients (and the exact construction) require +1.
    """
    s = StressSet(S.array if isinstance(S, StressSet) else S)
    lam, mu, muc, beta, gam, eps = m.as_tuple()
    p, s0, t, v = (float(getattr(loads, n)) for n in LOAD_NAMES)
    M, N, R = s.M, s.N, s.R
    Q, Qs, Ss, Ms = s.Q, s.Qs, s.Ss, s.Ms
    c1 = mu * (3 * lam + 2 * mu)
    c2 = gam * (3 * beta + 2 * gam)
    off = lambda A: A[0, 1] ** 2 + A[1, 0] ** 2  # noqa: E731
    diag2 = lambda A: A[0, 0] ** 2 + A[1, 1] ** 2  # noqa: E731
    phi = (lam + mu) / (2 * h * c1) * (diag2(N) + 12 / h ** 2 * diag2(M))
    phi -= lam / (2 * h * c1) * (N[0, 0] * N[1, 1] + 12 / h ** 2 * M[0, 0] * M[1, 1])
    phi += (muc + mu) / (8 * h * muc * mu) * (off(N) + 12 / h ** 2 * off(M) + 1.2 * (Q @ Q + Qs @ Qs))
    phi += 3 * (muc - mu) / (10 * h * muc * mu) * (Q @ Qs + 5 / 6 * N[0, 1] * N[1, 0] + 10 / h ** 2 * M[0, 1] * M[1, 0])
    phi -= 3 * lam / (5 * h * c1) * p * (M[0, 0] + M[1, 1])
    phi += 3 / (5 * h * c2) * ((beta + gam) * diag2(R) - beta * R[0, 0] * R[1, 1])
    phi += 3 / (10 * h) * (1 / gam - 1 / eps) * R[0, 1] * R[1, 0]
    phi += 17 * h * (lam + mu) / (280 * c1) * p ** 2
    phi -= lam / (2 * c1) * (N[0, 0] + N[1, 1]) * s0
    phi += h * (lam + mu) / (2 * c1) * s0 ** 2
    phi += couple_bracket_sign * (gam + eps) / (h * gam * eps) * (Ms @ Ms / 8 + 1.5 / h ** 2 * Ss @ Ss + 0.15 * off(R))
    phi -= beta / (2 * c2) * (R[0, 0] + R[1, 1]) * t
    phi += h * (beta + gam) / (2 * c2) * t ** 2
    phi += h * (beta + gam) / (6 * c2) * v ** 2
    return float(phi)


def _derived_entry(cmap: ComplianceMap, row: str, col: str) -> float:
    from .sets import STRAIN_NAMES

    i = STRAIN_NAMES.index(row)
    if col in STRESS_NAMES:
        return float(cmap.K[i, STRESS_NAMES.index(col)])
    return float(cmap.Lm[i, LOAD_NAMES.index(col)])


def diagnostic_report(m: CosseratModuli, h: float, rel_tol: float = 1e-12, samples: int = 20,
                      seed: int = 0) -> list[dict]:
    """Term-by-term comparison of reference and derived coefficients.

    Also compares the reference energy density with the derived one on random
    states and reports the energy's pure-load coefficients.
    """
    cmap = build_compliance(m, h)
    rows = []
    for term, (ref, (r, c)) in closed_form_coefficients(m, h).items():
        derived = _derived_entry(cmap, r, c)
        rows.append({
            "term": term,
            "closed_form": ref,
            "derived": derived,
            "match": math.isclose(ref, derived, rel_tol=rel_tol, abs_tol=1e-14 * max(1.0, abs(derived))),
        })
    lam, mu, _, beta, gam, _ = m.as_tuple()
    c1 = mu * (3 * lam + 2 * mu)
    c2 = gam * (3 * beta + 2 * gam)
    pure_ref = {
        "p^2": 17 * h * (lam + mu) / (280 * c1),
        "sigma_0^2": h * (lam + mu) / (2 * c1),
        "t^2": h * (beta + gam) / (2 * c2),
        "v^2": h * (beta + gam) / (6 * c2),
    }
    for k, (name, ref) in enumerate(pure_ref.items()):
        derived = 0.5 * float(cmap.P_load[k, k])
        rows.append({"term": name, "closed_form": ref, "derived": derived,
                     "match": math.isclose(ref, derived, rel_tol=rel_tol)})
    rng = np.random.default_rng(seed)
    states = [(StressSet(rng.standard_normal(20)), PlateLoads.from_pv(*rng.standard_normal(4)))
              for _ in range(samples)]
    for label, sign in (("Phi(S) reference form", -1.0), ("Phi(S) with + on the M*/S*/R12 bracket", 1.0)):
        worst = 0.0
        for S, loads in states:
            a = closed_form_energy_density(S, loads, m, h, couple_bracket_sign=sign)
            b = energy_density(S, loads, cmap)
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
        rows.append({"term": f"{label}: max rel. deviation on random states", "closed_form": worst,
                     "derived": 0.0, "match": worst <= 1e-12})
    return rows
