"""Fixed-layout containers for the plate stress, strain and kinematic sets.

Each container wraps one array whose first axis enumerates components in a
fixed order; any trailing axes are grid axes (``(ny, nx)`` on a grid).
"""

from __future__ import annotations

from typing import ClassVar

import numpy as np

from .errors import ValidationError

__all__ = [
    "STRESS_NAMES",
    "STRAIN_NAMES",
    "KINEMATIC_NAMES",
    "StressSet",
    "StrainSet",
    "KinematicSet",
    "BENDING_STRESS",
    "TWISTING_STRESS",
    "BENDING_KIN",
    "TWISTING_KIN",
]

STRESS_NAMES = (
    "M11", "M12", "M21", "M22",
    "Q1", "Q2",
    "Qs1", "Qs2",
    "R11", "R12", "R21", "R22",
    "Ss1", "Ss2",
    "N11", "N12", "N21", "N22",
    "Ms1", "Ms2",
)
# strain components in the same (work-conjugate) order
STRAIN_NAMES = (
    "e11", "e12", "e21", "e22",
    "om1", "om2",
    "oms1", "oms2",
    "tau0_11", "tau0_12", "tau0_21", "tau0_22",
    "tau31", "tau32",
    "ups11", "ups12", "ups21", "ups22",
    "tau0_31", "tau0_32",
)
KINEMATIC_NAMES = ("Psi1", "Psi2", "W", "Om01", "Om02", "Om3", "U1", "U2", "Om03")

BENDING_STRESS = slice(0, 14)
TWISTING_STRESS = slice(14, 20)
BENDING_KIN = slice(0, 6)
TWISTING_KIN = slice(6, 9)


class _ComponentSet:
    names: ClassVar[tuple[str, ...]] = ()

    def __init__(self, array):
        arr = np.array(array, dtype=float)
        if arr.ndim == 0 or arr.shape[0] != len(self.names):
            raise ValidationError(
                f"{type(self).__name__} needs {len(self.names)} leading components, got shape {arr.shape}"
            )
        self.array = arr

    @classmethod
    def zeros(cls, grid_shape: tuple[int, ...] = ()):
        return cls(np.zeros((len(cls.names),) + tuple(grid_shape)))

    @classmethod
    def from_dict(cls, values: dict, grid_shape: tuple[int, ...] = ()):
        unknown = set(values) - set(cls.names)
        if unknown:
            raise ValidationError(f"unknown components for {cls.__name__}: {sorted(unknown)}")
        out = cls.zeros(grid_shape)
        for k, v in values.items():
            out.array[cls.names.index(k)] = v
        return out

    def __getitem__(self, name: str) -> np.ndarray:
        return self.array[self.names.index(name)]

    def as_dict(self) -> dict[str, np.ndarray]:
        return {n: self.array[i] for i, n in enumerate(self.names)}

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return self.array.shape[1:]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(shape={self.array.shape})"


def _mat(a: np.ndarray, start: int) -> np.ndarray:
    return a[start:start + 4].reshape((2, 2) + a.shape[1:])


class StressSet(_ComponentSet):
    """Resultants M, Q, Q*, R, S*, N, M* (20 components)."""

    names = STRESS_NAMES

    @classmethod
    def from_parts(cls, M=None, Q=None, Qs=None, R=None, Ss=None, N=None, Ms=None):
        parts = {"M": (M, (2, 2)), "Q": (Q, (2,)), "Qs": (Qs, (2,)), "R": (R, (2, 2)),
                 "Ss": (Ss, (2,)), "N": (N, (2, 2)), "Ms": (Ms, (2,))}
        grid: tuple[int, ...] | None = None
        for val, shp in parts.values():
            if val is not None:
                grid = np.shape(val)[len(shp):]
                break
        grid = grid or ()
        chunks = []
        for val, shp in parts.values():
            n = int(np.prod(shp))
            chunks.append(np.zeros((n,) + grid) if val is None
                          else np.broadcast_to(np.asarray(val, float), shp + grid).reshape((n,) + grid))
        return cls(np.concatenate(chunks, axis=0))

    M = property(lambda self: _mat(self.array, 0))
    Q = property(lambda self: self.array[4:6])
    Qs = property(lambda self: self.array[6:8])
    R = property(lambda self: _mat(self.array, 8))
    Ss = property(lambda self: self.array[12:14])
    N = property(lambda self: _mat(self.array, 14))
    Ms = property(lambda self: self.array[18:20])


class StrainSet(_ComponentSet):
    """Weighted strains e, omega, omega*, tau0, tau3, upsilon, tau0_3 (20 components)."""

    names = STRAIN_NAMES

    e = property(lambda self: _mat(self.array, 0))
    omega = property(lambda self: self.array[4:6])
    omega_star = property(lambda self: self.array[6:8])
    tau0 = property(lambda self: _mat(self.array, 8))
    tau3 = property(lambda self: self.array[12:14])
    upsilon = property(lambda self: _mat(self.array, 14))
    tau0_3 = property(lambda self: self.array[18:20])


class KinematicSet(_ComponentSet):
    """Psi, W, Omega0_alpha, Omega_3, U, Omega0_3 (9 components)."""

    names = KINEMATIC_NAMES

    Psi = property(lambda self: self.array[0:2])
    W = property(lambda self: self.array[2])
    Om0 = property(lambda self: self.array[3:5])
    Om3 = property(lambda self: self.array[5])
    U = property(lambda self: self.array[6:8])
    Om03 = property(lambda self: self.array[8])
