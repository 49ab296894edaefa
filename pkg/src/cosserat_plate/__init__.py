"""Cosserat (micropolar) elastic plates: constitutive core, plate resultants,
finite-difference bending and twisting solvers and verification tools."""

from __future__ import annotations

from .errors import (
    AdmissibilityError,
    CosseratPlateError,
    DomainError,
    SingularModuliError,
    SolverError,
    StencilError,
    ValidationError,
)
from .material import (
    Admissibility,
    AdmissibilityClass,
    CosseratModuli,
    PrimedModuli,
    classify_material,
    primed_constants,
)
from .plate_constitutive import ComplianceMap, build_compliance, build_reduced_compliance
from .plate_kinematics import FieldGrid, RigidMotionParams, rigid_motion_fields, strain_from_kinematics
from .profiles import PlateLoads, SectionDensities
from .sets import KinematicSet, StrainSet, StressSet
from .solver import EdgeBC, PlateProblem, PlateSolution, plate_residual, reconstruct_3d, solve, solve_reduced

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "CosseratPlateError",
    "DomainError",
    "SingularModuliError",
    "SolverError",
    "StencilError",
    "ValidationError",
    "Admissibility",
    "AdmissibilityClass",
    "CosseratModuli",
    "PrimedModuli",
    "classify_material",
    "primed_constants",
    "ComplianceMap",
    "build_compliance",
    "build_reduced_compliance",
    "FieldGrid",
    "RigidMotionParams",
    "rigid_motion_fields",
    "strain_from_kinematics",
    "PlateLoads",
    "SectionDensities",
    "KinematicSet",
    "StrainSet",
    "StressSet",
    "EdgeBC",
    "PlateProblem",
    "PlateSolution",
    "plate_residual",
    "reconstruct_3d",
    "solve",
    "solve_reduced",
]
