"""Continuous-time quantum walks on hexagonal and honeycomb lattice schemes."""

from __future__ import annotations

__version__ = "0.1.0"

from .abelian import GroupSpec, OrbitPartition, orbit_partition, symmetrize, weyl_orbit
from .polynomials import Polynomial, PolynomialTable, build_polynomials, orthogonality_check, realify
from .scheme import (
    SchemeAlgebra,
    SchemeError,
    build_honeycomb,
    build_scheme,
    quantum_decompose,
    stratify,
)
from .spectral import (
    AmplitudeSeries,
    SpectralGrid,
    amplitudes_exact,
    amplitudes_infinite,
    amplitudes_oracle,
    spectral_grid,
)

__all__ = [
    "AmplitudeSeries",
    "GroupSpec",
    "OrbitPartition",
    "Polynomial",
    "PolynomialTable",
    "SchemeAlgebra",
    "SchemeError",
    "SpectralGrid",
    "amplitudes_exact",
    "amplitudes_infinite",
    "amplitudes_oracle",
    "build_honeycomb",
    "build_polynomials",
    "build_scheme",
    "orbit_partition",
    "orthogonality_check",
    "quantum_decompose",
    "realify",
    "spectral_grid",
    "stratify",
    "symmetrize",
    "weyl_orbit",
]
