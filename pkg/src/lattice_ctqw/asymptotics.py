"""Stationary-phase asymptotics on the 2-torus and the finite-vs-infinite diagnostic."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .spectral import amplitudes_infinite, origin_amplitude_finite

KINDS = ("hexagonal", "honeycomb-plus", "honeycomb-minus")
TWO_PI = 2 * np.pi


def _hex_parts(x: np.ndarray):
    x1, x2 = x[0], x[1]
    s = x1 + x2
    f = 2 * (np.cos(x1) + np.cos(x2) + np.cos(s))
    g = np.stack([-2 * np.sin(x1) - 2 * np.sin(s), -2 * np.sin(x2) - 2 * np.sin(s)])
    cs = -2 * np.cos(s)
    h = np.stack(
        [np.stack([-2 * np.cos(x1) + cs, cs]), np.stack([cs, -2 * np.cos(x2) + cs])]
    )
    return f, g, h


@dataclass(frozen=True)
class PhaseFunction:
    """Dispersion on the 2-torus; arrays of points have shape (2, ...)."""

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown phase function {self.kind!r}")

    @property
    def sign(self) -> int:
        return -1 if self.kind == "honeycomb-minus" else 1

    def radicand(self, x) -> np.ndarray:
        """|b(x)|^2 for the honeycomb; zero exactly at the Dirac points."""
        f, _, _ = _hex_parts(np.asarray(x, float))
        return 3.0 + f

    def value(self, x) -> np.ndarray:
        f, _, _ = _hex_parts(np.asarray(x, float))
        if self.kind == "hexagonal":
            return f
        return self.sign * np.sqrt(np.maximum(3.0 + f, 0.0))

    def gradient(self, x) -> np.ndarray:
        f, g, _ = _hex_parts(np.asarray(x, float))
        if self.kind == "hexagonal":
            return g
        r = np.sqrt(np.maximum(3.0 + f, 0.0))
        return self.sign * g / (2 * r)

    def hessian(self, x) -> np.ndarray:
        f, g, h = _hex_parts(np.asarray(x, float))
        if self.kind == "hexagonal":
            return h
        r = np.sqrt(np.maximum(3.0 + f, 0.0))
        outer = g[:, None] * g[None, :]
        return self.sign * (h / (2 * r) - outer / (4 * r**3))


@dataclass(frozen=True)
class StationaryPoint:
    location: tuple[float, float]
    f_value: float
    hessian_det: float
    signature: int
    note: str = ""


@dataclass
class StationaryReport:
    kind: str
    points: list[StationaryPoint]
    degenerate: list[StationaryPoint] = field(default_factory=list)
    nonsmooth: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "points": [asdict(p) for p in self.points],
            "degenerate": [asdict(p) for p in self.degenerate],
            "nonsmooth": [list(p) for p in self.nonsmooth],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _wrap(x: np.ndarray) -> np.ndarray:
    return np.mod(x, TWO_PI)


def _torus_dist(a, b) -> float:
    d = np.abs(_wrap(np.asarray(a) - np.asarray(b)))
    return float(np.linalg.norm(np.minimum(d, TWO_PI - d)))


def _local_minima(v: np.ndarray) -> np.ndarray:
    mask = np.ones_like(v, dtype=bool)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx or dy:
                mask &= v <= np.roll(np.roll(v, dx, axis=0), dy, axis=1)
    return np.argwhere(mask)


def _newton(grad, hess, x0, iters: int = 60, tol: float = 1e-13):
    x = np.array(x0, dtype=float)
    for _ in range(iters):
        gval = grad(x)
        if np.linalg.norm(gval) < tol:
            break
        H = hess(x)
        try:
            step = np.linalg.solve(H, gval)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        x = x - step
    return _wrap(x)


def _snap(x: np.ndarray) -> np.ndarray:
    """Round coordinates that sit within 1e-12 of a multiple of 2*pi to 0."""
    x = _wrap(x)
    x[(np.abs(x - TWO_PI) < 1e-12) | (np.abs(x) < 1e-12)] = 0.0
    return x


def find_stationary_points(f: PhaseFunction, grid: int = 96) -> StationaryReport:
    u = TWO_PI * np.arange(grid) / grid
    X = np.stack(np.meshgrid(u, u, indexing="ij"))
    report = StationaryReport(f.kind, [])

    if f.kind != "hexagonal":
        # conical points, where |b| vanishes, are located on the radicand
        rad = PhaseFunction("hexagonal")
        for i, j in _local_minima(f.radicand(X)):
            x = _newton(rad.gradient, rad.hessian, X[:, i, j])
            if x is None or f.radicand(x) > 1e-10:
                continue
            x = _snap(x)
            if all(_torus_dist(x, p) > 1e-6 for p in report.nonsmooth):
                report.nonsmooth.append((float(x[0]), float(x[1])))

    with np.errstate(divide="ignore", invalid="ignore"):
        gn = (f.gradient(X) ** 2).sum(axis=0)
    gn = np.where(np.isfinite(gn), gn, np.inf)
    found: list[np.ndarray] = []
    for i, j in _local_minima(gn):
        x = _newton(f.gradient, f.hessian, X[:, i, j])
        if x is None:
            continue
        x = _snap(x)
        if f.kind != "hexagonal" and f.radicand(x) < 1e-8:
            continue
        if np.linalg.norm(f.gradient(x)) > 1e-10:
            continue
        if any(_torus_dist(x, p) < 1e-6 for p in found):
            continue
        found.append(x)
        H = f.hessian(x)
        det = float(np.linalg.det(H))
        ev = np.linalg.eigvalsh(H)
        sig = int((ev > 0).sum() - (ev < 0).sum())
        pt = StationaryPoint((float(x[0]), float(x[1])), float(f.value(x)), det, sig)
        if abs(det) < 1e-8:
            report.degenerate.append(StationaryPoint(pt.location, pt.f_value, det, sig, "degenerate"))
        else:
            report.points.append(pt)
    report.points.sort(key=lambda p: (-p.f_value, p.location))
    report.nonsmooth.sort()
    return report


def stationary_phase(f: PhaseFunction, t: float, g=None, report: StationaryReport | None = None) -> complex:
    """Leading-order value of (2 pi)^-2 * integral of g(x) exp(-i t f(x)) over the torus."""
    if t <= 0:
        raise ValueError("stationary phase needs t > 0")
    report = report or find_stationary_points(f)
    total = 0j
    for p in report.points:
        a = np.asarray(p.location)
        amp = 1.0 if g is None else complex(g(a))
        total += (
            amp
            * np.exp(-1j * t * p.f_value)
            * (TWO_PI / t)
            / math.sqrt(abs(p.hessian_det))
            * np.exp(-1j * np.pi * p.signature / 4)
        )
    return complex(total / TWO_PI**2)


_REPORTS: dict[str, StationaryReport] = {}


def cached_report(kind: str) -> StationaryReport:
    if kind not in _REPORTS:
        _REPORTS[kind] = find_stationary_points(PhaseFunction(kind))
    return _REPORTS[kind]


def asymptotic_origin(kind: str, t: float) -> complex:
    """Stationary-phase origin amplitude; the honeycomb averages both branches."""
    if kind == "hexagonal":
        return stationary_phase(PhaseFunction("hexagonal"), t, report=cached_report("hexagonal"))
    plus = stationary_phase(PhaseFunction("honeycomb-plus"), t, report=cached_report("honeycomb-plus"))
    minus = stationary_phase(
        PhaseFunction("honeycomb-minus"), t, report=cached_report("honeycomb-minus")
    )
    return 0.5 * (plus + minus)


def quadrature_origin(kind: str, t: float, points: int | None = None) -> complex:
    return complex(amplitudes_infinite(kind, times=[t], points=points).unnormalized[0, 0])


@dataclass(frozen=True)
class ConvergenceRecord:
    m: int
    t: float
    pi: float
    pi_stationary: float


def convergence_table(kind: str, ms, t: float, points: int | None = None) -> list[ConvergenceRecord]:
    """pi(m, t) = |I_0(t) - finite amplitude at the origin| for each m.

    I_0 is the torus quadrature value; the distance to the stationary-phase
    value is reported alongside (nan at t = 0, where it is undefined).
    """
    ref = quadrature_origin(kind, t, points)
    asym = asymptotic_origin(kind, t) if t > 0 else complex("nan")
    out = []
    for m in ms:
        fin = complex(origin_amplitude_finite(kind, int(m), [t])[0])
        out.append(ConvergenceRecord(int(m), float(t), abs(ref - fin), abs(asym - fin)))
    return out


def convergence_csv(records: list[ConvergenceRecord], meta: dict | None = None) -> str:
    from . import __version__

    header = {"tool": "lattice_ctqw", "version": __version__, "reference": "torus quadrature"}
    header.update(meta or {})
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "t", "pi", "pi_stationary"])
    for r in records:
        w.writerow([r.m, format(r.t, ".17g"), format(r.pi, ".17g"), format(r.pi_stationary, ".17g")])
    return buf.getvalue()
