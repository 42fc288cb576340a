"""Character spectra and CTQW amplitudes: exact sums, dense oracle, torus quadrature."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import linalg

from . import __version__, kernels
from .abelian import GroupSpec, lattice_orbit, weyl_orbit
from .polynomials import PolynomialTable
from .scheme import HONEY_B, SchemeAlgebra, honeycomb_adjacency, shift_matrix, stratify

DEFAULT_ORACLE_CAP = 4096


@dataclass
class SpectralGrid:
    kind: str
    m: int
    n: int
    indices: np.ndarray = field(repr=False)  # (L, n)
    branch: np.ndarray = field(repr=False)  # (L,), +1/-1 for the honeycomb, 0 otherwise
    generator_values: np.ndarray = field(repr=False)  # (n, L) for zmn, (1, L) = b(l) for honeycomb
    hamiltonian_values: np.ndarray = field(repr=False)  # (L,) real
    weight: Fraction = Fraction(1)

    def __len__(self) -> int:
        return int(self.indices.shape[0])

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self), float(self.weight))


def fundamental_orbit(g: GroupSpec, k: int) -> np.ndarray:
    """Members of the class of omega_k in Z_m^n, as an (r, n) array."""
    w = tuple(int(j == k) for j in range(g.n))
    pts = sorted(weyl_orbit(tuple(int(v) % g.m for v in lattice_orbit(w)[0]), g))
    return np.asarray(pts, dtype=np.int64)


def hamiltonian_offsets(g: GroupSpec) -> np.ndarray:
    """Q_1 = class(omega_1) union class(omega_n), reduced mod m and deduplicated."""
    pts = {tuple(r) for r in fundamental_orbit(g, 0).tolist()}
    pts |= {tuple(r) for r in fundamental_orbit(g, g.n - 1).tolist()}
    return np.asarray(sorted(pts), dtype=np.int64)


def _char(l: np.ndarray, vecs: np.ndarray, m: int) -> np.ndarray:
    """sum_{g in vecs} omega^{l.g} for each row of l; exact phases via integer reduction."""
    ph = (l @ vecs.T) % m
    return np.exp(2j * np.pi * ph / m).sum(axis=1)


def spectral_grid(s: SchemeAlgebra) -> SpectralGrid:
    return spectral_grid_for(s.kind, s.m, s.n)


def spectral_grid_for(kind: str, m: int, n: int = 2) -> SpectralGrid:
    g = GroupSpec(m, n)
    l = g.points()
    if kind == "honeycomb":
        b = _char(l, np.asarray(HONEY_B), m)
        r = np.abs(b)
        r[r < 1e-14] = 0.0
        L = len(l)
        return SpectralGrid(
            kind, m, 2, np.concatenate([l, l]), np.repeat(np.array([1, -1]), L),
            np.concatenate([b, b])[None, :], np.concatenate([r, -r]), Fraction(1, 2 * L),
        )
    z = np.stack([_char(l, fundamental_orbit(g, k), m) for k in range(n)])
    lam = _char(l, hamiltonian_offsets(g), m)
    if np.abs(lam.imag).max() > 1e-9:
        raise AssertionError("Hamiltonian spectrum is not real")
    return SpectralGrid(kind, m, n, l, np.zeros(len(l), np.int64), z, lam.real, Fraction(1, len(l)))


def class_symbols(s: SchemeAlgebra, grid: SpectralGrid, classes=None) -> np.ndarray:
    """(L, C) array: the weight each grid entry gives to class c's unnormalized amplitude."""
    classes = range(len(s)) if classes is None else classes
    l = grid.indices
    cols = []
    if s.kind == "honeycomb":
        b = grid.generator_values[0]
        r = np.abs(b)
        beta = np.divide(b, r, out=np.zeros_like(b), where=r > 1e-14) * grid.branch
        for c in classes:
            blk = s.classes[c].blocks
            m00 = _char(l, blk[(0, 0)], s.m) if len(blk[(0, 0)]) else 0
            m10 = _char(l, blk[(1, 0)], s.m) if len(blk[(1, 0)]) else 0
            cols.append(np.conj(m00) + beta * np.conj(m10))
    else:
        for c in classes:
            cols.append(_char(l, s.classes[c].members, s.m))
    return np.stack(cols, axis=1)


@dataclass
class AmplitudeSeries:
    times: np.ndarray
    labels: list[tuple[int, ...]]
    sizes: np.ndarray
    vertex: np.ndarray  # (T, C)
    unnormalized: np.ndarray  # (T, C)
    meta: dict = field(default_factory=dict)

    @property
    def stratum(self) -> np.ndarray:
        return self.vertex * np.sqrt(self.sizes)

    @property
    def probability(self) -> np.ndarray:
        return self.sizes * np.abs(self.vertex) ** 2

    def unitarity(self) -> np.ndarray:
        return self.probability.sum(axis=1)

    def column(self, label) -> int:
        return self.labels.index(tuple(label))


def _series(times, labels, sizes, unnorm, meta) -> AmplitudeSeries:
    sizes = np.asarray(sizes, dtype=np.float64)
    return AmplitudeSeries(np.asarray(times, float), list(labels), sizes, unnorm / sizes, unnorm, meta)


def amplitudes_exact(
    s: SchemeAlgebra, times, table: PolynomialTable | None = None, classes=None
) -> AmplitudeSeries:
    """Amplitudes from character sums over the spectral grid.

    Without ``table`` each class contributes its character sum directly; with
    a table the class polynomials are evaluated at the generator eigenvalues
    (for the honeycomb, at the two branches of the Hamiltonian eigenvalue).
    """
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    grid = spectral_grid(s)
    classes = list(range(len(s))) if classes is None else list(classes)
    if table is None:
        coeffs = class_symbols(s, grid, classes)
    elif s.kind == "honeycomb":
        lam = grid.hamiltonian_values[None, :]
        coeffs = np.stack([table.evaluate(c, lam) for c in classes], axis=1)
    else:
        coeffs = np.stack([table.evaluate(c, grid.generator_values) for c in classes], axis=1)
    coeffs = coeffs * float(grid.weight)
    unnorm = kernels.phase_sums(grid.hamiltonian_values, coeffs, times)
    meta = {"method": "exact", "polynomials": table is not None}
    return _series(
        times, [s.classes[c].label for c in classes], [s.classes[c].size for c in classes], unnorm, meta
    )


def oracle_hamiltonian(kind: str, m: int, n: int = 2) -> np.ndarray:
    """Dense adjacency matrix assembled from Kronecker products of cyclic shifts."""
    if kind == "honeycomb":
        return honeycomb_adjacency(m)
    vecs = [np.eye(n, dtype=np.int64)[j] for j in range(n)] + [np.ones(n, np.int64)]
    H = np.zeros((m**n, m**n), dtype=np.int64)
    for v in vecs:
        for sgn in (1, -1):
            T = np.ones((1, 1), dtype=np.int64)
            for j in range(n):
                T = np.kron(T, shift_matrix(m, sgn * int(v[j])))
            H += T
    return np.minimum(H, 1)


def amplitudes_oracle(
    s: SchemeAlgebra, times, cap: int = DEFAULT_ORACLE_CAP, origin: int = 0
) -> AmplitudeSeries:
    """Dense eigendecomposition of the adjacency matrix applied to the origin."""
    V = s.num_vertices
    if V > cap:
        raise ValueError(f"oracle refused: {V} vertices exceeds the cap of {cap}")
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    H = oracle_hamiltonian(s.kind, s.m, s.n).astype(np.float64)
    w, U = linalg.eigh(H)
    psi = (np.exp(-1j * np.outer(times, w)) * U[origin]) @ U.T
    strat = stratify(s, origin)
    first = np.array([st.vertices[0] for st in strat.strata])
    unnorm = np.stack([psi[:, st.vertices].sum(axis=1) for st in strat.strata], axis=1)
    sizes = np.array(strat.sizes, dtype=np.float64)
    return AmplitudeSeries(
        times, [c.label for c in s.classes], sizes, psi[:, first], unnorm, {"method": "oracle"}
    )


# ---------------------------------------------------------------------------
# infinite lattices
# ---------------------------------------------------------------------------

HEX_RATE = 4.0
HONEY_RATE = 1.0


def lattice_hamiltonian_offsets(n: int) -> np.ndarray:
    e = np.eye(n, dtype=np.int64)
    one = np.ones((1, n), dtype=np.int64)
    return np.concatenate([e, -e, one, -one])


def required_points(kind: str, t: float) -> float:
    rate = HEX_RATE if kind == "hexagonal" else HONEY_RATE
    x = rate * abs(t)
    return x + 4.0 * x ** (1 / 3)


def auto_points(kind: str, t: float, n: int = 2) -> int:
    rate = HEX_RATE if kind == "hexagonal" else HONEY_RATE
    x = rate * abs(t)
    base = 512 if n <= 2 else 64
    return max(base, int(math.ceil(1.1 * x + 10.0 * x ** (1 / 3) + 64)))


def infinite_members(kind: str, label, n: int = 2) -> list[tuple[int, tuple[int, ...]]]:
    """Lattice sites of a stratum around the origin.

    Hexagonal labels are dominant weights; the stratum is the orbit together
    with its negatives. Honeycomb labels are ``(sheet, x1, x2)`` sites, or the
    string ``"origin"``.
    """
    if kind == "honeycomb":
        if label == "origin" or label == (0,):
            return [(0, (0, 0))]
        sheet, *x = label
        return [(int(sheet), tuple(int(v) for v in x))]
    orb = {tuple(r) for r in lattice_orbit(tuple(label)).tolist()}
    orb |= {tuple(-v for v in r) for r in orb}
    return [(0, r) for r in sorted(orb)]


def amplitudes_infinite(
    kind: str,
    labels=None,
    times=(0.0,),
    points: int | None = None,
    n: int = 2,
) -> AmplitudeSeries:
    """Torus quadrature of the infinite-lattice amplitude, normalized measure."""
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    if kind == "honeycomb":
        n = 2
    labels = [(0,) * n if kind == "hexagonal" else "origin"] if labels is None else list(labels)
    tmax = float(np.abs(times).max()) if times.size else 0.0
    if points is None:
        points = auto_points(kind, tmax, n)
    elif points < required_points(kind, tmax):
        warnings.warn(
            f"{points} quadrature points per dimension under-resolve t={tmax:g}; "
            f"use at least {math.ceil(required_points(kind, tmax))}",
            RuntimeWarning,
            stacklevel=2,
        )
    members = [infinite_members(kind, lab, n) for lab in labels]
    if kind == "hexagonal":
        mode, hvec = kernels.MODE_HEXAGONAL, lattice_hamiltonian_offsets(n)
    else:
        mode, hvec = kernels.MODE_HONEYCOMB, np.asarray(HONEY_B, dtype=np.int64)
    unnorm = kernels.torus_sum(points, n, times, mode, hvec, members, midpoint=True)
    sizes = [len(mm) for mm in members]
    labs = [tuple(lab) if not isinstance(lab, str) else (0,) for lab in labels]
    return _series(times, labs, sizes, unnorm, {"method": "quadrature", "points": points})


def origin_amplitude_finite(kind: str, m: int, times, n: int = 2) -> np.ndarray:
    """Origin amplitude on the size-m torus graph, via the character grid."""
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    if kind == "honeycomb":
        mode, hvec, n = kernels.MODE_HONEYCOMB, np.asarray(HONEY_B, dtype=np.int64), 2
    else:
        mode, hvec = kernels.MODE_HEXAGONAL, lattice_hamiltonian_offsets(n)
    out = kernels.torus_sum(m, n, times, mode, hvec, [[(0, (0,) * n)]], midpoint=False)
    return out[:, 0]


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_csv(
    series: AmplitudeSeries, meta: dict | None = None, oracle: AmplitudeSeries | None = None
) -> str:
    header = {"tool": "lattice_ctqw", "version": __version__}
    header.update(series.meta)
    header.update(meta or {})
    header["normalizations"] = {
        "vertex": "amplitude at one vertex of the stratum",
        "stratum": "overlap with the normalized stratum indicator, sqrt(size) * vertex",
        "unnormalized": "sum over the stratum, size * vertex",
    }
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    cols = [
        "time", "stratum_index", "stratum_label", "size", "vertex_re", "vertex_im",
        "stratum_re", "stratum_im", "unnormalized_re", "unnormalized_im", "probability",
    ]
    if oracle is not None:
        cols += ["oracle_vertex_re", "oracle_vertex_im", "abs_diff"]
    w.writerow(cols)
    strat = series.stratum
    prob = series.probability
    worst = 0.0
    for it, t in enumerate(series.times):
        for c, lab in enumerate(series.labels):
            v, st, u = series.vertex[it, c], strat[it, c], series.unnormalized[it, c]
            row = [
                _fmt(t), c, "(" + ",".join(map(str, lab)) + ")", int(series.sizes[c]),
                _fmt(v.real), _fmt(v.imag), _fmt(st.real), _fmt(st.imag),
                _fmt(u.real), _fmt(u.imag), _fmt(prob[it, c]),
            ]
            if oracle is not None:
                o = oracle.vertex[it, c]
                d = abs(o - v)
                worst = max(worst, d)
                row += [_fmt(o.real), _fmt(o.imag), _fmt(d)]
            w.writerow(row)
    if oracle is not None:
        buf.write(f"# max_abs_diff={_fmt(worst)}\n")
    return buf.getvalue()
