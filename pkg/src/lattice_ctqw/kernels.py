"""Hot loops: phase sums over spectral grids and torus quadrature.

Two implementations of every kernel live here, a numba one and a plain
numpy one. ``LATTICE_CTQW_BACKEND`` (``numba`` or ``numpy``) picks the one
used by the public wrappers; the default is numba when it imports.
``LATTICE_CTQW_THREADS`` caps numba's thread pool.

Reductions are deterministic: the torus kernels produce one partial sum per
slab of the leading grid axis and the slabs are added in a fixed order.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

# the bundled TBB is too old for numba; skip probing it
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

MODE_HEXAGONAL = 0
MODE_HONEYCOMB = 1

_BACKENDS = ("numba", "numpy")


def _initial_backend() -> str:
    name = os.environ.get("LATTICE_CTQW_BACKEND", "numba" if HAVE_NUMBA else "numpy").lower()
    if name not in _BACKENDS:
        raise ValueError(f"LATTICE_CTQW_BACKEND must be one of {_BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        warnings.warn("numba is not importable, falling back to numpy kernels")
        name = "numpy"
    return name


_backend = _initial_backend()

if HAVE_NUMBA and os.environ.get("LATTICE_CTQW_THREADS"):
    numba.set_num_threads(
        max(1, min(int(os.environ["LATTICE_CTQW_THREADS"]), numba.config.NUMBA_NUM_THREADS))
    )


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    _backend = name


def trig_tables(N: int) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of pi*k/N for k in [0, 2N)."""
    k = np.arange(2 * N, dtype=np.float64)
    ang = np.pi * k / N
    return np.cos(ang), np.sin(ang)


# ---------------------------------------------------------------------------
# phase sums:  out[t, s] = sum_l exp(-i lam_l t) * coeffs[l, s]
# ---------------------------------------------------------------------------


# keep the exponential block around 32 MB
_BLOCK_ENTRIES = 2_000_000


def _phase_sums_numpy(lam, coeffs, times):
    out = np.empty((times.size, coeffs.shape[1]), dtype=np.complex128)
    step = max(1, _BLOCK_ENTRIES // max(lam.size, 1))
    for a in range(0, times.size, step):
        e = np.exp(-1j * np.outer(times[a : a + step], lam))
        out[a : a + step] = e @ coeffs
    return out


if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _phase_block_numba(lam, times):
        T = times.size
        L = lam.size
        e = np.empty((T, L), dtype=np.complex128)
        for it in prange(T):
            t = times[it]
            for l in range(L):
                ph = -lam[l] * t
                e[it, l] = complex(np.cos(ph), np.sin(ph))
        return e

    def _phase_sums_numba(lam, coeffs, times):
        # trig block in parallel numba, contraction in BLAS
        out = np.empty((times.size, coeffs.shape[1]), dtype=np.complex128)
        step = max(1, _BLOCK_ENTRIES // max(lam.size, 1))
        for a in range(0, times.size, step):
            out[a : a + step] = _phase_block_numba(lam, times[a : a + step]) @ coeffs
        return out


def phase_sums(lam: np.ndarray, coeffs: np.ndarray, times: np.ndarray) -> np.ndarray:
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    times = np.ascontiguousarray(times, dtype=np.float64)
    if coeffs.ndim == 1:
        coeffs = coeffs[:, None]
    if _backend == "numba":
        return _phase_sums_numba(lam, coeffs, times)
    return _phase_sums_numpy(lam, coeffs, times)


# ---------------------------------------------------------------------------
# torus sums
#
# Grid points x_j = 2*pi*(i_j + shift2/2)/N on [0, 2pi)^n.  shift2 = 1 is the
# midpoint rule, shift2 = 0 is the character grid of Z_N^n.  For an integer
# vector g, g.x = pi*(2*g.i + shift2*sum(g))/N, so every trigonometric factor
# is a table lookup.
#
# MODE_HEXAGONAL: dispersion lam(x) = sum_h cos(h.x), member factor
#     exp(i v.x) * exp(-i lam t).
# MODE_HONEYCOMB: b(x) = sum_h exp(i h.x); member on sheet 0 gets
#     exp(i v.x) * cos(|b| t), on sheet 1 exp(i v.x) * (-i sin(|b| t) b/|b|).
#
# Result: out[t, label] = N^-n * sum_x sum_{members of label} factor.
# ---------------------------------------------------------------------------


def _torus_sum_numpy(N, shift2, n, times, mode, hvec, msheet, mvec, mlab, nlab, ctab, stab):
    T = times.size
    R = N ** (n - 1)
    rest = np.indices((N,) * (n - 1)).reshape(n - 1, R) if n > 1 else np.zeros((0, 1), np.int64)
    h_rest = hvec[:, 1:] @ rest if n > 1 else np.zeros((hvec.shape[0], 1), np.int64)
    m_rest = mvec[:, 1:] @ rest if n > 1 else np.zeros((mvec.shape[0], 1), np.int64)
    h_off = shift2 * hvec.sum(axis=1)
    m_off = shift2 * mvec.sum(axis=1)
    partial = np.empty((N, T, nlab), dtype=np.complex128)
    sel = np.zeros((nlab, mlab.size))
    sel[mlab, np.arange(mlab.size)] = 1.0
    two_n = 2 * N
    for i0 in range(N):
        hidx = (2 * (hvec[:, :1] * i0 + h_rest) + h_off[:, None]) % two_n
        midx = (2 * (mvec[:, :1] * i0 + m_rest) + m_off[:, None]) % two_n
        mphase = ctab[midx] + 1j * stab[midx]
        if mode == MODE_HEXAGONAL:
            lam = ctab[hidx].sum(axis=0)
            e = np.exp(-1j * np.outer(times, lam))
            per_label = sel @ mphase
            partial[i0] = e @ per_label.T
        else:
            b = (ctab[hidx] + 1j * stab[hidx]).sum(axis=0)
            r = np.abs(b)
            beta = np.divide(b, r, out=np.zeros_like(b), where=r > 0)
            rt = np.outer(times, r)
            c = np.cos(rt)
            s = -1j * np.sin(rt) * beta
            on0 = sel @ (mphase * (msheet == 0)[:, None])
            on1 = sel @ (mphase * (msheet == 1)[:, None])
            partial[i0] = c @ on0.T + s @ on1.T
    return partial.sum(axis=0) / float(N) ** n


if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _torus_sum_numba(N, shift2, n, times, mode, hvec, msheet, mvec, mlab, nlab, ctab, stab):
        T = times.size
        H = hvec.shape[0]
        M = mvec.shape[0]
        R = 1
        for _ in range(n - 1):
            R *= N
        two_n = 2 * N
        h_off = np.zeros(H, dtype=np.int64)
        for h in range(H):
            for j in range(n):
                h_off[h] += shift2 * hvec[h, j]
        m_off = np.zeros(M, dtype=np.int64)
        for q in range(M):
            for j in range(n):
                m_off[q] += shift2 * mvec[q, j]
        partial = np.zeros((N, T, nlab), dtype=np.complex128)
        for i0 in prange(N):
            coords = np.zeros(n, dtype=np.int64)
            acc = np.zeros((T, nlab), dtype=np.complex128)
            for r in range(R):
                coords[0] = i0
                rr = r
                for j in range(n - 1, 0, -1):
                    coords[j] = rr % N
                    rr //= N
                w0 = np.zeros(nlab, dtype=np.complex128)
                w1 = np.zeros(nlab, dtype=np.complex128)
                for q in range(M):
                    d = 0
                    for j in range(n):
                        d += mvec[q, j] * coords[j]
                    k = (2 * d + m_off[q]) % two_n
                    if msheet[q] == 0:
                        w0[mlab[q]] += complex(ctab[k], stab[k])
                    else:
                        w1[mlab[q]] += complex(ctab[k], stab[k])
                if mode == MODE_HEXAGONAL:
                    lam = 0.0
                    for h in range(H):
                        d = 0
                        for j in range(n):
                            d += hvec[h, j] * coords[j]
                        lam += ctab[(2 * d + h_off[h]) % two_n]
                    for it in range(T):
                        ph = -lam * times[it]
                        e = complex(np.cos(ph), np.sin(ph))
                        for c in range(nlab):
                            acc[it, c] += e * (w0[c] + w1[c])
                else:
                    bre = 0.0
                    bim = 0.0
                    for h in range(H):
                        d = 0
                        for j in range(n):
                            d += hvec[h, j] * coords[j]
                        k = (2 * d + h_off[h]) % two_n
                        bre += ctab[k]
                        bim += stab[k]
                    rad = np.sqrt(bre * bre + bim * bim)
                    if rad > 0.0:
                        beta = complex(bre / rad, bim / rad)
                    else:
                        beta = 0j
                    for it in range(T):
                        rt = rad * times[it]
                        cc = np.cos(rt)
                        ss = (-1j * np.sin(rt)) * beta
                        for c in range(nlab):
                            acc[it, c] += cc * w0[c] + ss * w1[c]
            partial[i0] = acc
        return partial


def torus_sum(
    N: int,
    n: int,
    times: np.ndarray,
    mode: int,
    hvec: np.ndarray,
    members: list[list[tuple[int, tuple[int, ...]]]],
    midpoint: bool = True,
) -> np.ndarray:
    """Normalized torus sums of the walk integrand, one column per member list.

    ``members[j]`` is a list of ``(sheet, offset)`` pairs; column ``j`` of the
    result is the summed amplitude over those lattice sites.
    """
    times = np.ascontiguousarray(np.atleast_1d(times), dtype=np.float64)
    hvec = np.ascontiguousarray(hvec, dtype=np.int64).reshape(-1, n)
    msheet, mvec, mlab = [], [], []
    for lab, group in enumerate(members):
        for sheet, vec in group:
            msheet.append(sheet)
            mvec.append(vec)
            mlab.append(lab)
    msheet = np.asarray(msheet, dtype=np.int64)
    mvec = np.asarray(mvec, dtype=np.int64).reshape(-1, n)
    mlab = np.asarray(mlab, dtype=np.int64)
    shift2 = 1 if midpoint else 0
    ctab, stab = trig_tables(N)
    nlab = len(members)
    if _backend == "numba":
        partial = _torus_sum_numba(
            N, shift2, n, times, mode, hvec, msheet, mvec, mlab, nlab, ctab, stab
        )
        return partial.sum(axis=0) / float(N) ** n
    return _torus_sum_numpy(N, shift2, n, times, mode, hvec, msheet, mvec, mlab, nlab, ctab, stab)


def numpy_kernels():
    return {"phase_sums": _phase_sums_numpy, "torus_sum": _torus_sum_numpy}


def numba_kernels():
    if not HAVE_NUMBA:
        return {}
    return {"phase_sums": _phase_sums_numba, "torus_sum": _torus_sum_numba}
