"""Supersymmetric charges of the honeycomb adjacency matrix.

Complex matrices are kept as pairs of int64 arrays (real, imaginary) so that
every identity is checked exactly.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .scheme import honeycomb_b


class GaussMatrix:
    """Matrix over the Gaussian integers."""

    __slots__ = ("re", "im")

    def __init__(self, re: np.ndarray, im: np.ndarray | None = None):
        self.re = np.asarray(re, dtype=np.int64)
        self.im = np.zeros_like(self.re) if im is None else np.asarray(im, dtype=np.int64)

    def __add__(self, o: GaussMatrix) -> GaussMatrix:
        return GaussMatrix(self.re + o.re, self.im + o.im)

    def __sub__(self, o: GaussMatrix) -> GaussMatrix:
        return GaussMatrix(self.re - o.re, self.im - o.im)

    def __matmul__(self, o: GaussMatrix) -> GaussMatrix:
        return GaussMatrix(self.re @ o.re - self.im @ o.im, self.re @ o.im + self.im @ o.re)

    def scale(self, k: int) -> GaussMatrix:
        return GaussMatrix(k * self.re, k * self.im)

    def times_i(self) -> GaussMatrix:
        return GaussMatrix(-self.im, self.re)

    def is_zero(self) -> bool:
        return not self.re.any() and not self.im.any()

    def __eq__(self, o) -> bool:
        return np.array_equal(self.re, o.re) and np.array_equal(self.im, o.im)

    def dagger(self) -> GaussMatrix:
        return GaussMatrix(self.re.T, -self.im.T)

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im


def anticommutator(a: GaussMatrix, b: GaussMatrix) -> GaussMatrix:
    return a @ b + b @ a


def commutator(a: GaussMatrix, b: GaussMatrix) -> GaussMatrix:
    return a @ b - b @ a


@dataclass
class SusyPair:
    m: int
    B: np.ndarray = field(repr=False)
    q_plus: GaussMatrix = field(repr=False)
    q_minus: GaussMatrix = field(repr=False)
    q1: GaussMatrix = field(repr=False)
    q2: GaussMatrix = field(repr=False)
    H: GaussMatrix = field(repr=False)


def build_susy(m: int) -> SusyPair:
    if m < 3:
        raise ValueError("m must be >= 3")
    B = honeycomb_b(m)
    Z = np.zeros_like(B)
    qp = GaussMatrix(np.block([[Z, Z], [B, Z]]))
    qm = GaussMatrix(np.block([[Z, B.T], [Z, Z]]))
    q1 = qp + qm
    q2 = (qp - qm).times_i().scale(-1)
    H = anticommutator(qp, qm)
    return SusyPair(m, B, qp, qm, q1, q2, H)


def verify_susy(p: SusyPair) -> dict[str, bool]:
    """Exact checks of the charge algebra; every value should be True."""
    qs = {"1": p.q1, "2": p.q2}
    H = p.H
    N = p.B.shape[0]
    out = {
        "Q+^2 = 0": (p.q_plus @ p.q_plus).is_zero(),
        "Q-^2 = 0": (p.q_minus @ p.q_minus).is_zero(),
        "H = {Q+, Q-}": H == anticommutator(p.q_plus, p.q_minus),
        "[H, Q+] = 0": commutator(H, p.q_plus).is_zero(),
        "[H, Q-] = 0": commutator(H, p.q_minus).is_zero(),
        "[H, Q1] = 0": commutator(H, p.q1).is_zero(),
        "[H, Q2] = 0": commutator(H, p.q2).is_zero(),
        "H = Q1^2": H == p.q1 @ p.q1,
        "H = Q2^2": H == p.q2 @ p.q2,
        "Q1, Q2 hermitian": p.q1 == p.q1.dagger() and p.q2 == p.q2.dagger(),
        "B^t B = B B^t": np.array_equal(p.B.T @ p.B, p.B @ p.B.T),
        "H block diagonal": not H.im.any()
        and not H.re[:N, N:].any()
        and not H.re[N:, :N].any()
        and np.array_equal(H.re[:N, :N], H.re[N:, N:])
        and np.array_equal(H.re[:N, :N], p.B.T @ p.B),
    }
    for i, a in qs.items():
        for j, b in qs.items():
            expect = H.scale(2) if i == j else GaussMatrix(np.zeros_like(H.re))
            out[f"{{Q{i}, Q{j}}} = {2 if i == j else 0}H" if i == j else f"{{Q{i}, Q{j}}} = 0"] = (
                anticommutator(a, b) == expect
            )
    return out


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray = field(repr=False)
    multiplicities: dict[float, int]
    all_even: bool
    matches_b_spectrum: bool
    max_eigenvalue: float


def degeneracy_check(p: SusyPair, decimals: int = 8) -> SpectrumReport:
    ev = np.linalg.eigvalsh(p.H.to_complex())
    rounded = np.round(ev, decimals) + 0.0
    mult = dict(sorted(Counter(rounded.tolist()).items()))
    # |lambda|^2 over the character grid of B, each value twice
    m = p.m
    k = np.arange(m)
    w = np.exp(2j * np.pi / m)
    K1, K2 = np.meshgrid(k, k, indexing="ij")
    b = 1 + w**K1 + w ** (-K2)
    expect = np.sort(np.concatenate([np.abs(b) ** 2] * 2).ravel())
    match = bool(np.allclose(np.sort(ev), expect, atol=1e-10))
    return SpectrumReport(ev, mult, all(v % 2 == 0 for v in mult.values()), match, float(ev.max()))


def report_json(p: SusyPair, **kw) -> str:
    checks = verify_susy(p)
    spec = degeneracy_check(p)
    return json.dumps(
        {
            "m": p.m,
            "identities": checks,
            "all_pass": all(checks.values()),
            "multiplicities": {format(k, ".8g"): v for k, v in spec.multiplicities.items()},
            "all_even": spec.all_even,
            "matches_b_spectrum": spec.matches_b_spectrum,
        },
        **kw,
    )
