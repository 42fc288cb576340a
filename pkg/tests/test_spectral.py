from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_ctqw.abelian import GroupSpec
from lattice_ctqw.polynomials import build_polynomials
from lattice_ctqw.scheme import build_honeycomb, build_scheme
from lattice_ctqw.spectral import (
    amplitudes_exact,
    amplitudes_infinite,
    amplitudes_oracle,
    origin_amplitude_finite,
    series_csv,
    spectral_grid,
)

SQ3 = np.sqrt(3.0)


def rounded(values):
    return Counter(np.round(np.asarray(values).real, 9).tolist())


def test_grid_hexagonal_m3():
    grid = spectral_grid(build_scheme(GroupSpec(3, 2)))
    assert rounded(grid.hamiltonian_values) == {6.0: 1, 0.0: 6, -3.0: 2}
    assert np.allclose(grid.generator_values[1], np.conj(grid.generator_values[0]))
    assert float(grid.weight) * len(grid) == 1


def test_grid_honeycomb_m3():
    grid = spectral_grid(build_honeycomb(3))
    half = grid.hamiltonian_values[grid.branch == 1]
    assert rounded(np.abs(half)) == {3.0: 1, round(SQ3, 9): 6, 0.0: 2}
    assert len(grid) == 18
    assert float(grid.weight) == 1 / 18


@pytest.mark.parametrize("m,n", [(3, 2), (4, 2), (5, 3), (4, 4)])
def test_grid_bounds(m, n):
    grid = spectral_grid(build_scheme(GroupSpec(m, n)))
    assert grid.hamiltonian_values.max() == pytest.approx(2 * (n + 1))
    assert np.all(np.abs(grid.hamiltonian_values) <= 2 * (n + 1) + 1e-12)
    assert np.allclose(grid.generator_values[-1], np.conj(grid.generator_values[0]))


def test_closed_forms_m3():
    t = np.linspace(0, 10, 1001)
    hx = amplitudes_exact(build_scheme(GroupSpec(3, 2)), t)
    e6, e3 = np.exp(-6j * t), np.exp(3j * t)
    assert np.abs(hx.unnormalized[:, 1] - (2 / 3) * (e6 - e3)).max() < 1e-12
    assert np.abs(hx.unnormalized[:, 2] - (2 / 9) * (e6 + 2 * e3 - 3)).max() < 1e-12
    assert np.abs(hx.vertex[:, 0] - (e6 + 2 * e3 + 6) / 9).max() < 1e-12
    hc = amplitudes_exact(build_honeycomb(3), t)
    ref = (np.cos(3 * t) + 6 * np.cos(SQ3 * t) + 2) / 9
    assert np.abs(hc.vertex[:, 0] - ref).max() < 1e-12


@pytest.mark.parametrize("kind,m", [("hex", 3), ("hex", 4), ("hex", 5), ("zmn", 4), ("honey", 3), ("honey", 4), ("honey", 5)])
def test_oracle_equivalence(kind, m):
    if kind == "honey":
        s = build_honeycomb(m)
    else:
        s = build_scheme(GroupSpec(m, 2), symmetric=kind == "hex")
    t = [0.0, 0.7, 5.0, 31.4]
    ex, orc = amplitudes_exact(s, t), amplitudes_oracle(s, t)
    assert np.abs(ex.vertex - orc.vertex).max() < 1e-12
    assert np.abs(ex.unnormalized - orc.unnormalized).max() < 1e-11
    assert np.abs(ex.unitarity() - 1).max() < 1e-10
    # t = 0: delta at the origin
    assert np.allclose(ex.stratum[0], np.eye(len(s))[0], atol=1e-14)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_polynomial_path_agrees(m):
    s = build_scheme(GroupSpec(m, 2))
    t = np.linspace(0, 20, 41)
    a = amplitudes_exact(s, t)
    b = amplitudes_exact(s, t, build_polynomials(s))
    assert np.abs(a.vertex - b.vertex).max() < 1e-11


def test_honeycomb_polynomial_path_m3():
    s = build_honeycomb(3)
    t = np.linspace(0, 20, 41)
    a = amplitudes_exact(s, t)
    b = amplitudes_exact(s, t, build_polynomials(s))
    assert np.abs(a.vertex - b.vertex).max() < 1e-11


def test_normalizations():
    s = build_scheme(GroupSpec(4, 2))
    ser = amplitudes_exact(s, [0.3, 1.1])
    assert np.allclose(ser.vertex * ser.sizes, ser.unnormalized)
    assert np.allclose(ser.stratum, np.sqrt(ser.sizes) * ser.vertex)


@settings(max_examples=25, deadline=None)
@given(t=st.floats(0, 200, allow_nan=False), m=st.sampled_from([3, 4, 6]))
def test_time_symmetry_and_unitarity(t, m):
    s = build_scheme(GroupSpec(m, 2))
    ser = amplitudes_exact(s, [t, -t])
    assert np.allclose(ser.vertex[1], np.conj(ser.vertex[0]), atol=1e-12)
    assert abs(ser.unitarity()[0] - 1) < 1e-10


def test_oracle_cap_refusal():
    s = build_scheme(GroupSpec(5, 2))
    with pytest.raises(ValueError, match="cap of 20"):
        amplitudes_oracle(s, [0.0], cap=20)


def test_rank_three_oracle():
    s = build_scheme(GroupSpec(4, 3))
    t = [0.0, 1.3, 9.0]
    assert np.abs(amplitudes_exact(s, t).vertex - amplitudes_oracle(s, t).vertex).max() < 1e-12


def test_infinite_at_zero():
    for kind in ("hexagonal", "honeycomb"):
        ser = amplitudes_infinite(kind, times=[0.0], points=64)
        assert ser.vertex[0, 0] == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("kind", ["hexagonal", "honeycomb"])
def test_infinite_matches_large_finite(kind):
    inf = amplitudes_infinite(kind, times=[5.0])
    fin = origin_amplitude_finite(kind, 400, [5.0])
    assert abs(inf.vertex[0, 0] - fin[0]) < 1e-6


def test_finite_origin_matches_exact():
    for kind, s in (("hexagonal", build_scheme(GroupSpec(6, 2))), ("honeycomb", build_honeycomb(5))):
        t = [0.0, 2.5, 17.0]
        a = origin_amplitude_finite(kind, s.m, t)
        assert np.abs(a - amplitudes_exact(s, t).vertex[:, 0]).max() < 1e-12


def test_infinite_nonorigin_stratum():
    # the (1,0) stratum on the infinite lattice matches a large finite lattice
    inf = amplitudes_infinite("hexagonal", labels=[(1, 0)], times=[2.0])
    s = build_scheme(GroupSpec(64, 2))
    fin = amplitudes_exact(s, [2.0], classes=[s.label_index((1, 0))])
    assert abs(inf.unnormalized[0, 0] - fin.unnormalized[0, 0]) < 1e-9


def test_riemann_lebesgue():
    ser = amplitudes_infinite("hexagonal", times=[5.0, 50.0])
    a5, a50 = np.abs(ser.vertex[:, 0])
    assert a50 < a5 - 1e-3


def test_underresolved_warning():
    with pytest.warns(RuntimeWarning, match="under-resolve"):
        amplitudes_infinite("hexagonal", times=[200.0], points=64)


def test_csv_deterministic_and_headed():
    s = build_honeycomb(3)
    t = np.linspace(0, 3, 7)
    a = series_csv(amplitudes_exact(s, t), {"kind": "honeycomb"}, amplitudes_oracle(s, t))
    b = series_csv(amplitudes_exact(s, t), {"kind": "honeycomb"}, amplitudes_oracle(s, t))
    assert a == b
    lines = a.splitlines()
    assert lines[0].startswith("# {")
    assert "normalizations" in lines[0] and "version" in lines[0]
    assert lines[1].startswith("time,stratum_index,stratum_label")
    assert lines[-1].startswith("# max_abs_diff=")
    assert len(lines) == 2 + 7 * 5 + 1
