"""Invariant suite run by ``lattice-ctqw verify``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import GroupSpec
from .polynomials import build_polynomials, recursion_checks
from .scheme import SchemeAlgebra, SchemeError, build_honeycomb, build_scheme, quantum_decompose, stratify
from .spectral import amplitudes_exact, amplitudes_oracle, spectral_grid
from .susy import build_susy, degeneracy_check, verify_susy


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def check_closure(s: SchemeAlgebra) -> Check:
    """Dense A_i A_j against sum_k p_ij^k A_k, plus sum A_i = J and A_0 = I."""
    try:
        p = s.intersection_numbers
    except SchemeError as e:
        return Check("closure", False, str(e))
    mats = [s.adjacency(i) for i in range(len(s))]
    ok = np.array_equal(sum(mats), np.ones_like(mats[0])) and np.array_equal(
        mats[0], np.eye(len(mats[0]), dtype=np.int64)
    )
    for i in range(len(s)):
        for j in range(len(s)):
            rhs = np.tensordot(p[i, j], np.stack(mats), axes=1)
            ok &= np.array_equal(mats[i] @ mats[j], rhs)
    return Check("closure", bool(ok), f"{len(s)} classes")


def check_walk(s: SchemeAlgebra, times) -> list[Check]:
    ex = amplitudes_exact(s, times)
    orc = amplitudes_oracle(s, times)
    diff = float(np.abs(ex.vertex - orc.vertex).max())
    uni = float(np.abs(ex.unitarity() - 1).max())
    return [
        Check("oracle equivalence", diff < 1e-12, f"max diff {diff:.3g}"),
        Check("unitarity", uni <= 1e-10, f"max deviation {uni:.3g}"),
    ]


def check_decomposition(s: SchemeAlgebra) -> Check:
    st = stratify(s)
    ok = True
    for gen in [None] + ([] if s.kind == "honeycomb" else list(s.generators)):
        q = quantum_decompose(s, st, gen)
        ok &= np.array_equal(q.total, s.hamiltonian_matrix() if gen is None else s.adjacency(gen))
        if gen is None or s.symmetric:
            ok &= np.array_equal(q.raise_.T, q.lower)
    return Check("quantum decomposition", bool(ok))


def check_polynomials(s: SchemeAlgebra, tag: str = "") -> list[Check]:
    if s.kind == "honeycomb":
        return []
    t = build_polynomials(s)
    grid = spectral_grid(s)
    from .spectral import class_symbols

    sym = class_symbols(s, grid)
    ev = np.stack([t.evaluate(i, grid.generator_values) for i in range(len(t))], axis=1)
    err = float(np.abs(ev - sym).max())
    out = [Check(f"{tag}polynomial evaluation", err < 1e-9, f"max diff {err:.3g}")]
    if not s.symmetric:
        rec = recursion_checks(t, max_degree=4)
        out.append(Check(f"{tag}weighted recursion", all(r.weighted_ok for r in rec), f"{len(rec)} cases"))
    return out


def run_suite(kinds=("hexagonal", "honeycomb"), ms=(3, 4, 5), n: int = 2, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    times = np.concatenate([[0.0, 0.7, 5.0, 31.4], rng.uniform(0, 50, 8)])
    out: list[Check] = []
    for kind in kinds:
        for m in ms:
            tag = f"{kind} m={m}"
            if kind == "honeycomb":
                s = build_honeycomb(m)
            else:
                s = build_scheme(GroupSpec(m, n), symmetric=kind != "zmn")
            checks = [check_closure(s), check_decomposition(s)] + check_walk(s, times)
            checks += check_polynomials(s)
            if kind == "hexagonal":
                checks += check_polynomials(build_scheme(GroupSpec(m, n), symmetric=False), "asymmetric ")
            if kind == "honeycomb":
                p = build_susy(m)
                ident = verify_susy(p)
                bad = [k for k, v in ident.items() if not v]
                checks.append(Check("susy identities", not bad, ", ".join(bad)))
                spec = degeneracy_check(p)
                checks.append(Check("susy degeneracy", spec.all_even and spec.matches_b_spectrum))
            out += [Check(f"{tag}: {c.name}", c.passed, c.detail) for c in checks]
    return out
