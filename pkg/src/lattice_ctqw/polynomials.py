"""Multivariate polynomials expressing every class in the generators.

Coefficients are exact rationals. Polynomials for Z_m^n schemes are in the
variables z_1..z_n (the fundamental orbit classes); conjugation swaps z_k
and z_{n+1-k}. The m = 3 honeycomb gets a single variable A.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .abelian import GroupSpec, dominant_point, is_generic, lattice_orbit
from .scheme import SchemeAlgebra, SchemeError, build_scheme


class Polynomial:
    """Sparse polynomial: exponent tuple -> Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {tuple(e): Fraction(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c, nvars: int) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, k: int, nvars: int) -> Polynomial:
        return cls(nvars, {tuple(int(j == k) for j in range(nvars)): 1})

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.const(other, self.nvars)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, {e: c * Fraction(other) for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> Polynomial:
        return self * (Fraction(1) / Fraction(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            other = self._coerce(other)
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def conj(self) -> Polynomial:
        return Polynomial(self.nvars, {e[::-1]: c for e, c in self.terms.items()})

    def is_real(self) -> bool:
        return self == self.conj()

    def evaluate(self, values) -> np.ndarray:
        """Evaluate at ``values`` of shape (nvars, ...)."""
        values = np.asarray(values, dtype=np.complex128)
        out = np.zeros(values.shape[1:], dtype=np.complex128)
        if not self.terms:
            return out
        top = max(max(e) for e in self.terms)
        powers = [np.ones(values.shape[1:], np.complex128)]
        for _ in range(top):
            powers.append(powers[-1] * values)
        # reverse-graded order keeps the sum deterministic
        for e in sorted(self.terms, reverse=True):
            term = np.full(values.shape[1:], float(self.terms[e]), dtype=np.complex128)
            for k, p in enumerate(e):
                if p:
                    term = term * powers[p][k]
            out += term
        return out

    def to_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [[list(e), str(c)] for e, c in sorted(self.terms.items(), reverse=True)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Polynomial:
        return cls(d["nvars"], {tuple(e): Fraction(c) for e, c in d["terms"]})

    def format(self, names: list[str] | None = None) -> str:
        names = names or default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-v for v in e))):
            c = self.terms[e]
            mono = " ".join(n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
            mag = abs(c)
            if mono:
                coef = "" if mag == 1 else f"{mag}*"
                body = coef + mono.replace(" ", "*")
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"Polynomial({self.format()})"


def default_names(nvars: int) -> list[str]:
    if nvars == 2:
        return ["z", "zbar"]
    return [f"z{k + 1}" for k in range(nvars)]


def shift_vectors(n: int) -> np.ndarray:
    """v_i with components delta_{l,i} - delta_{l,i-1}, i = 1..n+1."""
    v = np.zeros((n + 1, n), dtype=np.int64)
    for i in range(n + 1):
        if i < n:
            v[i, i] += 1
        if i >= 1:
            v[i, i - 1] -= 1
    return v


@dataclass
class PolynomialTable:
    kind: str
    m: int
    n: int
    symmetric: bool
    labels: list[tuple[int, ...]]
    aliases: list[tuple[int, ...]]
    entries: list[Polynomial]
    variables: list[str]
    shift_vectors: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Polynomial:
        return self.entries[i]

    def by_alias(self, alias) -> Polynomial:
        return self.entries[self.aliases.index(tuple(alias))]

    def evaluate(self, i: int, values) -> np.ndarray:
        return self.entries[i].evaluate(values)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "symmetric": self.symmetric,
            "variables": self.variables,
            "shift_vectors": self.shift_vectors.tolist(),
            "entries": [
                {"label": list(lab), "alias": list(al), "polynomial": p.to_dict()}
                for lab, al, p in zip(self.labels, self.aliases, self.entries)
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> PolynomialTable:
        ents = d["entries"]
        return cls(
            d["kind"], d["m"], d["n"], d["symmetric"],
            [tuple(e["label"]) for e in ents], [tuple(e["alias"]) for e in ents],
            [Polynomial.from_dict(e["polynomial"]) for e in ents],
            list(d["variables"]), np.asarray(d["shift_vectors"], dtype=np.int64),
        )

    def pretty(self) -> str:
        lines = []
        for lab, al, p in zip(self.labels, self.aliases, self.entries):
            tag = "P_" + ",".join(map(str, al))
            lines.append(f"{tag:<12} = {p.format(self.variables)}")
        return "\n".join(lines)


def _eliminate(s: SchemeAlgebra, gens: list[int], nvars: int) -> list[Polynomial]:
    """Solve A_{g_k} A_c = sum_e p A_e for the single unknown class, repeatedly."""
    C = len(s)
    known: dict[int, Polynomial] = {0: Polynomial.const(1, nvars)}
    for k, g in enumerate(gens):
        known.setdefault(g, Polynomial.var(k, nvars))
    while len(known) < C:
        progressed = False
        for c in sorted(known, key=lambda i: (s.classes[i].degree, i)):
            for k, g in enumerate(gens):
                prod = s.product(g, c)
                unknown = [e for e in prod if e not in known]
                if len(unknown) != 1:
                    continue
                e = unknown[0]
                rest = Polynomial.var(k, nvars) * known[c]
                for f, p in prod.items():
                    if f != e:
                        rest = rest - known[f] * p
                known[e] = rest / prod[e]
                progressed = True
                break
            if progressed:
                break
        if not progressed:
            missing = sorted(set(range(C)) - set(known))
            raise SchemeError(f"classes {missing} cannot be reached from generator products")
    return [known[i] for i in range(C)]


def build_polynomials(s: SchemeAlgebra) -> PolynomialTable:
    if s.kind == "honeycomb":
        if len(s.hamiltonian) != 1:
            raise SchemeError("honeycomb adjacency is not a single class")
        entries = _eliminate(s, [s.hamiltonian[0]], 1)
        return PolynomialTable(
            "honeycomb", s.m, 2, s.symmetric, [c.label for c in s.classes],
            [c.alias for c in s.classes], entries, ["A"], shift_vectors(2),
        )
    if s.symmetric:
        twin = build_scheme(GroupSpec(s.m, s.n), symmetric=False)
        return realify(build_polynomials(twin), s)
    entries = _eliminate(s, list(s.generators), s.n)
    return PolynomialTable(
        "zmn", s.m, s.n, False, [c.label for c in s.classes], [c.alias for c in s.classes],
        entries, default_names(s.n), shift_vectors(s.n),
    )


def realify(t: PolynomialTable, s: SchemeAlgebra) -> PolynomialTable:
    """Polynomials of the symmetrized classes: P if real, else P + conj(P)."""
    if t.symmetric:
        return t
    g = GroupSpec(t.m, t.n)
    twin = build_scheme(g, symmetric=False)
    entries = []
    for c in s.classes:
        i = twin.partition.index_of(c.label)
        p = t.entries[i]
        j = twin.inverse_class(i)
        entries.append(p if j == i else p + p.conj())
    return PolynomialTable(
        "zmn", t.m, t.n, True, [c.label for c in s.classes], [c.alias for c in s.classes],
        entries, list(t.variables), t.shift_vectors,
    )


def continuous_generators(n: int, x: np.ndarray) -> np.ndarray:
    """z_k(x) = sum over the lattice orbit of omega_k of exp(i g.x); x has shape (n, ...)."""
    out = []
    for k in range(n):
        w = tuple(int(j == k) for j in range(n))
        orb = lattice_orbit(w)
        out.append(sum(np.exp(1j * np.tensordot(g, x, axes=1)) for g in orb))
    return np.stack(out)


def lattice_norm(t: PolynomialTable, i: int) -> int:
    """Squared norm of P_i under the flat torus measure: its number of characters."""
    orb = {tuple(r) for r in lattice_orbit(t.aliases[i]).tolist()}
    if t.symmetric:
        orb |= {tuple(-v for v in r) for r in orb}
    return len(orb)


def orthogonality_check(
    t: PolynomialTable, points: int = 256, max_degree: int | None = None, classes=None
) -> tuple[list[int], np.ndarray]:
    """Gram matrix of the chosen class polynomials under the normalized torus measure.

    The table must come from an m large enough that no chosen weight wraps
    (at m = 7 the (3,1) and (1,3) orbits coincide, for instance); wrapped
    classes are finite-group polynomials with no continuous counterpart.
    """
    if t.kind != "zmn":
        raise ValueError("orthogonality check needs a Z_m^n table")
    if classes is None:
        classes = [i for i, a in enumerate(t.aliases) if max_degree is None or sum(a) <= max_degree]
    x1 = 2 * np.pi * (np.arange(points) + 0.5) / points
    x = np.stack(np.meshgrid(*([x1] * t.n), indexing="ij"))
    z = continuous_generators(t.n, x)
    vals = np.stack([t.entries[i].evaluate(z).ravel() for i in classes])
    gram = (vals @ vals.conj().T) / vals.shape[1]
    return list(classes), gram


@dataclass(frozen=True)
class RecursionCheck:
    mu: tuple[int, ...]
    k: int
    generic: bool
    weighted_ok: bool
    literal_ok: bool
    terms: tuple[tuple[tuple[int, ...], int], ...]


def _stabilizer_order(weight) -> int:
    c = list(dominant_point(weight)) + [0]
    # stabilizer of a dominant point under S_{n+1}: product of factorials of repeat counts
    out = 1
    for v in set(c):
        r = c.count(v)
        for j in range(2, r + 1):
            out *= j
    return out


def recursion_terms(mu, k: int) -> list[tuple[tuple[int, ...], int]]:
    """Right-hand side of z_k P_mu for interior mu: (label, coefficient) pairs.

    The coefficient is the stabilizer order of the shifted weight, which is 1
    whenever the shifted weight is regular. Equivalently, with the Weyl-group
    sums |Stab(nu)| P_nu in place of the orbit sums P_nu, every coefficient
    is 1; that normalization disagrees with P_{1,0} = z, which is why the
    orbit-sum table carries the weights instead.
    """
    n = len(mu)
    v = shift_vectors(n)
    out: dict[tuple[int, ...], int] = {}
    for S in itertools.combinations(range(n + 1), k):
        lab = tuple(int(a) for a in np.asarray(mu) + v[list(S)].sum(axis=0))
        out[lab] = out.get(lab, 0) + _stabilizer_order(lab)
    return sorted(out.items())


def recursion_checks(t: PolynomialTable, max_degree: int = 4) -> list[RecursionCheck]:
    """Check z_k P_mu against its shift expansion for every interior mu.

    Interior means every component of mu is at least 1. Cases where some
    weight's lattice orbit does not embed in Z_m^n are skipped. When mu and
    every shifted weight also own their classes alone the comparison is exact
    polynomial identity; otherwise both sides are compared on the character
    grid, where a class reached by two minimal weights is still one orbit sum.
    """
    if t.kind != "zmn" or t.symmetric:
        raise ValueError("recursions are stated for the asymmetric Z_m^n table")
    g = GroupSpec(t.m, t.n)
    s = build_scheme(g, symmetric=False)
    part = s.partition
    grid = None
    out = []
    for d in range(t.n, max_degree + 1):
        for mu in _compositions(d, t.n):
            for k in range(1, t.n + 1):
                terms = recursion_terms(mu, k)
                weights = [mu] + [lab for lab, _ in terms]
                if not all(_embeds(w, t.m) for w in weights):
                    continue
                generic = all(is_generic(part, w) for w in weights)
                lhs = Polynomial.var(k - 1, t.n) * t.entries[part.index_of_alias(mu)]
                rhs_w = Polynomial(t.n)
                rhs_l = Polynomial(t.n)
                for lab, c in terms:
                    p = t.entries[part.index_of_alias(lab)]
                    rhs_w = rhs_w + p * c
                    rhs_l = rhs_l + p
                if generic:
                    w_ok, l_ok = lhs == rhs_w, lhs == rhs_l
                else:
                    if grid is None:
                        grid = _generator_grid(g)
                    lv = lhs.evaluate(grid)
                    w_ok = bool(np.allclose(lv, rhs_w.evaluate(grid), atol=1e-9))
                    l_ok = bool(np.allclose(lv, rhs_l.evaluate(grid), atol=1e-9))
                out.append(RecursionCheck(tuple(mu), k, generic, w_ok, l_ok, tuple(terms)))
    return out


def _embeds(weight, m: int) -> bool:
    if dominant_point(weight)[0] >= m:
        return False
    lat = lattice_orbit(weight)
    return len({tuple(r) for r in (lat % m).tolist()}) == len(lat)


def _compositions(total: int, parts: int):
    """Tuples of positive integers summing to total, in lexicographically descending order."""
    out = []
    for cut in itertools.combinations(range(1, total), parts - 1):
        b = (0,) + cut + (total,)
        out.append(tuple(b[i + 1] - b[i] for i in range(parts)))
    return sorted(out, reverse=True)


def _generator_grid(g: GroupSpec) -> np.ndarray:
    """Generator eigenvalues z^(k)_l over every character l of Z_m^n."""
    l = g.points()
    omega = 2 * np.pi / g.m
    out = []
    for k in range(g.n):
        orb = lattice_orbit(tuple(int(j == k) for j in range(g.n)))
        out.append(np.exp(1j * omega * (l @ orb.T)).sum(axis=1))
    return np.stack(out)
