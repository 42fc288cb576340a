"""Translation-invariant schemes on Z_m^n and on the two-sheet honeycomb.

Conventions used throughout:

* ``(A_c)[x, y] = 1`` iff ``y - x`` lies in class ``c`` (for the honeycomb,
  in the difference set of the sheet block of ``(x, y)``).
* The stratum of class ``c`` around an origin ``o`` is the support of the
  column ``A_c[:, o]``, so ``A_c`` applied to the origin indicator is the
  stratum indicator.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .abelian import GroupSpec, OrbitPartition, dominant_point, orbit_partition, symmetrize

B_CONVENTION = "B = I + S1 + S2^-1, (S1)[x,y] = 1 iff y - x = e1"
# honeycomb difference sets: B[x, y] = 1 iff y - x in HONEY_B
HONEY_B = ((0, 0), (1, 0), (0, -1))
SHEET_BLOCKS = ((0, 0), (0, 1), (1, 0), (1, 1))


class SchemeError(RuntimeError):
    pass


@dataclass(frozen=True)
class SchemeClass:
    label: tuple[int, ...]
    alias: tuple[int, ...]
    degree: int
    # zmn: (size, n) offsets; honeycomb: one (k, 2) difference array per sheet block
    members: np.ndarray | None = field(default=None, repr=False, compare=False)
    blocks: dict | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        if self.members is not None:
            return int(self.members.shape[0])
        return int(self.blocks[(0, 0)].shape[0] + self.blocks[(1, 0)].shape[0])


@dataclass
class SchemeAlgebra:
    kind: str
    m: int
    n: int
    symmetric: bool
    classes: list[SchemeClass]
    generators: list[int]
    hamiltonian: list[int]
    partition: OrbitPartition | None = field(default=None, repr=False)
    commutative: bool = True
    _pijk: np.ndarray | None = field(default=None, repr=False)

    @property
    def num_vertices(self) -> int:
        return self.m**self.n * (2 if self.kind == "honeycomb" else 1)

    @property
    def degree(self) -> int:
        return sum(self.classes[i].size for i in self.hamiltonian)

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    def label_index(self, label) -> int:
        label = tuple(label)
        for i, c in enumerate(self.classes):
            if c.label == label:
                return i
        for i, c in enumerate(self.classes):
            if c.alias == label:
                return i
        raise KeyError(f"no class with label or alias {label}")

    # --- vertices -------------------------------------------------------

    def vertex_coords(self) -> np.ndarray:
        """(V, n) coordinates, with a leading sheet column for the honeycomb."""
        pts = GroupSpec(self.m, self.n).points()
        if self.kind != "honeycomb":
            return pts
        sheets = np.repeat(np.arange(2), len(pts))[:, None]
        return np.concatenate([sheets, np.tile(pts, (2, 1))], axis=1)

    def vertex_index(self, v) -> int:
        v = [int(a) for a in v]
        g = GroupSpec(self.m, self.n)
        if self.kind == "honeycomb":
            return v[0] * g.order + int(g.flat(v[1:]))
        return int(g.flat(v))

    # --- operators ------------------------------------------------------

    def adjacency(self, i: int) -> np.ndarray:
        c = self.classes[i]
        g = GroupSpec(self.m, self.n)
        pts = g.points()
        if self.kind != "honeycomb":
            A = np.zeros((g.order, g.order), dtype=np.int64)
            for d in c.members:
                A[np.arange(g.order), g.flat(pts + d)] = 1
            return A
        N = g.order
        A = np.zeros((2 * N, 2 * N), dtype=np.int64)
        for (r, s), diffs in c.blocks.items():
            for d in diffs:
                A[r * N + np.arange(N), s * N + g.flat(pts + d)] = 1
        return A

    def hamiltonian_matrix(self) -> np.ndarray:
        return sum(self.adjacency(i) for i in self.hamiltonian)

    def stratum_vertices(self, i: int, origin: int = 0) -> np.ndarray:
        """Vertices beta with A_i[beta, origin] = 1, sorted."""
        c = self.classes[i]
        g = GroupSpec(self.m, self.n)
        N = g.order
        if self.kind != "honeycomb":
            o = g.unflat(origin)
            return np.sort(g.flat(o - c.members))
        s, o = divmod(origin, N)
        ox = g.unflat(o)
        out = [r * N + g.flat(ox - c.blocks[(r, s)]) for r in (0, 1) if len(c.blocks[(r, s)])]
        return np.sort(np.concatenate(out)) if out else np.zeros(0, np.int64)

    # --- intersection numbers ------------------------------------------

    @property
    def intersection_numbers(self) -> np.ndarray:
        """p[i, j, k] with A_i A_j = sum_k p[i, j, k] A_k."""
        if self._pijk is None:
            if self.kind == "honeycomb":
                self._pijk = _honeycomb_pijk(self)
            else:
                self._pijk = _zmn_pijk(self)
        return self._pijk

    def product(self, i: int, j: int) -> dict[int, int]:
        row = self.intersection_numbers[i, j]
        return {int(k): int(row[k]) for k in np.flatnonzero(row)}

    def inverse_class(self, i: int) -> int:
        if self.kind == "honeycomb":
            flipped = {(s, r): -d for (r, s), d in self.classes[i].blocks.items()}
            for j, c in enumerate(self.classes):
                if all(_same_rows(c.blocks[b], flipped[b]) for b in SHEET_BLOCKS):
                    return j
            raise SchemeError("class transpose is not a class")
        return self.partition.index_of(-self.classes[i].members[0])

    # --- JSON -----------------------------------------------------------

    def to_dict(self) -> dict:
        p = self.intersection_numbers
        nz = np.argwhere(p)
        classes = []
        for c in self.classes:
            d = {"label": list(c.label), "alias": list(c.alias), "size": c.size, "degree": c.degree}
            if c.members is not None:
                d["members"] = c.members.tolist()
            else:
                d["blocks"] = {f"{r}{s}": c.blocks[(r, s)].tolist() for r, s in SHEET_BLOCKS}
            classes.append(d)
        return {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "symmetric": self.symmetric,
            "commutative": self.commutative,
            "degree": self.degree,
            "generators": list(self.generators),
            "hamiltonian": list(self.hamiltonian),
            "b_convention": B_CONVENTION if self.kind == "honeycomb" else None,
            "classes": classes,
            "intersection_numbers": [[int(i), int(j), int(k), int(p[i, j, k])] for i, j, k in nz],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> SchemeAlgebra:
        classes = []
        for c in d["classes"]:
            if "members" in c:
                mem = np.asarray(c["members"], dtype=np.int64).reshape(-1, d["n"])
                classes.append(SchemeClass(tuple(c["label"]), tuple(c["alias"]), c["degree"], mem))
            else:
                blocks = {
                    (int(k[0]), int(k[1])): np.asarray(v, dtype=np.int64).reshape(-1, 2)
                    for k, v in c["blocks"].items()
                }
                classes.append(
                    SchemeClass(tuple(c["label"]), tuple(c["alias"]), c["degree"], blocks=blocks)
                )
        C = len(classes)
        p = np.zeros((C, C, C), dtype=np.int64)
        for i, j, k, v in d["intersection_numbers"]:
            p[i, j, k] = v
        partition = None
        if d["kind"] == "zmn":
            base = orbit_partition(GroupSpec(d["m"], d["n"]))
            partition = symmetrize(base) if d["symmetric"] else base
        return cls(
            d["kind"], d["m"], d["n"], d["symmetric"], classes, list(d["generators"]),
            list(d["hamiltonian"]), partition, d.get("commutative", True), p,
        )

    @classmethod
    def from_json(cls, s: str) -> SchemeAlgebra:
        return cls.from_dict(json.loads(s))


def _same_rows(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    return {tuple(r) for r in a.tolist()} == {tuple(r) for r in b.tolist()}


# ---------------------------------------------------------------------------
# Z_m^n
# ---------------------------------------------------------------------------


def build_scheme(g: GroupSpec, symmetric: bool = True) -> SchemeAlgebra:
    base = orbit_partition(g)
    part = symmetrize(base) if symmetric else base
    classes = [SchemeClass(c.label, c.alias, c.degree, c.members) for c in part.classes]
    gens = []
    for k in range(g.n):
        w = tuple(int(j == k) for j in range(g.n))
        gens.append(part.index_of(dominant_point(w)))
    ham = sorted({gens[0], gens[-1]})
    return SchemeAlgebra("zmn", g.m, g.n, symmetric, classes, gens, ham, part, True)


def _zmn_pijk(s: SchemeAlgebra) -> np.ndarray:
    g = GroupSpec(s.m, s.n)
    part = s.partition
    C = len(s.classes)
    stack = np.stack([part.indicator(k).astype(np.int64) for k in range(C)])
    axes = tuple(range(1, g.n + 1))
    reps = np.array([g.flat(c.members[0]) for c in s.classes])
    p = np.zeros((C, C, C), dtype=np.int64)
    for i, ci in enumerate(s.classes):
        conv = np.zeros_like(stack)
        for a in ci.members:
            conv += np.roll(stack, shift=tuple(int(v) for v in a), axis=axes)
        flat = conv.reshape(C, -1)
        # constant on every class, checked at every element
        for k in range(C):
            vals = flat[:, part.class_of == k]
            if (vals != vals[:, :1]).any():
                raise SchemeError(f"intersection numbers for class {i} depend on the representative")
        p[i] = flat[:, reps]
    return p


# ---------------------------------------------------------------------------
# honeycomb
# ---------------------------------------------------------------------------


def shift_matrix(m: int, k: int = 1) -> np.ndarray:
    """(S^k)[x, y] = 1 iff y - x = k mod m."""
    return np.roll(np.eye(m, dtype=np.int64), k, axis=1)


def honeycomb_b(m: int) -> np.ndarray:
    I = np.eye(m, dtype=np.int64)
    S1 = np.kron(shift_matrix(m), I)
    S2inv = np.kron(I, shift_matrix(m, -1))
    return np.eye(m * m, dtype=np.int64) + S1 + S2inv


def honeycomb_adjacency(m: int) -> np.ndarray:
    B = honeycomb_b(m)
    Z = np.zeros_like(B)
    return np.block([[Z, B.T], [B, Z]])


def _greedy_classes(A: np.ndarray) -> tuple[list[np.ndarray], list[int]]:
    V = len(A)
    classes = [np.eye(V, dtype=bool)]
    degs = [0]
    covered = classes[0].copy()
    P = np.eye(V)
    Af = A.astype(np.float64)
    for k in range(1, V + 1):
        P = P @ Af
        new = (P != 0) & ~covered
        for v in np.unique(P[new]):
            classes.append(new & (P == v))
            degs.append(k)
        covered |= new
        if covered.all():
            break
    else:
        raise SchemeError("powers of the adjacency matrix do not reach every vertex pair")
    return classes, degs


def _refine(classes: list[np.ndarray], degs: list[int]) -> tuple[list[np.ndarray], list[int]]:
    """Split classes until every product A_i A_j is constant on each class."""
    V = classes[0].shape[0]
    while True:
        C = len(classes)
        color = np.zeros((V, V), dtype=np.int64)
        for k, c in enumerate(classes):
            color[c] = k
        M = [c.astype(np.float64) for c in classes]
        sig = [color.ravel()]
        for i in range(C):
            for j in range(C):
                sig.append(np.rint(M[i] @ M[j]).astype(np.int64).ravel())
        sig = np.stack(sig, axis=1)
        _, inv = np.unique(sig, axis=0, return_inverse=True)
        inv = inv.reshape(V, V)
        if inv.max() + 1 == C:
            return classes, degs
        new_classes, new_degs = [], []
        for u in range(inv.max() + 1):
            mask = inv == u
            new_classes.append(mask)
            new_degs.append(degs[int(color[mask][0])])
        classes, degs = new_classes, new_degs


def _block_diffs(mask: np.ndarray, m: int) -> dict:
    g = GroupSpec(m, 2)
    N = g.order
    pts = g.points()
    out = {}
    for r, s in SHEET_BLOCKS:
        blk = mask[r * N : (r + 1) * N, s * N : (s + 1) * N]
        diffs = pts[np.flatnonzero(blk[0])]
        rebuilt = np.zeros((N, N), dtype=bool)
        for d in diffs:
            rebuilt[np.arange(N), g.flat(pts + d)] = True
        if not np.array_equal(rebuilt, blk):
            raise SchemeError("honeycomb class is not block-circulant")
        out[(r, s)] = diffs
    return out


def build_honeycomb(m: int, require_symmetric: bool = False) -> SchemeAlgebra:
    """Coherent configuration generated by the honeycomb adjacency matrix.

    Classes come from peeling powers of A (new support split by entry value),
    refined until every product of classes is constant on each class. For
    m = 3 this is a symmetric association scheme; the ``symmetric`` and
    ``commutative`` flags report what was found for other m.
    """
    if m < 3:
        raise ValueError("honeycomb needs m >= 3")
    A = honeycomb_adjacency(m)
    classes, degs = _greedy_classes(A)
    classes, degs = _refine(classes, degs)
    total = np.zeros_like(A)
    for c in classes:
        total += c
    if not (total == 1).all():
        raise SchemeError("honeycomb classes do not partition the vertex pairs")
    sym = all((c == c.T).all() for c in classes)
    if require_symmetric and not sym:
        raise SchemeError(f"honeycomb classes at m={m} are not symmetric")
    Mf = [c.astype(np.float64) for c in classes]
    comm = all(
        np.array_equal(Mf[i] @ Mf[j], Mf[j] @ Mf[i])
        for i in range(len(Mf))
        for j in range(i + 1, len(Mf))
    )
    out = []
    for k, (c, d) in enumerate(zip(classes, degs)):
        out.append(SchemeClass((k,), (k,), d, blocks=_block_diffs(c, m)))
    ham = [k for k, c in enumerate(classes) if (c & (A == 1)).any()]
    if not np.array_equal(sum(classes[k].astype(np.int64) for k in ham), A):
        raise SchemeError("adjacency matrix is not a union of classes")
    return SchemeAlgebra("honeycomb", m, 2, sym, out, list(ham), ham, None, comm)


def _honeycomb_pijk(s: SchemeAlgebra) -> np.ndarray:
    M = [s.adjacency(i).astype(np.float64) for i in range(len(s))]
    masks = [x.astype(bool) for x in M]
    C = len(M)
    p = np.zeros((C, C, C), dtype=np.int64)
    for i in range(C):
        for j in range(C):
            Z = np.rint(M[i] @ M[j]).astype(np.int64)
            for k in range(C):
                vals = Z[masks[k]]
                if (vals != vals[0]).any():
                    raise SchemeError(f"A_{i} A_{j} is not constant on class {k}")
                p[i, j, k] = vals[0]
    return p


# ---------------------------------------------------------------------------
# stratification and quantum decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    index: int
    label: tuple[int, ...]
    vertices: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.vertices.size)


@dataclass
class Stratification:
    origin: int
    num_vertices: int
    strata: list[Stratum]

    @property
    def sizes(self) -> list[int]:
        return [s.size for s in self.strata]

    def unit_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.num_vertices)
        st = self.strata[i]
        v[st.vertices] = 1.0 / np.sqrt(st.size)
        return v

    @cached_property
    def unit_vectors(self) -> np.ndarray:
        return np.stack([self.unit_vector(i) for i in range(len(self.strata))])

    def dual_idempotent(self, i: int) -> np.ndarray:
        """Diagonal of E_i^*, as a 0/1 vector."""
        d = np.zeros(self.num_vertices, dtype=np.int64)
        d[self.strata[i].vertices] = 1
        return d

    def stratum_of(self) -> np.ndarray:
        out = np.full(self.num_vertices, -1, dtype=np.int64)
        for i, st in enumerate(self.strata):
            out[st.vertices] = i
        return out


def stratify(s: SchemeAlgebra, origin: int = 0) -> Stratification:
    strata = [Stratum(i, c.label, s.stratum_vertices(i, origin)) for i, c in enumerate(s.classes)]
    return Stratification(origin, s.num_vertices, strata)


@dataclass
class QuantumDecomposition:
    raise_: np.ndarray
    flat: np.ndarray
    lower: np.ndarray
    levels: list[int]

    @property
    def total(self) -> np.ndarray:
        return self.raise_ + self.flat + self.lower


def stratum_levels(s: SchemeAlgebra, strat: Stratification) -> list[int]:
    """Graph distance from the origin to each stratum in the Hamiltonian graph."""
    H = s.hamiltonian_matrix()
    dist = np.full(s.num_vertices, -1, dtype=np.int64)
    dist[strat.origin] = 0
    q = deque([strat.origin])
    while q:
        u = q.popleft()
        for v in np.flatnonzero(H[u]):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    levels = []
    for st in strat.strata:
        d = np.unique(dist[st.vertices])
        if d.size != 1:
            raise SchemeError(f"stratum {st.index} spans several distances {d.tolist()}")
        levels.append(int(d[0]))
    return levels


def quantum_decompose(s: SchemeAlgebra, strat: Stratification, generator=None) -> QuantumDecomposition:
    """Split a generator into raising, flat and lowering parts.

    ``generator`` is a class index or ``None`` for the Hamiltonian. Strata are
    grouped into levels by class degree (the weight degree for Z_m^n, the
    first power of A reaching the class for the honeycomb), and the parts are
    sum_d E*_{d+1} G E*_d, sum_d E*_d G E*_d and sum_d E*_{d-1} G E*_d.
    For n = 2 and the honeycomb the degree is the graph distance to the
    origin; for n >= 3 it is not, since z_2 joins points two steps apart.
    """
    G = s.hamiltonian_matrix() if generator is None else s.adjacency(generator)
    levels = [c.degree for c in s.classes]
    lvl = np.empty(s.num_vertices, dtype=np.int64)
    for st, d in zip(strat.strata, levels):
        lvl[st.vertices] = d
    diff = lvl[:, None] - lvl[None, :]
    raise_ = np.where(diff == 1, G, 0)
    flat = np.where(diff == 0, G, 0)
    lower = np.where(diff == -1, G, 0)
    if not np.array_equal(raise_ + flat + lower, G):
        raise SchemeError("generator connects strata more than one level apart")
    return QuantumDecomposition(raise_, flat, lower, levels)
