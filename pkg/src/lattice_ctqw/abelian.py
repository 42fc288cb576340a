"""Z_m^n with the S_{n+1} permutation action and its orbit partitions."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class GroupSpec:
    m: int
    n: int

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 3:
            raise ValueError(f"modulus must be an integer >= 3, got {self.m}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"rank must be an integer >= 1, got {self.n}")

    @property
    def order(self) -> int:
        return self.m**self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.m,) * self.n

    def points(self) -> np.ndarray:
        """All group elements as an (m^n, n) array in row-major (lex) order."""
        return np.indices(self.shape).reshape(self.n, -1).T.astype(np.int64)

    def flat(self, coords) -> np.ndarray | int:
        c = np.asarray(coords, dtype=np.int64) % self.m
        return np.ravel_multi_index(tuple(np.moveaxis(c, -1, 0)), self.shape)

    def unflat(self, idx) -> np.ndarray:
        return np.stack(np.unravel_index(np.asarray(idx), self.shape), axis=-1).astype(np.int64)

    def validate(self, p) -> tuple[int, ...]:
        p = tuple(int(v) for v in p)
        if len(p) != self.n or any(not 0 <= v < self.m for v in p):
            raise ValueError(f"{p} is not an element of Z_{self.m}^{self.n}")
        return p


def inverse(p, m: int) -> tuple[int, ...]:
    return tuple((-v) % m for v in p)


def permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n + 1))), dtype=np.int64)


def _act(points: np.ndarray, m: int | None) -> np.ndarray:
    """Images of every point under every permutation: shape (perms, npts, n)."""
    n = points.shape[-1]
    emb = np.concatenate([points, np.zeros((points.shape[0], 1), np.int64)], axis=1)
    out = []
    for perm in permutations(n):
        y = emb[:, perm]
        img = y[:, :n] - y[:, n:]
        out.append(img % m if m is not None else img)
    return np.stack(out)


def weyl_orbit(p, g: GroupSpec | None = None, m: int | None = None) -> set[tuple[int, ...]]:
    """Orbit of a point under S_{n+1} acting through the sum-zero embedding.

    With ``g`` the result lives in Z_m^n; with neither ``g`` nor ``m`` the
    orbit is taken in the integer lattice Z^n.
    """
    if g is not None:
        p = g.validate(p)
        m = g.m
    pts = np.asarray([p], dtype=np.int64)
    imgs = _act(pts, m)[:, 0, :]
    return {tuple(int(v) for v in row) for row in imgs}


def dominant_point(weight) -> tuple[int, ...]:
    """Coordinates of sum_k w_k omega_k, with omega_k = (1^k, 0^(n-k))."""
    w = np.asarray(weight, dtype=np.int64)
    return tuple(int(v) for v in np.cumsum(w[::-1])[::-1])


def dominant_weight(point) -> tuple[int, ...]:
    c = list(point) + [0]
    return tuple(int(c[k] - c[k + 1]) for k in range(len(point)))


def lattice_orbit(weight) -> np.ndarray:
    """Integer-lattice orbit of a dominant weight, sorted lexicographically."""
    pts = sorted(weyl_orbit(dominant_point(weight)))
    return np.asarray(pts, dtype=np.int64).reshape(len(pts), len(weight))


def degree(weight) -> int:
    return int(sum(weight))


@dataclass(frozen=True)
class OrbitClass:
    label: tuple[int, ...]
    alias: tuple[int, ...]
    members: np.ndarray = field(repr=False, compare=False)
    # every dominant weight (reduced, first coordinate < m) landing here, best first
    aliases: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    @property
    def size(self) -> int:
        return int(self.members.shape[0])

    @property
    def degree(self) -> int:
        return degree(self.alias)

    def member_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.members}


def _alias_key(w: tuple[int, ...]):
    # minimal degree first; among equal degree the lexicographically largest
    return (degree(w), tuple(-v for v in w))


@dataclass(frozen=True)
class OrbitPartition:
    group: GroupSpec
    classes: tuple[OrbitClass, ...]
    class_of: np.ndarray = field(repr=False, compare=False)
    symmetric: bool = False

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    @cached_property
    def _by_label(self) -> dict:
        out = {}
        for i, c in enumerate(self.classes):
            out[c.label] = i
        for i, c in enumerate(self.classes):
            for a in c.aliases:
                out.setdefault(("alias",) + a, i)
        return out

    def index_of(self, point) -> int:
        return int(self.class_of[self.group.flat(point)])

    def index_of_label(self, label) -> int:
        return self._by_label[tuple(label)]

    def index_of_alias(self, weight) -> int:
        """Class containing the orbit of the dominant weight ``weight``."""
        return self.index_of(dominant_point(weight))

    def indicator(self, i: int) -> np.ndarray:
        return (self.class_of == i).reshape(self.group.shape)

    def to_dict(self) -> dict:
        return {
            "m": self.group.m,
            "n": self.group.n,
            "symmetric": self.symmetric,
            "classes": [
                {
                    "label": list(c.label),
                    "alias": list(c.alias),
                    "size": c.size,
                    "members": c.members.tolist(),
                }
                for c in self.classes
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> OrbitPartition:
        g = GroupSpec(d["m"], d["n"])
        groups = [np.asarray(c["members"], dtype=np.int64).reshape(-1, g.n) for c in d["classes"]]
        aliases = [[tuple(c["alias"])] for c in d["classes"]]
        return _assemble(g, groups, aliases, bool(d.get("symmetric", False)))


def _assemble(g: GroupSpec, groups, aliases, symmetric: bool) -> OrbitPartition:
    classes = []
    for mem, al in zip(groups, aliases):
        mem = mem[np.lexsort(mem.T[::-1])]
        al = tuple(sorted(set(al), key=_alias_key))
        classes.append(OrbitClass(tuple(int(v) for v in mem[0]), al[0], mem, al))
    classes.sort(key=lambda c: (c.degree, c.label))
    class_of = np.full(g.order, -1, dtype=np.int64)
    for i, c in enumerate(classes):
        class_of[g.flat(c.members)] = i
    if (class_of < 0).any():
        raise ValueError("classes do not cover the group")
    return OrbitPartition(g, tuple(classes), class_of, symmetric)


def orbit_partition(g: GroupSpec) -> OrbitPartition:
    pts = g.points()
    imgs = _act(pts, g.m)
    flat_imgs = np.ravel_multi_index(tuple(np.moveaxis(imgs, -1, 0)), g.shape)
    rep = flat_imgs.min(axis=0)
    reps, cid = np.unique(rep, return_inverse=True)
    order = np.argsort(cid, kind="stable")
    bounds = np.searchsorted(cid[order], np.arange(len(reps) + 1))
    groups = [pts[order[bounds[i] : bounds[i + 1]]] for i in range(len(reps))]

    # dominant aliases: nonincreasing points with first coordinate < m
    nonincr = np.all(pts[:, :-1] >= pts[:, 1:], axis=1) if g.n > 1 else np.ones(len(pts), bool)
    aliases: list[list[tuple[int, ...]]] = [[] for _ in reps]
    for idx in np.flatnonzero(nonincr):
        aliases[cid[idx]].append(dominant_weight(pts[idx]))
    return _assemble(g, groups, aliases, False)


def symmetrize(p: OrbitPartition) -> OrbitPartition:
    """Merge every class with the class of its inverses."""
    g = p.group
    inv_flat = g.flat(-g.points())
    partner = p.class_of[inv_flat]
    seen: set[int] = set()
    groups, aliases = [], []
    for i, c in enumerate(p.classes):
        if i in seen:
            continue
        j = int(partner[g.flat(c.members[0])])
        seen.update((i, j))
        if j == i:
            groups.append(c.members)
            aliases.append(list(c.aliases))
        else:
            groups.append(np.concatenate([c.members, p.classes[j].members]))
            aliases.append(list(c.aliases) + list(p.classes[j].aliases))
    return _assemble(g, groups, aliases, True)


def is_generic(p: OrbitPartition, weight) -> bool:
    """True if ``weight`` has a full-size orbit that owns its class alone.

    Full size means the lattice orbit maps injectively into Z_m^n; owning the
    class means it is the unique minimal-degree alias of the class.
    """
    g = p.group
    if dominant_point(weight)[0] >= g.m:
        return False
    lat = lattice_orbit(weight)
    red = {tuple(int(v) for v in row) for row in lat % g.m}
    if len(red) != len(lat):
        return False
    c = p.classes[p.index_of_alias(weight)]
    best = [a for a in c.aliases if degree(a) == degree(c.alias)]
    return c.size == len(lat) and best == [tuple(weight)]
