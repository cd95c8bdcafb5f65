"""Simplicial complexes from point clouds and random graphs.

A complex is stored as the family of sets S_k of its k-simplices, each
simplex a strictly increasing tuple of vertex indices.  Construction is
either geometric (clique complex of the epsilon-neighborhood graph of a
point cloud) or random (clique complex of an Erdos-Renyi graph).  All
constructors are deterministic given their inputs and return immutable,
downward-closed complexes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

Simplex = tuple[int, ...]

METRICS = ("euclidean", "manhattan", "chebyshev")


class PointCloudError(ValueError):
    """Malformed point-cloud input (ragged or non-numeric rows)."""


@dataclass(frozen=True)
class PointCloud:
    """Finite set of points in R^d, one row per point."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise PointCloudError("point cloud must be a nonempty 2-d array")
        if not np.all(np.isfinite(pts)):
            raise PointCloudError("point cloud contains non-finite coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def load_point_cloud(path) -> PointCloud:
    """Read a headerless CSV, one point per row.

    Raises FileNotFoundError for a missing file and PointCloudError with
    the offending 1-based row number for ragged or non-numeric rows.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise PointCloudError(
                    f"ragged row {lineno}: expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(x) for x in fields])
            except ValueError as exc:
                raise PointCloudError(f"non-numeric field in row {lineno}: {exc}") from exc
    if not rows:
        raise PointCloudError("empty point-cloud file")
    return PointCloud(np.array(rows, dtype=float))


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of simplices over vertices 0..n_vertices-1.

    ``sets[k]`` is the lexicographically sorted, duplicate-free list of
    k-simplices.  Instances are immutable; validation runs on creation.
    """

    n_vertices: int
    sets: dict[int, list[Simplex]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("complex needs at least one vertex")
        cleaned: dict[int, list[Simplex]] = {}
        for k, simplices in self.sets.items():
            uniq = sorted(set(tuple(int(v) for v in s) for s in simplices))
            if not uniq:
                continue
            for s in uniq:
                if len(s) != k + 1:
                    raise ValueError(f"{s} is not a {k}-simplex")
                if any(a >= b for a, b in zip(s, s[1:])):
                    raise ValueError(f"simplex {s} is not strictly increasing")
                if s[0] < 0 or s[-1] >= self.n_vertices:
                    raise ValueError(f"simplex {s} has vertices outside [0, {self.n_vertices})")
            cleaned[k] = uniq
        # downward closure
        for k in sorted(cleaned):
            if k == 0:
                continue
            faces_below = set(cleaned.get(k - 1, ()))
            for s in cleaned[k]:
                for face in itertools.combinations(s, k):
                    if face not in faces_below:
                        raise ValueError(f"face {face} of {s} missing: complex not closed")
        object.__setattr__(self, "sets", cleaned)

    @property
    def max_dim(self) -> int:
        return max(self.sets) if self.sets else -1

    def simplices(self, k: int) -> list[Simplex]:
        """Sorted list of k-simplices; empty outside the populated range."""
        return list(self.sets.get(k, []))

    def num_simplices(self, k: int) -> int:
        return len(self.sets.get(k, ()))

    def to_json_dict(self) -> dict:
        return {
            "n_vertices": self.n_vertices,
            "simplices": {
                str(k): [list(s) for s in self.sets[k]] for k in sorted(self.sets)
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SimplicialComplex":
        sets = {int(k): [tuple(s) for s in v] for k, v in data["simplices"].items()}
        return cls(n_vertices=int(data["n_vertices"]), sets=sets)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "SimplicialComplex":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def from_simplices(n_vertices: int, top_simplices) -> SimplicialComplex:
    """Build the complex generated by ``top_simplices`` (all faces added)."""
    sets: dict[int, set[Simplex]] = {0: {(v,) for v in range(n_vertices)}}
    for s in top_simplices:
        s = tuple(sorted(int(v) for v in s))
        for size in range(1, len(s) + 1):
            sets.setdefault(size - 1, set()).update(itertools.combinations(s, size))
    return SimplicialComplex(n_vertices, {k: sorted(v) for k, v in sets.items()})


def _pairwise_distances(points: np.ndarray, metric: str) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    if metric == "euclidean":
        return np.sqrt((diff**2).sum(axis=-1))
    if metric == "manhattan":
        return np.abs(diff).sum(axis=-1)
    if metric == "chebyshev":
        return np.abs(diff).max(axis=-1)
    raise ValueError(f"unknown metric {metric!r}; choose one of {METRICS}")


def _cliques_from_adjacency(adj: np.ndarray, max_dim: int) -> dict[int, list[Simplex]]:
    """Enumerate cliques of size <= max_dim+1, sorted, by incremental expansion.

    A clique is only ever extended by vertices greater than its maximum, so
    each clique is produced exactly once and in lexicographic order.
    """
    n = adj.shape[0]
    sets: dict[int, list[Simplex]] = {0: [(v,) for v in range(n)]}
    neighbors_above = [np.flatnonzero(adj[v, v + 1:]) + v + 1 for v in range(n)]
    current = sets[0]
    for k in range(1, max_dim + 1):
        nxt: list[Simplex] = []
        for clique in current:
            for v in neighbors_above[clique[-1]]:
                if all(adj[u, v] for u in clique[:-1]):
                    nxt.append(clique + (int(v),))
        if not nxt:
            break
        sets[k] = nxt
        current = nxt
    return sets


def build_clique_complex(
    cloud: PointCloud, metric: str, epsilon: float, max_dim: int
) -> SimplicialComplex:
    """Clique (Vietoris-Rips style) complex of the epsilon-neighborhood graph.

    Vertices i, j are joined iff dist(i, j) <= epsilon (closed ball, so ties
    at exactly epsilon are edges), and every clique of at most max_dim+1
    vertices becomes a simplex.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if not 0 <= max_dim <= cloud.n - 1:
        raise ValueError(f"max_dim must be in [0, {cloud.n - 1}]")
    dist = _pairwise_distances(cloud.points, metric)
    adj = dist <= epsilon
    np.fill_diagonal(adj, False)
    return SimplicialComplex(cloud.n, _cliques_from_adjacency(adj, max_dim))


def random_complex(n: int, edge_prob: float, max_dim: int, seed: int) -> SimplicialComplex:
    """Clique complex of an Erdos-Renyi graph G(n, edge_prob).

    Deterministic for fixed (n, edge_prob, max_dim, seed): edges are decided
    from a PCG64 stream in row-major order over the strict upper triangle.
    """
    if n < 1:
        raise ValueError("need n >= 1 vertices")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    draws = rng.random((n, n))
    adj = np.zeros((n, n), dtype=bool)
    upper = np.triu_indices(n, k=1)
    adj[upper] = draws[upper] < edge_prob
    adj |= adj.T
    return SimplicialComplex(n, _cliques_from_adjacency(adj, max_dim))


# ---------------------------------------------------------------------------
# Bundled corpus: small shapes with hand-checkable Betti numbers.

def hollow_triangle() -> SimplicialComplex:
    """Three edges, no filling: b_0 = 1, b_1 = 1."""
    return from_simplices(3, [(0, 1), (0, 2), (1, 2)])


def filled_triangle() -> SimplicialComplex:
    """The full 2-simplex: b_0 = 1, b_1 = b_2 = 0."""
    return from_simplices(3, [(0, 1, 2)])


def tetrahedron_boundary() -> SimplicialComplex:
    """Four triangles of the tetrahedron without the 3-cell: b_2 = 1."""
    return from_simplices(4, list(itertools.combinations(range(4), 3)))


def two_components() -> SimplicialComplex:
    """Two disjoint edges: b_0 = 2."""
    return from_simplices(4, [(0, 1), (2, 3)])


def octahedron_boundary() -> SimplicialComplex:
    """Surface of the octahedron (antipodal pairs (0,5), (1,4), (2,3)): b_2 = 1."""
    triangles = [
        (a, b, c)
        for a, b, c in itertools.combinations(range(6), 3)
        if a + b != 5 and a + c != 5 and b + c != 5
    ]
    return from_simplices(6, triangles)


CORPUS = {
    "hollow-triangle": hollow_triangle,
    "filled-triangle": filled_triangle,
    "tetrahedron-boundary": tetrahedron_boundary,
    "two-components": two_components,
    "octahedron-boundary": octahedron_boundary,
}
