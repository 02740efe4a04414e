"""Isosurface extraction on sampled grids.

Marching tetrahedra over a Kuhn (6-tet) cube decomposition gives a watertight
triangle mesh of a level set; the Euler characteristic is then read off the
mesh combinatorics exactly (vertices live on grid edges, so identification is
by integer edge key, not float tolerance).  A marching-squares variant covers
curve slices for export.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Corner index = bx + 2*by + 4*bz; the six tetrahedra follow the bit-insertion
# paths from corner 0 to corner 7, which triangulates consistently across cubes.
_TETS = (
    (0, 1, 3, 7),
    (0, 1, 5, 7),
    (0, 2, 3, 7),
    (0, 2, 6, 7),
    (0, 4, 5, 7),
    (0, 4, 6, 7),
)
_CORNER_BITS = tuple((c & 1, (c >> 1) & 1, (c >> 2) & 1) for c in range(8))


@dataclass
class TriMesh:
    """Triangle soup with integer edge-key vertices and float positions."""

    triangles: list[tuple[tuple[int, int], ...]]  # 3 edge keys each
    positions: dict[tuple[int, int], np.ndarray]

    def component_stats(self) -> list[dict]:
        """Per connected component: V, E, F, Euler characteristic."""
        if not self.triangles:
            return []
        parent = list(range(len(self.triangles)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri

        side_owner: dict[tuple, int] = {}
        for idx, tri in enumerate(self.triangles):
            for a in range(3):
                side = tuple(sorted((tri[a], tri[(a + 1) % 3])))
                if side in side_owner:
                    union(idx, side_owner[side])
                else:
                    side_owner[side] = idx
        groups: dict[int, list[int]] = {}
        for idx in range(len(self.triangles)):
            groups.setdefault(find(idx), []).append(idx)
        stats = []
        for tris in groups.values():
            verts = set()
            sides = set()
            for idx in tris:
                tri = self.triangles[idx]
                verts.update(tri)
                for a in range(3):
                    sides.add(tuple(sorted((tri[a], tri[(a + 1) % 3]))))
            v, e, f = len(verts), len(sides), len(tris)
            stats.append({"V": v, "E": e, "F": f, "chi": v - e + f})
        stats.sort(key=lambda s: (-s["F"], s["chi"]))
        return stats


def _interp(pa, pb, va, vb):
    t = va / (va - vb)
    return pa + t * (pb - pa)


def marching_tetrahedra(values: np.ndarray, axes: list[np.ndarray]) -> TriMesh:
    """Triangulate {F = 0} from grid samples (shape = per-axis lengths)."""
    if values.ndim != 3:
        raise ValueError("marching tetrahedra needs a 3-d value grid")
    nx, ny, nz = values.shape
    pos = values >= 0

    # cells whose corners are not all one sign
    def corner(mask, bx, by, bz):
        return mask[bx : nx - 1 + bx, by : ny - 1 + by, bz : nz - 1 + bz]

    any_pos = np.zeros((nx - 1, ny - 1, nz - 1), dtype=bool)
    all_pos = np.ones((nx - 1, ny - 1, nz - 1), dtype=bool)
    for bx, by, bz in _CORNER_BITS:
        p = corner(pos, bx, by, bz)
        any_pos |= p
        all_pos &= p
    active = np.argwhere(any_pos & ~all_pos)

    ax, ay, az = axes
    triangles: list[tuple] = []
    positions: dict[tuple[int, int], np.ndarray] = {}

    def point_id(i, j, k):
        return (i * ny + j) * nz + k

    def edge_vertex(pid_a, pid_b, pa, pb, va, vb):
        key = (pid_a, pid_b) if pid_a < pid_b else (pid_b, pid_a)
        if key not in positions:
            if pid_a < pid_b:
                positions[key] = _interp(pa, pb, va, vb)
            else:
                positions[key] = _interp(pb, pa, vb, va)
        return key

    for i, j, k in active:
        corner_ids = []
        corner_pts = []
        corner_vals = []
        for bx, by, bz in _CORNER_BITS:
            ii, jj, kk = i + bx, j + by, k + bz
            corner_ids.append(point_id(ii, jj, kk))
            corner_pts.append(np.array([ax[ii], ay[jj], az[kk]]))
            corner_vals.append(values[ii, jj, kk])
        for tet in _TETS:
            signs = [corner_vals[c] >= 0 for c in tet]
            npos = sum(signs)
            if npos in (0, 4):
                continue
            if npos in (1, 3):
                lone = signs.index(npos == 1)
                others = [c for a, c in enumerate(tet) if a != lone]
                la = tet[lone]
                tri = tuple(
                    edge_vertex(
                        corner_ids[la],
                        corner_ids[c],
                        corner_pts[la],
                        corner_pts[c],
                        corner_vals[la],
                        corner_vals[c],
                    )
                    for c in others
                )
                triangles.append(tri)
            else:
                pos_c = [tet[a] for a in range(4) if signs[a]]
                neg_c = [tet[a] for a in range(4) if not signs[a]]
                (a, b), (c, d) = pos_c, neg_c
                ev = lambda u, v: edge_vertex(
                    corner_ids[u],
                    corner_ids[v],
                    corner_pts[u],
                    corner_pts[v],
                    corner_vals[u],
                    corner_vals[v],
                )
                ac, ad, bc, bd = ev(a, c), ev(a, d), ev(b, c), ev(b, d)
                triangles.append((ac, ad, bd))
                triangles.append((ac, bd, bc))
    return TriMesh(triangles=triangles, positions=positions)


def marching_squares(values: np.ndarray, axes: list[np.ndarray]):
    """Segments of {F = 0} on a 2-d grid; returns (segments, positions)."""
    if values.ndim != 2:
        raise ValueError("marching squares needs a 2-d value grid")
    nx, ny = values.shape
    ax, ay = axes
    pos = values >= 0
    positions: dict[tuple[int, int], np.ndarray] = {}
    segments: list[tuple] = []

    def point_id(i, j):
        return i * ny + j

    def edge_vertex(ia, ja, ib, jb):
        pa, pb = point_id(ia, ja), point_id(ib, jb)
        key = (pa, pb) if pa < pb else (pb, pa)
        if key not in positions:
            va, vb = values[ia, ja], values[ib, jb]
            p1 = np.array([ax[ia], ay[ja]])
            p2 = np.array([ax[ib], ay[jb]])
            if pa < pb:
                positions[key] = _interp(p1, p2, va, vb)
            else:
                positions[key] = _interp(p2, p1, vb, va)
        return key

    for i in range(nx - 1):
        for j in range(ny - 1):
            c = (pos[i, j], pos[i + 1, j], pos[i + 1, j + 1], pos[i, j + 1])
            if all(c) or not any(c):
                continue
            # cell edges with sign changes, as corner-pair indices
            cuts = []
            corners = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
            for a in range(4):
                b = (a + 1) % 4
                if c[a] != c[b]:
                    cuts.append(edge_vertex(*corners[a], *corners[b]))
            if len(cuts) == 2:
                segments.append((cuts[0], cuts[1]))
            elif len(cuts) == 4:
                # ambiguous saddle: fixed pairing keeps the output deterministic
                segments.append((cuts[0], cuts[1]))
                segments.append((cuts[2], cuts[3]))
    return segments, positions
