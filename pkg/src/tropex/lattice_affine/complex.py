"""Polyhedral complexes: cells plus face-incidence data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .polyhedron import Polyhedron, is_face_of


@dataclass(frozen=True)
class Incidence:
    """Cell ``face`` is glued onto a face of cell ``cell``.

    ``matrix`` and ``offset`` give the integral affine embedding
    ``y = matrix @ x + offset`` from the face's coordinates into the cell's.
    ``None`` means the identity (both cells live in one ambient space).
    """

    face: int
    cell: int
    matrix: tuple | None = None
    offset: tuple | None = None


class PolyhedralComplex:
    """A finite collection of polyhedra with their face incidences.

    Cells of an embedded complex share one ambient space and are glued by
    inclusion. Abstract complexes (such as dual intersection complexes) give
    each cell its own coordinates and record explicit embedding maps.

    Args:
        cells: the polyhedra.
        incidences: gluing data; computed from inclusion when omitted.
        labels: optional per-cell metadata.
    """

    def __init__(self, cells: Sequence[Polyhedron], incidences=None, labels=None):
        self.cells = list(cells)
        self.labels = list(labels) if labels is not None else [None] * len(self.cells)
        if incidences is None:
            incidences = self._inclusions()
        self.incidences = list(incidences)

    def _inclusions(self) -> list:
        out = []
        for i, a in enumerate(self.cells):
            for j, b in enumerate(self.cells):
                if i != j and a.dim == b.dim and a.dimension < b.dimension and b.contains_polyhedron(a) \
                        and is_face_of(a, b):
                    out.append(Incidence(i, j))
        return out

    @classmethod
    def from_maximal(cls, maximal: Sequence[Polyhedron], labels=None) -> "PolyhedralComplex":
        """The complex of all faces of the given cells, deduplicated."""
        seen = {}
        order = []
        for k, cell in enumerate(maximal):
            for f in cell.faces():
                p = f.polyhedron
                key = p.key()
                if key not in seen:
                    seen[key] = (p, labels[k] if labels is not None and f.dimension == cell.dimension
                                 else None)
                    order.append(key)
        cells = [seen[k][0] for k in order]
        labs = [seen[k][1] for k in order]
        return cls(cells, labels=labs)

    @property
    def dimension(self) -> int:
        return max((c.dimension for c in self.cells), default=-1)

    def cells_of_dim(self, d: int) -> list:
        return [c for c in self.cells if c.dimension == d]

    @property
    def maximal_cells(self) -> list:
        covered = {inc.face for inc in self.incidences}
        return [c for i, c in enumerate(self.cells) if i not in covered]

    def support_contains(self, x) -> bool:
        return any(c.contains(x) for c in self.cells)

    def is_consistent(self) -> bool:
        """Check the gluing data.

        For an embedded complex every pairwise intersection of cells must be
        a face of both. For an abstract complex the image of each glued cell
        under its embedding map must be a face of the target cell.
        """
        if any(inc.matrix is not None for inc in self.incidences):
            return all(is_face_of(self._image(inc), self.cells[inc.cell]) for inc in self.incidences)
        for i, a in enumerate(self.cells):
            for b in self.cells[i + 1:]:
                q = a.intersection(b)
                if q.is_empty:
                    continue
                if not is_face_of(q, a) or not is_face_of(q, b):
                    return False
        return True

    def _image(self, inc: Incidence) -> Polyhedron:
        src, dst = self.cells[inc.face], self.cells[inc.cell]
        if inc.matrix is None:
            return src
        M, o = inc.matrix, inc.offset

        def lin(x):
            return tuple(sum(a * b for a, b in zip(row, x)) for row in M)

        verts = [tuple(y + c for y, c in zip(lin(v), o)) for v in src.vertices]
        return Polyhedron.from_vrep(dst.dim, verts, [lin(r) for r in src.rays],
                                    [lin(l) for l in src.lineality])

    def key(self) -> frozenset:
        return frozenset((c.key(), lab) for c, lab in zip(self.cells, self.labels))

    def __len__(self):
        return len(self.cells)
