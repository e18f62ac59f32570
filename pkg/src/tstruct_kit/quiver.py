"""Quivers and paths.

A path is a pair (source vertex index, tuple of arrow indices) whose
arrows compose left to right: (v, (a, b)) is the walk along a then b.
Trivial paths are (v, ()).  This left-to-right reading matches the row
vector conventions in :mod:`tstruct_kit.field`: the action of a
concatenated path on row vectors is the ordinary matrix product of the
arrow actions in the same order.
"""

from typing import Dict, Iterator, List, Tuple

from .errors import BudgetExceeded, UnknownVertex

Path = Tuple[int, Tuple[int, ...]]

_PATH_BUDGET = 20000


class Arrow:
    """Directed edge with a name and vertex endpoints."""

    def __init__(self, name: str, source: str, target: str):
        self.name = name
        self.source = source
        self.target = target

    def __repr__(self) -> str:
        return "Arrow(%r, %r, %r)" % (self.name, self.source, self.target)


class Quiver:
    """Finite directed multigraph with named vertices and arrows.

    Args:
        vertices: Vertex names, order fixes vertex indices.
        arrows: Arrow list, order fixes arrow indices.

    Raises:
        UnknownVertex: If an arrow endpoint is not a listed vertex.
        ValueError: On duplicate vertex or arrow names.
    """

    def __init__(self, vertices: List[str], arrows: List[Arrow]):
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex names")
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        if set(names) & set(vertices):
            raise ValueError("arrow names clash with vertex names")
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        self.vertex_index: Dict[str, int] = {v: i for i, v in enumerate(vertices)}
        self.arrow_index: Dict[str, int] = {a.name: i for i, a in enumerate(arrows)}
        for a in arrows:
            for v in (a.source, a.target):
                if v not in self.vertex_index:
                    raise UnknownVertex("arrow %s uses unknown vertex %s" % (a.name, v))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def arrows_from(self, vertex_idx: int) -> List[int]:
        src = self.vertices[vertex_idx]
        return [i for i, a in enumerate(self.arrows) if a.source == src]

    def path_source(self, path: Path) -> int:
        return path[0]

    def path_target(self, path: Path) -> int:
        if not path[1]:
            return path[0]
        return self.vertex_index[self.arrows[path[1][-1]].target]

    def trivial_path(self, vertex_idx: int) -> Path:
        return (vertex_idx, ())

    def arrow_path(self, arrow_idx: int) -> Path:
        a = self.arrows[arrow_idx]
        return (self.vertex_index[a.source], (arrow_idx,))

    def compose(self, p: Path, q: Path) -> Path:
        """Concatenation p then q; requires target(p) == source(q)."""
        if self.path_target(p) != q[0]:
            raise ValueError("paths do not compose")
        return (p[0], p[1] + q[1])

    def path_name(self, path: Path) -> str:
        if not path[1]:
            return "e_%s" % self.vertices[path[0]]
        return "*".join(self.arrows[i].name for i in path[1])

    def extend_paths(self, paths: List[Path]) -> List[Path]:
        """All one-arrow extensions of the given paths, in canonical order."""
        out = []
        for p in paths:
            t = self.path_target(p)
            for ai in self.arrows_from(t):
                out.append((p[0], p[1] + (ai,)))
        out.sort()
        return out

    def paths_up_to(self, max_length: int, budget: int = _PATH_BUDGET) -> List[List[Path]]:
        """Paths grouped by length, lengths 0..max_length.

        Stops early once some length has no paths (longer lengths are
        then empty too).

        Raises:
            BudgetExceeded: If the total path count passes the budget.
        """
        layers: List[List[Path]] = [[(v, ()) for v in range(self.num_vertices)]]
        total = self.num_vertices
        for _ in range(max_length):
            nxt = self.extend_paths(layers[-1])
            if not nxt:
                break
            total += len(nxt)
            if total > budget:
                raise BudgetExceeded(
                    "path enumeration passed %d paths; quiver has unbounded growth "
                    "or needs a smaller length cap" % budget
                )
            layers.append(nxt)
        return layers

    def walks(self) -> Iterator[Path]:
        """All paths in length order; caller must bound consumption."""
        layer = [(v, ()) for v in range(self.num_vertices)]
        while layer:
            for p in layer:
                yield p
            layer = self.extend_paths(layer)
