"""Finite-dimensional path algebra quotients.

A :class:`PathAlgebra` is kQ/I for a quiver Q and an admissible ideal I
generated by linear combinations of parallel paths of length at least 2.
Construction certifies finite-dimensionality exactly: it finds the least
length l_star at which every path lies in the ideal, then computes a path
basis of the quotient by row reduction over all paths of length up to
l_star plus the longest relation term.  Elements are (1, dim) coordinate
rows over the path basis; multiplication composes paths left to right.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .endo import FDAlgebra
from .errors import MalformedRelation, NonAdmissible, UnknownVertex
from .field import Field
from .quiver import Path, Quiver

_LENGTH_CAP = 32

RelationTerm = Tuple[object, Sequence[str]]
Relation = Sequence[RelationTerm]


class PathAlgebra:
    """Quotient of a path algebra by an admissible ideal.

    Args:
        quiver: Underlying quiver.
        field: Coefficient field.
        relations: Each relation is a list of (coefficient, arrow name
            list) terms; all terms of one relation must be parallel paths
            of length at least 2.
        length_cap: Safety bound on explored path lengths.

    Raises:
        MalformedRelation: On syntactically invalid relations.
        NonAdmissible: If the ideal does not make the quotient finite
            dimensional below the length cap.
    """

    def __init__(
        self,
        quiver: Quiver,
        field: Field,
        relations: Sequence[Relation] = (),
        length_cap: int = _LENGTH_CAP,
    ):
        self.quiver = quiver
        self.field = field
        self.relations = [self._check_relation(r) for r in relations]
        self._max_rel_len = max(
            (len(path[1]) for rel in self.relations for _, path in rel), default=0
        )
        self._build(length_cap)

    # -- construction ------------------------------------------------

    def _check_relation(self, rel: Relation) -> List[Tuple[object, Path]]:
        if not rel:
            raise MalformedRelation("empty relation")
        out: List[Tuple[object, Path]] = []
        endpoints: Optional[Tuple[int, int]] = None
        for coeff, names in rel:
            c = self.field(coeff)
            path = self._path_from_names(names)
            if len(path[1]) < 2:
                raise MalformedRelation(
                    "relation term %s has length < 2" % self.quiver.path_name(path)
                )
            ends = (path[0], self.quiver.path_target(path))
            if endpoints is None:
                endpoints = ends
            elif ends != endpoints:
                raise MalformedRelation("relation mixes non-parallel paths")
            if c != self.field(0):
                out.append((c, path))
        if not out:
            raise MalformedRelation("relation is identically zero")
        return out

    def _path_from_names(self, names: Sequence[str]) -> Path:
        q = self.quiver
        idxs = []
        for n in names:
            if n not in q.arrow_index:
                raise MalformedRelation("unknown arrow %r in relation" % n)
            idxs.append(q.arrow_index[n])
        for a, b in zip(idxs, idxs[1:]):
            if q.vertices[q.path_target(q.arrow_path(a))] != q.arrows[b].source:
                raise MalformedRelation(
                    "arrows %s and %s do not compose" % (q.arrows[a].name, q.arrows[b].name)
                )
        return (q.vertex_index[q.arrows[idxs[0]].source], tuple(idxs))

    def _product_rows(
        self, layers: List[List[Path]], columns: Dict[Path, int], bound: int
    ) -> np.ndarray:
        """Coefficient rows of all x * r * y supported in length <= bound."""
        f = self.field
        q = self.quiver
        by_target: Dict[int, List[Path]] = {}
        by_source: Dict[int, List[Path]] = {}
        for layer in layers:
            for p in layer:
                by_target.setdefault(q.path_target(p), []).append(p)
                by_source.setdefault(p[0], []).append(p)
        rows = []
        for rel in self.relations:
            src = rel[0][1][0]
            tgt = q.path_target(rel[0][1])
            top = max(len(path[1]) for _, path in rel)
            for x in by_target.get(src, []):
                if len(x[1]) + top > bound:
                    continue
                for y in by_source.get(tgt, []):
                    if len(x[1]) + top + len(y[1]) > bound:
                        continue
                    vec = f.zeros(1, len(columns))
                    for c, path in rel:
                        whole = (x[0], x[1] + path[1] + y[1])
                        vec[0, columns[whole]] = f.scalar_add(vec[0, columns[whole]], c)
                    rows.append(vec)
        return f.stack_rows(rows, len(columns))

    @staticmethod
    def _column_order(layers: List[List[Path]]) -> Tuple[List[Path], Dict[Path, int]]:
        """All paths, longest first, so short paths survive as non-pivots."""
        ordered: List[Path] = []
        for layer in reversed(layers):
            ordered.extend(layer)
        return ordered, {p: i for i, p in enumerate(ordered)}

    def _build(self, length_cap: int) -> None:
        f = self.field
        q = self.quiver
        l_star = None
        layers: List[List[Path]] = []
        for bound in range(2, length_cap + 1):
            layers = q.paths_up_to(bound)
            if len(layers) <= bound:
                # No paths of this length at all; the ideal condition is vacuous.
                l_star = len(layers)
                break
            ordered, columns = self._column_order(layers)
            span = f.row_space(self._product_rows(layers, columns, bound))
            found = None
            for ell in range(2, bound + 1):
                if all(
                    f.in_row_space(span, self._unit_row(columns, p))
                    for p in layers[ell]
                ):
                    found = ell
                    break
            if found is not None:
                l_star = found
                break
        if l_star is None:
            raise NonAdmissible(
                "ideal does not close below path length %d; the quotient is "
                "infinite dimensional or needs a larger cap" % length_cap
            )
        self.nilpotency_index = l_star
        full_bound = l_star + self._max_rel_len
        layers = q.paths_up_to(full_bound)
        ordered, columns = self._column_order(layers)
        rows = [self._product_rows(layers, columns, full_bound)]
        for ell in range(l_star, len(layers)):
            for p in layers[ell]:
                rows.append(self._unit_row(columns, p))
        rref, pivots = f.rref(f.stack_rows([r for r in rows], len(columns)))
        pivot_set = set(pivots)
        basis = sorted(
            (p for i, p in enumerate(ordered) if i not in pivot_set),
            key=lambda p: (len(p[1]), p[0], p[1]),
        )
        if any(len(p[1]) >= l_star for p in basis):
            raise NonAdmissible("long path escaped the ideal; internal inconsistency")
        self.basis: List[Path] = basis
        self.dim = len(basis)
        self._basis_index = {p: i for i, p in enumerate(basis)}
        self._rref = rref
        self._pivots = list(pivots)
        self._columns = columns
        self._coords_cache: Dict[Path, np.ndarray] = {}
        self._build_tables()

    def _unit_row(self, columns: Dict[Path, int], p: Path) -> np.ndarray:
        row = self.field.zeros(1, len(columns))
        row[0, columns[p]] = self.field.one_scalar()
        return row

    def path_vector(self, path: Path) -> np.ndarray:
        """Coordinates of a path's residue class in the basis."""
        f = self.field
        if len(path[1]) >= self.nilpotency_index:
            return f.zeros(1, self.dim)
        cached = self._coords_cache.get(path)
        if cached is not None:
            return cached
        v = self._unit_row(self._columns, path)
        for row, c in zip(self._rref, self._pivots):
            if not f.is_zero(v[0:1, c : c + 1]):
                v = f.sub(v, f.scale(v[0, c], row.reshape(1, -1)))
        out = f.zeros(1, self.dim)
        for p, i in self._basis_index.items():
            out[0, i] = v[0, self._columns[p]]
        self._coords_cache[path] = out
        return out

    def _build_tables(self) -> None:
        f = self.field
        q = self.quiver
        tables = []
        for p in self.basis:
            rows = []
            tp = q.path_target(p)
            for qq in self.basis:
                if tp != qq[0]:
                    rows.append(f.zeros(1, self.dim))
                else:
                    rows.append(self.path_vector((p[0], p[1] + qq[1])))
            tables.append(f.stack_rows(rows, self.dim))
        self.tables = tables
        unit = f.zeros(1, self.dim)
        for v in range(q.num_vertices):
            unit = f.add(unit, self.path_vector((v, ())))
        self.unit = unit

    # -- element interface -------------------------------------------

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.field.matmul(y, self.left_matrix_of(x))

    def mul_tensor(self) -> np.ndarray:
        """Structure constants T with (b_p b_q) = sum_r T[p, q, r] b_r."""
        t = getattr(self, "_mul_tensor", None)
        if t is None:
            t = np.stack(self.tables)
            self._mul_tensor = t
        return t

    def left_matrix_of(self, x: np.ndarray) -> np.ndarray:
        """Matrix L with y @ L equal to x * y."""
        cached = self._matrix_cache("_lmat_cache", x)
        if cached is not None:
            key, hit = cached
            if hit is not None:
                return hit
        f = self.field
        left = f.zeros(self.dim, self.dim)
        for i in range(self.dim):
            if not f.is_zero(x[0:1, i : i + 1]):
                left = f.add(left, f.scale(x[0, i], self.tables[i]))
        if cached is not None:
            self._lmat_cache[key] = left
        return left

    def right_matrix_of(self, x: np.ndarray) -> np.ndarray:
        """Matrix R with y @ R equal to y * x."""
        cached = self._matrix_cache("_rmat_cache", x)
        if cached is not None:
            key, hit = cached
            if hit is not None:
                return hit
        f = self.field
        rows = [self.multiply(self._basis_row(i), x) for i in range(self.dim)]
        out = f.stack_rows(rows, self.dim)
        if cached is not None:
            self._rmat_cache[key] = out
        return out

    def _matrix_cache(self, attr: str, x: np.ndarray):
        # byte keys are only stable for the integer representation
        if x.dtype != np.int64:
            return None
        cache = getattr(self, attr, None)
        if cache is None:
            cache = {}
            setattr(self, attr, cache)
        key = x.tobytes()
        return key, cache.get(key)

    def _basis_row(self, i: int) -> np.ndarray:
        v = self.field.zeros(1, self.dim)
        v[0, i] = self.field.one_scalar()
        return v

    def vertex_idempotent(self, vertex: str) -> np.ndarray:
        if vertex not in self.quiver.vertex_index:
            raise UnknownVertex("no vertex named %r" % vertex)
        return self.path_vector((self.quiver.vertex_index[vertex], ()))

    def arrow_vector(self, name: str) -> np.ndarray:
        if name not in self.quiver.arrow_index:
            raise UnknownVertex("no arrow named %r" % name)
        return self.path_vector(self.quiver.arrow_path(self.quiver.arrow_index[name]))

    def paths_between(self, source: str, target: str) -> List[Path]:
        """Basis paths from source to target, canonical order."""
        q = self.quiver
        s = q.vertex_index[source]
        t = q.vertex_index[target]
        return [p for p in self.basis if p[0] == s and q.path_target(p) == t]

    def element_str(self, x: np.ndarray) -> str:
        f = self.field
        parts = []
        for i, p in enumerate(self.basis):
            if not f.is_zero(x[0:1, i : i + 1]):
                c = f.entry_str(x[0, i])
                name = self.quiver.path_name(p)
                parts.append(name if c == "1" else "%s*%s" % (c, name))
        return " + ".join(parts) if parts else "0"

    def fd(self) -> FDAlgebra:
        """View as an abstract algebra for structure analysis."""
        return FDAlgebra(self.field, self.tables, self.unit)

    def describe(self) -> str:
        return "dim %d path algebra over %s on %d vertices" % (
            self.dim,
            self.field.describe(),
            self.quiver.num_vertices,
        )
