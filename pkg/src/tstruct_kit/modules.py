"""Finite-dimensional right modules over a path algebra quotient.

A module is a representation of the quiver: a dimension per vertex and a
matrix per arrow, acting on row vectors, subject to the algebra's
relations.  Module elements are row vectors split into per-vertex blocks
in vertex order.  Maps store one block per vertex and must intertwine
the arrow actions.

Everything downstream (extensions, torsion pairs, hearts) reduces to the
linear algebra here: hom spaces are kernels of intertwining systems, and
direct sum decompositions come from idempotents of the endomorphism
algebra analysed with :mod:`tstruct_kit.endo`.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import endo
from .algebra import PathAlgebra
from .errors import AlgebraMismatch, UndecidedStructure, UniverseIncomplete, ZeroModule
from .field import kron
from .quiver import Path

_ISO_ATTEMPTS = 40
_SUBMODULE_VECTOR_CAP = 4096


class Module:
    """Right module given by vertex dimensions and arrow action matrices.

    Args:
        algebra: The path algebra acted by.
        dims: Dimension at each vertex, in vertex order.
        action: For each arrow (in arrow order) a matrix of shape
            (dims[source], dims[target]) acting on row vectors.
        check: Validate shapes and relations.
    """

    def __init__(
        self,
        algebra: PathAlgebra,
        dims: Sequence[int],
        action: Sequence[np.ndarray],
        check: bool = True,
    ):
        self.algebra = algebra
        self.dims = list(dims)
        self.action = list(action)
        q = algebra.quiver
        self.offsets = []
        total = 0
        for d in self.dims:
            self.offsets.append(total)
            total += d
        self.total_dim = total
        if check:
            if len(self.dims) != q.num_vertices or len(self.action) != len(q.arrows):
                raise ValueError("wrong number of dimensions or arrow matrices")
            for i, arrow in enumerate(q.arrows):
                s = q.vertex_index[arrow.source]
                t = q.vertex_index[arrow.target]
                if self.action[i].shape != (self.dims[s], self.dims[t]):
                    raise ValueError("arrow %s matrix has wrong shape" % arrow.name)
            self._check_relations()

    def _check_relations(self) -> None:
        f = self.algebra.field
        for rel in self.algebra.relations:
            src = rel[0][1][0]
            tgt = self.algebra.quiver.path_target(rel[0][1])
            acc = f.zeros(self.dims[src], self.dims[tgt])
            for c, path in rel:
                acc = f.add(acc, f.scale(c, self.path_action(path)))
            if not f.is_zero(acc):
                raise ValueError("module violates a defining relation")

    def path_action(self, path: Path) -> np.ndarray:
        f = self.algebra.field
        q = self.algebra.quiver
        mat = f.eye(self.dims[path[0]])
        for ai in path[1]:
            mat = f.matmul(mat, self.action[ai])
        return mat

    def element_action(self, x: np.ndarray) -> np.ndarray:
        """Matrix of the right action of algebra element x on row vectors."""
        f = self.algebra.field
        q = self.algebra.quiver
        out = f.zeros(self.total_dim, self.total_dim)
        for i, p in enumerate(self.algebra.basis):
            if f.is_zero(x[0:1, i : i + 1]):
                continue
            u, v = p[0], q.path_target(p)
            blk = f.scale(x[0, i], self.path_action(p))
            ou, ov = self.offsets[u], self.offsets[v]
            out[ou : ou + self.dims[u], ov : ov + self.dims[v]] = f.add(
                out[ou : ou + self.dims[u], ov : ov + self.dims[v]], blk
            )
        return out

    def block(self, vec: np.ndarray, vertex: int) -> np.ndarray:
        o = self.offsets[vertex]
        return vec[:, o : o + self.dims[vertex]]

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def same_presentation(self, other: "Module") -> bool:
        """Same dimensions and identical action matrices."""
        if self is other:
            return True
        if self.algebra is not other.algebra or self.dims != other.dims:
            return False
        f = self.algebra.field
        return all(f.equal(a, b) for a, b in zip(self.action, other.action))

    def dim_at(self, vertex: str) -> int:
        return self.dims[self.algebra.quiver.vertex_index[vertex]]

    def describe(self) -> str:
        return "(%s)" % ", ".join(str(d) for d in self.dims)


class ModuleMap:
    """Map of modules over one algebra, one block per vertex.

    Blocks act on row vectors: an element row x at vertex v goes to
    x @ blocks[v].
    """

    def __init__(self, source: Module, target: Module, blocks: Sequence[np.ndarray], check: bool = True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("map between modules over different algebras")
        self.source = source
        self.target = target
        self.blocks = list(blocks)
        if check:
            f = source.algebra.field
            q = source.algebra.quiver
            for v in range(q.num_vertices):
                if self.blocks[v].shape != (source.dims[v], target.dims[v]):
                    raise ValueError("block at vertex %s has wrong shape" % q.vertices[v])
            for i, arrow in enumerate(q.arrows):
                u = q.vertex_index[arrow.source]
                w = q.vertex_index[arrow.target]
                lhs = f.matmul(source.action[i], self.blocks[w])
                rhs = f.matmul(self.blocks[u], target.action[i])
                if not f.equal(lhs, rhs):
                    raise ValueError("blocks do not intertwine arrow %s" % arrow.name)

    def then(self, other: "ModuleMap") -> "ModuleMap":
        if not self.target.same_presentation(other.source):
            raise AlgebraMismatch("maps do not compose")
        f = self.source.algebra.field
        blocks = [f.matmul(a, b) for a, b in zip(self.blocks, other.blocks)]
        return ModuleMap(self.source, other.target, blocks, check=False)

    def add(self, other: "ModuleMap") -> "ModuleMap":
        if self.source.dims != other.source.dims or self.target.dims != other.target.dims:
            raise AlgebraMismatch("maps have different endpoints")
        f = self.source.algebra.field
        blocks = [f.add(a, b) for a, b in zip(self.blocks, other.blocks)]
        return ModuleMap(self.source, self.target, blocks, check=False)

    def scale(self, c) -> "ModuleMap":
        f = self.source.algebra.field
        return ModuleMap(self.source, self.target, [f.scale(c, b) for b in self.blocks], check=False)

    def is_zero(self) -> bool:
        f = self.source.algebra.field
        return all(f.is_zero(b) for b in self.blocks)

    def is_injective(self) -> bool:
        f = self.source.algebra.field
        return all(f.rank(b) == b.shape[0] for b in self.blocks)

    def is_surjective(self) -> bool:
        f = self.source.algebra.field
        return all(f.rank(b) == b.shape[1] for b in self.blocks)

    def is_isomorphism(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()


def identity_map(m: Module) -> ModuleMap:
    f = m.algebra.field
    return ModuleMap(m, m, [f.eye(d) for d in m.dims], check=False)


def zero_map(source: Module, target: Module) -> ModuleMap:
    f = source.algebra.field
    blocks = [f.zeros(source.dims[v], target.dims[v]) for v in range(len(source.dims))]
    return ModuleMap(source, target, blocks, check=False)


def zero_module(algebra: PathAlgebra) -> Module:
    n = algebra.quiver.num_vertices
    f = algebra.field
    return Module(algebra, [0] * n, [f.zeros(0, 0) for _ in algebra.quiver.arrows], check=False)


def simple_module(algebra: PathAlgebra, vertex: str) -> Module:
    q = algebra.quiver
    f = algebra.field
    vi = q.vertex_index[vertex]
    dims = [1 if v == vi else 0 for v in range(q.num_vertices)]
    action = []
    for a in q.arrows:
        s, t = q.vertex_index[a.source], q.vertex_index[a.target]
        action.append(f.zeros(dims[s], dims[t]))
    return Module(algebra, dims, action)


def _paths_grouped(algebra: PathAlgebra, paths: List[Path], by_target: bool) -> Tuple[List[List[Path]], Dict[Path, int]]:
    q = algebra.quiver
    groups: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    for p in paths:
        v = q.path_target(p) if by_target else p[0]
        groups[v].append(p)
    index: Dict[Path, int] = {}
    for g in groups:
        for i, p in enumerate(g):
            index[p] = i
    return groups, index


def projective_module(algebra: PathAlgebra, vertex: str) -> Module:
    """Indecomposable projective: paths out of the vertex, extended by arrows."""
    q = algebra.quiver
    f = algebra.field
    vi = q.vertex_index[vertex]
    paths = [p for p in algebra.basis if p[0] == vi]
    groups, index = _paths_grouped(algebra, paths, by_target=True)
    dims = [len(g) for g in groups]
    action = []
    for ai, a in enumerate(q.arrows):
        s, t = q.vertex_index[a.source], q.vertex_index[a.target]
        mat = f.zeros(dims[s], dims[t])
        for p in groups[s]:
            vec = algebra.path_vector((p[0], p[1] + (ai,)))
            for bi, bp in enumerate(algebra.basis):
                if not f.is_zero(vec[0:1, bi : bi + 1]):
                    mat[index[p], index[bp]] = vec[0, bi]
        action.append(mat)
    return Module(algebra, dims, action)


def injective_module(algebra: PathAlgebra, vertex: str) -> Module:
    """Indecomposable injective: dual path basis on paths into the vertex."""
    q = algebra.quiver
    f = algebra.field
    vi = q.vertex_index[vertex]
    paths = [p for p in algebra.basis if q.path_target(p) == vi]
    groups, index = _paths_grouped(algebra, paths, by_target=False)
    dims = [len(g) for g in groups]
    action = []
    for ai, a in enumerate(q.arrows):
        s, t = q.vertex_index[a.source], q.vertex_index[a.target]
        mat = f.zeros(dims[s], dims[t])
        # Dual action: entry [p, x] is the coefficient of p in (arrow * x).
        for x in groups[t]:
            vec = algebra.path_vector((s, (ai,) + x[1]))
            for p in groups[s]:
                bi = algebra.basis.index(p)
                if not f.is_zero(vec[0:1, bi : bi + 1]):
                    mat[index[p], index[x]] = vec[0, bi]
        action.append(mat)
    return Module(algebra, dims, action)


def regular_module(algebra: PathAlgebra) -> Module:
    """The algebra as a right module over itself, in the path basis."""
    q = algebra.quiver
    f = algebra.field
    groups, index = _paths_grouped(algebra, list(algebra.basis), by_target=True)
    dims = [len(g) for g in groups]
    action = []
    for ai, a in enumerate(q.arrows):
        s, t = q.vertex_index[a.source], q.vertex_index[a.target]
        mat = f.zeros(dims[s], dims[t])
        for p in groups[s]:
            vec = algebra.path_vector((p[0], p[1] + (ai,)))
            for bi, bp in enumerate(algebra.basis):
                if not f.is_zero(vec[0:1, bi : bi + 1]):
                    mat[index[p], index[bp]] = vec[0, bi]
        action.append(mat)
    return Module(algebra, dims, action)


def direct_sum(modules: Sequence[Module]) -> Tuple[Module, List[ModuleMap], List[ModuleMap]]:
    """Direct sum with inclusion and projection maps."""
    if not modules:
        raise ValueError("empty direct sum needs an algebra; use zero_module")
    alg = modules[0].algebra
    f = alg.field
    q = alg.quiver
    nv = q.num_vertices
    dims = [sum(m.dims[v] for m in modules) for v in range(nv)]
    action = []
    for ai, a in enumerate(q.arrows):
        s, t = q.vertex_index[a.source], q.vertex_index[a.target]
        mat = f.zeros(dims[s], dims[t])
        ro = 0
        co = 0
        for m in modules:
            mat[ro : ro + m.dims[s], co : co + m.dims[t]] = m.action[ai]
            ro += m.dims[s]
            co += m.dims[t]
        action.append(mat)
    total = Module(alg, dims, action, check=False)
    incls, projs = [], []
    starts = [0] * nv
    for m in modules:
        iblocks, pblocks = [], []
        for v in range(nv):
            ib = f.zeros(m.dims[v], dims[v])
            pb = f.zeros(dims[v], m.dims[v])
            for i in range(m.dims[v]):
                ib[i, starts[v] + i] = f.one_scalar()
                pb[starts[v] + i, i] = f.one_scalar()
            iblocks.append(ib)
            pblocks.append(pb)
        incls.append(ModuleMap(m, total, iblocks, check=False))
        projs.append(ModuleMap(total, m, pblocks, check=False))
        for v in range(nv):
            starts[v] += m.dims[v]
    return total, incls, projs


# -- hom spaces ----------------------------------------------------------


def hom_space(m: Module, n: Module) -> List[ModuleMap]:
    """Basis of the space of module maps m -> n."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("hom between modules over different algebras")
    f = m.algebra.field
    q = m.algebra.quiver
    nv = q.num_vertices
    sizes = [m.dims[v] * n.dims[v] for v in range(nv)]
    offs = []
    tot = 0
    for s in sizes:
        offs.append(tot)
        tot += s
    if tot == 0:
        return []
    eq_rows = []
    for ai, a in enumerate(q.arrows):
        u = q.vertex_index[a.source]
        w = q.vertex_index[a.target]
        rows = m.dims[u] * n.dims[w]
        if rows == 0:
            continue
        block = f.zeros(rows, tot)
        if sizes[w]:
            block[:, offs[w] : offs[w] + sizes[w]] = kron(f, m.action[ai], f.eye(n.dims[w]))
        if sizes[u]:
            block[:, offs[u] : offs[u] + sizes[u]] = f.sub(
                block[:, offs[u] : offs[u] + sizes[u]],
                kron(f, f.eye(m.dims[u]), n.action[ai].T),
            )
        eq_rows.append(block)
    if eq_rows:
        system = f.stack_rows(eq_rows, tot)
        sols = f.right_kernel(system)
    else:
        sols = f.eye(tot)
    out = []
    for k in range(sols.shape[0]):
        blocks = []
        for v in range(nv):
            blocks.append(sols[k, offs[v] : offs[v] + sizes[v]].reshape(m.dims[v], n.dims[v]))
        out.append(ModuleMap(m, n, blocks, check=False))
    return out


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_space(m, n))


def map_from_coords(basis: Sequence[ModuleMap], coords: np.ndarray) -> ModuleMap:
    f = basis[0].source.algebra.field
    out = zero_map(basis[0].source, basis[0].target)
    for i, b in enumerate(basis):
        if not f.is_zero(coords[0:1, i : i + 1]):
            out = out.add(b.scale(coords[0, i]))
    return out


def _vec_map(fm: ModuleMap) -> np.ndarray:
    f = fm.source.algebra.field
    parts = [b.reshape(1, -1) for b in fm.blocks if b.size]
    if not parts:
        return f.zeros(1, 0)
    return np.hstack(parts)


def end_algebra(m: Module) -> Tuple[endo.FDAlgebra, List[ModuleMap]]:
    """Endomorphism algebra as structure constants plus its map basis.

    The product is "apply first factor, then second", matching left to
    right composition everywhere else in the package.
    """
    if m.is_zero():
        raise ZeroModule("zero module has no useful endomorphism algebra")
    f = m.algebra.field
    basis = hom_space(m, m)
    vecs = f.stack_rows([_vec_map(b) for b in basis], _vec_map(basis[0]).shape[1])
    tables = []
    for bi in basis:
        rows = []
        for bj in basis:
            comp = bi.then(bj)
            coords = f.solve_left(vecs, _vec_map(comp))
            if coords is None:
                raise UndecidedStructure("endomorphism composition left the basis span")
            rows.append(coords)
        tables.append(f.stack_rows(rows, len(basis)))
    unit = f.solve_left(vecs, _vec_map(identity_map(m)))
    return endo.FDAlgebra(f, tables, unit), basis


# -- substructure --------------------------------------------------------


def _close_under_arrows(m: Module, rows_per_vertex: List[np.ndarray]) -> List[np.ndarray]:
    f = m.algebra.field
    q = m.algebra.quiver
    current = [f.row_space(r) for r in rows_per_vertex]
    changed = True
    while changed:
        changed = False
        for ai, a in enumerate(q.arrows):
            u = q.vertex_index[a.source]
            w = q.vertex_index[a.target]
            if current[u].shape[0] == 0:
                continue
            pushed = f.matmul(current[u], m.action[ai])
            merged = f.row_space(f.stack_rows([current[w], pushed], m.dims[w]))
            if merged.shape[0] != current[w].shape[0]:
                current[w] = merged
                changed = True
    return current


def submodule(m: Module, rows_per_vertex: List[np.ndarray], close: bool = True) -> Tuple[Module, ModuleMap]:
    """Submodule spanned by given row spaces, with its inclusion.

    When close is set the spans are first closed under the arrow action.
    """
    f = m.algebra.field
    q = m.algebra.quiver
    spans = _close_under_arrows(m, rows_per_vertex) if close else [f.row_space(r) for r in rows_per_vertex]
    dims = [s.shape[0] for s in spans]
    action = []
    for ai, a in enumerate(q.arrows):
        u = q.vertex_index[a.source]
        w = q.vertex_index[a.target]
        pushed = f.matmul(spans[u], m.action[ai])
        sol = f.solve_left(spans[w], pushed)
        if sol is None:
            raise ValueError("row spaces are not arrow invariant")
        action.append(sol)
    sub = Module(m.algebra, dims, action, check=False)
    incl = ModuleMap(sub, m, spans, check=False)
    return sub, incl


def _quotient_maps(field, sub_rows: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Projection (n, c) and lift (c, n) for the quotient by a row span."""
    rref, pivots = field.rref(sub_rows)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    proj = field.zeros(n, len(free))
    for i in range(n):
        v = field.zeros(1, n)
        v[0, i] = field.one_scalar()
        for row, c in zip(rref, pivots):
            if not field.is_zero(v[0:1, c : c + 1]):
                v = field.sub(v, field.scale(v[0, c], row.reshape(1, -1)))
        for k, j in enumerate(free):
            proj[i, k] = v[0, j]
    lift = field.zeros(len(free), n)
    for k, j in enumerate(free):
        lift[k, j] = field.one_scalar()
    return proj, lift


def quotient_module(m: Module, rows_per_vertex: List[np.ndarray], close: bool = True) -> Tuple[Module, ModuleMap]:
    """Quotient by the submodule spanned by the rows, with its projection."""
    f = m.algebra.field
    q = m.algebra.quiver
    spans = _close_under_arrows(m, rows_per_vertex) if close else [f.row_space(r) for r in rows_per_vertex]
    projs = []
    lifts = []
    dims = []
    for v in range(q.num_vertices):
        p, l = _quotient_maps(f, spans[v], m.dims[v])
        projs.append(p)
        lifts.append(l)
        dims.append(p.shape[1])
    action = []
    for ai, a in enumerate(q.arrows):
        u = q.vertex_index[a.source]
        w = q.vertex_index[a.target]
        action.append(f.matmul(f.matmul(lifts[u], m.action[ai]), projs[w]))
    quot = Module(m.algebra, dims, action, check=False)
    proj = ModuleMap(m, quot, projs, check=False)
    return quot, proj


def kernel(fm: ModuleMap) -> Tuple[Module, ModuleMap]:
    f = fm.source.algebra.field
    rows = [f.left_kernel(b) for b in fm.blocks]
    return submodule(fm.source, rows, close=False)


def image(fm: ModuleMap) -> Tuple[Module, ModuleMap]:
    f = fm.source.algebra.field
    rows = [f.row_space(b) for b in fm.blocks]
    return submodule(fm.target, rows, close=False)


def cokernel(fm: ModuleMap) -> Tuple[Module, ModuleMap]:
    f = fm.source.algebra.field
    rows = [f.row_space(b) for b in fm.blocks]
    return quotient_module(fm.target, rows, close=False)


def radical_rows(m: Module) -> List[np.ndarray]:
    """Row spans of m times the arrow ideal, per vertex."""
    f = m.algebra.field
    q = m.algebra.quiver
    rows = [f.zeros(0, m.dims[v]) for v in range(q.num_vertices)]
    for ai, a in enumerate(q.arrows):
        w = q.vertex_index[a.target]
        rows[w] = f.row_space(f.stack_rows([rows[w], f.row_space(m.action[ai])], m.dims[w]))
    return rows


def radical(m: Module) -> Tuple[Module, ModuleMap]:
    return submodule(m, radical_rows(m), close=False)


def top(m: Module) -> Tuple[Module, ModuleMap]:
    return quotient_module(m, radical_rows(m), close=False)


def socle_rows(m: Module) -> List[np.ndarray]:
    """Per-vertex rows killed by every arrow."""
    f = m.algebra.field
    q = m.algebra.quiver
    rows = []
    for v in range(q.num_vertices):
        outgoing = [m.action[ai] for ai, a in enumerate(q.arrows) if q.vertex_index[a.source] == v]
        outgoing = [b for b in outgoing if b.shape[1] > 0]
        if not outgoing:
            rows.append(f.eye(m.dims[v]))
            continue
        stacked = np.hstack(outgoing) if outgoing else f.zeros(m.dims[v], 0)
        rows.append(f.left_kernel(stacked))
    return rows


def socle(m: Module) -> Tuple[Module, ModuleMap]:
    return submodule(m, socle_rows(m), close=False)


# -- covers and envelopes ------------------------------------------------


def projective_cover(m: Module) -> ModuleMap:
    """Surjection from a minimal projective onto m."""
    f = m.algebra.field
    q = m.algebra.quiver
    rad = radical_rows(m)
    summands = []
    generators = []
    for v in range(q.num_vertices):
        _, pivots = f.rref(rad[v])
        pivot_set = set(pivots)
        for j in range(m.dims[v]):
            if j not in pivot_set:
                g = f.zeros(1, m.dims[v])
                g[0, j] = f.one_scalar()
                summands.append(projective_module(m.algebra, q.vertices[v]))
                generators.append((v, g))
    if not summands:
        src = zero_module(m.algebra)
        return ModuleMap(src, m, [f.zeros(0, d) for d in m.dims], check=False)
    total, incls, _ = direct_sum(summands)
    blocks = [f.zeros(total.dims[v], m.dims[v]) for v in range(q.num_vertices)]
    for s, (gv, g) in enumerate(generators):
        summand = summands[s]
        paths = [p for p in m.algebra.basis if p[0] == gv]
        groups, index = _paths_grouped(m.algebra, paths, by_target=True)
        for w in range(q.num_vertices):
            for p in groups[w]:
                row_in_summand = f.zeros(1, summand.dims[w])
                row_in_summand[0, index[p]] = f.one_scalar()
                row_total = f.matmul(row_in_summand, incls[s].blocks[w])
                img = f.matmul(g, m.path_action(p))
                col = np.nonzero(row_total[0])[0]
                blocks[w][int(col[0]), :] = img[0, :]
    cover = ModuleMap(total, m, blocks)
    if not cover.is_surjective():
        raise ValueError("projective cover construction failed to surject")
    return cover


def injective_envelope(m: Module) -> ModuleMap:
    """Injection of m into a minimal injective."""
    f = m.algebra.field
    q = m.algebra.quiver
    soc = socle_rows(m)
    summands = []
    functionals = []
    for v in range(q.num_vertices):
        s = soc[v]
        if s.shape[0] == 0:
            continue
        duals = f.solve_right(s, f.eye(s.shape[0]))
        if duals is None:
            raise ValueError("socle rows are not independent")
        for j in range(s.shape[0]):
            summands.append(injective_module(m.algebra, q.vertices[v]))
            functionals.append((v, duals[:, j : j + 1]))
    if not summands:
        tgt = zero_module(m.algebra)
        return ModuleMap(m, tgt, [f.zeros(d, 0) for d in m.dims], check=False)
    total, incls, _ = direct_sum(summands)
    blocks = [f.zeros(m.dims[v], total.dims[v]) for v in range(q.num_vertices)]
    for s, (sv, xi) in enumerate(functionals):
        summand = summands[s]
        paths = [p for p in m.algebra.basis if q.path_target(p) == sv]
        groups, index = _paths_grouped(m.algebra, paths, by_target=False)
        for w in range(q.num_vertices):
            for p in groups[w]:
                # Coordinate of the image along dual path p: xi(x . p).
                coeffs = f.matmul(m.path_action(p), xi)
                row_in_summand = f.zeros(1, summand.dims[w])
                row_in_summand[0, index[p]] = f.one_scalar()
                row_total = f.matmul(row_in_summand, incls[s].blocks[w])
                col = np.nonzero(row_total[0])[0]
                blocks[w][:, int(col[0]) : int(col[0]) + 1] = coeffs
    env = ModuleMap(m, total, blocks)
    if not env.is_injective():
        raise ValueError("injective envelope construction failed to inject")
    return env


def syzygy(m: Module) -> Module:
    return kernel(projective_cover(m))[0]


# -- decomposition and comparison ---------------------------------------


def fingerprint(m: Module) -> Tuple:
    """Cheap isomorphism invariants for sorting and pre-filtering."""
    f = m.algebra.field
    arrow_ranks = tuple(sorted(f.rank(b) for b in m.action))
    end_dim = len(hom_space(m, m)) if m.total_dim else 0
    sims = []
    for v in m.algebra.quiver.vertices:
        s = simple_module(m.algebra, v)
        sims.append((hom_dim(s, m), hom_dim(m, s)))
    return (tuple(m.dims), arrow_ranks, end_dim, tuple(sims))


def is_isomorphic(m: Module, n: Module, attempts: int = _ISO_ATTEMPTS) -> bool:
    """Search for an isomorphism; False means none was found.

    A True answer is certified by an explicit invertible map.  The
    search tries every hom basis element and seeded random combinations,
    which finds an iso whenever one exists except with negligible
    probability over large fields.
    """
    if m.dims != n.dims:
        return False
    if m.total_dim == 0:
        return True
    basis = hom_space(m, n)
    if not basis:
        return False
    for b in basis:
        if b.is_isomorphism():
            return True
    f = m.algebra.field
    rng = np.random.default_rng(0)
    for _ in range(attempts):
        coords = f.random_matrix(1, len(basis), rng)
        if map_from_coords(basis, coords).is_isomorphism():
            return True
    return False


def is_indecomposable(m: Module) -> bool:
    """Exact test through the endomorphism algebra.

    Raises:
        ZeroModule: For the zero module.
        UndecidedStructure: When the base field blocks the analysis.
    """
    if m.is_zero():
        raise ZeroModule("zero module is neither decomposable nor indecomposable")
    alg, _ = end_algebra(m)
    return endo.is_local(alg)


def decompose(m: Module) -> List[Tuple[Module, ModuleMap]]:
    """Indecomposable summands with their inclusions."""
    if m.is_zero():
        return []
    alg, basis = end_algebra(m)
    idems = endo.primitive_idempotents(alg)
    if len(idems) == 1:
        return [(m, identity_map(m))]
    out = []
    for e in idems:
        phi = map_from_coords(basis, e)
        out.append(image(phi))
    return out


# -- exhaustive submodule listings --------------------------------------


def all_submodule_spans(m: Module) -> List[List[np.ndarray]]:
    """Every submodule as per-vertex row spans.

    Exhausts either thin modules (every vertex dimension at most 1,
    any field) or small modules over small prime fields by closing the
    set of cyclic submodules under sums.

    Raises:
        UniverseIncomplete: When exhaustive listing is out of reach.
    """
    f = m.algebra.field
    q = m.algebra.quiver
    nv = q.num_vertices
    if all(d <= 1 for d in m.dims):
        support = [v for v in range(nv) if m.dims[v] == 1]
        out = []
        for mask in range(1 << len(support)):
            rows = [f.zeros(0, m.dims[v]) for v in range(nv)]
            for k, v in enumerate(support):
                if mask >> k & 1:
                    rows[v] = f.eye(1)
            closed = _close_under_arrows(m, rows)
            if [r.shape[0] for r in closed] == [r.shape[0] for r in (f.row_space(x) for x in rows)]:
                out.append(closed)
        return _dedup_spans(f, out)
    p = f.characteristic
    if p == 0 or p**m.total_dim > _SUBMODULE_VECTOR_CAP:
        raise UniverseIncomplete(
            "submodule listing needs thin dimensions or a small prime field"
        )
    cyclic = []
    for code in range(p**m.total_dim):
        vec = f.zeros(1, m.total_dim)
        c = code
        for i in range(m.total_dim):
            vec[0, i] = f.scalar_from_int(c % p)
            c //= p
        rows = [m.block(vec, v) for v in range(nv)]
        cyclic.append(_close_under_arrows(m, rows))
    spans = _dedup_spans(f, cyclic)
    changed = True
    while changed:
        changed = False
        current = list(spans)
        for a in current:
            for b in current:
                merged = [
                    f.row_space(f.stack_rows([a[v], b[v]], m.dims[v])) for v in range(nv)
                ]
                if not _span_known(f, spans, merged):
                    spans.append(merged)
                    changed = True
    return spans


def _span_key(f, spans: List[np.ndarray]) -> Tuple:
    return tuple(tuple(f.entry_str(x) for x in s.reshape(-1)) + (s.shape[0],) for s in spans)


def _dedup_spans(f, items: List[List[np.ndarray]]) -> List[List[np.ndarray]]:
    seen = {}
    for it in items:
        seen.setdefault(_span_key(f, it), it)
    return list(seen.values())


def _span_known(f, known: List[List[np.ndarray]], cand: List[np.ndarray]) -> bool:
    key = _span_key(f, cand)
    return any(_span_key(f, k) == key for k in known)
