"""Bounded cochain complexes of modules.

Cohomological indexing: the differential of degree i goes from degree i
to degree i + 1.  A complex stores modules for finitely many degrees;
missing degrees are zero.  Shifting by n moves degree i + n into degree
i and multiplies differentials by (-1)^n.  The cone of a chain map
f: X -> Y has degree i entry X^{i+1} (+) Y^i; with row vector elements
(x, y) its differential sends (x, y) to (-x d_X, x f + y d_Y).
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import PathAlgebra
from .errors import AlgebraMismatch, NotAChainMap, NotAComplex
from .modules import (
    Module,
    ModuleMap,
    _quotient_maps,
    direct_sum,
    identity_map,
    kernel,
    submodule,
    zero_map,
    zero_module,
)


class Complex:
    """Bounded complex of right modules.

    Args:
        algebra: Common algebra of all entries.
        entries: Module per degree; absent degrees are zero.
        diffs: Differential per degree i, a map entry(i) -> entry(i+1).
        check: Verify shapes and d * d = 0.
    """

    def __init__(
        self,
        algebra: PathAlgebra,
        entries: Dict[int, Module],
        diffs: Dict[int, ModuleMap],
        check: bool = True,
    ):
        self.algebra = algebra
        self.entries = {i: m for i, m in entries.items() if m.total_dim > 0}
        self.diffs = {}
        for i, f in diffs.items():
            if i in self.entries and (i + 1) in self.entries:
                self.diffs[i] = f
        if check:
            for i, m in self.entries.items():
                if m.algebra is not algebra:
                    raise AlgebraMismatch("entry in degree %d uses another algebra" % i)
            for i in self.entries:
                if (i + 1) in self.entries and i not in self.diffs:
                    raise NotAComplex("missing differential out of degree %d" % i)
            for i, f in self.diffs.items():
                if not f.source.same_presentation(self.entries[i]) or not f.target.same_presentation(
                    self.entries[i + 1]
                ):
                    raise NotAComplex("differential at degree %d has wrong endpoints" % i)
            for i in self.diffs:
                if (i + 1) in self.diffs:
                    if not self.diffs[i].then(self.diffs[i + 1]).is_zero():
                        raise NotAComplex("d o d is nonzero at degree %d" % i)

    def entry(self, i: int) -> Module:
        m = self.entries.get(i)
        return m if m is not None else zero_module(self.algebra)

    def d(self, i: int) -> ModuleMap:
        f = self.diffs.get(i)
        if f is not None:
            return f
        return zero_map(self.entry(i), self.entry(i + 1))

    def support(self) -> List[int]:
        return sorted(self.entries)

    def is_zero_complex(self) -> bool:
        return not self.entries

    def total_dim(self) -> int:
        return sum(m.total_dim for m in self.entries.values())

    def describe(self) -> str:
        if self.is_zero_complex():
            return "0"
        parts = []
        for i in self.support():
            parts.append("%d:%s" % (i, self.entries[i].describe()))
        return "[" + ", ".join(parts) + "]"


class ChainMap:
    """Degreewise module maps commuting with the differentials."""

    def __init__(self, source: Complex, target: Complex, comps: Dict[int, ModuleMap], check: bool = True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("chain map between different algebras")
        self.source = source
        self.target = target
        self.comps = {
            i: f
            for i, f in comps.items()
            if f.source.total_dim > 0 and f.target.total_dim > 0
        }
        if check:
            for i, f in self.comps.items():
                if not f.source.same_presentation(source.entry(i)) or not f.target.same_presentation(target.entry(i)):
                    raise NotAChainMap("component at degree %d has wrong endpoints" % i)
            degrees = set(source.support()) | set(target.support())
            for i in degrees:
                lhs = self.comp(i).then(target.d(i))
                rhs = source.d(i).then(self.comp(i + 1))
                for bl, br in zip(lhs.blocks, rhs.blocks):
                    if not source.algebra.field.equal(bl, br):
                        raise NotAChainMap("does not commute with d at degree %d" % i)

    def comp(self, i: int) -> ModuleMap:
        f = self.comps.get(i)
        if f is not None:
            return f
        return zero_map(self.source.entry(i), self.target.entry(i))

    def then(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for i in set(self.comps) | set(other.comps):
            comps[i] = self.comp(i).then(other.comp(i))
        return ChainMap(self.source, other.target, comps, check=False)

    def add(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for i in set(self.comps) | set(other.comps):
            comps[i] = self.comp(i).add(other.comp(i))
        return ChainMap(self.source, self.target, comps, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: f.scale(c) for i, f in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps.values())


def stalk_complex(m: Module, degree: int = 0) -> Complex:
    return Complex(m.algebra, {degree: m}, {}, check=False)


def identity_chain_map(x: Complex) -> ChainMap:
    return ChainMap(x, x, {i: identity_map(x.entries[i]) for i in x.entries}, check=False)


def zero_chain_map(x: Complex, y: Complex) -> ChainMap:
    return ChainMap(x, y, {}, check=False)


def shift_complex(x: Complex, n: int) -> Complex:
    f = x.algebra.field
    sign = f.scalar_from_int(-1 if n % 2 else 1)
    entries = {i - n: m for i, m in x.entries.items()}
    diffs = {}
    for i, dmap in x.diffs.items():
        diffs[i - n] = dmap.scale(sign) if n % 2 else dmap
    return Complex(x.algebra, entries, diffs, check=False)


def shift_chain_map(fm: ChainMap, n: int) -> ChainMap:
    src = shift_complex(fm.source, n)
    tgt = shift_complex(fm.target, n)
    return ChainMap(src, tgt, {i - n: g for i, g in fm.comps.items()}, check=False)


def direct_sum_complexes(parts: Sequence[Complex]) -> Tuple[Complex, List[ChainMap], List[ChainMap]]:
    if not parts:
        raise ValueError("empty direct sum of complexes")
    alg = parts[0].algebra
    degrees = sorted({i for p in parts for i in p.support()})
    entries: Dict[int, Module] = {}
    incl_comps: List[Dict[int, ModuleMap]] = [dict() for _ in parts]
    proj_comps: List[Dict[int, ModuleMap]] = [dict() for _ in parts]
    sums: Dict[int, Tuple] = {}
    for i in degrees:
        total, incls, projs = direct_sum([p.entry(i) for p in parts])
        entries[i] = total
        sums[i] = (incls, projs)
        for k in range(len(parts)):
            incl_comps[k][i] = incls[k]
            proj_comps[k][i] = projs[k]
    diffs: Dict[int, ModuleMap] = {}
    f = alg.field
    for i in degrees:
        if (i + 1) not in entries:
            continue
        blocks = []
        for v in range(alg.quiver.num_vertices):
            blocks.append(f.zeros(entries[i].dims[v], entries[i + 1].dims[v]))
        acc = zero_map(entries[i], entries[i + 1])
        for k, p in enumerate(parts):
            contrib = sums[i][1][k].then(p.d(i)).then(sums[i + 1][0][k])
            acc = acc.add(contrib)
        diffs[i] = acc
    total_complex = Complex(alg, entries, diffs, check=False)
    incls = [ChainMap(parts[k], total_complex, incl_comps[k], check=False) for k in range(len(parts))]
    projs = [ChainMap(total_complex, parts[k], proj_comps[k], check=False) for k in range(len(parts))]
    return total_complex, incls, projs


# -- cones and triangles -------------------------------------------------


class Triangle:
    """A distinguished triangle a -> b -> c -> a[1]."""

    def __init__(self, f: ChainMap, g: ChainMap, h: ChainMap):
        self.f = f
        self.g = g
        self.h = h


def cone(fm: ChainMap) -> Tuple[Complex, ChainMap, ChainMap]:
    """Cone with the inclusion of the target and projection to source[1]."""
    x, y = fm.source, fm.target
    alg = x.algebra
    f = alg.field
    degs = sorted(set(i - 1 for i in x.entries) | set(y.entries))
    entries: Dict[int, Module] = {}
    pieces: Dict[int, Tuple] = {}
    for i in degs:
        total, incls, projs = direct_sum([x.entry(i + 1), y.entry(i)])
        entries[i] = total
        pieces[i] = (incls, projs)
    diffs: Dict[int, ModuleMap] = {}
    minus = f.scalar_from_int(-1)
    for i in degs:
        if (i + 1) not in entries:
            continue
        acc = zero_map(entries[i], entries[i + 1])
        # (x, y) -> (-x d_X, x f + y d_Y)
        acc = acc.add(pieces[i][1][0].then(x.d(i + 1).scale(minus)).then(pieces[i + 1][0][0]))
        acc = acc.add(pieces[i][1][0].then(fm.comp(i + 1)).then(pieces[i + 1][0][1]))
        acc = acc.add(pieces[i][1][1].then(y.d(i)).then(pieces[i + 1][0][1]))
        diffs[i] = acc
    c = Complex(alg, entries, diffs, check=False)
    incl = ChainMap(y, c, {i: pieces[i][0][1] for i in degs if i in c.entries and y.entry(i).total_dim}, check=False)
    xs = shift_complex(x, 1)
    proj = ChainMap(c, xs, {i: pieces[i][1][0] for i in degs if i in c.entries and x.entry(i + 1).total_dim}, check=False)
    return c, incl, proj


def triangle_of_map(fm: ChainMap) -> Triangle:
    c, incl, proj = cone(fm)
    return Triangle(fm, incl, proj)


def cocone(fm: ChainMap) -> Tuple[Complex, ChainMap]:
    """Complex W with a map W -> source completing f to a triangle.

    W is cone(f)[-1]; the returned map is the projection onto the
    source.
    """
    c, _, _ = cone(fm)
    w = shift_complex(c, -1)
    x = fm.source
    comps = {}
    for i in w.support():
        # w entry at degree i is x^i (+) y^{i-1}; project to x^i.
        total = w.entries[i]
        f = x.algebra.field
        blocks = []
        for v in range(x.algebra.quiver.num_vertices):
            xd = x.entry(i).dims[v]
            yd = fm.target.entry(i - 1).dims[v]
            b = f.zeros(xd + yd, xd)
            for r in range(xd):
                b[r, r] = f.one_scalar()
            blocks.append(b)
        if x.entry(i).total_dim:
            comps[i] = ModuleMap(total, x.entry(i), blocks, check=False)
    return w, ChainMap(w, x, comps)


# -- cohomology ----------------------------------------------------------


class CohomologyData:
    """Cohomology in one degree with the maps needed to induce morphisms.

    Attributes:
        module: H^i as a module.
        ker_rows: Per-vertex rows of ker d^i inside the degree i entry.
        proj: Per-vertex matrices from kernel coordinates to H coords.
        lift: Per-vertex matrices from H coordinates to kernel coords.
    """

    def __init__(self, module, ker_rows, proj, lift):
        self.module = module
        self.ker_rows = ker_rows
        self.proj = proj
        self.lift = lift


def cohomology_data(x: Complex, i: int) -> CohomologyData:
    alg = x.algebra
    f = alg.field
    nv = alg.quiver.num_vertices
    dmap = x.d(i)
    ker_mod, ker_incl = kernel(dmap)
    ker_rows = [ker_incl.blocks[v] for v in range(nv)]
    prev = x.d(i - 1)
    projs = []
    lifts = []
    dims = []
    boundary_in_ker = []
    for v in range(nv):
        img = f.row_space(prev.blocks[v])
        coords = f.solve_left(ker_rows[v], img)
        if coords is None:
            raise NotAComplex("boundaries are not cycles; d o d != 0")
        boundary_in_ker.append(coords)
    for v in range(nv):
        p, l = _quotient_maps(f, boundary_in_ker[v], ker_mod.dims[v])
        projs.append(p)
        lifts.append(l)
        dims.append(p.shape[1])
    action = []
    q = alg.quiver
    for ai, a in enumerate(q.arrows):
        u = q.vertex_index[a.source]
        w = q.vertex_index[a.target]
        action.append(f.matmul(f.matmul(lifts[u], ker_mod.action[ai]), projs[w]))
    h = Module(alg, dims, action, check=False)
    return CohomologyData(h, ker_rows, projs, lifts)


def cohomology(x: Complex, i: int) -> Module:
    return cohomology_data(x, i).module


def induced_map(fm: ChainMap, i: int, hx: Optional[CohomologyData] = None, hy: Optional[CohomologyData] = None) -> ModuleMap:
    """Map H^i(source) -> H^i(target) induced by a chain map."""
    if hx is None:
        hx = cohomology_data(fm.source, i)
    if hy is None:
        hy = cohomology_data(fm.target, i)
    f = fm.source.algebra.field
    nv = fm.source.algebra.quiver.num_vertices
    blocks = []
    for v in range(nv):
        moved = f.matmul(f.matmul(hx.lift[v], hx.ker_rows[v]), fm.comp(i).blocks[v])
        coords = f.solve_left(hy.ker_rows[v], moved)
        if coords is None:
            raise NotAChainMap("image of a cycle is not a cycle")
        blocks.append(f.matmul(coords, hy.proj[v]))
    return ModuleMap(hx.module, hy.module, blocks, check=False)


def is_quasi_iso(fm: ChainMap) -> bool:
    degrees = set(fm.source.support()) | set(fm.target.support())
    for i in sorted(degrees):
        if not induced_map(fm, i).is_isomorphism():
            return False
    return True


def cohomology_amplitude(x: Complex) -> List[int]:
    """Degrees with nonzero cohomology."""
    return [i for i in x.support() if cohomology(x, i).total_dim > 0]


# -- truncations ---------------------------------------------------------


def soft_truncate_above(x: Complex, n: int) -> Tuple[Complex, ChainMap]:
    """Subcomplex with cohomology only in degrees <= n, and its inclusion.

    Degree n becomes ker d^n; degrees above n vanish.
    """
    alg = x.algebra
    f = alg.field
    ker_mod, ker_incl = kernel(x.d(n))
    entries = {i: m for i, m in x.entries.items() if i < n}
    diffs = {i: d for i, d in x.diffs.items() if i + 1 < n}
    comps: Dict[int, ModuleMap] = {i: identity_map(m) for i, m in entries.items()}
    if ker_mod.total_dim:
        entries[n] = ker_mod
        comps[n] = ker_incl
        if (n - 1) in entries:
            rest = []
            for v in range(alg.quiver.num_vertices):
                sol = f.solve_left(ker_incl.blocks[v], x.d(n - 1).blocks[v])
                if sol is None:
                    raise NotAComplex("image of d does not land in the kernel")
                rest.append(sol)
            diffs[n - 1] = ModuleMap(entries[n - 1], ker_mod, rest, check=False)
    t = Complex(alg, entries, diffs, check=False)
    incl = ChainMap(t, x, {i: c for i, c in comps.items() if i in t.entries}, check=False)
    return t, incl


def soft_truncate_below(x: Complex, m: int) -> Tuple[Complex, ChainMap]:
    """Quotient with cohomology only in degrees >= m, and the projection.

    Degree m becomes coker d^{m-1}; degrees below m vanish.
    """
    alg = x.algebra
    f = alg.field
    nv = alg.quiver.num_vertices
    prev = x.d(m - 1)
    projs = []
    lifts = []
    dims = []
    for v in range(nv):
        p, l = _quotient_maps(f, f.row_space(prev.blocks[v]), x.entry(m).dims[v])
        projs.append(p)
        lifts.append(l)
        dims.append(p.shape[1])
    action = []
    q = alg.quiver
    base = x.entry(m)
    for ai, a in enumerate(q.arrows):
        u = q.vertex_index[a.source]
        w = q.vertex_index[a.target]
        action.append(f.matmul(f.matmul(lifts[u], base.action[ai]), projs[w]))
    cok = Module(alg, dims, action, check=False)
    entries = {i: mod for i, mod in x.entries.items() if i > m}
    diffs = {i: d for i, d in x.diffs.items() if i > m}
    comps: Dict[int, ModuleMap] = {i: identity_map(mod) for i, mod in entries.items()}
    if cok.total_dim:
        entries[m] = cok
        comps[m] = ModuleMap(base, cok, projs, check=False)
        if (m + 1) in entries:
            blocks = [f.matmul(lifts[v], x.d(m).blocks[v]) for v in range(nv)]
            diffs[m] = ModuleMap(cok, entries[m + 1], blocks, check=False)
    t = Complex(alg, entries, diffs, check=False)
    proj = ChainMap(x, t, {i: c for i, c in comps.items() if i in t.entries and i in x.entries}, check=False)
    return t, proj


def brutal_above(x: Complex, m: int) -> Complex:
    """Degrees >= m of x, differentials unchanged."""
    entries = {i: mod for i, mod in x.entries.items() if i >= m}
    diffs = {i: d for i, d in x.diffs.items() if i >= m}
    return Complex(x.algebra, entries, diffs, check=False)


def brutal_below(x: Complex, m: int) -> Complex:
    """Degrees < m of x, differentials unchanged."""
    entries = {i: mod for i, mod in x.entries.items() if i < m}
    diffs = {i: d for i, d in x.diffs.items() if i + 1 < m}
    return Complex(x.algebra, entries, diffs, check=False)


def brutal_triangle(x: Complex, m: int) -> Tuple[Complex, Complex, ChainMap, ChainMap, ChainMap]:
    """Split x as brutal_above, brutal_below with the connecting map.

    Returns (high, low, incl: high -> x, proj: x -> low,
    delta: low -> high[1]) where delta's only component is d^{m-1}.
    """
    high = brutal_above(x, m)
    low = brutal_below(x, m)
    incl = ChainMap(high, x, {i: identity_map(mod) for i, mod in high.entries.items()}, check=False)
    proj = ChainMap(x, low, {i: identity_map(mod) for i, mod in low.entries.items()}, check=False)
    highs = shift_complex(high, 1)
    comps = {}
    if (m - 1) in low.entries and m in high.entries:
        comps[m - 1] = ModuleMap(low.entries[m - 1], highs.entries[m - 1], x.d(m - 1).blocks, check=False)
    delta = ChainMap(low, highs, comps)
    return high, low, incl, proj, delta


# -- homotopies and chain map spaces ------------------------------------


def _chain_map_system(x: Complex, y: Complex, shift_by: int):
    """Unknown layout for degreewise module maps x^i -> y^{i + shift_by}."""
    alg = x.algebra
    nv = alg.quiver.num_vertices
    layout = []
    total = 0
    for i in sorted(set(x.support())):
        for v in range(nv):
            rows = x.entry(i).dims[v]
            cols = y.entry(i + shift_by).dims[v]
            if rows and cols:
                layout.append((i, v, rows, cols, total))
                total += rows * cols
    return layout, total


def _lookup(layout, i, v):
    for (ii, vv, r, c, off) in layout:
        if ii == i and vv == v:
            return (r, c, off)
    return None


def chain_map_space(x: Complex, y: Complex) -> List[ChainMap]:
    """Basis of the space of chain maps x -> y."""
    from .field import kron

    alg = x.algebra
    f = alg.field
    q = alg.quiver
    nv = q.num_vertices
    layout, total = _chain_map_system(x, y, 0)
    if total == 0:
        return []
    eq_blocks = []

    def add_equation(cols_and_mats, nrows):
        if nrows == 0:
            return
        block = f.zeros(nrows, total)
        any_col = False
        for off, width, mat in cols_and_mats:
            if mat is None:
                continue
            block[:, off : off + width] = f.add(block[:, off : off + width], mat)
            any_col = True
        if any_col or nrows:
            eq_blocks.append(block)

    minus_one = f.scalar_from_int(-1)
    for i in sorted(set(x.support()) | set(y.support())):
        # module map condition per arrow
        for ai, a in enumerate(q.arrows):
            u = q.vertex_index[a.source]
            w = q.vertex_index[a.target]
            rows = x.entry(i).dims[u] * y.entry(i).dims[w]
            if rows == 0:
                continue
            cols = []
            lw = _lookup(layout, i, w)
            if lw:
                cols.append((lw[2], lw[0] * lw[1], kron(f, x.entry(i).action[ai], f.eye(y.entry(i).dims[w]))))
            lu = _lookup(layout, i, u)
            if lu:
                cols.append((lu[2], lu[0] * lu[1], f.scale(minus_one, kron(f, f.eye(x.entry(i).dims[u]), y.entry(i).action[ai].T))))
            add_equation(cols, rows)
        # commutation with d per vertex
        for v in range(nv):
            rows = x.entry(i).dims[v] * y.entry(i + 1).dims[v]
            if rows == 0:
                continue
            cols = []
            li = _lookup(layout, i, v)
            if li:
                cols.append((li[2], li[0] * li[1], kron(f, f.eye(x.entry(i).dims[v]), y.d(i).blocks[v].T)))
            ln = _lookup(layout, i + 1, v)
            if ln:
                cols.append((ln[2], ln[0] * ln[1], f.scale(minus_one, kron(f, x.d(i).blocks[v], f.eye(y.entry(i + 1).dims[v])))))
            add_equation(cols, rows)
    if eq_blocks:
        system = f.stack_rows(eq_blocks, total)
        sols = f.right_kernel(system)
    else:
        sols = f.eye(total)
    out = []
    for k in range(sols.shape[0]):
        comps: Dict[int, ModuleMap] = {}
        by_degree: Dict[int, List[np.ndarray]] = {}
        for i in x.support():
            blocks = []
            for v in range(nv):
                info = _lookup(layout, i, v)
                if info:
                    r, c, off = info
                    blocks.append(sols[k, off : off + r * c].reshape(r, c))
                else:
                    blocks.append(f.zeros(x.entry(i).dims[v], y.entry(i).dims[v]))
            if x.entry(i).total_dim and y.entry(i).total_dim:
                comps[i] = ModuleMap(x.entry(i), y.entry(i), blocks, check=False)
        out.append(ChainMap(x, y, comps, check=False))
    return out


def vec_chain_map(fm: ChainMap) -> np.ndarray:
    """Flattened coordinates over the joint support, for span computations."""
    f = fm.source.algebra.field
    parts = []
    for i in sorted(set(fm.source.support())):
        for v in range(fm.source.algebra.quiver.num_vertices):
            b = fm.comp(i).blocks[v]
            if b.size:
                parts.append(b.reshape(1, -1))
    if not parts:
        return f.zeros(1, 0)
    return np.hstack(parts)


def null_homotopy(fm: ChainMap) -> Optional[Dict[int, ModuleMap]]:
    """Degreewise maps h^i: x^i -> y^{i-1} with f = d h + h d, or None."""
    from .field import kron

    x, y = fm.source, fm.target
    alg = x.algebra
    f = alg.field
    q = alg.quiver
    nv = q.num_vertices
    layout, total = _chain_map_system(x, y, -1)
    eq_blocks = []
    rhs_parts = []
    minus_one = f.scalar_from_int(-1)
    for i in sorted(set(x.support()) | set(y.support())):
        for ai, a in enumerate(q.arrows):
            u = q.vertex_index[a.source]
            w = q.vertex_index[a.target]
            rows = x.entry(i).dims[u] * y.entry(i - 1).dims[w]
            if rows == 0:
                continue
            block = f.zeros(rows, total)
            lw = _lookup(layout, i, w)
            if lw:
                block[:, lw[2] : lw[2] + lw[0] * lw[1]] = kron(f, x.entry(i).action[ai], f.eye(y.entry(i - 1).dims[w]))
            lu = _lookup(layout, i, u)
            if lu:
                block[:, lu[2] : lu[2] + lu[0] * lu[1]] = f.sub(
                    block[:, lu[2] : lu[2] + lu[0] * lu[1]],
                    kron(f, f.eye(x.entry(i).dims[u]), y.entry(i - 1).action[ai].T),
                )
            eq_blocks.append(block)
            rhs_parts.append(f.zeros(1, rows))
        for v in range(nv):
            rows = x.entry(i).dims[v] * y.entry(i).dims[v]
            if rows == 0:
                continue
            block = f.zeros(rows, total)
            ln = _lookup(layout, i + 1, v)
            if ln:
                block[:, ln[2] : ln[2] + ln[0] * ln[1]] = kron(f, x.d(i).blocks[v], f.eye(y.entry(i).dims[v]))
            li = _lookup(layout, i, v)
            if li:
                block[:, li[2] : li[2] + li[0] * li[1]] = f.add(
                    block[:, li[2] : li[2] + li[0] * li[1]],
                    kron(f, f.eye(x.entry(i).dims[v]), y.d(i - 1).blocks[v].T),
                )
            eq_blocks.append(block)
            rhs_parts.append(fm.comp(i).blocks[v].reshape(1, -1))
    if not eq_blocks:
        return {}
    system = f.stack_rows(eq_blocks, total)
    rhs = np.hstack(rhs_parts)
    sol = f.solve_right(system, rhs.T) if total else (None if not f.is_zero(rhs) else f.zeros(0, 1))
    if sol is None:
        return None
    out: Dict[int, ModuleMap] = {}
    for i in x.support():
        blocks = []
        for v in range(nv):
            info = _lookup(layout, i, v)
            if info:
                r, c, off = info
                blocks.append(sol[off : off + r * c, 0].reshape(r, c))
            else:
                blocks.append(f.zeros(x.entry(i).dims[v], y.entry(i - 1).dims[v]))
        if x.entry(i).total_dim and y.entry(i - 1).total_dim:
            out[i] = ModuleMap(x.entry(i), y.entry(i - 1), blocks, check=False)
    return out


def is_null_homotopic(fm: ChainMap) -> bool:
    return null_homotopy(fm) is not None


def homotopy_classes_dim(x: Complex, y: Complex) -> int:
    """Dimension of chain maps modulo homotopy."""
    maps = chain_map_space(x, y)
    if not maps:
        return 0
    f = x.algebra.field
    width = vec_chain_map(maps[0]).shape[1]
    boundary = _boundary_space(x, y)
    allvecs = f.stack_rows([vec_chain_map(m) for m in maps], width)
    joint = f.stack_rows([allvecs, boundary], width)
    return f.rank(joint) - f.rank(boundary)


def _boundary_space(x: Complex, y: Complex) -> np.ndarray:
    """Row span of all maps d h + h d for degreewise h of shift -1."""
    alg = x.algebra
    f = alg.field
    nv = alg.quiver.num_vertices
    hom_bases: Dict[int, List[ModuleMap]] = {}
    from .modules import hom_space

    for i in x.support():
        if y.entry(i - 1).total_dim and x.entry(i).total_dim:
            hom_bases[i] = hom_space(x.entry(i), y.entry(i - 1))
    rows = []
    width = None
    for i, basis in hom_bases.items():
        for h in basis:
            comps: Dict[int, ModuleMap] = {}
            # contribution in degree i - 1: d_x then h
            if x.entry(i - 1).total_dim and y.entry(i - 1).total_dim:
                comps[i - 1] = x.d(i - 1).then(h)
            # contribution in degree i: h then d_y
            if x.entry(i).total_dim and y.entry(i).total_dim:
                prev = comps.get(i)
                add = h.then(y.d(i - 1))
                comps[i] = add if prev is None else prev.add(add)
            fm = ChainMap(x, y, comps, check=False)
            v = vec_chain_map(fm)
            width = v.shape[1]
            rows.append(v)
    if width is None:
        probe = ChainMap(x, y, {}, check=False)
        width = vec_chain_map(probe).shape[1]
    return f.row_space(f.stack_rows(rows, width))
