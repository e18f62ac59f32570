"""Projective presentations and derived hom spaces.

A bounded complex of modules is replaced by a quasi-isomorphic perfect
complex built degree by degree: the top entry is resolved by projective
covers, the rest recursively, and the two halves are glued as the cone
of a lifted connecting map.  Hom spaces in the derived category are then
homotopy classes of chain maps out of the perfect replacement.

When an algebra has infinite global dimension the resolution is cut off
below a floor degree.  Hom computations stay exact as long as the floor
lies strictly below the support of the target, which callers arrange
through the window argument.
"""

from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .complexes import (
    ChainMap,
    Complex,
    brutal_triangle,
    homotopy_classes_dim,
    shift_chain_map,
    shift_complex,
    stalk_complex,
)
from .errors import BudgetExceeded, WindowTooSmall
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    hom_space,
    kernel,
    projective_module,
    radical_rows,
    zero_map,
)
from .perfect import (
    PerfectComplex,
    PerfectMap,
    Realization,
    cone_perfect,
    element_from_projective_map,
    minimize,
    nakayama,
    realize,
    realize_map,
    shift_perfect,
)

DEFAULT_WINDOW = 8

Objectish = Union[Module, Complex, PerfectComplex]


def _cover_data(m: Module) -> Tuple[List[str], Module, List[ModuleMap], List[ModuleMap], ModuleMap]:
    """Projective cover with the summand vertex list and sum bookkeeping."""
    alg = m.algebra
    f = alg.field
    q = alg.quiver
    rad = radical_rows(m)
    verts: List[str] = []
    gens: List[Tuple[int, np.ndarray]] = []
    for v in range(q.num_vertices):
        r, pivots = f.rref(rad[v]) if rad[v].size else (rad[v], [])
        for c in range(m.dims[v]):
            if c not in pivots:
                g = f.zeros(1, m.dims[v])
                g[0, c] = f.one_scalar()
                verts.append(q.vertices[v])
                gens.append((v, g))
    mods = [projective_module(alg, v) for v in verts]
    total, incls, projs = direct_sum(mods)
    cov: Optional[ModuleMap] = None
    for s, (v, g) in enumerate(gens):
        vs = verts[s]
        vi = q.vertex_index[vs]
        groups: List[List] = [[] for _ in range(q.num_vertices)]
        for p in alg.basis:
            if p[0] == vi:
                groups[q.path_target(p)].append(p)
        blocks = []
        for w in range(q.num_vertices):
            blk = f.zeros(len(groups[w]), m.dims[w])
            for r_i, p in enumerate(groups[w]):
                blk[r_i : r_i + 1, :] = f.matmul(g, m.path_action(p))
            blocks.append(blk)
        piece = projs[s].then(ModuleMap(mods[s], m, blocks, check=False))
        cov = piece if cov is None else cov.add(piece)
    if cov is None:
        cov = zero_map(total, m)
    return verts, total, incls, projs, cov


class Presentation:
    """Perfect replacement of a complex, with the comparison map.

    Attributes:
        perfect: The perfect complex.
        realization: Its module-entry realization.
        qis: Chain map realization.complex -> target complex.  A
            quasi-isomorphism when complete, and an isomorphism on
            cohomology above the floor otherwise.
        complete: Whether every resolution terminated.
        floor: Lowest degree to which entries were computed.
    """

    def __init__(self, perfect: PerfectComplex, realization: Realization, qis: ChainMap, complete: bool, floor: int):
        self.perfect = perfect
        self.realization = realization
        self.qis = qis
        self.complete = complete
        self.floor = floor


def resolve_module(m: Module, depth: int) -> Tuple[PerfectComplex, Realization, ChainMap, bool]:
    """Minimal projective resolution with at most depth syzygy steps.

    Returns (perfect, realization, qis to the degree-0 stalk, complete).
    """
    alg = m.algebra
    if m.is_zero():
        p = PerfectComplex(alg, {}, {}, check=False)
        r = realize(p)
        return p, r, ChainMap(r.complex, stalk_complex(m, 0), {}, check=False), True
    verts0, p0, incls0, projs0, cov0 = _cover_data(m)
    entries = {0: verts0}
    diffs: Dict[int, List[List[np.ndarray]]] = {}
    prev = (verts0, p0, incls0, projs0)
    cur_ker, cur_incl = kernel(cov0)
    complete = cur_ker.is_zero()
    step = 0
    while not complete and step < depth:
        step += 1
        verts, ps, incls, projs, covk = _cover_data(cur_ker)
        full = covk.then(cur_incl)
        mat = []
        for j, a in enumerate(verts):
            row = []
            for k, b in enumerate(prev[0]):
                comp = incls[j].then(full).then(prev[3][k])
                row.append(element_from_projective_map(alg, a, b, comp))
            mat.append(row)
        entries[-step] = verts
        diffs[-step] = mat
        prev = (verts, ps, incls, projs)
        cur_ker, cur_incl = kernel(covk)
        complete = cur_ker.is_zero()
    perfect = PerfectComplex(alg, entries, diffs, check=True)
    r = realize(perfect)
    qis = ChainMap(r.complex, stalk_complex(m, 0), {0: cov0}, check=True)
    return perfect, r, qis, complete


def _vec_map(fm: ModuleMap) -> np.ndarray:
    parts = [b.reshape(1, -1) for b in fm.blocks if b.size]
    if not parts:
        return fm.source.algebra.field.zeros(1, 0)
    return np.hstack(parts)


def _raw_width(m: Module, n: Module) -> int:
    return sum(m.dims[v] * n.dims[v] for v in range(len(m.dims)))


def lift_through_quasi_iso(phi: ChainMap, q: ChainMap) -> Tuple[ChainMap, Dict[int, ModuleMap]]:
    """Chain map g with q o g homotopic to phi, plus the homotopy.

    Args:
        phi: Chain map from w to t.
        q: Comparison map from b to t, typically a quasi-isomorphism.

    Returns:
        (g, h) with g: w -> b a chain map and h the degreewise maps
        w^i -> t^{i-1} witnessing q o g - phi = d h + h d.

    Raises:
        WindowTooSmall: If no lift exists at this resolution depth.
    """
    w = phi.source
    t = phi.target
    b = q.source
    f = w.algebra.field
    gbasis: Dict[int, List[ModuleMap]] = {}
    hbasis: Dict[int, List[ModuleMap]] = {}
    for i in w.support():
        if not b.entry(i).is_zero():
            gbasis[i] = hom_space(w.entry(i), b.entry(i))
        if not t.entry(i - 1).is_zero():
            hbasis[i] = hom_space(w.entry(i), t.entry(i - 1))
    columns: List[Tuple[str, int, int]] = []
    for i in sorted(gbasis):
        for ti in range(len(gbasis[i])):
            columns.append(("g", i, ti))
    for i in sorted(hbasis):
        for ti in range(len(hbasis[i])):
            columns.append(("h", i, ti))
    col_index = {key: idx for idx, key in enumerate(columns)}
    blocks: List[Tuple[str, int, int]] = []
    for i in sorted(set(w.support()) | set(b.support())):
        width = _raw_width(w.entry(i), b.entry(i + 1))
        if width:
            blocks.append(("chain", i, width))
    for i in w.support():
        width = _raw_width(w.entry(i), t.entry(i))
        if width:
            blocks.append(("lift", i, width))
    total_rows = sum(wd for _, _, wd in blocks)
    a_mat = f.zeros(total_rows, len(columns))
    b_vec = f.zeros(total_rows, 1)
    row0 = 0
    for kind, i, width in blocks:
        if kind == "chain":
            for ti, g in enumerate(gbasis.get(i, [])):
                vec = _vec_map(g.then(b.d(i)))
                a_mat[row0 : row0 + width, col_index[("g", i, ti)]] = vec.reshape(-1)
            for ti, g in enumerate(gbasis.get(i + 1, [])):
                vec = _vec_map(w.d(i).then(g))
                col = col_index[("g", i + 1, ti)]
                a_mat[row0 : row0 + width, col] = f.sub(
                    a_mat[row0 : row0 + width, col : col + 1], vec.reshape(-1, 1)
                ).reshape(-1)
        else:
            for ti, g in enumerate(gbasis.get(i, [])):
                vec = _vec_map(g.then(q.comp(i)))
                a_mat[row0 : row0 + width, col_index[("g", i, ti)]] = vec.reshape(-1)
            for ti, h in enumerate(hbasis.get(i, [])):
                vec = _vec_map(h.then(t.d(i - 1)))
                col = col_index[("h", i, ti)]
                a_mat[row0 : row0 + width, col] = f.sub(
                    a_mat[row0 : row0 + width, col : col + 1], vec.reshape(-1, 1)
                ).reshape(-1)
            for ti, h in enumerate(hbasis.get(i + 1, [])):
                vec = _vec_map(w.d(i).then(h))
                col = col_index[("h", i + 1, ti)]
                a_mat[row0 : row0 + width, col] = f.sub(
                    a_mat[row0 : row0 + width, col : col + 1], vec.reshape(-1, 1)
                ).reshape(-1)
            b_vec[row0 : row0 + width, 0] = _vec_map(phi.comp(i)).reshape(-1)
        row0 += width
    if len(columns) == 0:
        if f.is_zero(b_vec):
            return ChainMap(w, b, {}, check=False), {}
        raise WindowTooSmall("no unknowns available for a required lift")
    sol = f.solve_right(a_mat, b_vec)
    if sol is None:
        raise WindowTooSmall("resolution floor too high to lift the connecting map")
    comps: Dict[int, ModuleMap] = {}
    for i, basis in gbasis.items():
        acc = zero_map(w.entry(i), b.entry(i))
        for ti, g in enumerate(basis):
            c = sol[col_index[("g", i, ti)], 0]
            if not f.is_zero(sol[col_index[("g", i, ti)] : col_index[("g", i, ti)] + 1, 0:1]):
                acc = acc.add(g.scale(c))
        comps[i] = acc
    homs: Dict[int, ModuleMap] = {}
    for i, basis in hbasis.items():
        acc = zero_map(w.entry(i), t.entry(i - 1))
        for ti, h in enumerate(basis):
            c = sol[col_index[("h", i, ti)], 0]
            if not f.is_zero(sol[col_index[("h", i, ti)] : col_index[("h", i, ti)] + 1, 0:1]):
                acc = acc.add(h.scale(c))
        homs[i] = acc
    return ChainMap(w, b, comps, check=False), homs


def module_chainmap_to_perfect(g: ChainMap, src: Presentation, tgt: Presentation) -> PerfectMap:
    """Extract element entries of a realized chain map between presentations."""
    alg = src.perfect.algebra
    mats: Dict[int, List[List[np.ndarray]]] = {}
    for i in src.perfect.support():
        tvs = tgt.perfect.entry(i)
        svs = src.perfect.entry(i)
        if not tvs:
            continue
        mat = []
        for j, a in enumerate(svs):
            row = []
            for k, b in enumerate(tvs):
                comp = src.realization.incls[(i, j)].then(g.comp(i)).then(tgt.realization.projs[(i, k)])
                row.append(element_from_projective_map(alg, a, b, comp))
            mat.append(row)
        mats[i] = mat
    return PerfectMap(src.perfect, tgt.perfect, mats, check=True)


def lift_map_to_perfect(fm: ChainMap, src: Presentation, tgt: Presentation) -> PerfectMap:
    """Perfect-world representative of a map between presented complexes.

    Args:
        fm: Chain map from the complex presented by src to the complex
            presented by tgt.
        src: Presentation whose qis targets fm.source.
        tgt: Presentation whose qis targets fm.target.
    """
    g, _ = lift_through_quasi_iso(src.qis.then(fm), tgt.qis)
    return module_chainmap_to_perfect(g, src, tgt)


def presentation(x: Union[Module, Complex], floor: Optional[int] = None) -> Presentation:
    """Perfect replacement of a module or bounded complex.

    Args:
        x: Module (placed in degree 0) or bounded complex.
        floor: Keep resolution entries down to this degree.  Defaults to
            DEFAULT_WINDOW degrees below the lowest support.
    """
    if isinstance(x, Module):
        x = stalk_complex(x, 0)
    if x.is_zero_complex():
        p = PerfectComplex(x.algebra, {}, {}, check=False)
        r = realize(p)
        return Presentation(p, r, ChainMap(r.complex, x, {}, check=False), True, 0)
    supp = x.support()
    if floor is None:
        floor = min(supp) - DEFAULT_WINDOW
    if len(supp) == 1:
        n = supp[0]
        depth = max(n - floor, 0)
        perf, r, qis, complete = resolve_module(x.entry(n), depth)
        sh = shift_perfect(perf, -n)
        rsh = realize(sh)
        comps = {n: qis.comp(0)}
        qsh = ChainMap(rsh.complex, x, comps, check=False)
        return Presentation(sh, rsh, qsh, complete, floor)
    m = max(supp)
    high, low, _, _, delta = brutal_triangle(x, m)
    delta0 = shift_chain_map(delta, -1)
    pl = presentation(shift_complex(low, -1), floor)
    ph = presentation(high, floor)
    phi = pl.qis.then(delta0)
    g, h = lift_through_quasi_iso(phi, ph.qis)
    gp = module_chainmap_to_perfect(g, pl, ph)
    cone_p, _, _ = cone_perfect(gp)
    rc = realize(cone_p)
    comps: Dict[int, ModuleMap] = {}
    for i in rc.complex.support():
        target = x.entry(i)
        if target.is_zero():
            continue
        nx = len(pl.perfect.entry(i + 1))
        acc = None
        if i < m:
            for j in range(nx):
                piece = rc.projs[(i, j)].then(pl.realization.incls[(i + 1, j)]).then(pl.qis.comp(i + 1))
                acc = piece if acc is None else acc.add(piece)
        else:
            hm = h.get(i + 1)
            if hm is not None:
                for j in range(nx):
                    piece = rc.projs[(i, j)].then(pl.realization.incls[(i + 1, j)]).then(hm)
                    acc = piece if acc is None else acc.add(piece)
            for k in range(len(ph.perfect.entry(i))):
                piece = rc.projs[(i, nx + k)].then(ph.realization.incls[(i, k)]).then(ph.qis.comp(i))
                acc = piece if acc is None else acc.add(piece)
        if acc is not None:
            comps[i] = acc
    big_qis = ChainMap(rc.complex, x, comps, check=True)
    small, _, iota = minimize(cone_p)
    rs = realize(small)
    qis = realize_map(iota, rs, rc).then(big_qis)
    return Presentation(small, rs, qis, pl.complete and ph.complete, floor)


def _normalize(x: Objectish) -> Union[Complex, PerfectComplex]:
    if isinstance(x, Module):
        return stalk_complex(x, 0)
    return x


def derived_hom_dim(x: Objectish, z: Objectish, n: int = 0, window: int = DEFAULT_WINDOW) -> int:
    """Dimension of derived-category maps x -> z[n].

    Perfect sources are used directly.  Module-complex sources are
    replaced by a perfect presentation resolved far enough below the
    target support that the answer is exact; if that would need more
    than window extra degrees, the computation refuses.
    """
    x = _normalize(x)
    z = _normalize(z)
    if isinstance(z, PerfectComplex):
        z = realize(z).complex
    y = shift_complex(z, n)
    if y.is_zero_complex():
        return 0
    if isinstance(x, PerfectComplex):
        if x.is_zero_complex():
            return 0
        return homotopy_classes_dim(realize(x).complex, y)
    if x.is_zero_complex():
        return 0
    floor = min(y.support()) - 2
    if min(x.support()) - floor > window + 1:
        raise BudgetExceeded(
            "derived hom needs resolution %d degrees below the source, window is %d"
            % (min(x.support()) - floor, window)
        )
    pres = presentation(x, min(floor, min(x.support()) - 1))
    return homotopy_classes_dim(pres.realization.complex, y)


def hom_table(x: Objectish, z: Objectish, lo: int, hi: int, window: int = DEFAULT_WINDOW) -> Dict[int, int]:
    """Dimensions of derived maps x -> z[n] for n in [lo, hi]."""
    return {n: derived_hom_dim(x, z, n, window=window) for n in range(lo, hi + 1)}


def check_nakayama_duality(t: PerfectComplex, z: Objectish, n: int = 0) -> Tuple[int, int, bool]:
    """Compare dim Hom(t, z[n]) with dim Hom(z, nu(t)[-n]).

    The two sides are dual over the base field, so their dimensions must
    agree.  Returns (left, right, equal).
    """
    z = _normalize(z)
    if isinstance(z, PerfectComplex):
        z = realize(z).complex
    left = derived_hom_dim(t, z, n)
    nut = nakayama(t).complex
    if z.is_zero_complex() or nut.is_zero_complex():
        right = 0
    else:
        right = homotopy_classes_dim(z, shift_complex(nut, -n))
    return left, right, left == right
