"""Perfect complexes: bounded complexes of direct sums of P_v.

A perfect complex stores, per degree, the list of vertices whose
indecomposable projectives P_v make up that entry, and differentials as
matrices of algebra elements.  The entry in row j, column k is an
element of e_b A e_a (a = j-th source vertex, b = k-th target vertex),
acting by left multiplication P_a -> P_b.  Composition "first F then G"
therefore multiplies G entries on the left.

This element-level form supports exact minimal models by Gaussian
elimination (removing invertible entries), exact homotopy class spaces,
and the self-duality relabeling that sends P_v to the injective I_v
without changing any matrix.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import PathAlgebra
from .complexes import ChainMap, Complex
from .errors import AlgebraMismatch, NotAChainMap, NotPerfect
from .field import kron
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    injective_module,
    projective_module,
    zero_map,
)
from .quiver import Path

AMat = List[List[np.ndarray]]


def hom_element_rows(alg: PathAlgebra, a: str, b: str) -> np.ndarray:
    """Basis rows, in algebra coordinates, of Hom(P_a, P_b) = e_b A e_a."""
    paths = alg.paths_between(b, a)
    rows = [alg.path_vector(p) for p in paths]
    return alg.field.stack_rows(rows, alg.dim)


class _HomBasis:
    """Hom(P_a, P_b) basis rows with precomputed coordinate extraction."""

    __slots__ = ("field", "rows", "pivots", "u")

    def __init__(self, f, rows: np.ndarray):
        self.field = f
        self.rows = rows
        n, dim = rows.shape
        aug = f.zeros(n, dim + n)
        if n:
            aug[:, :dim] = rows
            aug[:, dim:] = f.eye(n)
        r, pivots = f.rref(aug)
        self.pivots = list(pivots)
        self.u = r[:n, dim:]

    def coords(self, mat: np.ndarray) -> Optional[np.ndarray]:
        """Coordinates c with c @ rows = mat, or None if mat is outside."""
        f = self.field
        c = f.matmul(mat[:, self.pivots], self.u)
        if not f.equal(f.matmul(c, self.rows), mat):
            return None
        return c


def _hom_basis(alg: PathAlgebra, a: str, b: str) -> _HomBasis:
    cache = getattr(alg, "_hom_bases", None)
    if cache is None:
        cache = {}
        alg._hom_bases = cache
    hb = cache.get((a, b))
    if hb is None:
        hb = _HomBasis(alg.field, hom_element_rows(alg, a, b))
        cache[(a, b)] = hb
    return hb


def zero_amat(alg: PathAlgebra, rows: int, cols: int) -> AMat:
    f = alg.field
    return [[f.zeros(1, alg.dim) for _ in range(cols)] for _ in range(rows)]


def amat_then(alg: PathAlgebra, first: AMat, second: AMat) -> AMat:
    """Composite of first: X->Y then second: Y->Z, entrywise g * f."""
    f = alg.field
    rows = len(first)
    mids = len(second)
    cols = len(second[0]) if mids else 0
    if rows == 0 or cols == 0 or mids == 0:
        return zero_amat(alg, rows, cols)
    t = alg.mul_tensor()
    if t.dtype == np.int64:
        fa = np.stack([np.concatenate([first[i][j] for j in range(mids)]) for i in range(rows)])
        sa = np.stack([np.concatenate([second[j][k] for k in range(cols)]) for j in range(mids)])
        c = np.einsum("jkp,ijq,pqr->ikr", sa, fa, t) % f.p
        return [[c[i, k].reshape(1, -1) for k in range(cols)] for i in range(rows)]
    out = zero_amat(alg, rows, cols)
    for i in range(rows):
        for k in range(cols):
            acc = f.zeros(1, alg.dim)
            for j in range(mids):
                acc = f.add(acc, alg.multiply(second[j][k], first[i][j]))
            out[i][k] = acc
    return out


def amat_add(alg: PathAlgebra, a: AMat, b: AMat) -> AMat:
    f = alg.field
    return [[f.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def amat_scale(alg: PathAlgebra, c, a: AMat) -> AMat:
    f = alg.field
    return [[f.scale(c, x) for x in row] for row in a]


def amat_is_zero(alg: PathAlgebra, a: AMat) -> bool:
    f = alg.field
    return all(f.is_zero(x) for row in a for x in row)


def amat_equal(alg: PathAlgebra, a: AMat, b: AMat) -> bool:
    f = alg.field
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        if not all(f.equal(x, y) for x, y in zip(ra, rb)):
            return False
    return True


class PerfectComplex:
    """Bounded complex with projective-summand entries.

    Args:
        algebra: Base algebra.
        entries: Degree -> list of vertex names of the summands.
        diffs: Degree i -> matrix of algebra elements mapping entry i
            to entry i + 1; diffs[i][j][k] must lie in e_b A e_a.
        check: Validate entry membership and d after d = 0.
    """

    def __init__(
        self,
        algebra: PathAlgebra,
        entries: Dict[int, List[str]],
        diffs: Dict[int, AMat],
        check: bool = True,
    ):
        self.algebra = algebra
        self.entries = {i: list(v) for i, v in entries.items() if v}
        self.diffs = {
            i: d for i, d in diffs.items() if i in self.entries and (i + 1) in self.entries
        }
        if check:
            self._validate()

    def _validate(self) -> None:
        alg = self.algebra
        f = alg.field
        for i, vs in self.entries.items():
            for v in vs:
                if v not in alg.quiver.vertex_index:
                    raise NotPerfect("unknown vertex %r in degree %d" % (v, i))
        for i in self.entries:
            if (i + 1) in self.entries and i not in self.diffs:
                raise NotPerfect("missing differential out of degree %d" % i)
        for i, d in self.diffs.items():
            src = self.entries[i]
            tgt = self.entries[i + 1]
            if len(d) != len(src) or any(len(row) != len(tgt) for row in d):
                raise NotPerfect("differential at degree %d has wrong shape" % i)
            for j, a in enumerate(src):
                for k, b in enumerate(tgt):
                    x = d[j][k]
                    ea = alg.vertex_idempotent(a)
                    eb = alg.vertex_idempotent(b)
                    clipped = alg.multiply(alg.multiply(eb, x), ea)
                    if not f.equal(clipped, x):
                        raise NotPerfect(
                            "entry (%d, %d) at degree %d is not in e_%s A e_%s"
                            % (j, k, i, b, a)
                        )
        for i in self.diffs:
            if (i + 1) in self.diffs:
                comp = amat_then(self.algebra, self.diffs[i], self.diffs[i + 1])
                if not amat_is_zero(self.algebra, comp):
                    raise NotPerfect("d o d nonzero at degree %d" % i)

    def entry(self, i: int) -> List[str]:
        return self.entries.get(i, [])

    def d(self, i: int) -> AMat:
        d = self.diffs.get(i)
        if d is not None:
            return d
        return zero_amat(self.algebra, len(self.entry(i)), len(self.entry(i + 1)))

    def support(self) -> List[int]:
        return sorted(self.entries)

    def is_zero_complex(self) -> bool:
        return not self.entries

    def summand_count(self) -> int:
        return sum(len(v) for v in self.entries.values())

    def describe(self) -> str:
        if self.is_zero_complex():
            return "0"
        parts = []
        for i in self.support():
            parts.append("%d:[%s]" % (i, ",".join("P_%s" % v for v in self.entries[i])))
        return " ".join(parts)

    def is_minimal(self) -> bool:
        """True when every differential entry lies in the radical."""
        f = self.algebra.field
        for d in self.diffs.values():
            for row in d:
                for x in row:
                    for bi, p in enumerate(self.algebra.basis):
                        if len(p[1]) == 0 and not f.is_zero(x[0:1, bi : bi + 1]):
                            return False
        return True


class PerfectMap:
    """Chain map of perfect complexes with algebra-element entries."""

    def __init__(
        self,
        source: PerfectComplex,
        target: PerfectComplex,
        mats: Dict[int, AMat],
        check: bool = True,
    ):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("map between complexes over different algebras")
        self.source = source
        self.target = target
        self.mats = {
            i: m for i, m in mats.items() if source.entry(i) and target.entry(i)
        }
        if check:
            alg = source.algebra
            for i in set(source.support()) | set(target.support()):
                lhs = amat_then(alg, self.mat(i), target.d(i))
                rhs = amat_then(alg, source.d(i), self.mat(i + 1))
                if not amat_equal(alg, lhs, rhs):
                    raise NotAChainMap("perfect map fails to commute at degree %d" % i)

    def mat(self, i: int) -> AMat:
        m = self.mats.get(i)
        if m is not None:
            return m
        return zero_amat(self.source.algebra, len(self.source.entry(i)), len(self.target.entry(i)))

    def then(self, other: "PerfectMap") -> "PerfectMap":
        alg = self.source.algebra
        mats = {}
        for i in set(self.mats) | set(other.mats):
            mats[i] = amat_then(alg, self.mat(i), other.mat(i))
        return PerfectMap(self.source, other.target, mats, check=False)

    def add(self, other: "PerfectMap") -> "PerfectMap":
        alg = self.source.algebra
        mats = {}
        for i in set(self.mats) | set(other.mats):
            mats[i] = amat_add(alg, self.mat(i), other.mat(i))
        return PerfectMap(self.source, self.target, mats, check=False)

    def scale(self, c) -> "PerfectMap":
        alg = self.source.algebra
        return PerfectMap(self.source, self.target, {i: amat_scale(alg, c, m) for i, m in self.mats.items()}, check=False)

    def is_zero(self) -> bool:
        return all(amat_is_zero(self.source.algebra, m) for m in self.mats.values())


def identity_perfect_map(x: PerfectComplex) -> PerfectMap:
    alg = x.algebra
    mats = {}
    for i, vs in x.entries.items():
        m = zero_amat(alg, len(vs), len(vs))
        for j, v in enumerate(vs):
            m[j][j] = alg.vertex_idempotent(v)
        mats[i] = m
    return PerfectMap(x, x, mats, check=False)


def regular_perfect(alg: PathAlgebra, degree: int = 0) -> PerfectComplex:
    return PerfectComplex(alg, {degree: list(alg.quiver.vertices)}, {}, check=False)


def projective_stalk(alg: PathAlgebra, vertex: str, degree: int = 0) -> PerfectComplex:
    return PerfectComplex(alg, {degree: [vertex]}, {}, check=False)


def shift_perfect(x: PerfectComplex, n: int) -> PerfectComplex:
    alg = x.algebra
    entries = {i - n: v for i, v in x.entries.items()}
    sign = alg.field.scalar_from_int(-1)
    diffs = {}
    for i, d in x.diffs.items():
        diffs[i - n] = amat_scale(alg, sign, d) if n % 2 else d
    return PerfectComplex(alg, entries, diffs, check=False)


def shift_perfect_map(fm: PerfectMap, n: int) -> PerfectMap:
    return PerfectMap(
        shift_perfect(fm.source, n),
        shift_perfect(fm.target, n),
        {i - n: m for i, m in fm.mats.items()},
        check=False,
    )


def direct_sum_perfect(parts: Sequence[PerfectComplex]) -> PerfectComplex:
    alg = parts[0].algebra
    entries: Dict[int, List[str]] = {}
    offsets: List[Dict[int, int]] = []
    for p in parts:
        offs = {}
        for i, vs in p.entries.items():
            offs[i] = len(entries.get(i, []))
            entries.setdefault(i, []).extend(vs)
        offsets.append(offs)
    diffs: Dict[int, AMat] = {}
    for i, vs in entries.items():
        if (i + 1) not in entries:
            continue
        d = zero_amat(alg, len(vs), len(entries[i + 1]))
        for pi, p in enumerate(parts):
            pd = p.diffs.get(i)
            if pd is None:
                continue
            ro = offsets[pi][i]
            co = offsets[pi][i + 1]
            for j, row in enumerate(pd):
                for k, x in enumerate(row):
                    d[ro + j][co + k] = x
        diffs[i] = d
    return PerfectComplex(alg, entries, diffs, check=False)


def cone_perfect(fm: PerfectMap) -> Tuple[PerfectComplex, PerfectMap, PerfectMap]:
    """Cone with inclusion of the target and projection onto source[1]."""
    x, y = fm.source, fm.target
    alg = x.algebra
    f = alg.field
    degs = sorted(set(i - 1 for i in x.entries) | set(y.entries))
    entries: Dict[int, List[str]] = {}
    for i in degs:
        entries[i] = list(x.entry(i + 1)) + list(y.entry(i))
    minus = f.scalar_from_int(-1)
    diffs: Dict[int, AMat] = {}
    for i in degs:
        if (i + 1) not in entries:
            continue
        nx, ny = len(x.entry(i + 1)), len(y.entry(i))
        mx, my = len(x.entry(i + 2)), len(y.entry(i + 1))
        d = zero_amat(alg, nx + ny, mx + my)
        dx = x.d(i + 1)
        for j in range(nx):
            for k in range(mx):
                d[j][k] = f.scale(minus, dx[j][k])
        fmat = fm.mat(i + 1)
        for j in range(nx):
            for k in range(my):
                d[j][mx + k] = fmat[j][k]
        dy = y.d(i)
        for j in range(ny):
            for k in range(my):
                d[nx + j][mx + k] = dy[j][k]
        diffs[i] = d
    c = PerfectComplex(alg, entries, diffs, check=False)
    incl_mats: Dict[int, AMat] = {}
    proj_mats: Dict[int, AMat] = {}
    for i in degs:
        nx, ny = len(x.entry(i + 1)), len(y.entry(i))
        im = zero_amat(alg, ny, nx + ny)
        for j, v in enumerate(y.entry(i)):
            im[j][nx + j] = alg.vertex_idempotent(v)
        incl_mats[i] = im
        pm = zero_amat(alg, nx + ny, nx)
        for j, v in enumerate(x.entry(i + 1)):
            pm[j][j] = alg.vertex_idempotent(v)
        proj_mats[i] = pm
    incl = PerfectMap(y, c, incl_mats, check=False)
    proj = PerfectMap(c, shift_perfect(x, 1), proj_mats, check=False)
    return c, incl, proj


def brutal_above_perfect(x: PerfectComplex, m: int) -> PerfectComplex:
    entries = {i: v for i, v in x.entries.items() if i >= m}
    diffs = {i: d for i, d in x.diffs.items() if i >= m}
    return PerfectComplex(x.algebra, entries, diffs, check=False)


def brutal_below_perfect(x: PerfectComplex, m: int) -> PerfectComplex:
    entries = {i: v for i, v in x.entries.items() if i < m}
    diffs = {i: d for i, d in x.diffs.items() if i + 1 < m}
    return PerfectComplex(x.algebra, entries, diffs, check=False)


# -- realization as module complexes ------------------------------------


def projective_map_from_element(alg: PathAlgebra, a: str, b: str, elem: np.ndarray) -> ModuleMap:
    """Module map P_a -> P_b of left multiplication by elem in e_b A e_a."""
    f = alg.field
    q = alg.quiver
    pa = projective_module(alg, a)
    pb = projective_module(alg, b)
    ai = q.vertex_index[a]
    bi = q.vertex_index[b]
    paths_a = [p for p in alg.basis if p[0] == ai]
    paths_b = [p for p in alg.basis if p[0] == bi]
    ga: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    gb: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    for p in paths_a:
        ga[q.path_target(p)].append(p)
    for p in paths_b:
        gb[q.path_target(p)].append(p)
    blocks = []
    for v in range(q.num_vertices):
        blk = f.zeros(len(ga[v]), len(gb[v]))
        for r, p in enumerate(ga[v]):
            img = alg.multiply(elem, alg.path_vector(p))
            for c, qq in enumerate(gb[v]):
                bi2 = alg.basis.index(qq)
                blk[r, c] = img[0, bi2]
        blocks.append(blk)
    return ModuleMap(pa, pb, blocks, check=False)


def injective_map_from_element(alg: PathAlgebra, a: str, b: str, elem: np.ndarray) -> ModuleMap:
    """Module map I_a -> I_b induced by elem in e_b A e_a under duality."""
    f = alg.field
    q = alg.quiver
    ia = injective_module(alg, a)
    ib = injective_module(alg, b)
    ai = q.vertex_index[a]
    bi = q.vertex_index[b]
    paths_a = [p for p in alg.basis if q.path_target(p) == ai]
    paths_b = [p for p in alg.basis if q.path_target(p) == bi]
    ga: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    gb: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    for p in paths_a:
        ga[p[0]].append(p)
    for p in paths_b:
        gb[p[0]].append(p)
    blocks = []
    for v in range(q.num_vertices):
        blk = f.zeros(len(ga[v]), len(gb[v]))
        for c, p in enumerate(gb[v]):
            prod = alg.multiply(alg.path_vector(p), elem)
            for r, qq in enumerate(ga[v]):
                bi2 = alg.basis.index(qq)
                blk[r, c] = prod[0, bi2]
        blocks.append(blk)
    return ModuleMap(ia, ib, blocks, check=False)


class Realization:
    """Module-entry complex of a perfect complex with summand bookkeeping."""

    def __init__(self, complex_: Complex, incls: Dict[Tuple[int, int], ModuleMap], projs: Dict[Tuple[int, int], ModuleMap]):
        self.complex = complex_
        self.incls = incls
        self.projs = projs


def realize(x: PerfectComplex, injective_entries: bool = False) -> Realization:
    """Module-entry complex, with P_v (or I_v) summand inclusions."""
    alg = x.algebra
    build = injective_module if injective_entries else projective_module
    mapper = injective_map_from_element if injective_entries else projective_map_from_element
    entries: Dict[int, Module] = {}
    incls: Dict[Tuple[int, int], ModuleMap] = {}
    projs: Dict[Tuple[int, int], ModuleMap] = {}
    for i, vs in x.entries.items():
        mods = [build(alg, v) for v in vs]
        total, ins, prs = direct_sum(mods)
        entries[i] = total
        for j in range(len(vs)):
            incls[(i, j)] = ins[j]
            projs[(i, j)] = prs[j]
    diffs: Dict[int, ModuleMap] = {}
    for i, d in x.diffs.items():
        src = entries[i]
        tgt = entries[i + 1]
        acc = None
        for j, a in enumerate(x.entries[i]):
            for k, b in enumerate(x.entries[i + 1]):
                if alg.field.is_zero(d[j][k]):
                    continue
                piece = projs[(i, j)].then(mapper(alg, a, b, d[j][k])).then(incls[(i + 1, k)])
                acc = piece if acc is None else acc.add(piece)
        if acc is None:
            acc = zero_map(src, tgt)
        diffs[i] = acc
    return Realization(Complex(alg, entries, diffs, check=False), incls, projs)


def realize_map(fm: PerfectMap, rx: Realization, ry: Realization, injective_entries: bool = False) -> ChainMap:
    alg = fm.source.algebra
    mapper = injective_map_from_element if injective_entries else projective_map_from_element
    comps: Dict[int, ModuleMap] = {}
    for i in fm.source.support():
        if not fm.target.entry(i):
            continue
        acc = None
        for j, a in enumerate(fm.source.entry(i)):
            for k, b in enumerate(fm.target.entry(i)):
                x = fm.mat(i)[j][k]
                if alg.field.is_zero(x):
                    continue
                piece = rx.projs[(i, j)].then(mapper(alg, a, b, x)).then(ry.incls[(i, k)])
                acc = piece if acc is None else acc.add(piece)
        if acc is not None:
            comps[i] = acc
    return ChainMap(rx.complex, ry.complex, comps, check=False)


def nakayama(x: PerfectComplex) -> Realization:
    """Realization of the Nakayama image: same matrices on injectives."""
    return realize(x, injective_entries=True)


def element_from_projective_map(alg: PathAlgebra, a: str, b: str, fm: ModuleMap) -> np.ndarray:
    """Inverse of projective_map_from_element: read off the image of e_a."""
    q = alg.quiver
    f = alg.field
    ai = q.vertex_index[a]
    bi = q.vertex_index[b]
    paths_b = [p for p in alg.basis if p[0] == bi]
    gb: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    for p in paths_b:
        gb[q.path_target(p)].append(p)
    paths_a = [p for p in alg.basis if p[0] == ai]
    ga: List[List[Path]] = [[] for _ in range(q.num_vertices)]
    for p in paths_a:
        ga[q.path_target(p)].append(p)
    # e_a is the first basis path in the vertex a block of P_a.
    row = ga[ai].index((ai, ()))
    out = f.zeros(1, alg.dim)
    img = fm.blocks[ai][row : row + 1, :]
    for c, qq in enumerate(gb[ai]):
        out = f.add(out, f.scale(img[0, c], alg.path_vector(qq)))
    return out


def _vec_module_map(fm: ModuleMap) -> np.ndarray:
    f = fm.source.algebra.field
    cells = [b.reshape(1, -1) for b in fm.blocks if b.size]
    if not cells:
        return f.zeros(1, 0)
    return np.concatenate(cells, axis=1)


def element_from_injective_map(alg: PathAlgebra, a: str, b: str, fm: ModuleMap) -> np.ndarray:
    """Inverse of injective_map_from_element on the hom basis span.

    Raises:
        NotPerfect: The map is not induced by any element of e_b A e_a.
    """
    f = alg.field
    basis = hom_element_rows(alg, a, b)
    n = basis.shape[0]
    target = _vec_module_map(fm)
    if n == 0:
        if f.is_zero(target):
            return f.zeros(1, alg.dim)
        raise NotPerfect("map between injectives is not element-induced")
    imgs = [
        _vec_module_map(injective_map_from_element(alg, a, b, basis[i : i + 1, :]))
        for i in range(n)
    ]
    coords = f.solve_left(f.stack_rows(imgs, target.shape[1]), target)
    if coords is None:
        raise NotPerfect("map between injectives is not element-induced")
    return f.matmul(coords, basis)


# -- minimal models ------------------------------------------------------


def local_inverse(alg: PathAlgebra, vertex: str, x: np.ndarray) -> Optional[np.ndarray]:
    """Inverse of x inside e_v A e_v when x has a unit component."""
    f = alg.field
    e = alg.vertex_idempotent(vertex)
    tidx = None
    for bi, p in enumerate(alg.basis):
        if p == (alg.quiver.vertex_index[vertex], ()):
            tidx = bi
    lam = x[0, tidx]
    if f.is_zero(x[0:1, tidx : tidx + 1]):
        return None
    lam_inv = f.inv(lam)
    n = f.sub(e, f.scale(lam_inv, x))
    inv = e
    power = e
    for _ in range(alg.nilpotency_index + 1):
        power = alg.multiply(power, n)
        if f.is_zero(power):
            break
        inv = f.add(inv, power)
    return f.scale(lam_inv, inv)


def _find_pivot(x: PerfectComplex) -> Optional[Tuple[int, int, int, np.ndarray]]:
    alg = x.algebra
    for i in sorted(x.diffs):
        d = x.diffs[i]
        src = x.entries[i]
        tgt = x.entries[i + 1]
        for j, a in enumerate(src):
            for k, b in enumerate(tgt):
                if a != b:
                    continue
                inv = local_inverse(alg, a, d[j][k])
                if inv is not None:
                    return (i, j, k, inv)
    return None


def _drop(lst: List, idx: int) -> List:
    return [x for t, x in enumerate(lst) if t != idx]


def minimize(x: PerfectComplex) -> Tuple[PerfectComplex, PerfectMap, PerfectMap]:
    """Minimal model with the homotopy equivalence (pi, iota).

    Returns (xmin, pi: x -> xmin, iota: xmin -> x) with pi o iota the
    identity of xmin and iota o pi homotopic to the identity of x.
    """
    alg = x.algebra
    f = alg.field
    current = x
    pi = identity_perfect_map(x)
    iota = identity_perfect_map(x)
    minus = f.scalar_from_int(-1)
    while True:
        found = _find_pivot(current)
        if found is None:
            break
        i, j0, k0, cinv = found
        src = current.entries[i]
        tgt = current.entries[i + 1]
        d = current.diffs[i]
        new_entries = {deg: list(vs) for deg, vs in current.entries.items()}
        new_entries[i] = _drop(src, j0)
        new_entries[i + 1] = _drop(tgt, k0)
        new_diffs: Dict[int, AMat] = {}
        for deg, mat in current.diffs.items():
            if deg == i:
                rows = []
                for j in range(len(src)):
                    if j == j0:
                        continue
                    row = []
                    for k in range(len(tgt)):
                        if k == k0:
                            continue
                        corr = alg.multiply(alg.multiply(d[j0][k], cinv), d[j][k0])
                        row.append(f.sub(d[j][k], corr))
                    rows.append(row)
                new_diffs[deg] = rows
            elif deg == i - 1:
                new_diffs[deg] = [_drop(row, j0) for row in mat]
            elif deg == i + 1:
                new_diffs[deg] = _drop(mat, k0)
            else:
                new_diffs[deg] = [list(row) for row in mat]
        smaller = PerfectComplex(alg, new_entries, new_diffs, check=False)
        # pi_step: current -> smaller
        pi_mats: Dict[int, AMat] = {}
        for deg, vs in smaller.entries.items():
            m = zero_amat(alg, len(current.entry(deg)), len(vs))
            if deg == i:
                t = 0
                for j in range(len(src)):
                    if j == j0:
                        continue
                    m[j][t] = alg.vertex_idempotent(src[j])
                    t += 1
            elif deg == i + 1:
                t = 0
                for k in range(len(tgt)):
                    if k == k0:
                        continue
                    m[k][t] = alg.vertex_idempotent(tgt[k])
                    # correction from the dropped summand
                    t += 1
                t = 0
                for k in range(len(tgt)):
                    if k == k0:
                        continue
                    m[k0][t] = f.scale(minus, alg.multiply(d[j0][k], cinv))
                    t += 1
            else:
                for s, v in enumerate(vs):
                    m[s][s] = alg.vertex_idempotent(v)
            pi_mats[deg] = m
        pi_step = PerfectMap(current, smaller, pi_mats, check=False)
        # iota_step: smaller -> current
        io_mats: Dict[int, AMat] = {}
        for deg, vs in smaller.entries.items():
            m = zero_amat(alg, len(vs), len(current.entry(deg)))
            if deg == i:
                t = 0
                for j in range(len(src)):
                    if j == j0:
                        continue
                    m[t][j] = alg.vertex_idempotent(src[j])
                    m[t][j0] = f.scale(minus, alg.multiply(cinv, d[j][k0]))
                    t += 1
            elif deg == i + 1:
                t = 0
                for k in range(len(tgt)):
                    if k == k0:
                        continue
                    m[t][k] = alg.vertex_idempotent(tgt[k])
                    t += 1
            else:
                for s, v in enumerate(vs):
                    m[s][s] = alg.vertex_idempotent(v)
            io_mats[deg] = m
        iota_step = PerfectMap(smaller, current, io_mats, check=False)
        pi = pi.then(pi_step)
        iota = iota_step.then(iota)
        current = smaller
    return current, pi, iota


# -- chain maps and homotopy classes ------------------------------------


class _MapLayout:
    """Coordinate layout for degreewise element matrices x^i -> y^{i+s}."""

    def __init__(self, x: PerfectComplex, y: PerfectComplex, shift_by: int):
        alg = x.algebra
        self.alg = alg
        self.slots = []
        self.total = 0
        self.index = {}
        for i in sorted(x.entries):
            for j, a in enumerate(x.entry(i)):
                for k, b in enumerate(y.entry(i + shift_by)):
                    hb = _hom_basis(alg, a, b)
                    if hb.rows.shape[0]:
                        self.slots.append((i, j, k, hb, self.total))
                        self.index[(i, j, k)] = (hb, self.total)
                        self.total += hb.rows.shape[0]
        self.shift_by = shift_by
        self.x = x
        self.y = y

    def lookup(self, i: int, j: int, k: int):
        return self.index.get((i, j, k))

    def unpack(self, coords: np.ndarray) -> Dict[int, AMat]:
        alg = self.alg
        f = alg.field
        out: Dict[int, AMat] = {}
        for i in self.x.support():
            tgt = self.y.entry(i + self.shift_by)
            if not tgt:
                continue
            m = zero_amat(alg, len(self.x.entry(i)), len(tgt))
            for (ii, jj, kk, hb, off) in self.slots:
                if ii != i:
                    continue
                lam = coords[0:1, off : off + hb.rows.shape[0]]
                m[jj][kk] = f.matmul(lam, hb.rows)
            out[i] = m
        return out


def _chain_equations(layout: _MapLayout):
    """Rows of the linear system expressing 'commutes with d'.

    Returns (system, slots of equations) where each equation block is the
    algebra-coordinate row of one (degree, src row, tgt col) condition.
    """
    x, y = layout.x, layout.y
    alg = layout.alg
    f = alg.field
    blocks = []
    eq_index = []
    for i in sorted(set(x.support()) | set(y.support())):
        ns = len(x.entry(i))
        nt = len(y.entry(i + 1))
        for j in range(ns):
            for k in range(nt):
                row = f.zeros(alg.dim, layout.total) if layout.total else f.zeros(alg.dim, 0)
                # sum_m F^{i+1}[m][k] * dx[j][m]
                dx = x.d(i)
                for m in _diff_pattern(x, i)[0][j]:
                    slot = layout.lookup(i + 1, m, k)
                    if slot is None:
                        continue
                    hb, off = slot
                    mat = f.matmul(hb.rows, alg.right_matrix_of(dx[j][m]))
                    row[:, off : off + hb.rows.shape[0]] = f.add(
                        row[:, off : off + hb.rows.shape[0]], mat.T
                    )
                # minus sum_l dy[l][k] * F^i[j][l]
                dy = y.d(i)
                for l in _diff_pattern(y, i)[1][k]:
                    slot = layout.lookup(i, j, l)
                    if slot is None:
                        continue
                    hb, off = slot
                    mat = f.matmul(hb.rows, alg.left_matrix_of(dy[l][k]))
                    row[:, off : off + hb.rows.shape[0]] = f.sub(
                        row[:, off : off + hb.rows.shape[0]], mat.T
                    )
                blocks.append(row)
                eq_index.append((i, j, k))
    if blocks:
        system = np.vstack(blocks)
    else:
        system = f.zeros(0, layout.total)
    return system, eq_index


def chain_maps_perfect(x: PerfectComplex, y: PerfectComplex) -> List[PerfectMap]:
    """Basis of chain maps x -> y."""
    alg = x.algebra
    f = alg.field
    layout = _MapLayout(x, y, 0)
    if layout.total == 0:
        return []
    system, _ = _chain_equations(layout)
    sols = f.right_kernel(system)
    out = []
    for r in range(sols.shape[0]):
        mats = layout.unpack(sols[r : r + 1, :])
        out.append(PerfectMap(x, y, mats, check=False))
    return out


def _homotopy_images(x: PerfectComplex, y: PerfectComplex):
    """Echelon row span (in chain-map coordinates) of all boundaries d h + h d.

    Returns (basis, pivot columns, coordinate layout).
    """
    alg = x.algebra
    f = alg.field
    hlay = _MapLayout(x, y, -1)
    clay = _MapLayout(x, y, 0)
    if hlay.total == 0 or clay.total == 0:
        return f.zeros(0, clay.total), [], clay
    packed = f.zeros(hlay.total, clay.total)
    def accumulate(slot, hrows, hoff, mat):
        chb, coff = slot
        coords = chb.coords(mat)
        if coords is None:
            raise NotPerfect("boundary entry leaves its hom space")
        nh, nc = hrows.shape[0], chb.rows.shape[0]
        sub = packed[hoff : hoff + nh, coff : coff + nc]
        packed[hoff : hoff + nh, coff : coff + nc] = f.add(sub, coords)

    for (ih, j, l, hhb, hoff) in hlay.slots:
        hrows = hhb.rows
        # h entry x^ih_j -> y^{ih-1}_l, then the target differential
        dy = y.d(ih - 1)
        for k in _diff_pattern(y, ih - 1)[0][l]:
            slot = clay.lookup(ih, j, k)
            if slot is None:
                continue
            accumulate(slot, hrows, hoff, f.matmul(hrows, alg.left_matrix_of(dy[l][k])))
        # the source differential, then h at the next degree
        dx = x.d(ih - 1)
        for j2 in _diff_pattern(x, ih - 1)[1][j]:
            slot = clay.lookup(ih - 1, j2, l)
            if slot is None:
                continue
            accumulate(slot, hrows, hoff, f.matmul(hrows, alg.right_matrix_of(dx[j2][j])))
    basis, pivots = f.echelon(packed)
    return basis, pivots, clay


def _diff_pattern(z: PerfectComplex, i: int) -> Tuple[List[List[int]], List[List[int]]]:
    """Nonzero columns per row and nonzero rows per column of z.d(i)."""
    cache = getattr(z, "_diff_patterns", None)
    if cache is None:
        cache = {}
        z._diff_patterns = cache
    got = cache.get(i)
    if got is None:
        f = z.algebra.field
        d = z.d(i)
        rows = len(z.entry(i))
        cols = len(z.entry(i + 1))
        by_row: List[List[int]] = [[] for _ in range(rows)]
        by_col: List[List[int]] = [[] for _ in range(cols)]
        for j in range(rows):
            for k in range(cols):
                if not f.is_zero(d[j][k]):
                    by_row[j].append(k)
                    by_col[k].append(j)
        got = (by_row, by_col)
        cache[i] = got
    return got


def _pack_chain_map(layout: _MapLayout, mats: Dict[int, AMat]) -> np.ndarray:
    f = layout.alg.field
    out = f.zeros(1, layout.total)
    for (i, j, k, hb, off) in layout.slots:
        m = mats.get(i)
        if m is None:
            continue
        coords = hb.coords(m[j][k])
        if coords is None:
            raise NotPerfect("entry leaves its hom space")
        out[0:1, off : off + hb.rows.shape[0]] = coords
    return out


def hom_homotopy_classes(x: PerfectComplex, y: PerfectComplex) -> Tuple[List[PerfectMap], int]:
    """Representatives and dimension of chain maps modulo homotopy."""
    f = x.algebra.field
    maps = chain_maps_perfect(x, y)
    if not maps:
        return [], 0
    boundary, bpivots, clay = _homotopy_images(x, y)
    zero = f.zeros(1, 1)[0, 0]
    reps = []
    extra = []
    for fm in maps:
        v = _pack_chain_map(clay, {i: fm.mat(i) for i in fm.source.support()})
        r = f.reduce_rows(boundary, bpivots, v)
        for piv, row in extra:
            c = r[0, piv]
            if c != zero:
                r = f.sub(r, f.scale(c, row))
        nz = np.nonzero(r[0] != zero)[0]
        if nz.size == 0:
            continue
        piv = int(nz[0])
        extra.append((piv, f.scale(f.inv(r[0, piv]), r)))
        reps.append(fm)
    return reps, len(reps)


def is_null_homotopic_perfect(fm: PerfectMap) -> bool:
    f = fm.source.algebra.field
    boundary, bpivots, clay = _homotopy_images(fm.source, fm.target)
    v = _pack_chain_map(clay, {i: fm.mat(i) for i in fm.source.support()})
    return f.is_zero(f.reduce_rows(boundary, bpivots, v))


def zero_perfect_map(x: PerfectComplex, y: PerfectComplex) -> PerfectMap:
    return PerfectMap(x, y, {}, check=False)


def cocone_perfect(fm: PerfectMap) -> Tuple[PerfectComplex, PerfectMap]:
    """Complex w with a map w -> source completing fm to a triangle.

    w is cone(fm)[-1]; the returned map projects onto the source.
    """
    c, _, proj = cone_perfect(fm)
    shifted = shift_perfect_map(proj, -1)
    return shifted.source, PerfectMap(shifted.source, fm.source, shifted.mats, check=True)


def homotopy_classes_pairing(x: PerfectComplex, y: PerfectComplex):
    """Packed-coordinate data for maps x -> y modulo homotopy.

    Returns (layout, boundary rows, boundary pivots); a map's class vector
    is its packed coordinates, read modulo the boundary row space.
    """
    boundary, bpivots, clay = _homotopy_images(x, y)
    return clay, boundary, bpivots


def lift_map_along(fm: PerfectMap, through: PerfectMap) -> Optional[PerfectMap]:
    """Chain map u with (u then through) homotopic to fm, if one exists.

    Args:
        fm: Map a -> c.
        through: Map b -> c with the same target.

    Returns:
        A map a -> b, or None when fm does not factor up to homotopy.
    """
    alg = fm.source.algebra
    f = alg.field
    clay = _MapLayout(fm.source, fm.target, 0)
    if clay.total == 0:
        return zero_perfect_map(fm.source, through.source)
    target_vec = _pack_chain_map(clay, {i: fm.mat(i) for i in fm.source.support()})
    basis = chain_maps_perfect(fm.source, through.source)
    boundary, _, _ = _homotopy_images(fm.source, fm.target)
    rows = []
    for u in basis:
        comp = u.then(through)
        rows.append(_pack_chain_map(clay, {i: comp.mat(i) for i in fm.source.support()}))
    for r in range(boundary.shape[0]):
        rows.append(boundary[r : r + 1, :])
    mat = f.stack_rows(rows, clay.total) if rows else f.zeros(0, clay.total)
    sol = f.solve_left(mat, target_vec)
    if sol is None:
        return None
    out = zero_perfect_map(fm.source, through.source)
    for idx, u in enumerate(basis):
        if not f.is_zero(sol[0:1, idx : idx + 1]):
            out = out.add(u.scale(sol[0, idx]))
    return out


def colift_map_along(fm: PerfectMap, through: PerfectMap) -> Optional[PerfectMap]:
    """Chain map u with (through then u) homotopic to fm, if one exists.

    Args:
        fm: Map a -> c.
        through: Map a -> b with the same source.

    Returns:
        A map b -> c, or None when fm does not extend along through.
    """
    f = fm.source.algebra.field
    clay = _MapLayout(fm.source, fm.target, 0)
    if clay.total == 0:
        return zero_perfect_map(through.target, fm.target)
    target_vec = _pack_chain_map(clay, {i: fm.mat(i) for i in fm.source.support()})
    basis = chain_maps_perfect(through.target, fm.target)
    boundary, _, _ = _homotopy_images(fm.source, fm.target)
    rows = []
    for u in basis:
        comp = through.then(u)
        rows.append(_pack_chain_map(clay, {i: comp.mat(i) for i in fm.source.support()}))
    for r in range(boundary.shape[0]):
        rows.append(boundary[r : r + 1, :])
    mat = f.stack_rows(rows, clay.total) if rows else f.zeros(0, clay.total)
    sol = f.solve_left(mat, target_vec)
    if sol is None:
        return None
    out = zero_perfect_map(through.target, fm.target)
    for idx, u in enumerate(basis):
        if not f.is_zero(sol[0:1, idx : idx + 1]):
            out = out.add(u.scale(sol[0, idx]))
    return out


def homotopy_equivalent_over(fm: PerfectMap, gm: PerfectMap) -> bool:
    """Whether two maps with a common target have homotopy equivalent
    sources compatibly with the maps.

    Looks for u: source(fm) -> source(gm) and v back with u then gm
    homotopic to fm, v then fm homotopic to gm, and both round trips
    homotopic to the identity.
    """
    u = lift_map_along(fm, gm)
    v = lift_map_along(gm, fm)
    if u is None or v is None:
        return False
    f = fm.source.algebra.field
    minus = f.scalar_from_int(-1)
    round_x = u.then(v).add(identity_perfect_map(fm.source).scale(minus))
    round_y = v.then(u).add(identity_perfect_map(gm.source).scale(minus))
    return is_null_homotopic_perfect(round_x) and is_null_homotopic_perfect(round_y)


def mutually_homotopy_equivalent(a: PerfectComplex, b: PerfectComplex) -> bool:
    """Whether two perfect complexes are homotopy equivalent.

    Minimizes both sides, compares entry signatures, then searches for
    maps u: a -> b and v: b -> a whose two composites are homotopic to
    the identities.  For a fixed u the conditions on v are linear, so
    each candidate u costs one solve; candidates are the homotopy class
    representatives of maps a -> b plus weighted sums along a moment
    curve.  True certificates are exact; False means no candidate
    worked, which can undercount equivalences in contrived cases.
    """
    am, _, _ = minimize(a)
    bm, _, _ = minimize(b)
    siga = {i: sorted(am.entry(i)) for i in am.support()}
    sigb = {i: sorted(bm.entry(i)) for i in bm.support()}
    if siga != sigb:
        return False
    if am.is_zero_complex():
        return True
    f = am.algebra.field
    ureps, _ = hom_homotopy_classes(am, bm)
    vbasis = chain_maps_perfect(bm, am)
    if not ureps or not vbasis:
        return False
    alay, abound, apiv = homotopy_classes_pairing(am, am)
    blay, bbound, bpiv = homotopy_classes_pairing(bm, bm)
    ida = identity_perfect_map(am)
    idb = identity_perfect_map(bm)
    ta = f.reduce_rows(abound, apiv, _pack_chain_map(alay, {i: ida.mat(i) for i in am.support()}))
    tb = f.reduce_rows(bbound, bpiv, _pack_chain_map(blay, {i: idb.mat(i) for i in bm.support()}))
    target = np.concatenate([ta, tb], axis=1)
    candidates = list(ureps)
    if len(ureps) > 1:
        bound = sum(len(vs) for vs in am.entries.values()) * len(ureps) + 1
        for c in range(1, bound + 1):
            cf = f.scalar_from_int(c)
            total = ureps[0]
            weight = cf
            for u in ureps[1:]:
                total = total.add(u.scale(weight))
                weight = f.scalar_mul(weight, cf)
            candidates.append(total)
    for u in candidates:
        rows = []
        for vj in vbasis:
            uv = u.then(vj)
            vu = vj.then(u)
            ra = f.reduce_rows(abound, apiv, _pack_chain_map(alay, {i: uv.mat(i) for i in am.support()}))
            rb = f.reduce_rows(bbound, bpiv, _pack_chain_map(blay, {i: vu.mat(i) for i in bm.support()}))
            rows.append(np.concatenate([ra, rb], axis=1))
        mat = f.stack_rows(rows, target.shape[1])
        if f.solve_left(mat, target) is not None:
            return True
    return False
