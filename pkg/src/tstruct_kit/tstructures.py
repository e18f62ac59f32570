"""Membership tests and truncation triangles for t-structures.

A t-structure on bounded complexes is described here by one of four
finite data kinds sharing a single interface: a shifted standard
structure, a tilt along a torsion pair of modules, a compactly
generated structure cut out by Hom vanishing against a finite list of
perfect complexes, or the structure attached to a silting complex.
Standard and tilted variants decide membership degreewise on
cohomology.  Generated variants decide the coaisle exactly and reach
the aisle through an approximation tower whose verdicts carry the
depth at which they were obtained.
"""

from typing import Dict, List, Optional, Sequence, Tuple, Union

from .complexes import (
    ChainMap,
    Complex,
    cohomology,
    cohomology_amplitude,
    cohomology_data,
    cocone,
    cone,
    homotopy_classes_dim,
    is_null_homotopic,
    shift_complex,
    soft_truncate_above,
    soft_truncate_below,
    stalk_complex,
)
from .derived import presentation
from .errors import NotPerfect, UndecidedStructure, WindowMissing, WindowViolation
from .modules import Module, ModuleMap, regular_module
from .perfect import (
    PerfectComplex,
    PerfectMap,
    brutal_above_perfect,
    cone_perfect,
    direct_sum_perfect,
    hom_homotopy_classes,
    identity_perfect_map,
    is_null_homotopic_perfect,
    lift_map_along,
    minimize,
    realize,
    realize_map,
    regular_perfect,
    shift_perfect,
    shift_perfect_map,
    zero_amat,
)
from .torsion import TorsionPair

Objectish = Union[Module, Complex, PerfectComplex]

DEFAULT_DEPTH = 12


class Stabilized:
    """Tower verdict: the stage object passed the coaisle test."""

    def __init__(self, depth: int):
        self.depth = depth

    def __repr__(self):
        return "Stabilized(%d)" % self.depth

    def __eq__(self, other):
        return isinstance(other, Stabilized) and other.depth == self.depth

    def __hash__(self):
        return hash(("Stabilized", self.depth))


class DepthExceeded:
    """Tower verdict: the depth bound ran out with classes remaining."""

    def __init__(self, depth: int):
        self.depth = depth

    def __repr__(self):
        return "DepthExceeded(%d)" % self.depth

    def __eq__(self, other):
        return isinstance(other, DepthExceeded) and other.depth == self.depth

    def __hash__(self):
        return hash(("DepthExceeded", self.depth))


class Unknown:
    """Membership left open by a depth-bounded search.

    Refuses boolean coercion so an undecided answer can never slip
    through an if-test as either True or False.
    """

    def __init__(self, depth: int):
        self.depth = depth

    def __repr__(self):
        return "Unknown(%d)" % self.depth

    def __eq__(self, other):
        return isinstance(other, Unknown) and other.depth == self.depth

    def __hash__(self):
        return hash(("Unknown", self.depth))

    def __bool__(self):
        raise UndecidedStructure(
            "membership undecided at depth %d; compare against True or False explicitly" % self.depth
        )


class TStructureSpec:
    """Finite description of a t-structure.

    Args:
        variant: One of "standard", "hrs", "generated", "silting".
        algebra: Common algebra of all objects involved.
        shift: Shift parameter of the standard variant.
        pair: Torsion pair of the tilted variant.
        generators: Perfect complexes generating the aisle.
        window: Declared intermediacy window (m, n).
        tilt: Minimal silting complex of the silting variant.

    Raises:
        WindowMissing: Generated variant without a declared window.
        WindowViolation: Window with m > n.
    """

    def __init__(
        self,
        variant: str,
        algebra,
        shift: int = 0,
        pair: Optional[TorsionPair] = None,
        generators: Optional[Sequence[PerfectComplex]] = None,
        window: Optional[Tuple[int, int]] = None,
        tilt: Optional[PerfectComplex] = None,
    ):
        if variant not in ("standard", "hrs", "generated", "silting"):
            raise ValueError("unknown t-structure variant %r" % variant)
        if variant == "generated":
            if window is None:
                raise WindowMissing("generated t-structure needs a declared window")
            if not generators:
                raise ValueError("generated t-structure needs at least one generator")
        if window is not None and window[0] > window[1]:
            raise WindowViolation("window (%d, %d) has m > n" % window)
        self.variant = variant
        self.algebra = algebra
        self.shift = shift
        self.pair = pair
        self.generators = list(generators) if generators is not None else None
        self.window = window
        self.tilt = tilt

    @classmethod
    def standard(cls, algebra, shift: int = 0) -> "TStructureSpec":
        """Standard t-structure shifted so the aisle is cohomology <= -shift."""
        return cls("standard", algebra, shift=shift, window=(-shift, -shift))

    @classmethod
    def hrs(cls, pair: TorsionPair) -> "TStructureSpec":
        """Tilt of the standard t-structure along a torsion pair."""
        return cls("hrs", pair.algebra, pair=pair, window=(-1, 0))

    @classmethod
    def generated(cls, generators: Sequence[PerfectComplex], window: Tuple[int, int]) -> "TStructureSpec":
        """Compactly generated t-structure with a declared window."""
        if not generators:
            raise ValueError("generated t-structure needs at least one generator")
        return cls("generated", generators[0].algebra, generators=list(generators), window=window)

    @classmethod
    def silting(cls, tilt: PerfectComplex) -> "TStructureSpec":
        """T-structure whose coaisle is the positive orthogonal of a tilt."""
        tm, _, _ = minimize(tilt)
        if tm.is_zero_complex():
            raise ValueError("silting t-structure needs a nonzero tilt")
        supp = tm.support()
        return cls("silting", tilt.algebra, tilt=tm, window=(min(supp), max(supp)))

    def describe(self) -> Dict:
        """JSON-ready summary of the defining data."""
        out: Dict = {"variant": self.variant}
        if self.window is not None:
            out["window"] = list(self.window)
        if self.variant == "standard":
            out["shift"] = self.shift
        elif self.variant == "hrs":
            out["torsion_classes"] = len(self.pair.torsion)
            out["free_classes"] = len(self.pair.free)
        elif self.variant == "generated":
            out["generators"] = [_entry_signature(g) for g in self.generators]
        elif self.variant == "silting":
            out["tilt"] = _entry_signature(self.tilt)
        return out


class TruncationResult:
    """Truncation triangle x -> z -> y -> x[1] with status and evidence.

    Attributes:
        status: Stabilized(d) or DepthExceeded(d).
        x: Aisle part, or None when the tower gave up.
        x_map: Map x -> z (or x -> model for tower truncations).
        y: Coaisle part; for towers, the final stage object.
        y_map: Map z -> y (model -> y for tower truncations).
        connecting: Map y -> x[1] when one was built.
        certificates: Machine-checkable evidence about the triangle.
        tower: Stage transcript of a generated truncation.
        model: Minimal perfect model of z used by the tower.
        model_qis: Quasi-isomorphism from the realized model to z.
    """

    def __init__(
        self,
        status,
        x,
        x_map,
        y,
        y_map,
        certificates: Dict,
        connecting=None,
        tower: Optional[List[Dict]] = None,
        model: Optional[PerfectComplex] = None,
        model_qis: Optional[ChainMap] = None,
    ):
        self.status = status
        self.x = x
        self.x_map = x_map
        self.y = y
        self.y_map = y_map
        self.connecting = connecting
        self.certificates = certificates
        self.tower = tower
        self.model = model
        self.model_qis = model_qis


def _entry_signature(x: PerfectComplex) -> Dict[str, List[str]]:
    return {str(i): sorted(x.entry(i)) for i in x.support()}


def _module_complex(z: Objectish) -> Complex:
    if isinstance(z, Module):
        return stalk_complex(z, 0)
    if isinstance(z, PerfectComplex):
        return realize(z).complex
    return z


def _silting_hom_vanishes(tilt: PerfectComplex, zc: Complex, positive: bool) -> bool:
    """Whether Hom(tilt, zc[i]) = 0 for all i > 0 (or all i <= 0)."""
    rt = realize(tilt).complex
    tmin, tmax = min(tilt.support()), max(tilt.support())
    zmin, zmax = min(zc.support()), max(zc.support())
    lo, hi = zmin - tmax, zmax - tmin
    if positive:
        lo = max(1, lo)
    else:
        hi = min(0, hi)
    for i in range(lo, hi + 1):
        if homotopy_classes_dim(rt, shift_complex(zc, i)):
            return False
    return True


def aisle_member(z: Objectish, spec: TStructureSpec, depth: int = 6):
    """Decides membership of z in the aisle.

    Standard, hrs and silting variants answer True or False.  Generated
    variants run the truncation tower and may answer Unknown(depth).
    """
    zc = _module_complex(z)
    if zc.is_zero_complex():
        return True
    if spec.variant == "standard":
        top = -spec.shift
        return all(cohomology(zc, i).is_zero() for i in zc.support() if i > top)
    if spec.variant == "hrs":
        for i in zc.support():
            if i > 0 and not cohomology(zc, i).is_zero():
                return False
        return spec.pair.is_torsion_member(cohomology(zc, 0))
    if spec.variant == "silting":
        return _silting_hom_vanishes(spec.tilt, zc, positive=True)
    res = truncate(z, spec, depth)
    if isinstance(res.status, DepthExceeded):
        return Unknown(res.status.depth)
    return res.y.is_zero_complex()


def coaisle_member(z: Objectish, spec: TStructureSpec) -> bool:
    """Decides membership of z in the coaisle.  Always True or False."""
    zc = _module_complex(z)
    if zc.is_zero_complex():
        return True
    if spec.variant == "standard":
        bottom = 1 - spec.shift
        return all(cohomology(zc, i).is_zero() for i in zc.support() if i < bottom)
    if spec.variant == "hrs":
        for i in zc.support():
            if i < 0 and not cohomology(zc, i).is_zero():
                return False
        return spec.pair.is_free_member(cohomology(zc, 0))
    if spec.variant == "silting":
        return _silting_hom_vanishes(spec.tilt, zc, positive=False)
    zmin, zmax = min(zc.support()), max(zc.support())
    for s in spec.generators:
        if s.is_zero_complex():
            continue
        rs = realize(s).complex
        smin, smax = min(s.support()), max(s.support())
        for n in range(max(0, smin - zmax), smax - zmin + 1):
            if homotopy_classes_dim(shift_complex(rs, n), zc):
                return False
    return True


def heart_member(z: Objectish, spec: TStructureSpec, depth: int = 6):
    """Membership in the heart: aisle objects whose [-1] shift is a coaisle object."""
    a = aisle_member(z, spec, depth)
    if a is False:
        return False
    if not coaisle_member(shift_complex(_module_complex(z), -1), spec):
        return False
    return a if isinstance(a, Unknown) else True


# -- direct truncations --------------------------------------------------


def _standard_truncate(z: Objectish, spec: TStructureSpec) -> TruncationResult:
    zc = _module_complex(z)
    top = -spec.shift
    x, incl = soft_truncate_above(zc, top)
    y, proj = soft_truncate_below(zc, top + 1)
    degrees = set(zc.support()) | set(x.support()) | set(y.support())
    split = all(
        cohomology(x, i).total_dim + cohomology(y, i).total_dim == cohomology(zc, i).total_dim
        for i in degrees
    )
    certs = {
        "x_in_aisle": aisle_member(x, spec),
        "y_in_coaisle": coaisle_member(y, spec),
        "cohomology_split": split,
    }
    return TruncationResult(Stabilized(0), x, incl, y, proj, certs)


def hrs_truncate(z: Objectish, pair: TorsionPair) -> TruncationResult:
    """Truncation triangle of the torsion-pair tilt.

    Splices the standard truncation at degree zero with the trace
    sequence of H^0: the aisle part is the cocone of the composite map
    from tau^{<=0}(z) onto the torsion-free quotient of H^0 placed in
    degree zero, and the coaisle part is the cone of its map to z.

    Args:
        z: Module, complex, or perfect complex to truncate.
        pair: Torsion pair defining the tilt.

    Returns:
        TruncationResult with Stabilized(0) status and an exactness
        certificate alongside the membership checks.
    """
    spec = TStructureSpec.hrs(pair)
    zc = _module_complex(z)
    if zc.is_zero_complex():
        ident = ChainMap(zc, zc, {}, check=False)
        certs = {"x_in_aisle": True, "y_in_coaisle": True, "exact": True}
        return TruncationResult(Stabilized(0), zc, ident, zc, ident, certs)
    alg = zc.algebra
    f = alg.field
    nv = alg.quiver.num_vertices
    a, incl_a = soft_truncate_above(zc, 0)
    hd = cohomology_data(zc, 0)
    tm, _, quot, tproj = pair.approx_sequence(hd.module)
    target = stalk_complex(quot, 0)
    if quot.total_dim and 0 in a.entries:
        blocks = [f.matmul(hd.proj[v], tproj.blocks[v]) for v in range(nv)]
        phi = ChainMap(a, target, {0: ModuleMap(a.entry(0), quot, blocks, check=False)}, check=True)
    else:
        phi = ChainMap(a, target, {}, check=False)
    x, x_to_a = cocone(phi)
    x_map = x_to_a.then(incl_a)
    y, y_incl, conn = cone(x_map)
    certs = {
        "x_in_aisle": aisle_member(x, spec),
        "y_in_coaisle": coaisle_member(y, spec),
        "exact": is_null_homotopic(x_map.then(y_incl)),
        "torsion_dim": tm.total_dim,
        "free_dim": quot.total_dim,
    }
    return TruncationResult(Stabilized(0), x, x_map, y, y_incl, certs, connecting=conn)


# -- tower truncation ----------------------------------------------------


def _perfect_model(z: Objectish) -> Tuple[PerfectComplex, ChainMap]:
    """Minimal perfect model of z with a quasi-isomorphism to it.

    Raises:
        NotPerfect: No finite projective model within the default window.
    """
    if isinstance(z, PerfectComplex):
        zmin, _, iota = minimize(z)
        q = realize_map(iota, realize(zmin), realize(z))
        return zmin, q
    zc = _module_complex(z)
    if zc.is_zero_complex():
        p = PerfectComplex(zc.algebra, {}, {}, check=False)
        return p, ChainMap(realize(p).complex, zc, {}, check=False)
    pres = presentation(zc)
    if not pres.complete:
        raise NotPerfect("no finite projective model within the default window")
    zmin, _, iota = minimize(pres.perfect)
    q = realize_map(iota, realize(zmin), pres.realization).then(pres.qis)
    return zmin, q


def _perfect_signature(x: PerfectComplex) -> Tuple:
    """Hashable structural fingerprint: entries plus differential entries."""
    ent = tuple((i, tuple(x.entry(i))) for i in x.support())
    dfs = []
    for i in sorted(x.diffs):
        mat = x.diffs[i]
        dfs.append((i, tuple(tuple(str(cell.tolist()) for cell in row) for row in mat)))
    return ent, tuple(dfs)


def _connected_pieces(x: PerfectComplex) -> List[PerfectComplex]:
    """Split into direct summands given by connected summand slots.

    Slots in consecutive degrees are linked when the differential entry
    between them is nonzero; each connected component of that graph is
    a direct summand of the complex.
    """
    alg = x.algebra
    f = alg.field
    slots = [(i, j) for i in x.support() for j in range(len(x.entry(i)))]
    parent = {s: s for s in slots}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    def union(s, t):
        parent[find(s)] = find(t)

    for i, mat in x.diffs.items():
        for j, row in enumerate(mat):
            for k, cell in enumerate(row):
                if not f.is_zero(cell):
                    union((i, j), (i + 1, k))
    groups: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for s in slots:
        groups.setdefault(find(s), []).append(s)
    pieces = []
    for root in sorted(groups):
        members = sorted(groups[root])
        entries: Dict[int, List[str]] = {}
        index: Dict[Tuple[int, int], int] = {}
        for i, j in members:
            index[(i, j)] = len(entries.setdefault(i, []))
            entries[i].append(x.entry(i)[j])
        diffs = {}
        for i in entries:
            if (i + 1) not in entries:
                continue
            mat = [[f.zeros(1, alg.dim) for _ in entries[i + 1]] for _ in entries[i]]
            src = x.diffs.get(i)
            if src is not None:
                for j in range(len(x.entry(i))):
                    if (i, j) not in index:
                        continue
                    for k in range(len(x.entry(i + 1))):
                        if (i + 1, k) in index:
                            mat[index[(i, j)]][index[(i + 1, k)]] = src[j][k]
            diffs[i] = mat
        pieces.append(PerfectComplex(alg, entries, diffs, check=False))
    return pieces


def _indec_shapes(spec: TStructureSpec) -> List[PerfectComplex]:
    """Summand shapes of the generators, minimized, split, deduplicated."""
    cached = getattr(spec, "_shape_cache", None)
    if cached is not None:
        return cached
    shapes = []
    seen = set()
    for s in spec.generators:
        sm, _, _ = minimize(s)
        for piece in _connected_pieces(sm):
            sig = _perfect_signature(piece)
            if sig not in seen:
                seen.add(sig)
                shapes.append(piece)
    spec._shape_cache = shapes
    return shapes


def _stage_classes(spec: TStructureSpec, zk: PerfectComplex) -> List[Tuple[PerfectComplex, PerfectMap]]:
    """Homotopy class basis from shifted generator summands into zk.

    Shifted shapes are deduplicated structurally so the same stalk
    reached through different generators is only counted once.
    """
    out: List[Tuple[PerfectComplex, PerfectMap]] = []
    if zk.is_zero_complex():
        return out
    zmin, zmax = min(zk.support()), max(zk.support())
    seen = set()
    for s in _indec_shapes(spec):
        smin, smax = min(s.support()), max(s.support())
        for n in range(max(0, smin - zmax), smax - zmin + 1):
            sh = shift_perfect(s, n)
            sig = _perfect_signature(sh)
            if sig in seen:
                continue
            seen.add(sig)
            reps, _ = hom_homotopy_classes(sh, zk)
            for r in reps:
                out.append((sh, r))
    return out


def _prune_classes(
    classes: List[Tuple[PerfectComplex, PerfectMap]], zk: PerfectComplex
) -> List[Tuple[PerfectComplex, PerfectMap]]:
    """Drop classes that factor through the remaining ones.

    Keeps the evaluation map close to a minimal right approximation so
    coning it off does not pile up split kernel summands.
    """
    kept = list(classes)
    j = len(kept) - 1
    while j >= 0 and len(kept) > 1:
        rest = kept[:j] + kept[j + 1 :]
        ev = universal_map([s for s, _ in rest], [r for _, r in rest], zk)
        if lift_map_along(kept[j][1], ev) is not None:
            kept = rest
        j -= 1
    return kept


def _sum_offsets(parts: Sequence[PerfectComplex]) -> List[Dict[int, int]]:
    counts: Dict[int, int] = {}
    offsets = []
    for p in parts:
        offs = {}
        for i in p.support():
            offs[i] = counts.get(i, 0)
            counts[i] = counts.get(i, 0) + len(p.entry(i))
        offsets.append(offs)
    return offsets


def universal_map(parts: Sequence[PerfectComplex], maps: Sequence[PerfectMap], target: PerfectComplex) -> PerfectMap:
    """Single map from the direct sum of parts assembled from one map each."""
    alg = target.algebra
    big = direct_sum_perfect(list(parts))
    offsets = _sum_offsets(parts)
    mats = {}
    for i in big.support():
        if not target.entry(i):
            continue
        m = zero_amat(alg, len(big.entry(i)), len(target.entry(i)))
        for pi, part in enumerate(parts):
            rows = len(part.entry(i))
            if not rows:
                continue
            rm = maps[pi].mat(i)
            off = offsets[pi][i]
            for j in range(rows):
                for k in range(len(target.entry(i))):
                    m[off + j][k] = rm[j][k]
        mats[i] = m
    return PerfectMap(big, target, mats, check=True)


def universal_co_map(source: PerfectComplex, parts: Sequence[PerfectComplex], maps: Sequence[PerfectMap]) -> PerfectMap:
    """Single map into the direct sum of parts assembled from one map each."""
    alg = source.algebra
    big = direct_sum_perfect(list(parts))
    offsets = _sum_offsets(parts)
    mats = {}
    for i in source.support():
        if not big.entry(i):
            continue
        m = zero_amat(alg, len(source.entry(i)), len(big.entry(i)))
        for pi, part in enumerate(parts):
            cols = len(part.entry(i))
            if not cols:
                continue
            rm = maps[pi].mat(i)
            off = offsets[pi][i]
            for j in range(len(source.entry(i))):
                for k in range(cols):
                    m[j][off + k] = rm[j][k]
        mats[i] = m
    return PerfectMap(source, big, mats, check=True)


def _tower_truncate(z: Objectish, spec: TStructureSpec, depth: int) -> TruncationResult:
    if spec.window is None:
        raise WindowMissing("tower truncation needs a declared window")
    model, model_qis = _perfect_model(z)
    stages = [model]
    stage_maps: List[PerfectMap] = []
    transcript: List[Dict] = []
    status = None
    while True:
        k = len(stage_maps)
        zk = stages[-1]
        classes = _stage_classes(spec, zk)
        if classes:
            classes = _prune_classes(classes, zk)
        transcript.append(
            {
                "stage": k,
                "entries": _entry_signature(zk),
                "classes": len(classes),
            }
        )
        if not classes:
            status = Stabilized(k)
            break
        if k == depth:
            status = DepthExceeded(depth)
            break
        ev = universal_map([s for s, _ in classes], [r for _, r in classes], zk)
        c, incl, _ = cone_perfect(ev)
        cmin, cpi, _ = minimize(c)
        stages.append(cmin)
        stage_maps.append(incl.then(cpi))
    comp = identity_perfect_map(model)
    for w in stage_maps:
        comp = comp.then(w)
    y = stages[-1]
    if isinstance(status, Stabilized):
        _, _, proj = cone_perfect(comp)
        xs = shift_perfect_map(proj, -1)
        xfull = xs.source
        xmap_full = PerfectMap(xfull, model, xs.mats, check=True)
        xmin, _, xio = minimize(xfull)
        x_map = xio.then(xmap_full)
        certs = {
            "y_in_coaisle": coaisle_member(y, spec),
            "exact": is_null_homotopic_perfect(x_map.then(comp)),
            "stages": len(stage_maps),
        }
        return TruncationResult(
            status, xmin, x_map, y, comp, certs, tower=transcript, model=model, model_qis=model_qis
        )
    certs = {
        "remaining_classes": transcript[-1]["classes"],
        "stages": len(stage_maps),
    }
    return TruncationResult(
        status, None, None, y, comp, certs, tower=transcript, model=model, model_qis=model_qis
    )


def truncate(z: Objectish, spec: TStructureSpec, depth: int = DEFAULT_DEPTH) -> TruncationResult:
    """Truncation triangle of z for any spec variant.

    Standard and hrs variants truncate in one step on cohomology.
    Generated and silting variants cone off all homotopy classes from
    nonnegative generator shifts, minimize, and repeat until the stage
    object passes the coaisle test or the depth bound runs out; the
    aisle part is then the cocone of the composite stage map.

    Args:
        z: Module, complex, or perfect complex to truncate.
        spec: T-structure description.
        depth: Stage bound for tower truncations.

    Returns:
        TruncationResult; status DepthExceeded(depth) reports a tower
        that did not stabilize, with the partial transcript attached.
    """
    if spec.variant == "standard":
        return _standard_truncate(z, spec)
    if spec.variant == "hrs":
        return hrs_truncate(z, spec.pair)
    if spec.variant == "silting":
        gspec = TStructureSpec("generated", spec.algebra, generators=[spec.tilt], window=spec.window)
        return _tower_truncate(z, gspec, depth)
    return _tower_truncate(z, spec, depth)


# -- generator lifting and windows ---------------------------------------


def lift_generators(
    spec: TStructureSpec,
    xgens: Sequence[Objectish],
    m: Optional[int] = None,
    battery: Optional[Sequence[Tuple[str, Complex]]] = None,
    shifts: Sequence[int] = (-2, -1, 0, 1, 2),
    check: bool = True,
) -> List[PerfectComplex]:
    """Compact generators whose orthogonal recovers the coaisle.

    Returns shifted regular stalks covering all degrees from -m up to
    what the battery can probe, together with the degree >= m brutal
    truncations of minimal projective models of the sample aisle
    objects.

    Args:
        spec: T-structure whose coaisle the generators must cut out.
        xgens: Sample aisle objects to lift.
        m: Lower window bound; defaults to the spec window.
        battery: Named test objects for the agreement check.
        shifts: Shifts applied to each battery object during the check.
        check: Verify agreement with coaisle_member on the battery.

    Raises:
        WindowMissing: No m given and no window declared on the spec.
        WindowViolation: The orthogonal of the lifted generators
            disagrees with the spec coaisle on a shifted battery object.
    """
    if m is None:
        if spec.window is None:
            raise WindowMissing("no window to read the lower bound from")
        m = spec.window[0]
    alg = spec.algebra
    tmax = -m
    if battery:
        lows = [min(zc.support()) for _, zc in battery if not zc.is_zero_complex()]
        if lows:
            tmax = max(tmax, -(min(lows) - max(shifts)))
    gens = [regular_perfect(alg, -t) for t in range(-m, tmax + 1)]
    for xg in xgens:
        pres = presentation(_module_complex(xg), m - 1)
        per, _, _ = minimize(pres.perfect)
        cut = brutal_above_perfect(per, m)
        if not cut.is_zero_complex():
            gens.append(cut)
    if check and battery:
        gspec = TStructureSpec("generated", alg, generators=gens, window=spec.window or (m, m))
        for name, zc in battery:
            for j in shifts:
                w = shift_complex(zc, j)
                if coaisle_member(w, gspec) != coaisle_member(w, spec):
                    raise WindowViolation("lifted generators disagree on %s shifted by %d" % (name, j))
    return gens


def hrs_generated_spec(
    pair: TorsionPair,
    battery: Optional[Sequence[Tuple[str, Complex]]] = None,
    shifts: Sequence[int] = (-2, -1, 0, 1, 2),
    check: bool = True,
) -> TStructureSpec:
    """Compactly generated spec with the same coaisle as a torsion tilt."""
    spec = TStructureSpec.hrs(pair)
    xg = [stalk_complex(t, 0) for t in pair.torsion]
    gens = lift_generators(spec, xg, -1, battery=battery, shifts=shifts, check=check)
    return TStructureSpec("generated", pair.algebra, generators=gens, window=(-1, 0))


def generated_form(spec: TStructureSpec) -> TStructureSpec:
    """Equivalent compactly generated spec for any variant.

    Standard specs are generated by the shifted regular stalk, silting
    specs by the tilt, and hrs specs by lifted generators; generated
    specs pass through unchanged.
    """
    if spec.variant == "generated":
        return spec
    if spec.variant == "standard":
        gens = [regular_perfect(spec.algebra, -spec.shift)]
        return TStructureSpec("generated", spec.algebra, generators=gens, window=(-spec.shift, -spec.shift))
    if spec.variant == "silting":
        return TStructureSpec("generated", spec.algebra, generators=[spec.tilt], window=spec.window)
    return hrs_generated_spec(spec.pair)


def intermediate_window(
    spec: TStructureSpec, battery: Optional[Sequence[Tuple[str, Complex]]] = None
) -> Tuple[int, int]:
    """Window (m, n) squeezing the aisle between standard aisles.

    Cohomology concentrated in degrees <= m forces aisle membership and
    aisle membership forces cohomology in degrees <= n.  When a battery
    is given, both inclusions are validated through their equivalent
    coaisle formulations, which are decidable: coaisle objects must
    have no cohomology in degrees <= m, and objects with cohomology
    only in degrees >= n + 1 must pass the coaisle test.

    Raises:
        WindowMissing: Generated spec without a declared window.
        WindowViolation: A battery object witnesses a failure.
    """
    if spec.variant == "standard":
        w = (-spec.shift, -spec.shift)
    elif spec.variant == "hrs":
        w = (-1, 0)
    else:
        if spec.window is None:
            raise WindowMissing("no declared window on the spec")
        w = spec.window
    if battery:
        m, n = w
        for name, zc in battery:
            if zc.is_zero_complex():
                continue
            if coaisle_member(zc, spec):
                for i in zc.support():
                    if i <= m and not cohomology(zc, i).is_zero():
                        raise WindowViolation(
                            "coaisle object %s has cohomology in degree %d <= %d" % (name, i, m)
                        )
            amp = cohomology_amplitude(zc)
            if amp and min(amp) >= n + 1 and not coaisle_member(zc, spec):
                raise WindowViolation("object %s sits above %d but fails the coaisle test" % (name, n))
    return w


def restriction_check(
    spec: TStructureSpec,
    battery: Sequence[Tuple[str, Complex]],
    depth: int = DEFAULT_DEPTH,
) -> Dict:
    """Stabilization report for tower truncation over a battery.

    Returns:
        Dict with per-object records (name, verdict, depth, stage
        signature) and an overall verdict: "Restricts" when every tower
        stabilized, else "Unknown".
    """
    records = []
    all_ok = True
    for name, zc in battery:
        res = truncate(zc, spec, depth)
        ok = isinstance(res.status, Stabilized)
        all_ok = all_ok and ok
        records.append(
            {
                "object": name,
                "verdict": "Restricts" if ok else "Unknown",
                "depth": res.status.depth,
                "final_entries": _entry_signature(res.y) if res.y is not None else {},
            }
        )
    return {"objects": records, "verdict": "Restricts" if all_ok else "Unknown"}


def standard_battery(
    alg, mods: Sequence[Module], shifts: Sequence[int] = (-2, -1, 0, 1, 2)
) -> List[Tuple[str, Complex]]:
    """Named test complexes built from a module list.

    Contains the regular stalk, a stalk per module, a two-term minimal
    projective model per module, and shifted regular stalks.
    """
    out: List[Tuple[str, Complex]] = []
    reg = regular_module(alg)
    out.append(("A", stalk_complex(reg, 0)))
    for idx, mod in enumerate(mods):
        out.append(("stalk(U%d)" % idx, stalk_complex(mod, 0)))
    for idx, mod in enumerate(mods):
        pres = presentation(stalk_complex(mod, 0), -1)
        per, _, _ = minimize(pres.perfect)
        cx = realize(per).complex
        if not cx.is_zero_complex():
            out.append(("res2(U%d)" % idx, cx))
    for t in shifts:
        out.append(("A[%d]" % t, stalk_complex(reg, -t)))
    return out
