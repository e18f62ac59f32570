"""Torsion pairs: extension middles, trace submodules, enumeration.

A torsion class is a set of modules closed under quotients and
extensions; its orthogonal class collects the modules receiving no
nonzero map from it.  Everything here works with explicit lists of
indecomposable representatives over a fixed algebra, so enumeration
first discovers the indecomposables reachable from the simples,
projectives and injectives, then certifies that list is closed, and
finally filters subsets for the closure conditions.
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .algebra import PathAlgebra
from .errors import BudgetExceeded, NotATorsionClass, UniverseIncomplete
from .modules import (
    Module,
    ModuleMap,
    all_submodule_spans,
    decompose,
    direct_sum,
    fingerprint,
    hom_space,
    injective_module,
    is_isomorphic,
    kernel,
    projective_cover,
    projective_module,
    quotient_module,
    simple_module,
    submodule,
    zero_map,
)

_MAX_UNIVERSE = 40
_MAX_ENUM_UNIVERSE = 16
_MAX_EXT_POINTS = 32


def ext_classes(m: Module, n: Module) -> List[ModuleMap]:
    """Basis of Ext^1(m, n) as maps from the syzygy of m into n."""
    if m.is_zero() or n.is_zero():
        return []
    f = m.algebra.field
    cover = projective_cover(m)
    syz, incl = kernel(cover)
    if syz.is_zero():
        return []
    maps = hom_space(syz, n)
    if not maps:
        return []
    width = sum(syz.dims[v] * n.dims[v] for v in range(len(syz.dims)))
    restr_rows = []
    for psi in hom_space(cover.source, n):
        comp = incl.then(psi)
        restr_rows.append(_vec_blocks(f, comp.blocks))
    span = f.row_space(f.stack_rows(restr_rows, width))
    out = []
    for phi in maps:
        v = _vec_blocks(f, phi.blocks)
        joined = f.stack_rows([span, v], width)
        if f.rank(joined) > span.shape[0]:
            span = f.row_space(joined)
            out.append(phi)
    return out


def _vec_blocks(f, blocks: Sequence[np.ndarray]) -> np.ndarray:
    parts = [b.reshape(1, -1) for b in blocks if b.size]
    if not parts:
        return f.zeros(1, 0)
    return np.hstack(parts)


def extension_middle(m: Module, n: Module, phi: ModuleMap) -> Module:
    """Middle term of the extension of m by n classified by phi.

    phi maps the syzygy of m into n; the middle is the pushout of the
    syzygy inclusion along phi.
    """
    f = m.algebra.field
    cover = projective_cover(m)
    syz, incl = kernel(cover)
    total, _, _ = direct_sum([n, cover.source])
    minus = f.scalar_from_int(-1)
    rows = []
    for v in range(len(total.dims)):
        left = phi.blocks[v]
        right = f.scale(minus, incl.blocks[v])
        if left.size or right.size:
            rows.append(np.hstack([left, right]) if left.size and right.size else (left if left.size else right))
        else:
            rows.append(f.zeros(syz.dims[v], total.dims[v]))
    quot, _ = quotient_module(total, rows, close=False)
    if quot.total_dim != m.total_dim + n.total_dim:
        raise ValueError("pushout has wrong dimension")
    return quot


def extension_middles(m: Module, n: Module) -> List[Module]:
    """Middles of all nonzero extension classes of m by n.

    Refuses when the class space is too large to enumerate exactly.
    """
    basis = ext_classes(m, n)
    if not basis:
        return []
    if len(basis) == 1:
        return [extension_middle(m, n, basis[0])]
    f = m.algebra.field
    p = f.characteristic
    if p == 0 or p ** len(basis) > _MAX_EXT_POINTS:
        raise UniverseIncomplete(
            "extension space of dimension %d is too large to enumerate" % len(basis)
        )
    out = []
    for coeffs in product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        acc = basis[0].scale(f.scalar_from_int(coeffs[0]))
        for c, phi in zip(coeffs[1:], basis[1:]):
            acc = acc.add(phi.scale(f.scalar_from_int(c)))
        out.append(extension_middle(m, n, acc))
    return out


def match_iso(reps: Sequence[Module], m: Module) -> Optional[int]:
    """Index of the representative isomorphic to m, or None."""
    fp = fingerprint(m)
    for i, r in enumerate(reps):
        if fingerprint(r) == fp and is_isomorphic(r, m):
            return i
    return None


def _canonical_sort(reps: List[Module]) -> List[Module]:
    return sorted(reps, key=lambda r: (r.total_dim, tuple(r.dims), str(fingerprint(r))))


def indecomposable_universe(
    alg: PathAlgebra, dim_bound: int = 6, max_classes: int = _MAX_UNIVERSE
) -> Tuple[List[Module], bool]:
    """Indecomposables reachable from the simples, projectives, injectives.

    The list is closed under indecomposable summands of submodules,
    quotients and extension middles, as long as every candidate stays
    within dim_bound.  Returns (representatives, complete) where
    complete means no candidate had to be skipped, so the list is the
    full set of indecomposables.

    Raises:
        BudgetExceeded: More than max_classes classes appeared.
        UniverseIncomplete: A submodule or extension enumeration refused.
    """
    reps: List[Module] = []
    skipped = False

    def add(cand: Module) -> None:
        nonlocal skipped
        for piece, _ in decompose(cand):
            if piece.total_dim > dim_bound:
                skipped = True
                continue
            if match_iso(reps, piece) is None:
                reps.append(piece)
                if len(reps) > max_classes:
                    raise BudgetExceeded("more than %d indecomposables" % max_classes)

    for v in alg.quiver.vertices:
        add(simple_module(alg, v))
        add(projective_module(alg, v))
        add(injective_module(alg, v))
    done = 0
    while done < len(reps):
        m = reps[done]
        done += 1
        for spans in all_submodule_spans(m):
            sub, _ = submodule(m, spans, close=False)
            if not sub.is_zero():
                add(sub)
            quot, _ = quotient_module(m, spans, close=False)
            if not quot.is_zero():
                add(quot)
        for other in list(reps):
            for mid in extension_middles(m, other):
                add(mid)
            for mid in extension_middles(other, m):
                add(mid)
    return _canonical_sort(reps), not skipped


def torsion_submodule(tors: Sequence[Module], m: Module) -> Tuple[Module, ModuleMap]:
    """Trace of the torsion representatives in m, with its inclusion."""
    f = m.algebra.field
    nv = len(m.dims)
    rows = [f.zeros(0, m.dims[v]) for v in range(nv)]
    for t in tors:
        for phi in hom_space(t, m):
            for v in range(nv):
                rows[v] = f.row_space(f.stack_rows([rows[v], phi.blocks[v]], m.dims[v]))
    return submodule(m, rows, close=False)


class TorsionPair:
    """Torsion pair given by lists of indecomposable representatives."""

    def __init__(self, algebra: PathAlgebra, tors: List[Module], free: List[Module]):
        self.algebra = algebra
        self.torsion = list(tors)
        self.free = list(free)

    def is_torsion_member(self, m: Module) -> bool:
        if m.is_zero():
            return True
        return all(match_iso(self.torsion, piece) is not None for piece, _ in decompose(m))

    def is_free_member(self, m: Module) -> bool:
        return all(len(hom_space(t, m)) == 0 for t in self.torsion)

    def approx_sequence(self, m: Module) -> Tuple[Module, ModuleMap, Module, ModuleMap]:
        """Trace submodule and quotient: t(m) -> m -> m/t(m)."""
        tm, incl = torsion_submodule(self.torsion, m)
        spans = [incl.blocks[v] for v in range(len(m.dims))] if not tm.is_zero() else [
            m.algebra.field.zeros(0, m.dims[v]) for v in range(len(m.dims))
        ]
        quot, proj = quotient_module(m, spans, close=False)
        return tm, incl, quot, proj

    def describe(self) -> str:
        ts = ",".join(t.describe() for t in self.torsion) or "0"
        fs = ",".join(fv.describe() for fv in self.free) or "0"
        return "torsion [%s] free [%s]" % (ts, fs)


def check_torsion_pair(tp: TorsionPair, universe: Sequence[Module]) -> Tuple[bool, List[str]]:
    """Verify the pair axioms over a universe of indecomposables.

    Checks orthogonality, that each universe member splits through its
    trace sequence, and that the torsion side is closed under quotients
    and extensions inside the universe.
    """
    failures: List[str] = []
    for t in tp.torsion:
        for fr in tp.free:
            if hom_space(t, fr):
                failures.append("nonzero map from torsion %s to free %s" % (t.describe(), fr.describe()))
    for m in universe:
        tm, _, quot, _ = tp.approx_sequence(m)
        if not tp.is_torsion_member(tm):
            failures.append("trace of %s leaves the torsion class" % m.describe())
        if not tp.is_free_member(quot):
            failures.append("quotient of %s is not torsion free" % m.describe())
    for t in tp.torsion:
        for spans in all_submodule_spans(t):
            quot, _ = quotient_module(t, spans, close=False)
            if not tp.is_torsion_member(quot):
                failures.append("quotient of torsion %s escapes" % t.describe())
                break
        for other in tp.torsion:
            for mid in extension_middles(t, other):
                if not tp.is_torsion_member(mid):
                    failures.append("extension middle of %s escapes" % t.describe())
    return not failures, failures


def torsion_closure(gens: Sequence[Module], universe: Sequence[Module]) -> List[Module]:
    """Least subset of the universe containing gens closed under
    quotients and extension middles.

    Args:
        gens: Generator modules; their indecomposable summands are
            matched into the universe by isomorphism.
        universe: Indecomposable representatives in canonical order.

    Returns:
        The closure, as universe members in universe order.

    Raises:
        UniverseIncomplete: A generator, quotient summand or extension
            summand has no isomorphic universe member.
    """
    chosen: Set[int] = set()
    work: List[int] = []

    def absorb(mod: Module) -> None:
        for piece, _ in decompose(mod):
            idx = match_iso(universe, piece)
            if idx is None:
                raise UniverseIncomplete(
                    "closure summand %s escaped the universe" % piece.describe()
                )
            if idx not in chosen:
                chosen.add(idx)
                work.append(idx)

    for g in gens:
        if not g.is_zero():
            absorb(g)
    while work:
        i = work.pop()
        m = universe[i]
        for spans in all_submodule_spans(m):
            quot, _ = quotient_module(m, spans, close=False)
            if not quot.is_zero():
                absorb(quot)
        for j in sorted(chosen):
            for mid in extension_middles(m, universe[j]):
                absorb(mid)
            for mid in extension_middles(universe[j], m):
                absorb(mid)
    return [universe[i] for i in sorted(chosen)]


def torsion_pair_from_class(tors: Sequence[Module], universe: Sequence[Module]) -> TorsionPair:
    """Torsion pair whose torsion class is the given closed subset.

    The free class is the right Hom-perpendicular of the subset inside
    the universe.  All pair axioms are validated before returning.

    Raises:
        NotATorsionClass: The subset is not closed, or the resulting
            pair fails an axiom.
    """
    idx: Set[int] = set()
    for t in tors:
        i = match_iso(universe, t)
        if i is None:
            raise NotATorsionClass("member %s is not in the universe" % t.describe())
        idx.add(i)
    closed = torsion_closure(tors, universe)
    closed_idx = {match_iso(universe, c) for c in closed}
    if closed_idx != idx:
        raise NotATorsionClass("subset is not closed under quotients and extensions")
    alg = universe[0].algebra
    chosen = sorted(idx)
    free = [
        universe[j]
        for j in range(len(universe))
        if not any(hom_space(universe[i], universe[j]) for i in chosen)
    ]
    tp = TorsionPair(alg, [universe[i] for i in chosen], free)
    ok, failures = check_torsion_pair(tp, universe)
    if not ok:
        raise NotATorsionClass(failures[0])
    return tp


def is_functorially_finite(tp: TorsionPair, universe: Sequence[Module]) -> bool:
    """Single-generator surrogate test for functorial finiteness.

    The torsion class passes when it is the quotient-extension closure
    of one universe member, or of the direct sum of all its members.
    This is a desk-scale surrogate criterion and is reported as such.
    """
    target: Set[int] = set()
    for t in tp.torsion:
        i = match_iso(universe, t)
        if i is None:
            raise UniverseIncomplete("torsion member %s is not in the universe" % t.describe())
        target.add(i)
    if not target:
        return True

    def closure_idx(gens: Sequence[Module]) -> Set[int]:
        return {match_iso(universe, c) for c in torsion_closure(gens, universe)}

    for i in sorted(target):
        if closure_idx([universe[i]]) == target:
            return True
    total, _, _ = direct_sum([universe[i] for i in sorted(target)])
    return closure_idx([total]) == target


class EnumerationResult:
    """Outcome of torsion pair enumeration over a finite universe."""

    def __init__(self, universe: List[Module], pairs: List[TorsionPair], counts: Dict[str, int]):
        self.universe = universe
        self.pairs = pairs
        self.counts = counts


def enumerate_torsion_pairs(alg: PathAlgebra, dim_bound: int = 6) -> EnumerationResult:
    """All torsion pairs whose classes are unions of universe members.

    Raises:
        UniverseIncomplete: The indecomposables could not be certified
            complete, so enumeration would be unsound.
        BudgetExceeded: The universe is too large to filter subsets.
    """
    reps, complete = indecomposable_universe(alg, dim_bound)
    if not complete:
        raise UniverseIncomplete("universe hit the dimension bound %d" % dim_bound)
    n = len(reps)
    if n > _MAX_ENUM_UNIVERSE:
        raise BudgetExceeded("universe of %d classes is too large to enumerate" % n)
    quot_closure: List[Set[int]] = []
    for i, m in enumerate(reps):
        cl: Set[int] = set()
        for spans in all_submodule_spans(m):
            quot, _ = quotient_module(m, spans, close=False)
            for piece, _ in decompose(quot):
                j = match_iso(reps, piece)
                if j is None:
                    raise UniverseIncomplete("quotient summand escaped the universe")
                cl.add(j)
        quot_closure.append(cl)
    ext_closure: Dict[Tuple[int, int], Set[int]] = {}
    for i, m in enumerate(reps):
        for j, nn in enumerate(reps):
            cl = set()
            for mid in extension_middles(m, nn):
                for piece, _ in decompose(mid):
                    k = match_iso(reps, piece)
                    if k is None:
                        raise UniverseIncomplete("extension summand escaped the universe")
                    cl.add(k)
            ext_closure[(i, j)] = cl
    hom_nonzero = [[bool(hom_space(reps[i], reps[j])) for j in range(n)] for i in range(n)]
    pairs: List[TorsionPair] = []
    for mask in range(1 << n):
        chosen = [i for i in range(n) if mask >> i & 1]
        ok = all(quot_closure[i] <= set(chosen) for i in chosen)
        if ok:
            for i in chosen:
                for j in chosen:
                    if not ext_closure[(i, j)] <= set(chosen):
                        ok = False
                        break
                if not ok:
                    break
        if not ok:
            continue
        free = [reps[j] for j in range(n) if not any(hom_nonzero[i][j] for i in chosen)]
        pairs.append(TorsionPair(alg, [reps[i] for i in chosen], free))
    counts = {
        "universe_classes": n,
        "subsets_checked": 1 << n,
        "torsion_pairs": len(pairs),
    }
    return EnumerationResult(reps, pairs, counts)
