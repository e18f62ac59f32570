"""Structure analysis for finite-dimensional associative algebras.

An :class:`FDAlgebra` is given by structure constants over a field from
:mod:`tstruct_kit.field`.  This module computes radicals through the
regular trace form, decides whether an algebra is local, and extracts
exact idempotents by splitting minimal polynomials, which is what
indecomposability tests and direct-sum decompositions elsewhere in the
package reduce to.

Elements are (1, dim) row matrices of coordinates in the given basis.
Every answer is exact; when a question cannot be settled exactly with the
available characteristic the functions raise
:class:`~tstruct_kit.errors.UndecidedStructure` instead of guessing.
"""

from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import polyfp
from .errors import UndecidedStructure
from .field import Field

_LIFT_ITERATIONS = 64
_SEARCH_ATTEMPTS = 200


class FDAlgebra:
    """Associative unital algebra given by structure constants.

    Args:
        field: Coefficient field.
        tables: List of dim matrices; tables[i][j, :] holds the
            coordinates of basis_i * basis_j.
        unit: (1, dim) coordinates of the multiplicative unit.
    """

    def __init__(self, field: Field, tables: List[np.ndarray], unit: np.ndarray):
        self.field = field
        self.tables = tables
        self.unit = unit
        self.dim = len(tables)
        if unit.shape != (1, self.dim):
            raise ValueError("unit coordinates have wrong shape")

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.field.matmul(y, self.left_matrix(x))

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x * y acting on row vectors from the right."""
        f = self.field
        out = f.zeros(self.dim, self.dim)
        for i in range(self.dim):
            if not f.is_zero(x[0:1, i : i + 1]):
                out = f.add(out, f.scale(x[0, i], self.tables[i]))
        return out

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> y * x acting on row vectors from the right."""
        f = self.field
        rows = [f.matmul(x, self.tables[i]) for i in range(self.dim)]
        return f.stack_rows(rows, self.dim)

    def power(self, x: np.ndarray, n: int) -> np.ndarray:
        result = self.unit
        base = x
        while n:
            if n & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            n >>= 1
        return result

    def is_commutative(self) -> bool:
        f = self.field
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if not f.equal(self.tables[i][j : j + 1, :], self.tables[j][i : i + 1, :]):
                    return False
        return True

    def basis_element(self, i: int) -> np.ndarray:
        e = self.field.zeros(1, self.dim)
        e[0, i] = self.field.one_scalar()
        return e


def trace_form(alg: FDAlgebra) -> np.ndarray:
    """Bilinear form B[i, j] = trace of left multiplication by b_i b_j."""
    f = alg.field
    traces = [f.trace(alg.tables[k]) for k in range(alg.dim)]
    b = f.zeros(alg.dim, alg.dim)
    for i in range(alg.dim):
        for j in range(alg.dim):
            acc = f.zero_scalar()
            row = alg.tables[i][j]
            for k in range(alg.dim):
                acc = f.scalar_add(acc, f.scalar_mul(row[k], traces[k]))
            b[i, j] = acc
    return b


def radical_rows(alg: FDAlgebra) -> np.ndarray:
    """Basis rows of the Jacobson radical.

    The kernel of the regular trace form equals the radical in
    characteristic 0 and in characteristic p > dim.  Outside that range
    the identification can fail, so the computation refuses.

    Raises:
        UndecidedStructure: If the characteristic is too small.
    """
    p = alg.field.characteristic
    if p != 0 and p <= alg.dim:
        raise UndecidedStructure(
            "radical via trace form needs characteristic 0 or p > %d" % alg.dim
        )
    return alg.field.left_kernel(trace_form(alg))


class QuotientData:
    """Quotient of an algebra by a two-sided ideal given by row span."""

    def __init__(self, alg: FDAlgebra, ideal_rows: np.ndarray):
        f = alg.field
        rref, pivots = f.rref(ideal_rows)
        self.parent = alg
        self._rref = rref
        self._pivots = list(pivots)
        pivot_set = set(self._pivots)
        self._free = [j for j in range(alg.dim) if j not in pivot_set]
        reps = [alg.basis_element(j) for j in self._free]
        tables = []
        for i, ri in enumerate(reps):
            rows = [self.project(alg.multiply(ri, rj)) for rj in reps]
            tables.append(f.stack_rows([r for r in rows], len(reps)))
        self.algebra = FDAlgebra(f, tables, self.project(alg.unit))

    def project(self, x: np.ndarray) -> np.ndarray:
        f = self.parent.field
        v = x.copy()
        for row, c in zip(self._rref, self._pivots):
            coef = v[0, c]
            if not f.is_zero(v[0:1, c : c + 1]):
                v = f.sub(v, f.scale(coef, row.reshape(1, -1)))
        out = f.zeros(1, len(self._free))
        for k, j in enumerate(self._free):
            out[0, k] = v[0, j]
        return out

    def lift(self, xq: np.ndarray) -> np.ndarray:
        f = self.parent.field
        out = f.zeros(1, self.parent.dim)
        for k, j in enumerate(self._free):
            out[0, j] = xq[0, k]
        return out


def minimal_polynomial(alg: FDAlgebra, x: np.ndarray) -> List:
    """Monic minimal polynomial of x, lowest coefficient first."""
    f = alg.field
    rows = [alg.unit]
    power = alg.unit
    while True:
        power = alg.multiply(power, x)
        stacked = f.stack_rows(rows, alg.dim)
        sol = f.solve_left(stacked, power)
        if sol is not None:
            coeffs = [f.scalar_neg(sol[0, k]) for k in range(len(rows))]
            coeffs.append(f.one_scalar())
            return coeffs
        rows.append(power)


def _eval_poly(alg: FDAlgebra, coeffs: List, x: np.ndarray) -> np.ndarray:
    f = alg.field
    result = f.zeros(1, alg.dim)
    for c in reversed(coeffs):
        result = alg.multiply(result, x)
        result = f.add(result, f.scale(c, alg.unit))
    return result


def _idempotent_from_split_p(alg: FDAlgebra, x: np.ndarray, u, v) -> Optional[np.ndarray]:
    p = alg.field.characteristic
    g = polyfp.crt_idempotent_poly(u, v, p)
    e = _eval_poly(alg, [int(c) for c in g], x)
    return _validated_idempotent(alg, e)


def _validated_idempotent(alg: FDAlgebra, e: np.ndarray) -> Optional[np.ndarray]:
    f = alg.field
    if not f.equal(alg.multiply(e, e), e):
        return None
    if f.is_zero(e) or f.equal(e, alg.unit):
        return None
    return e


def _split_attempt_char_p(alg: FDAlgebra, x: np.ndarray) -> Optional[np.ndarray]:
    p = alg.field.characteristic
    coeffs = [int(c) % p for c in minimal_polynomial(alg, x)]
    if len(coeffs) - 1 < 2:
        return None
    split = polyfp.coprime_split(coeffs, p)
    if split is None:
        return None
    return _idempotent_from_split_p(alg, x, split[0], split[1])


def _split_attempt_char_0(alg: FDAlgebra, x: np.ndarray) -> Optional[np.ndarray]:
    import sympy

    coeffs = minimal_polynomial(alg, x)
    if len(coeffs) - 1 < 2:
        return None
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c) for c in reversed(coeffs)], t)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None
    u = factors[0][0] ** factors[0][1]
    v = sympy.Poly(1, t)
    for fac, mult in factors[1:]:
        v = v * fac**mult
    a, _, h = sympy.gcdex(u.as_expr(), v.as_expr(), t)
    if sympy.Poly(h, t).degree() != 0:
        return None
    g = sympy.rem(sympy.Poly(a, t) * u, poly, t)
    gcoeffs = [Fraction(str(c)) for c in reversed(sympy.Poly(g, t).all_coeffs())]
    e = _eval_poly(alg, gcoeffs, x)
    return _validated_idempotent(alg, e)


def _candidate_elements(alg: FDAlgebra, attempts: int):
    f = alg.field
    for i in range(alg.dim):
        yield alg.basis_element(i)
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            yield f.add(alg.basis_element(i), alg.basis_element(j))
    rng = np.random.default_rng(0)
    for _ in range(attempts):
        yield f.random_row(alg.dim, rng)


def find_idempotent(alg: FDAlgebra, attempts: int = _SEARCH_ATTEMPTS) -> Optional[np.ndarray]:
    """Search for an idempotent different from 0 and 1, or None."""
    char0 = alg.field.characteristic == 0
    for x in _candidate_elements(alg, attempts):
        e = _split_attempt_char_0(alg, x) if char0 else _split_attempt_char_p(alg, x)
        if e is not None:
            return e
    return None


def lift_idempotent(alg: FDAlgebra, quot: QuotientData, ebar: np.ndarray) -> np.ndarray:
    """Lift an idempotent of alg / nilpotent ideal back to alg.

    Uses the iteration e -> 3e^2 - 2e^3, which converges because the
    ideal is nilpotent.
    """
    f = alg.field
    e = quot.lift(ebar)
    three = f.scalar_from_int(3)
    two = f.scalar_from_int(2)
    for _ in range(_LIFT_ITERATIONS):
        sq = alg.multiply(e, e)
        if f.equal(sq, e):
            return e
        cube = alg.multiply(sq, e)
        e = f.sub(f.scale(three, sq), f.scale(two, cube))
    raise UndecidedStructure("idempotent lifting did not converge")


def _frobenius_factor_count(alg: FDAlgebra) -> int:
    """Number of field factors of a commutative semisimple algebra, char p."""
    f = alg.field
    p = f.characteristic
    rows = [alg.power(alg.basis_element(j), p) for j in range(alg.dim)]
    phi = f.stack_rows(rows, alg.dim)
    return alg.dim - f.rank(f.sub(phi, f.eye(alg.dim)))


def _frobenius_split_element(alg: FDAlgebra) -> Optional[np.ndarray]:
    """Element of the Frobenius fixed space that is not scalar."""
    f = alg.field
    p = f.characteristic
    rows = [alg.power(alg.basis_element(j), p) for j in range(alg.dim)]
    phi = f.stack_rows(rows, alg.dim)
    fixed = f.left_kernel(f.sub(phi, f.eye(alg.dim)))
    stackable = [alg.unit]
    for r in fixed:
        cand = r.reshape(1, -1)
        if f.solve_left(f.stack_rows(stackable, alg.dim), cand) is None:
            return cand
    return None


def _char0_field_certificate(alg: FDAlgebra, attempts: int) -> bool:
    """True when a primitive element proves the algebra is a field."""
    import sympy

    f = alg.field
    t = sympy.Symbol("t")
    for x in _candidate_elements(alg, attempts):
        coeffs = minimal_polynomial(alg, x)
        if len(coeffs) - 1 == alg.dim:
            poly = sympy.Poly([sympy.Rational(c) for c in reversed(coeffs)], t)
            _, factors = poly.factor_list()
            if len(factors) == 1 and factors[0][1] == 1:
                return True
    return False


def local_certificate(alg: FDAlgebra) -> Tuple[str, Optional[np.ndarray]]:
    """Decide whether the algebra is local.

    Returns:
        ("local", None) when the quotient by the radical is a division
        ring, or ("split", e) with an exact idempotent e when it is not.

    Raises:
        UndecidedStructure: When neither outcome can be certified.
    """
    f = alg.field
    rad = radical_rows(alg)
    quot = QuotientData(alg, rad)
    top = quot.algebra
    if top.dim == 1:
        return "local", None
    if top.is_commutative():
        if f.characteristic > 0:
            if _frobenius_factor_count(top) == 1:
                return "local", None
            x = _frobenius_split_element(top)
            if x is not None:
                ebar = _split_attempt_char_p(top, x)
                if ebar is not None:
                    return "split", lift_idempotent(alg, quot, ebar)
            ebar = find_idempotent(top)
            if ebar is not None:
                return "split", lift_idempotent(alg, quot, ebar)
            raise UndecidedStructure("commutative split element not found")
        ebar = find_idempotent(top)
        if ebar is not None:
            return "split", lift_idempotent(alg, quot, ebar)
        if _char0_field_certificate(top, _SEARCH_ATTEMPTS):
            return "local", None
        raise UndecidedStructure("could not certify field or find idempotent")
    ebar = find_idempotent(top, attempts=2 * _SEARCH_ATTEMPTS)
    if ebar is not None:
        return "split", lift_idempotent(alg, quot, ebar)
    if f.characteristic > 0:
        # Finite division rings are commutative, so an idempotent exists
        # but the search missed it.
        raise UndecidedStructure("noncommutative semisimple search exhausted")
    raise UndecidedStructure("possible division algebra, cannot certify")


def is_local(alg: FDAlgebra) -> bool:
    return local_certificate(alg)[0] == "local"


def corner_algebra(alg: FDAlgebra, e: np.ndarray) -> Tuple[FDAlgebra, np.ndarray]:
    """Algebra e * A * e together with basis rows inside A."""
    f = alg.field
    rows = []
    for i in range(alg.dim):
        v = alg.multiply(alg.multiply(e, alg.basis_element(i)), e)
        rows.append(v)
    span = f.row_space(f.stack_rows(rows, alg.dim))
    basis = [span[k : k + 1, :] for k in range(span.shape[0])]
    tables = []
    for bi in basis:
        prod_rows = []
        for bj in basis:
            prod = alg.multiply(bi, bj)
            coords = f.solve_left(span, prod)
            if coords is None:
                raise UndecidedStructure("corner subspace is not closed")
            prod_rows.append(coords)
        tables.append(f.stack_rows(prod_rows, span.shape[0]))
    ecoords = f.solve_left(span, e)
    if ecoords is None:
        raise UndecidedStructure("corner unit missing from span")
    return FDAlgebra(f, tables, ecoords), span


def primitive_idempotents(alg: FDAlgebra) -> List[np.ndarray]:
    """Orthogonal idempotents summing to 1, each with a local corner.

    Raises:
        UndecidedStructure: When some corner cannot be settled.
    """
    kind, e = local_certificate(alg)
    if kind == "local":
        return [alg.unit]
    f = alg.field
    out: List[np.ndarray] = []
    for part in (e, f.sub(alg.unit, e)):
        sub, span = corner_algebra(alg, part)
        for idem in primitive_idempotents(sub):
            out.append(f.matmul(idem, span))
    return out
