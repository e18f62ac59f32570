"""Line-oriented input files for algebras, complexes and t-structures.

One statement per line; ``#`` starts a comment.  Statements:

    vertex <id>
    arrow <id> <src> <tgt>
    relation <coeff>*<path> [+ <coeff>*<path> | - <coeff>*<path> ...]
    field p=<prime>
    field Q
    complex <name>
    entry <degree> <module-ref>
    diff <degree> <row> [; <row> ...]
    tstructure standard <n>
    tstructure hrs <torsion-pair-id>
    tstructure generated <complex-ref> [<complex-ref> ...] window <m> <n>
    tstructure silting <complex-ref>
    truncate <complex-ref>

A relation path is a dot-separated arrow list (``a.b``); a bare path is
read with coefficient 1.  ``entry`` and ``diff`` lines belong to the
preceding ``complex`` block; a diff matrix is given over the
concatenated vertex blocks of its endpoint modules, row-major, rows
separated by ``;``.

A module-ref is ``P<v>``, ``I<v>``, ``S<v>`` for a vertex id v, ``A``
for the regular module, or an inline dimension vector ``(d1,d2,...)``
read as the matching direct sum of simples.  A complex-ref is a ``+``
separated sum of parts, each a named complex from the file or one of
the stalk letters above, with an optional shift suffix ``[n]``.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import PathAlgebra
from .complexes import Complex, direct_sum_complexes, shift_complex, stalk_complex
from .errors import ParseError, TstructError
from .field import DEFAULT_PRIME, Field, PrimeField, RationalField
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    injective_module,
    projective_module,
    regular_module,
    simple_module,
)
from .perfect import PerfectComplex, direct_sum_perfect, shift_perfect
from .quiver import Arrow, Quiver
from .torsion import TorsionPair
from .tstructures import TStructureSpec, _perfect_model


class TStructureRequest:
    """Unresolved t-structure statement from an input file.

    Attributes:
        variant: One of "standard", "hrs", "generated", "silting".
        shift: Standard-variant shift.
        pair_id: Index into the canonical torsion-pair enumeration.
        generator_refs: Complex-refs of the generated variant.
        window: Declared (m, n) window of the generated variant.
        tilt_ref: Complex-ref of the silting variant.
        lineno: Source line, for error messages.
    """

    def __init__(
        self,
        variant: str,
        lineno: int,
        shift: int = 0,
        pair_id: Optional[int] = None,
        generator_refs: Optional[List[str]] = None,
        window: Optional[Tuple[int, int]] = None,
        tilt_ref: Optional[str] = None,
    ):
        self.variant = variant
        self.lineno = lineno
        self.shift = shift
        self.pair_id = pair_id
        self.generator_refs = generator_refs
        self.window = window
        self.tilt_ref = tilt_ref


class InputBundle:
    """Parsed input file: algebra plus optional complexes and requests.

    Attributes:
        algebra: The path algebra described by the file.
        field_given: Whether the file carried its own field line.
        complexes: Named complexes in file order.
        tstructure: The t-structure request, if any.
        target_ref: Complex-ref named by a truncate line, if any.
    """

    def __init__(
        self,
        algebra: PathAlgebra,
        field_given: bool,
        complexes: Dict[str, Complex],
        tstructure: Optional[TStructureRequest],
        target_ref: Optional[str],
    ):
        self.algebra = algebra
        self.field_given = field_given
        self.complexes = complexes
        self.tstructure = tstructure
        self.target_ref = target_ref


def field_from_token(token: str) -> Field:
    """Field named by a token: 'Q', a prime, or 'p=<prime>'.

    Args:
        token: Field name as written in a file or on the command line.

    Raises:
        ParseError: Unknown field name or non-prime modulus.
    """
    text = token.strip()
    if text in ("Q", "q"):
        return RationalField()
    if text.startswith("p="):
        text = text[2:]
    if not text.isdigit():
        raise ParseError("unknown field %r; expected Q, a prime, or p=<prime>" % token)
    p = int(text)
    try:
        return PrimeField(p)
    except ValueError as exc:
        raise ParseError(str(exc))


def _fail(lineno: int, message: str) -> None:
    raise ParseError("line %d: %s" % (lineno, message))


def _statements(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _parse_scalar(field: Field, token: str, lineno: int):
    try:
        if "/" in token:
            return field(Fraction(token))
        return field(int(token))
    except (ValueError, ZeroDivisionError):
        _fail(lineno, "bad scalar %r" % token)


def _parse_relation(args: List[str], lineno: int) -> List[Tuple[object, List[str]]]:
    if not args:
        _fail(lineno, "relation needs at least one term")
    terms: List[Tuple[object, List[str]]] = []
    sign = 1
    expect_term = True
    for token in args:
        if token in ("+", "-"):
            if expect_term:
                _fail(lineno, "misplaced sign in relation")
            sign = 1 if token == "+" else -1
            expect_term = True
            continue
        if not expect_term:
            _fail(lineno, "relation terms must be joined by + or -")
        if "*" in token:
            coeff_text, path_text = token.split("*", 1)
            try:
                coeff = Fraction(coeff_text)
            except (ValueError, ZeroDivisionError):
                _fail(lineno, "bad coefficient %r" % coeff_text)
        else:
            coeff, path_text = Fraction(1), token
        names = [n for n in path_text.split(".") if n]
        if not names:
            _fail(lineno, "empty path in relation")
        terms.append((sign * coeff, names))
        sign = 1
        expect_term = False
    if expect_term:
        _fail(lineno, "relation ends with a dangling sign")
    return terms


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        _fail(lineno, "bad %s %r" % (what, token))


def _parse_matrix(field: Field, args: List[str], lineno: int) -> List[List[object]]:
    rows: List[List[object]] = []
    for row_text in " ".join(args).split(";"):
        entries = row_text.replace(",", " ").split()
        rows.append([_parse_scalar(field, tok, lineno) for tok in entries])
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        _fail(lineno, "matrix rows have unequal lengths")
    return rows


def _split_blocks(
    field: Field, rows: List[List[object]], source: Module, target: Module, lineno: int
):
    if len(rows) != source.total_dim or (rows and len(rows[0]) != target.total_dim):
        _fail(
            lineno,
            "matrix is %dx%d but the differential needs %dx%d"
            % (len(rows), len(rows[0]) if rows else 0, source.total_dim, target.total_dim),
        )
    blocks = []
    for v in range(len(source.dims)):
        so, to = source.offsets[v], target.offsets[v]
        blk = field.zeros(source.dims[v], target.dims[v])
        for i in range(source.dims[v]):
            for j in range(target.dims[v]):
                blk[i, j] = rows[so + i][to + j]
        blocks.append(blk)
    zero = field(0)
    for i in range(source.total_dim):
        for j in range(target.total_dim):
            sv = max(v for v in range(len(source.dims)) if source.offsets[v] <= i)
            tv = max(v for v in range(len(target.dims)) if target.offsets[v] <= j)
            if sv != tv and rows[i][j] != zero:
                _fail(lineno, "matrix entry (%d, %d) crosses vertex blocks" % (i, j))
    return blocks


def _module_ref(algebra: PathAlgebra, token: str, lineno: int) -> Module:
    if token == "A":
        return regular_module(algebra)
    if token.startswith("(") and token.endswith(")"):
        parts = token[1:-1].replace(",", " ").split()
        dims = [_parse_int(p, lineno, "dimension") for p in parts]
        if len(dims) != algebra.quiver.num_vertices:
            _fail(lineno, "dimension vector %s has wrong length" % token)
        summands = []
        for v, d in zip(algebra.quiver.vertices, dims):
            summands.extend(simple_module(algebra, v) for _ in range(d))
        if not summands:
            return Module(algebra, [0] * algebra.quiver.num_vertices, [
                algebra.field.zeros(0, 0) for _ in algebra.quiver.arrows
            ], check=False)
        return direct_sum(summands)[0]
    kind, vertex = token[:1], token[1:]
    makers = {"P": projective_module, "I": injective_module, "S": simple_module}
    if kind not in makers or vertex not in algebra.quiver.vertex_index:
        _fail(lineno, "unknown module-ref %r" % token)
    return makers[kind](algebra, vertex)


def _ref_parts(ref: str, lineno: int) -> List[Tuple[str, int]]:
    parts = []
    for chunk in ref.split("+"):
        chunk = chunk.strip()
        if not chunk:
            _fail(lineno, "empty part in complex-ref %r" % ref)
        shift = 0
        if chunk.endswith("]"):
            base, _, inside = chunk.rpartition("[")
            if not base:
                _fail(lineno, "bad shift suffix in %r" % chunk)
            shift = _parse_int(inside[:-1], lineno, "shift")
            chunk = base
        parts.append((chunk, shift))
    return parts


def resolve_complex_ref(bundle: InputBundle, ref: str, lineno: int = 0) -> Complex:
    """Complex named by a ref, for use as a truncation target.

    Args:
        bundle: Parsed input providing the algebra and named complexes.
        ref: A + separated sum of named complexes or stalk letters,
            each with an optional [n] shift.
        lineno: Source line for error messages.

    Raises:
        ParseError: The ref names nothing known.
    """
    summands = []
    for base, shift in _ref_parts(ref, lineno):
        if base in bundle.complexes:
            part = bundle.complexes[base]
        else:
            part = stalk_complex(_module_ref(bundle.algebra, base, lineno), 0)
        summands.append(shift_complex(part, shift) if shift else part)
    if len(summands) == 1:
        return summands[0]
    return direct_sum_complexes(summands)[0]


def resolve_perfect_ref(bundle: InputBundle, ref: str, lineno: int = 0) -> PerfectComplex:
    """Minimal perfect model of the complex named by a ref.

    Args:
        bundle: Parsed input providing the algebra and named complexes.
        ref: Same grammar as resolve_complex_ref.
        lineno: Source line for error messages.
    """
    summands = []
    for base, shift in _ref_parts(ref, lineno):
        if base in bundle.complexes:
            part, _ = _perfect_model(bundle.complexes[base])
        else:
            part, _ = _perfect_model(_module_ref(bundle.algebra, base, lineno))
        summands.append(shift_perfect(part, shift) if shift else part)
    if len(summands) == 1:
        return summands[0]
    return direct_sum_perfect(summands)


def _parse_tstructure(args: List[str], lineno: int) -> TStructureRequest:
    if not args:
        _fail(lineno, "tstructure needs a variant")
    variant = args[0]
    rest = args[1:]
    if variant == "standard":
        if len(rest) != 1:
            _fail(lineno, "tstructure standard takes one shift")
        return TStructureRequest("standard", lineno, shift=_parse_int(rest[0], lineno, "shift"))
    if variant == "hrs":
        if len(rest) != 1:
            _fail(lineno, "tstructure hrs takes one torsion-pair id")
        return TStructureRequest("hrs", lineno, pair_id=_parse_int(rest[0], lineno, "pair id"))
    if variant == "generated":
        if "window" not in rest:
            _fail(lineno, "tstructure generated needs a window clause")
        at = rest.index("window")
        refs, window = rest[:at], rest[at + 1 :]
        if not refs:
            _fail(lineno, "tstructure generated needs at least one complex-ref")
        if len(window) != 2:
            _fail(lineno, "window takes exactly two integers")
        m = _parse_int(window[0], lineno, "window bound")
        n = _parse_int(window[1], lineno, "window bound")
        return TStructureRequest("generated", lineno, generator_refs=refs, window=(m, n))
    if variant == "silting":
        if len(rest) != 1:
            _fail(lineno, "tstructure silting takes one complex-ref")
        return TStructureRequest("silting", lineno, tilt_ref=rest[0])
    _fail(lineno, "unknown tstructure variant %r" % variant)


def parse_input(text: str, field_override: Optional[Field] = None) -> InputBundle:
    """Parse an input file into an algebra and its optional extras.

    Args:
        text: Full file contents.
        field_override: Field to use regardless of any field line.

    Returns:
        An InputBundle; the algebra is always present, complexes and
        t-structure requests only when the file declares them.

    Raises:
        ParseError: On any malformed line, with the line number.
    """
    statements = _statements(text)
    vertices: List[str] = []
    arrows: List[Arrow] = []
    field: Optional[Field] = None
    relation_lines: List[Tuple[int, List[str]]] = []
    body: List[Tuple[int, List[str]]] = []
    for lineno, tokens in statements:
        head, args = tokens[0], tokens[1:]
        if head == "vertex":
            if len(args) != 1:
                _fail(lineno, "vertex takes one id")
            if args[0] in vertices:
                _fail(lineno, "duplicate vertex %r" % args[0])
            vertices.append(args[0])
        elif head == "arrow":
            if len(args) != 3:
                _fail(lineno, "arrow takes id, source and target")
            if any(a.name == args[0] for a in arrows):
                _fail(lineno, "duplicate arrow %r" % args[0])
            arrows.append(Arrow(args[0], args[1], args[2]))
        elif head == "field":
            if field is not None:
                _fail(lineno, "second field line")
            if len(args) != 1:
                _fail(lineno, "field takes one name")
            try:
                field = field_from_token(args[0])
            except ParseError as exc:
                _fail(lineno, str(exc))
        elif head == "relation":
            relation_lines.append((lineno, args))
        elif head in ("complex", "entry", "diff", "tstructure", "truncate"):
            body.append((lineno, tokens))
        else:
            _fail(lineno, "unknown statement %r" % head)
    if not vertices:
        raise ParseError("input defines no vertices")
    for lineno, tokens in statements:
        if tokens[0] == "arrow":
            for end in tokens[2:4]:
                if end not in vertices:
                    _fail(lineno, "arrow endpoint %r is not a vertex" % end)
    field_given = field is not None
    if field_override is not None:
        field = field_override
    elif field is None:
        field = PrimeField(DEFAULT_PRIME)
    relations = []
    for lineno, args in relation_lines:
        relations.append(_parse_relation(args, lineno))
    try:
        algebra = PathAlgebra(Quiver(vertices, arrows), field, relations)
    except TstructError as exc:
        raise ParseError("algebra construction failed: %s" % exc)
    except ValueError as exc:
        raise ParseError("algebra construction failed: %s" % exc)

    complexes: Dict[str, Complex] = {}
    tstructure: Optional[TStructureRequest] = None
    target_ref: Optional[str] = None
    block_name: Optional[str] = None
    block_line = 0
    entries: Dict[int, Module] = {}
    diff_rows: Dict[int, Tuple[int, List[List[object]]]] = {}

    def close_block() -> None:
        if block_name is None:
            return
        diffs: Dict[int, ModuleMap] = {}
        for deg, (dline, rows) in diff_rows.items():
            if deg not in entries or (deg + 1) not in entries:
                _fail(dline, "diff at degree %d has no entries on both ends" % deg)
            blocks = _split_blocks(field, rows, entries[deg], entries[deg + 1], dline)
            try:
                diffs[deg] = ModuleMap(entries[deg], entries[deg + 1], blocks)
            except ValueError as exc:
                _fail(dline, str(exc))
        try:
            complexes[block_name] = Complex(algebra, dict(entries), diffs)
        except TstructError as exc:
            _fail(block_line, "complex %r: %s" % (block_name, exc))

    for lineno, tokens in body:
        head, args = tokens[0], tokens[1:]
        if head == "complex":
            if len(args) != 1:
                _fail(lineno, "complex takes one name")
            close_block()
            block_name, block_line = args[0], lineno
            if block_name in complexes:
                _fail(lineno, "duplicate complex %r" % block_name)
            entries, diff_rows = {}, {}
        elif head == "entry":
            if block_name is None:
                _fail(lineno, "entry outside a complex block")
            if len(args) != 2:
                _fail(lineno, "entry takes a degree and a module-ref")
            deg = _parse_int(args[0], lineno, "degree")
            if deg in entries:
                _fail(lineno, "duplicate entry at degree %d" % deg)
            entries[deg] = _module_ref(algebra, args[1], lineno)
        elif head == "diff":
            if block_name is None:
                _fail(lineno, "diff outside a complex block")
            if len(args) < 2:
                _fail(lineno, "diff takes a degree and matrix rows")
            deg = _parse_int(args[0], lineno, "degree")
            if deg in diff_rows:
                _fail(lineno, "duplicate diff at degree %d" % deg)
            diff_rows[deg] = (lineno, _parse_matrix(field, args[1:], lineno))
        elif head == "tstructure":
            close_block()
            block_name = None
            if tstructure is not None:
                _fail(lineno, "second tstructure line")
            tstructure = _parse_tstructure(args, lineno)
        else:
            close_block()
            block_name = None
            if target_ref is not None:
                _fail(lineno, "second truncate line")
            if len(args) != 1:
                _fail(lineno, "truncate takes one complex-ref")
            target_ref = args[0]
    close_block()
    return InputBundle(algebra, field_given, complexes, tstructure, target_ref)


def load_input(path: str, field_override: Optional[Field] = None) -> InputBundle:
    """Parse the input file at a path.

    Args:
        path: File system path.
        field_override: Field to use regardless of any field line.
    """
    with open(path, "r", encoding="utf-8") as handle:
        return parse_input(handle.read(), field_override)


def load_algebra(path: str, field_override: Optional[Field] = None) -> PathAlgebra:
    """Algebra described by the input file at a path."""
    return load_input(path, field_override).algebra


def build_tstructure(
    bundle: InputBundle,
    pairs: Optional[Sequence[TorsionPair]] = None,
) -> TStructureSpec:
    """Resolve the bundle's t-structure request against its algebra.

    Args:
        bundle: Parsed input carrying a tstructure line.
        pairs: Canonical torsion-pair list, required by the hrs variant.

    Returns:
        The resolved TStructureSpec.  Silting requests return the spec
        of the named tilt without verifying the silting property; run
        silting.is_silting separately when certification is wanted.

    Raises:
        ParseError: No request present, or an unresolvable reference.
    """
    req = bundle.tstructure
    if req is None:
        raise ParseError("input has no tstructure line")
    if req.variant == "standard":
        return TStructureSpec.standard(bundle.algebra, req.shift)
    if req.variant == "hrs":
        if pairs is None:
            raise ParseError("line %d: hrs request needs a torsion-pair enumeration" % req.lineno)
        if not 0 <= req.pair_id < len(pairs):
            _fail(req.lineno, "torsion-pair id %d out of range [0, %d)" % (req.pair_id, len(pairs)))
        return TStructureSpec.hrs(pairs[req.pair_id])
    if req.variant == "generated":
        gens = [resolve_perfect_ref(bundle, ref, req.lineno) for ref in req.generator_refs]
        return TStructureSpec.generated(gens, req.window)
    tilt = resolve_perfect_ref(bundle, req.tilt_ref, req.lineno)
    return TStructureSpec.silting(tilt)
