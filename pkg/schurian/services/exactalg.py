import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import GF, QQ, ZZ, isprime
from sympy.polys.matrices import DomainMatrix

from schurian.config import settings
from schurian.exceptions import MalformedInputError, VerificationError

logger = logging.getLogger(__name__)

_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

SparseRows = Dict[int, Dict[int, int]]


@lru_cache(maxsize=None)
def _domain(characteristic: int):
    """One sympy domain instance per characteristic, so element types compare equal"""
    if characteristic == 0:
        return QQ
    return GF(characteristic, symmetric=False)


@dataclass(frozen=True)
class Field:
    """The ground field: rationals (characteristic 0) or GF(p)"""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not (self.characteristic > 1 and isprime(self.characteristic)):
            raise MalformedInputError(f"GF(p) needs a prime modulus, got {self.characteristic}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse "q", "rational" or "gf:P"."""
        label = text.strip().lower()
        if label in ("q", "qq", "rational"):
            return cls(0)
        if label.startswith("gf:"):
            try:
                return cls(int(label[3:]))
            except ValueError:
                raise MalformedInputError(f"Bad field descriptor: {text!r}")
        raise MalformedInputError(f"Bad field descriptor: {text!r} (expected q or gf:P)")

    @property
    def domain(self):
        return _domain(self.characteristic)

    @property
    def label(self) -> str:
        return "q" if self.characteristic == 0 else f"gf:{self.characteristic}"

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value):
        """Convert an int, Fraction, exact string or element of this field into a field element"""
        K = self.domain
        if K.of_type(value):
            return value
        if isinstance(value, str):
            match = _SCALAR_RE.match(value)
            if not match:
                raise MalformedInputError(f"Scalar {value!r} is not an exact integer or fraction")
            numerator = int(match.group(1))
            denominator = int(match.group(2)) if match.group(2) else 1
            return self._from_pair(numerator, denominator)
        if isinstance(value, Fraction):
            return self._from_pair(value.numerator, value.denominator)
        if isinstance(value, int):
            return K(value)
        raise MalformedInputError(f"Cannot read {value!r} as an element of {self.label}")

    def _from_pair(self, numerator: int, denominator: int):
        K = self.domain
        if denominator == 0:
            raise MalformedInputError("Zero denominator in scalar")
        if self.characteristic == 0:
            return K(numerator, denominator)
        if denominator % self.characteristic == 0:
            raise MalformedInputError(
                f"Denominator {denominator} is not invertible in GF({self.characteristic})"
            )
        return K(numerator) / K(denominator)

    def contains(self, value) -> bool:
        return self.domain.of_type(value)

    def to_string(self, value) -> str:
        """Exact decimal-free rendering ("3/4", "-2", residues in [0, p))"""
        K = self.domain
        if self.characteristic == 0:
            numerator, denominator = int(K.numer(value)), int(K.denom(value))
            return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"
        return str(int(value) % self.characteristic)


class AbelianInvariants(NamedTuple):
    """Z^free_rank ⊕ Z/d_1 ⊕ ... with d_1 | d_2 | ..., each d_i >= 2"""

    free_rank: int
    torsion: Tuple[int, ...]

    def character_dimension(self, field: Field) -> int:
        """dim Hom(G, k+) for this abelian group G"""
        if field.characteristic == 0:
            return self.free_rank
        return self.free_rank + sum(1 for d in self.torsion if d % field.characteristic == 0)


class SmithForm(NamedTuple):
    """D = U·m·V with U, V unimodular"""

    U: DomainMatrix
    D: DomainMatrix
    V: DomainMatrix
    diagonal: List[int]


def _to_sparse_int(m) -> Tuple[SparseRows, int, int]:
    if isinstance(m, DomainMatrix):
        if m.domain != ZZ:
            raise MalformedInputError(f"Expected an integer matrix, got domain {m.domain}")
        rows, cols = m.shape
        sdm = m.to_sdm()
        return {i: {j: int(v) for j, v in row.items() if v} for i, row in sdm.items()}, rows, cols
    rows = len(m)
    cols = len(m[0]) if rows else 0
    out: SparseRows = {}
    for i, row in enumerate(m):
        if len(row) != cols:
            raise MalformedInputError("Ragged integer matrix")
        entries = {}
        for j, v in enumerate(row):
            if not isinstance(v, int):
                raise MalformedInputError(f"Non-integer entry {v!r} in integer matrix")
            if v:
                entries[j] = v
        if entries:
            out[i] = entries
    return out, rows, cols


def _sparse_matmul(a: SparseRows, b: SparseRows) -> SparseRows:
    out: SparseRows = {}
    for i, row in a.items():
        acc: Dict[int, int] = {}
        for k, v in row.items():
            for j, w in b.get(k, {}).items():
                acc[j] = acc.get(j, 0) + v * w
        acc = {j: v for j, v in acc.items() if v}
        if acc:
            out[i] = acc
    return out


def _identity(n: int) -> SparseRows:
    return {i: {i: 1} for i in range(n)}


def _transpose(rows: SparseRows) -> SparseRows:
    out: SparseRows = {}
    for i, row in rows.items():
        for j, v in row.items():
            out.setdefault(j, {})[i] = v
    return out


def _axpy(target: Dict[int, int], source: Dict[int, int], c: int) -> None:
    """target += c * source, dropping zeros"""
    for j, v in source.items():
        w = target.get(j, 0) + c * v
        if w:
            target[j] = w
        else:
            target.pop(j, None)


class _SmithReducer:
    """Sparse Smith reduction on Python integers tracking U, V and their inverses.

    Rows of A, U and V^-1 are stored as dicts; V and U^-1 are stored by column.
    """

    def __init__(self, a: SparseRows, rows: int, cols: int):
        self.rows, self.cols = rows, cols
        self.A = [dict(a.get(i, {})) for i in range(rows)]
        self.U = [{i: 1} for i in range(rows)]
        self.U_inv_cols = [{i: 1} for i in range(rows)]
        self.V_cols = [{j: 1} for j in range(cols)]
        self.V_inv = [{j: 1} for j in range(cols)]

    # elementary row operations
    def add_row(self, i: int, k: int, c: int) -> None:
        _axpy(self.A[i], self.A[k], c)
        _axpy(self.U[i], self.U[k], c)
        _axpy(self.U_inv_cols[k], self.U_inv_cols[i], -c)

    def swap_rows(self, i: int, k: int) -> None:
        if i == k:
            return
        for store in (self.A, self.U, self.U_inv_cols):
            store[i], store[k] = store[k], store[i]

    def negate_row(self, i: int) -> None:
        for store in (self.A, self.U, self.U_inv_cols):
            store[i] = {j: -v for j, v in store[i].items()}

    # elementary column operations
    def add_col(self, j: int, k: int, c: int) -> None:
        for row in self.A:
            v = row.get(k)
            if v:
                w = row.get(j, 0) + c * v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
        _axpy(self.V_cols[j], self.V_cols[k], c)
        _axpy(self.V_inv[k], self.V_inv[j], -c)

    def swap_cols(self, j: int, k: int) -> None:
        if j == k:
            return
        for row in self.A:
            a, b = row.pop(j, None), row.pop(k, None)
            if a is not None:
                row[k] = a
            if b is not None:
                row[j] = b
        self.V_cols[j], self.V_cols[k] = self.V_cols[k], self.V_cols[j]
        self.V_inv[j], self.V_inv[k] = self.V_inv[k], self.V_inv[j]

    def _pivot(self, t: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(t, self.rows):
            for j, v in self.A[i].items():
                if j < t:
                    continue
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        return None if best is None else (best[1], best[2])

    def reduce(self) -> List[int]:
        diagonal: List[int] = []
        for t in range(min(self.rows, self.cols)):
            pivot = self._pivot(t)
            if pivot is None:
                diagonal.extend([0] * (min(self.rows, self.cols) - t))
                break
            self.swap_rows(t, pivot[0])
            self.swap_cols(t, pivot[1])
            while True:
                d = self.A[t][t]
                for i in range(t + 1, self.rows):
                    v = self.A[i].get(t)
                    if v:
                        self.add_row(i, t, -(v // d))
                column_rest = [(abs(self.A[i][t]), i) for i in range(t + 1, self.rows) if self.A[i].get(t)]
                if column_rest:
                    self.swap_rows(t, min(column_rest)[1])
                    continue
                for j in sorted(k for k in self.A[t] if k > t):
                    self.add_col(j, t, -(self.A[t][j] // d))
                row_rest = [(abs(v), j) for j, v in self.A[t].items() if j > t]
                if row_rest:
                    self.swap_cols(t, min(row_rest)[1])
                    continue
                offender = self._non_multiple(t, d)
                if offender is None:
                    break
                self.add_row(t, offender, 1)
            if self.A[t][t] < 0:
                self.negate_row(t)
            diagonal.append(self.A[t][t])
        return diagonal

    def _non_multiple(self, t: int, d: int) -> Optional[int]:
        for i in range(t + 1, self.rows):
            for j, v in self.A[i].items():
                if j > t and v % d:
                    return i
        return None


class ExactAlgebraService:
    """Exact linear algebra over Q and GF(p), Smith normal form over Z"""

    @staticmethod
    def field_matrix(rows: Sequence[Sequence], field: Field, cols: Optional[int] = None) -> DomainMatrix:
        """Build a sparse field matrix, converting ints, Fractions and exact strings.

        Args:
            rows: Row entries
            field: Ground field
            cols: Column count, needed when there are no rows

        Returns:
            DomainMatrix over the field's domain
        """
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries: Dict[int, Dict[int, object]] = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise MalformedInputError(f"Row {i} has {len(row)} entries, expected {ncols}")
            converted = {}
            for j, v in enumerate(row):
                if not isinstance(v, (int, str, Fraction)) and not field.contains(v):
                    raise MalformedInputError(f"Entry ({i}, {j}) does not belong to {field.label}")
                x = field(v)
                if x:
                    converted[j] = x
            if converted:
                entries[i] = converted
        return DomainMatrix(entries, (len(rows), ncols), field.domain)

    @staticmethod
    def sparse_field_matrix(entries: Dict[int, Dict[int, object]], shape: Tuple[int, int], field: Field) -> DomainMatrix:
        """Build a field matrix from {row: {col: value}} without densifying"""
        converted = {}
        for i, row in entries.items():
            r = {j: field(v) for j, v in row.items()}
            r = {j: v for j, v in r.items() if v}
            if r:
                converted[i] = r
        return DomainMatrix(converted, shape, field.domain)

    @staticmethod
    def integer_matrix(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> DomainMatrix:
        """Build a sparse integer matrix"""
        a, nrows, ncols = _to_sparse_int([list(r) for r in rows])
        if cols is not None and nrows == 0:
            ncols = cols
        return DomainMatrix({i: {j: ZZ(v) for j, v in row.items()} for i, row in a.items()}, (nrows, ncols), ZZ)

    @staticmethod
    def sparse_integer_matrix(entries: Dict[int, Dict[int, int]], shape: Tuple[int, int]) -> DomainMatrix:
        """Build an integer matrix from {row: {col: value}}"""
        return DomainMatrix(
            {i: {j: ZZ(v) for j, v in row.items() if v} for i, row in entries.items() if any(row.values())},
            shape,
            ZZ,
        )

    @staticmethod
    def reduce_mod(m: DomainMatrix, field: Field) -> DomainMatrix:
        """Image of an integer matrix over the given field"""
        entries = {i: {j: int(v) for j, v in row.items()} for i, row in m.to_sdm().items()}
        return ExactAlgebraService.sparse_field_matrix(entries, m.shape, field)

    @staticmethod
    def abelian_invariants(relations, generators: int) -> AbelianInvariants:
        """Invariants of Z^generators modulo the row span of an integer relation matrix.

        Args:
            relations: Integer matrix with one row per relation, one column per generator
            generators: Number of generators

        Returns:
            AbelianInvariants from the Smith normal form diagonal
        """
        a, rows, cols = _to_sparse_int(relations)
        if rows and cols != generators:
            raise MalformedInputError(f"Relation matrix has {cols} columns, expected {generators}")
        if rows == 0 or generators == 0:
            return AbelianInvariants(generators, ())
        diagonal = ExactAlgebraService.smith_normal_form(relations).diagonal
        nonzero = [d for d in diagonal if d]
        return AbelianInvariants(generators - len(nonzero), tuple(d for d in nonzero if d > 1))

    @staticmethod
    def _field_rows(m: DomainMatrix) -> Dict[int, Dict[int, object]]:
        K = m.domain
        if not K.is_Field:
            raise MalformedInputError(f"Expected a field matrix, got domain {K}")
        return {i: dict(row) for i, row in m.to_sdm().items()}

    @staticmethod
    def _rref(m: DomainMatrix):
        rows, cols = m.shape
        if rows == 0 or cols == 0:
            return {}, []
        ExactAlgebraService._field_rows(m)
        reduced, pivots = m.to_sparse().rref()
        return {i: dict(row) for i, row in reduced.to_sdm().items()}, list(pivots)

    @staticmethod
    def rank(m: DomainMatrix) -> int:
        """Rank over the matrix's field"""
        _, pivots = ExactAlgebraService._rref(m)
        return len(pivots)

    @staticmethod
    def nullspace_basis(m: DomainMatrix) -> List[List]:
        """Basis of {v : m·v = 0}, one vector per non-pivot column.

        Args:
            m: Field matrix

        Returns:
            List of vectors (lists of field elements), each verified to lie in the kernel
        """
        K = m.domain
        rows, cols = m.shape
        reduced, pivots = ExactAlgebraService._rref(m)
        pivot_rows = {p: i for i, p in enumerate(pivots)}
        basis = []
        for free in range(cols):
            if free in pivot_rows:
                continue
            v = [K.zero] * cols
            v[free] = K.one
            for p, i in pivot_rows.items():
                row = reduced.get(i, {})
                if free in row:
                    v[p] = -row[free] / row[p]
            basis.append(v)
        ExactAlgebraService._check_kernel(m, basis)
        return basis

    @staticmethod
    def _check_kernel(m: DomainMatrix, vectors: List[List]) -> None:
        K = m.domain
        rows = ExactAlgebraService._field_rows(m) if m.shape[0] and m.shape[1] else {}
        for v in vectors:
            for i, row in rows.items():
                total = K.zero
                for j, a in row.items():
                    total += a * v[j]
                if total:
                    raise VerificationError(f"Kernel vector fails row {i}")

    @staticmethod
    def solve_linear(m: DomainMatrix, b: Sequence) -> Optional[List]:
        """One solution of m·x = b, or None when the system is inconsistent"""
        K = m.domain
        rows, cols = m.shape
        if len(b) != rows:
            raise MalformedInputError(f"Right-hand side has {len(b)} entries, expected {rows}")
        if any(not K.of_type(x) for x in b):
            raise MalformedInputError("Right-hand side entries must belong to the matrix field")
        entries = ExactAlgebraService._field_rows(m) if rows and cols else {}
        augmented = {i: dict(entries.get(i, {})) for i in range(rows)}
        for i, x in enumerate(b):
            if x:
                augmented[i][cols] = x
        augmented = {i: r for i, r in augmented.items() if r}
        if rows == 0:
            return [K.zero] * cols
        reduced, pivots = DomainMatrix(augmented, (rows, cols + 1), K).rref()
        if cols in pivots:
            return None
        reduced_rows = reduced.to_sdm()
        x = [K.zero] * cols
        for i, p in enumerate(pivots):
            row = reduced_rows.get(i, {})
            if cols in row:
                x[p] = row[cols] / row[p]
        for i, row in entries.items():
            total = K.zero
            for j, a in row.items():
                total += a * x[j]
            if total != b[i]:
                raise VerificationError(f"Linear solve fails row {i}")
        return x

    @staticmethod
    def determinant(m) -> int:
        """Exact determinant of a square integer matrix"""
        a, rows, cols = _to_sparse_int(m)
        if rows != cols:
            raise MalformedInputError(f"Determinant of non-square {rows}x{cols} matrix")
        if rows == 0:
            return 1
        return int(DomainMatrix({i: {j: ZZ(v) for j, v in r.items()} for i, r in a.items()}, (rows, cols), ZZ).to_dense().det())

    @staticmethod
    def smith_normal_form(m, verify: Optional[bool] = None) -> SmithForm:
        """Smith normal form with deterministic pivoting.

        Pivot: smallest nonzero absolute value in the remaining block, ties broken
        by lowest (row, col).

        Args:
            m: Integer matrix (DomainMatrix over ZZ or list of int rows)
            verify: Check D = U·m·V and unimodularity (defaults to settings.verify_snf)

        Returns:
            SmithForm(U, D, V, diagonal)
        """
        a, rows, cols = _to_sparse_int(m)
        reducer = _SmithReducer(a, rows, cols)
        diagonal = reducer.reduce()
        logger.debug(f"Smith normal form of {rows}x{cols} matrix: {[d for d in diagonal if d]}")

        U = {i: r for i, r in enumerate(reducer.U) if r}
        V = _transpose({j: c for j, c in enumerate(reducer.V_cols) if c})
        D = {i: {i: d} for i, d in enumerate(diagonal) if d}

        if settings.verify_snf if verify is None else verify:
            U_inv = _transpose({i: c for i, c in enumerate(reducer.U_inv_cols) if c})
            V_inv = {j: r for j, r in enumerate(reducer.V_inv) if r}
            ExactAlgebraService._verify_smith(a, U, D, V, U_inv, V_inv, rows, cols, diagonal)

        def as_matrix(entries: SparseRows, shape):
            return DomainMatrix({i: {j: ZZ(v) for j, v in r.items()} for i, r in entries.items()}, shape, ZZ)

        return SmithForm(
            U=as_matrix(U, (rows, rows)),
            D=as_matrix(D, (rows, cols)),
            V=as_matrix(V, (cols, cols)),
            diagonal=diagonal,
        )

    @staticmethod
    def _verify_smith(a, U, D, V, U_inv, V_inv, rows, cols, diagonal) -> None:
        if _sparse_matmul(_sparse_matmul(U, a), V) != D:
            raise VerificationError("Smith normal form check failed: U·m·V != D")
        if _sparse_matmul(U, U_inv) != _identity(rows) or _sparse_matmul(V_inv, V) != _identity(cols):
            raise VerificationError("Smith normal form check failed: transform has no integer inverse")
        for n, transform in ((rows, U), (cols, V)):
            if n <= settings.snf_determinant_limit:
                det = ExactAlgebraService.determinant(
                    [[transform.get(i, {}).get(j, 0) for j in range(n)] for i in range(n)]
                )
                if abs(det) != 1:
                    raise VerificationError(f"Smith normal form check failed: det = {det}")
        nonzero = [d for d in diagonal if d]
        if any(d < 0 for d in diagonal) or nonzero != diagonal[: len(nonzero)]:
            raise VerificationError("Smith normal form check failed: bad diagonal")
        if any(nonzero[i + 1] % nonzero[i] for i in range(len(nonzero) - 1)):
            raise VerificationError("Smith normal form check failed: divisibility chain broken")

    @staticmethod
    def integer_solve(m, b: Sequence[int]) -> Optional[List[int]]:
        """Integer solution of m·x = b via the Smith normal form, or None"""
        a, rows, cols = _to_sparse_int(m)
        if len(b) != rows:
            raise MalformedInputError(f"Right-hand side has {len(b)} entries, expected {rows}")
        reducer = _SmithReducer(a, rows, cols)
        diagonal = reducer.reduce()
        # D y = U b, x = V y
        ub = [sum(v * b[k] for k, v in reducer.U[i].items()) for i in range(rows)]
        y = [0] * cols
        for i in range(rows):
            d = diagonal[i] if i < len(diagonal) else 0
            if d == 0:
                if ub[i]:
                    return None
            elif ub[i] % d:
                return None
            else:
                y[i] = ub[i] // d
        x = [0] * cols
        for j, column in enumerate(reducer.V_cols):
            for i, v in column.items():
                x[i] += v * y[j]
        for i in range(rows):
            if sum(v * x[j] for j, v in a.get(i, {}).items()) != b[i]:
                raise VerificationError(f"Integer solve fails row {i}")
        return x

    @staticmethod
    def lattice_is_full(generators: Sequence[Sequence[int]], dimension: int) -> bool:
        """True iff the integer vectors span all of Z^dimension"""
        if dimension == 0:
            return True
        if not generators:
            return False
        columns = [[g[i] for g in generators] for i in range(dimension)]
        diagonal = ExactAlgebraService.smith_normal_form(columns).diagonal
        return len(diagonal) == dimension and all(d == 1 for d in diagonal)

    @staticmethod
    def matrix_rows(m: DomainMatrix) -> List[List]:
        """Dense rows of a matrix (field or integer)"""
        rows, cols = m.shape
        entries = m.to_sdm()
        return [[entries.get(i, {}).get(j, m.domain.zero) for j in range(cols)] for i in range(rows)]


# Global service instance
exact_algebra_service = ExactAlgebraService()
