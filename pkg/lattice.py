"""
Exact integer linear algebra on model matrices.

integer_kernel returns a Z-basis of {v in Z^m : A v = 0}. The fast path is
fraction-free (Bareiss) elimination followed by rational back-substitution,
one vector per free column. When a back-substituted vector is not already
integral, the free-column vectors may only span a sublattice of the kernel,
so the basis is rebuilt by extended-gcd row reduction of [A^T | I].
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from services.errors import DomainError
from services.logger import setup_logger
logger = setup_logger(__name__)


@dataclass(frozen=True)
class KernelLattice:
    basis: tuple
    m: int

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.m:
                raise DomainError(f"kernel vector has length {len(v)}, expected {self.m}")

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    @property
    def rank(self):
        return len(self.basis)


def _rows(A):
    """Accept a ModelMatrix or a plain sequence of integer rows."""
    entries = getattr(A, "entries", A)
    return [list(row) for row in entries]


def _width(A, rows):
    m = getattr(A, "m", None)
    if m is not None:
        return m
    return len(rows[0]) if rows else 0


def bareiss_echelon(rows, m):
    """
    Fraction-free row echelon form.

    Pivot column is the leftmost column with a nonzero entry at or below the
    current row; the pivot row is the one with the smallest absolute value
    there, earliest on ties. Returns (echelon rows, pivot columns).
    """
    E = [list(r) for r in rows]
    pivots = []
    prev = 1
    k = 0
    for c in range(m):
        if k == len(E):
            break
        candidates = [i for i in range(k, len(E)) if E[i][c] != 0]
        if not candidates:
            continue
        p = min(candidates, key=lambda i: (abs(E[i][c]), i))
        E[k], E[p] = E[p], E[k]
        pivot = E[k][c]
        for i in range(k + 1, len(E)):
            factor = E[i][c]
            row = E[i]
            for j in range(c + 1, m):
                # exact by Sylvester's identity
                row[j] = (pivot * row[j] - factor * E[k][j]) // prev
            row[c] = 0
        prev = pivot
        pivots.append(c)
        k += 1
    return E[:len(pivots)], pivots


def rank(A):
    """Exact rank over the rationals."""
    rows = _rows(A)
    _, pivots = bareiss_echelon(rows, _width(A, rows))
    return len(pivots)


def primitive(vector):
    """Divide by the gcd of the entries and make the first nonzero entry positive."""
    g = 0
    for a in vector:
        g = gcd(g, a)
    if g == 0:
        return tuple(vector)
    out = [a // g for a in vector]
    for a in out:
        if a:
            if a < 0:
                out = [-b for b in out]
            break
    return tuple(out)


def _back_substitute(E, pivots, m):
    """One rational kernel vector per free column, and whether all came out integral."""
    free = [c for c in range(m) if c not in set(pivots)]
    vectors = []
    integral = True
    for f in free:
        x = [Fraction(0)] * m
        x[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            total = sum((E[k][j] * x[j] for j in range(c + 1, m) if E[k][j] and x[j]), Fraction(0))
            x[c] = -total / E[k][c]
        scale = 1
        for value in x:
            scale = lcm(scale, value.denominator)
        if scale > 1:
            integral = False
        vectors.append(primitive([int(value * scale) for value in x]))
    return vectors, integral


def xgcd(a, b):
    """(x, y, g) with x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def unimodular_kernel(rows, m):
    """
    Z-basis of the kernel by extended-gcd reduction of [A^T | I_m].

    Every row operation is unimodular, so the identity parts of the rows whose
    A^T part ends up zero form a basis of the full integer kernel.
    """
    d = len(rows)
    work = [[rows[i][j] for i in range(d)] + [1 if k == j else 0 for k in range(m)] for j in range(m)]
    k = 0
    for c in range(d):
        candidates = [i for i in range(k, m) if work[i][c] != 0]
        if not candidates:
            continue
        p = candidates[0]
        work[k], work[p] = work[p], work[k]
        for i in candidates[1:]:
            a, b = work[k][c], work[i][c]
            if b == 0:
                continue
            x, y, g = xgcd(a, b)
            pivot_row, other = work[k], work[i]
            work[k] = [x * u + y * v for u, v in zip(pivot_row, other)]
            work[i] = [(-b // g) * u + (a // g) * v for u, v in zip(pivot_row, other)]
        k += 1
    return [primitive(row[d:]) for row in work[k:]]


def hermite_rows(vectors):
    """Row echelon basis of the Z-span of `vectors`, by the same unimodular row operations."""
    work = [list(v) for v in vectors]
    if not work:
        return []
    m = len(work[0])
    k = 0
    for c in range(m):
        candidates = [i for i in range(k, len(work)) if work[i][c] != 0]
        if not candidates:
            continue
        p = candidates[0]
        work[k], work[p] = work[p], work[k]
        for i in candidates[1:]:
            a, b = work[k][c], work[i][c]
            x, y, g = xgcd(a, b)
            pivot_row, other = work[k], work[i]
            work[k] = [x * u + y * v for u, v in zip(pivot_row, other)]
            work[i] = [(-b // g) * u + (a // g) * v for u, v in zip(pivot_row, other)]
        k += 1
    return [tuple(row) for row in work[:k]]


def in_span(echelon, vector):
    """True iff `vector` is an integer combination of the rows of a hermite_rows result."""
    v = list(vector)
    for row in echelon:
        p = next(j for j, a in enumerate(row) if a)
        if any(v[:p]) or v[p] % row[p]:
            return False
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def integer_kernel(A):
    """
    Integer basis of ker(A), count = m - rank(A), each vector primitive with a
    positive leading entry.
    """
    rows = _rows(A)
    m = _width(A, rows)
    E, pivots = bareiss_echelon(rows, m)
    basis, integral = _back_substitute(E, pivots, m)

    if not integral:
        logger.warning("Back-substituted kernel spans a proper sublattice candidate; switching to unimodular reduction")
        basis = unimodular_kernel(rows, m)

    for v in basis:
        if any(sum(a * x for a, x in zip(row, v)) for row in rows):
            raise ArithmeticError(f"kernel vector {v} fails A v = 0")

    logger.info(f"Kernel computed: m={m}, rank(A)={len(pivots)}, kernel rank={len(basis)}")
    return KernelLattice(tuple(basis), m)
