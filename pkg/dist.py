"""
Distributions and the factorization decision.

A distribution factors according to A when it is in the image of the monomial
map phi_A. Membership is decided exactly: every Markov basis binomial must
vanish at P (the non-negative toric variety), and the support must be nice.
Distributions on the variety whose support is not nice are limits of
factoring distributions but do not factor themselves.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
import pandas as pd

from ideal import monomial_value
from services import settings
from services.errors import ContractError, DomainError
from services.logger import setup_logger
logger = setup_logger(__name__)


class Status(Enum):
    FACTORS = "FACTORS"
    LIMIT_ONLY = "LIMIT_ONLY"
    OUTSIDE = "OUTSIDE"


@dataclass(frozen=True)
class Distribution:
    probs: tuple
    space: object = None

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if self.space is not None and len(probs) != self.space.m:
            raise DomainError(f"distribution has {len(probs)} entries, state space has {self.space.m}")
        if any(p < 0 for p in probs):
            raise DomainError("negative probability")
        total = sum(probs)
        if total != 1:
            raise DomainError(f"probabilities sum to {total}, not 1")

    @classmethod
    def uniform(cls, space):
        return cls((Fraction(1, space.m),) * space.m, space)

    @classmethod
    def point_mass(cls, space, index):
        return cls(tuple(Fraction(int(j == index)) for j in range(space.m)), space)

    @property
    def m(self):
        return len(self.probs)

    def __getitem__(self, j):
        return self.probs[j]

    def prob(self, state):
        return self.probs[self.space.index_of_state(state)]

    def to_frame(self):
        labels = [self.space.label(j) if self.space is not None else str(j) for j in range(self.m)]
        return pd.DataFrame({
            "state": labels,
            "probability": [f"{p.numerator}/{p.denominator}" for p in self.probs],
            "approx": [float(p) for p in self.probs],
        })


@dataclass(frozen=True)
class ParameterVector:
    t: tuple

    def __post_init__(self):
        t = tuple(Fraction(x) for x in self.t)
        object.__setattr__(self, "t", t)
        if any(x < 0 for x in t):
            raise DomainError("parameters must be non-negative")

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class FactorizationVerdict:
    status: Status
    support: frozenset
    nice: bool
    failing_binomial: object = None

    def __post_init__(self):
        if self.status is Status.FACTORS and (not self.nice or self.failing_binomial is not None):
            raise ContractError("a factoring verdict needs a nice support and no failing binomial")
        if self.status is Status.OUTSIDE and self.failing_binomial is None:
            raise ContractError("an outside verdict needs a failing binomial")


@dataclass(frozen=True)
class RecoveryFailure:
    reason: str
    max_relative_error: float = None

    def __bool__(self):
        return False


def phi(A, t):
    """Monomial parameterization: component j is prod_i t_i^{a_ij}, with 0^0 = 1."""
    values = t.t if isinstance(t, ParameterVector) else tuple(Fraction(x) for x in t)
    if len(values) != A.d:
        raise DomainError(f"parameter vector has {len(values)} entries, matrix has {A.d} rows")
    return tuple(Fraction(monomial_value(values, A.column(j))) for j in range(A.m))


def normalize(v, space=None):
    v = tuple(Fraction(x) for x in v)
    if any(x < 0 for x in v):
        raise DomainError("cannot normalize a vector with negative entries")
    total = sum(v)
    if total == 0:
        raise DomainError("cannot normalize the zero vector")
    return Distribution(tuple(x / total for x in v), space)


def support(P):
    return frozenset(j for j, p in enumerate(P.probs) if p > 0)


def row_support(F, A):
    """Union of the row supports of the columns in F."""
    rows = set()
    for j in F:
        rows |= A.column_supports[j]
    return frozenset(rows)


def is_nice(F, A):
    """
    True iff no column outside F has its row support inside the union of the
    row supports of F. The empty set counts as nice only for an empty model.
    """
    F = frozenset(F)
    if not F:
        return A.m == 0
    covered = row_support(F, A)
    for j in range(A.m):
        if j not in F and A.column_supports[j] <= covered:
            logger.debug(f"Support not nice: column {A.column_labels[j]} is covered")
            return False
    return True


def vanishes(P, basis):
    """First basis binomial that does not vanish at P, or None."""
    for b in basis:
        if b.evaluate(P.probs) != 0:
            return b
    return None


def classify(P, A, basis):
    F = support(P)
    failing = vanishes(P, basis)
    nice = is_nice(F, A)
    if failing is not None:
        status = Status.OUTSIDE
    elif nice:
        status = Status.FACTORS
    else:
        status = Status.LIMIT_ONLY
    logger.debug(f"Classified distribution with |supp|={len(F)}: {status.value}")
    return FactorizationVerdict(status, F, nice, failing)


def recover_parameters(P, A, tol=None):
    """
    Best-effort preimage t with normalize(phi(A, t)) = P.

    Rows outside the support's row cover get t_i = 0; the rest come from a
    least-squares fit of log p_j = sum_i a_ij log t_i + c over the support
    columns. The fit is verified exactly against P.

    Args:
        P: Distribution with a nice support.
        A: ModelMatrix.
        tol: Relative tolerance per non-zero coordinate.

    Returns:
        ParameterVector, or RecoveryFailure when the support is not nice or
        the verification misses tol.
    """
    tol = settings.DEFAULT_TOL if tol is None else tol
    F = sorted(support(P))
    if not is_nice(F, A):
        return RecoveryFailure("support is not nice")

    rows = sorted(row_support(F, A))
    M = np.array([[A.entries[i][j] for i in rows] + [1] for j in F], dtype=float)
    y = np.log(np.array([float(P.probs[j]) for j in F]))
    theta, *_ = np.linalg.lstsq(M, y, rcond=None)

    t = [Fraction(0)] * A.d
    for i, value in zip(rows, theta[:-1]):
        t[i] = Fraction(float(np.exp(value)))
    params = ParameterVector(tuple(t))

    Q = normalize(phi(A, params), P.space)
    worst = 0.0
    for p, q in zip(P.probs, Q.probs):
        if p == 0:
            if q != 0:
                return RecoveryFailure("recovered parameters do not reproduce the zero pattern", float("inf"))
            continue
        worst = max(worst, float(abs(q - p) / p))
    if worst > tol:
        logger.warning(f"Parameter recovery missed tolerance: max relative error {worst:.3e} > {tol:.1e}")
        return RecoveryFailure("verification missed tolerance", worst)

    logger.info(f"Recovered {len(rows)} non-zero parameters, max relative error {worst:.3e}")
    return params
