"""
Binomial ideals: Gröbner bases, saturation and Markov bases of toric ideals.

Every polynomial handled here is a pure difference binomial p^u - p^v stored
as a pair of exponent tuples, so S-polynomials and reductions never leave
exponent-vector arithmetic. The pipeline

    integer_kernel -> lattice_to_binomials -> buchberger -> saturate -> minimalize

turns a model matrix A into a minimal generating set of its toric ideal.
"""

import heapq
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import pandas as pd

from lattice import hermite_rows, in_span, integer_kernel, rank
from services.errors import BudgetExceeded, ContractError, DomainError
from services.logger import setup_logger
logger = setup_logger(__name__)


def _mask(e):
    bits = 0
    for i, x in enumerate(e):
        if x:
            bits |= 1 << i
    return bits


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


@dataclass(frozen=True, order=True)
class Binomial:
    """
    p^plus - p^minus.

    Terms may share factors: Gröbner bases of unsaturated ideals and moved()
    produce such binomials. Elements of a Markov basis never do.
    """
    plus: tuple
    minus: tuple

    def __post_init__(self):
        if len(self.plus) != len(self.minus):
            raise DomainError("binomial terms have different lengths")
        if any(x < 0 for x in self.plus) or any(x < 0 for x in self.minus):
            raise DomainError("negative exponent in binomial")

    @classmethod
    def from_vector(cls, v):
        return cls(tuple(x if x > 0 else 0 for x in v), tuple(-x if x < 0 else 0 for x in v))

    @classmethod
    def from_states(cls, space, plus_states, minus_states):
        plus, minus = [0] * space.m, [0] * space.m
        for state in plus_states:
            plus[space.index_of_state(state)] += 1
        for state in minus_states:
            minus[space.index_of_state(state)] += 1
        return cls(tuple(plus), tuple(minus))

    @property
    def m(self):
        return len(self.plus)

    @property
    def degree(self):
        return sum(self.plus)

    @property
    def vector(self):
        return tuple(a - b for a, b in zip(self.plus, self.minus))

    @property
    def is_zero(self):
        return self.plus == self.minus

    def negated(self):
        return Binomial(self.minus, self.plus)

    def lowest_terms(self):
        common = tuple(min(a, b) for a, b in zip(self.plus, self.minus))
        if not any(common):
            return self
        return Binomial(
            tuple(a - c for a, c in zip(self.plus, common)),
            tuple(b - c for b, c in zip(self.minus, common)),
        )

    def is_lowest_terms(self):
        return _coprime(self.plus, self.minus)

    def oriented(self, order=None):
        """Leading term first under `order`; without an order the lexicographically larger vector leads."""
        if order is None:
            return self if self.plus >= self.minus else self.negated()
        return self if order.key(self.plus) >= order.key(self.minus) else self.negated()

    def same_up_to_sign(self, other):
        return self == other or self == other.negated()

    def moved(self, multiplier):
        """w * p^plus - w * p^minus for a monomial w."""
        return Binomial(
            tuple(a + w for a, w in zip(self.plus, multiplier)),
            tuple(b + w for b, w in zip(self.minus, multiplier)),
        )

    def evaluate(self, values):
        """Exact value p^plus - p^minus at a point (0^0 = 1)."""
        return monomial_value(values, self.plus) - monomial_value(values, self.minus)

    def in_kernel_of(self, A):
        return A.times(self.plus) == A.times(self.minus)


def monomial_value(values, exponents):
    total = 1
    for v, e in zip(values, exponents):
        if e:
            total *= v ** e
            if not total:
                return total
    return total


@dataclass(frozen=True)
class MonomialOrder:
    """
    Weighted graded reverse lexicographic order.

    permutation lists variable indices from most to least expensive; weights
    give the grading. Unit weights are plain grevlex.
    """
    permutation: tuple
    weights: tuple
    kind: str = "grevlex"

    def __post_init__(self):
        m = len(self.permutation)
        if sorted(self.permutation) != list(range(m)):
            raise DomainError("monomial order permutation is not a bijection")
        if len(self.weights) != m:
            raise DomainError(f"order has {len(self.weights)} weights for {m} variables")
        if any(w <= 0 for w in self.weights):
            raise DomainError("order weights must be positive")

    @classmethod
    def grevlex(cls, m, weights=None):
        return cls(tuple(range(m)), tuple(weights) if weights is not None else (1,) * m)

    @classmethod
    def for_matrix(cls, A):
        """Grading by column sums, under which every kernel binomial is homogeneous."""
        return cls.grevlex(A.m, A.column_sums)

    @property
    def m(self):
        return len(self.permutation)

    @cached_property
    def _tiebreak(self):
        return tuple(reversed(self.permutation))

    @cached_property
    def _unit(self):
        return all(w == 1 for w in self.weights)

    def weighted_degree(self, e):
        if self._unit:
            return sum(e)
        return sum(w * x for w, x in zip(self.weights, e) if x)

    def key(self, e):
        return (self.weighted_degree(e), tuple(-e[i] for i in self._tiebreak))

    def with_cheapest(self, i):
        return MonomialOrder(tuple(j for j in self.permutation if j != i) + (i,), self.weights, self.kind)

    def is_homogeneous(self, b):
        return self.weighted_degree(b.plus) == self.weighted_degree(b.minus)


@dataclass
class Budget:
    seconds: float = None
    max_degree: int = None
    _deadline: float = field(default=None, init=False, repr=False)

    def start(self):
        if self.seconds is not None and self._deadline is None:
            self._deadline = time.monotonic() + self.seconds
        return self

    def check(self, degree=None):
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"time budget of {self.seconds}s exhausted")
        if self.max_degree is not None and degree is not None and degree > self.max_degree:
            raise BudgetExceeded(f"degree {degree} exceeds the budget of {self.max_degree}")


def _sort_key(b):
    return (b.degree, b.plus, b.minus)


@dataclass(frozen=True)
class IdealBasis:
    binomials: tuple
    order: MonomialOrder
    is_groebner: bool = False
    is_saturated: bool = False
    is_minimalized: bool = False

    @classmethod
    def build(cls, binomials, order, **flags):
        """Orient under `order`, drop zeros and duplicates, sort by (degree, plus, minus)."""
        unique = {b.oriented(order) for b in binomials if not b.is_zero}
        return cls(tuple(sorted(unique, key=_sort_key)), order, **flags)

    def __len__(self):
        return len(self.binomials)

    def __iter__(self):
        return iter(self.binomials)

    def __getitem__(self, i):
        return self.binomials[i]

    def to_frame(self, space=None):
        rows = [
            {"degree": b.degree, "binomial": render_binomial(b, space)}
            for b in self.binomials
        ]
        return pd.DataFrame(rows, columns=["degree", "binomial"])


class _Reducer:
    """Monomial normal forms against a list of (lead, trail) pairs."""

    def __init__(self, pairs=()):
        self.items = []
        for lead, trail in pairs:
            self.add(lead, trail)

    def add(self, lead, trail):
        self.items.append((lead, trail, _mask(lead)))

    def reduce(self, t):
        t_mask = _mask(t)
        while True:
            for lead, trail, l_mask in self.items:
                if l_mask & ~t_mask:
                    continue
                if _divides(lead, t):
                    t = tuple(x - a + b for x, a, b in zip(t, lead, trail))
                    t_mask = _mask(t)
                    break
            else:
                return t


class _BinomialEngine:
    """
    Buchberger's algorithm specialised to binomials, with the Gebauer-Möller
    update and the normal selection strategy (lowest lcm degree, then FIFO).
    """

    def __init__(self, order, budget=None):
        self.order = order
        self.budget = budget
        self.polys = []
        self.G = []
        self.pairs = {}
        self.heap = []
        self.counter = 0
        self.reducer = _Reducer()
        self.zero_reductions = 0

    def lead(self, i):
        return self.polys[i][0]

    def normal(self, u, v):
        """Reduced (lead, trail) of u - v modulo the current basis, or None for zero."""
        u = self.reducer.reduce(u)
        v = self.reducer.reduce(v)
        if u == v:
            return None
        if self.order.key(u) < self.order.key(v):
            u, v = v, u
        return u, v

    def insert(self, lead, trail):
        ih = len(self.polys)
        self.polys.append((lead, trail))
        self._update(ih)
        self.reducer = _Reducer(self.polys[i] for i in self.G)
        return ih

    def _push_pair(self, i, j):
        lcm_ij = _lcm(self.lead(i), self.lead(j))
        self.counter += 1
        self.pairs[(i, j)] = (self.counter, lcm_ij)
        heapq.heappush(self.heap, (self.order.weighted_degree(lcm_ij), self.counter, i, j))

    def _update(self, ih):
        mh = self.lead(ih)
        lcms = {ig: _lcm(mh, self.lead(ig)) for ig in self.G}
        masks = {ig: _mask(value) for ig, value in lcms.items()}

        def lcm_divides(ip, ig):
            return not (masks[ip] & ~masks[ig]) and _divides(lcms[ip], lcms[ig])

        # filter new pairs (h, g), g in G
        D = []
        for k, ig in enumerate(self.G):
            mg = self.lead(ig)
            if _coprime(mh, mg) or (
                    not any(lcm_divides(ip, ig) for ip in self.G[k + 1:]) and
                    not any(lcm_divides(jp, ig) for _, jp in D)):
                D.append((ih, ig))

        E = [(ih, ig) for ih, ig in D if not _coprime(mh, self.lead(ig))]

        # filter old pairs
        h_mask = _mask(mh)
        for (ig1, ig2), (_, lcm12) in list(self.pairs.items()):
            if h_mask & ~_mask(lcm12) or not _divides(mh, lcm12):
                continue
            if _lcm(self.lead(ig1), mh) != lcm12 and _lcm(self.lead(ig2), mh) != lcm12:
                del self.pairs[(ig1, ig2)]

        for _, ig in E:
            self._push_pair(ig, ih)

        # filter basis
        self.G = [ig for ig in self.G if not _divides(mh, self.lead(ig))]
        self.G.append(ih)

    def add_generator(self, b):
        if self.budget is not None:
            self.budget.check(b.degree)
        h = self.normal(b.plus, b.minus)
        if h is None:
            return False
        self.insert(*h)
        return True

    def next_degree(self):
        while self.heap:
            wdeg, counter, i, j = self.heap[0]
            entry = self.pairs.get((i, j))
            if entry is not None and entry[0] == counter:
                return wdeg
            heapq.heappop(self.heap)
        return None

    def run(self, up_to=None):
        """Process pending pairs, optionally only those of weighted degree <= up_to."""
        while True:
            wdeg = self.next_degree()
            if wdeg is None or (up_to is not None and wdeg > up_to):
                return
            _, _, i, j = heapq.heappop(self.heap)
            del self.pairs[(i, j)]

            (a, b), (c, d) = self.polys[i], self.polys[j]
            lcm_ij = _lcm(a, c)
            if self.budget is not None:
                self.budget.check(sum(lcm_ij))
            s_plus = tuple(x - y + z for x, y, z in zip(lcm_ij, a, b))
            s_minus = tuple(x - y + z for x, y, z in zip(lcm_ij, c, d))
            h = self.normal(s_plus, s_minus)
            if h is None:
                self.zero_reductions += 1
                continue
            self.insert(*h)
            if len(self.polys) % 500 == 0:
                logger.debug(f"Engine holds {len(self.G)} basis elements, {len(self.pairs)} pending pairs")

    def reduced_basis(self):
        """Interreduce G; leads are already pairwise non-dividing."""
        reducer = self.reducer
        out = []
        for ig in self.G:
            lead, trail = self.polys[ig]
            out.append(Binomial(lead, reducer.reduce(trail)))
        return out


def lattice_to_binomials(L, order=None):
    """One binomial p^{v+} - p^{v-} per kernel basis vector."""
    order = order or MonomialOrder.grevlex(L.m)
    return IdealBasis.build([Binomial.from_vector(v) for v in L.basis], order)


def normal_form(target, basis, order=None):
    """
    Remainder of a binomial (or a (plus, minus) pair) modulo a Gröbner basis.
    Returns the reduced Binomial, or None when it lies in the ideal.
    """
    order = order or basis.order
    if not basis.is_groebner:
        raise ContractError("normal_form needs a Gröbner basis")
    if order != basis.order:
        raise ContractError("normal_form order differs from the basis order")
    if isinstance(target, Binomial):
        plus, minus = target.plus, target.minus
    else:
        plus, minus = target
    reducer = _Reducer((b.plus, b.minus) for b in basis.binomials)
    u, v = reducer.reduce(tuple(plus)), reducer.reduce(tuple(minus))
    if u == v:
        return None
    return Binomial(u, v).oriented(order)


def buchberger(gens, order=None, budget=None):
    """Reduced Gröbner basis of the ideal generated by `gens`."""
    order = order or gens.order
    engine = _BinomialEngine(order, budget)
    for b in sorted(gens.binomials, key=lambda b: order.key(b.oriented(order).plus)):
        engine.add_generator(b)
    engine.run()
    result = IdealBasis.build(
        engine.reduced_basis(), order,
        is_groebner=True, is_saturated=gens.is_saturated,
    )
    logger.debug(
        f"Gröbner basis: {len(gens)} generators -> {len(result)} elements "
        f"({engine.zero_reductions} pairs reduced to zero)"
    )
    return result


def saturate(gens, budget=None):
    """
    Generators of (I : (p_1 ... p_m)^inf), one variable at a time: a Gröbner
    basis with that variable cheapest, then each element divided by the
    largest power of it shared by both terms.
    """
    base = gens.order
    current = list(gens.binomials)
    for i in range(base.m):
        order_i = base.with_cheapest(i)
        gb = buchberger(IdealBasis.build(current, order_i), order_i, budget)
        stripped = []
        changed = 0
        for b in gb.binomials:
            k = min(b.plus[i], b.minus[i])
            if k:
                changed += 1
                plus = b.plus[:i] + (b.plus[i] - k,) + b.plus[i + 1:]
                minus = b.minus[:i] + (b.minus[i] - k,) + b.minus[i + 1:]
                b = Binomial(plus, minus)
            stripped.append(b)
        if changed:
            logger.debug(f"Saturation at variable {i}: {changed} of {len(gb)} elements divided")
        current = stripped

    result = buchberger(IdealBasis.build(current, base), base, budget)
    result = IdealBasis(result.binomials, base, is_groebner=True, is_saturated=True)
    logger.info(f"Saturation finished: {len(result)} Gröbner elements")
    return result


def minimalize(basis, budget=None):
    """
    Keep an element iff it is not in the ideal of all lighter elements plus
    the kept elements of its own degree. Uses a degree-truncated Gröbner
    basis, so the input must be homogeneous for the basis order's grading.
    """
    order = basis.order
    for b in basis.binomials:
        if not order.is_homogeneous(b):
            raise ContractError(f"minimalize needs homogeneous generators; {render_binomial(b)} is not")

    engine = _BinomialEngine(order, budget)
    kept = []
    for b in sorted(basis.binomials, key=lambda b: (order.weighted_degree(b.plus), _sort_key(b))):
        wdeg = order.weighted_degree(b.plus)
        engine.run(up_to=wdeg)
        if budget is not None:
            budget.check(b.degree)
        h = engine.normal(b.plus, b.minus)
        if h is None:
            continue
        kept.append(b)
        engine.insert(*h)

    result = IdealBasis.build(
        kept, order, is_saturated=basis.is_saturated, is_minimalized=True,
    )
    logger.info(f"Minimal generating set: {len(result)} of {len(basis)} elements kept")
    return result


def degree_histogram(basis):
    counts = Counter(b.degree for b in basis)
    return dict(sorted(counts.items()))


def format_histogram(histogram):
    return " ".join(f"deg{d}={c}" for d, c in histogram.items())


def ideal_contains(gb, b):
    return normal_form(b, gb) is None


def same_ideal(a, b, budget=None):
    """Bidirectional membership: every generator of each reduces to zero modulo a GB of the other."""
    order = a.order
    gb_a = a if a.is_groebner else buchberger(a, order, budget)
    gb_b = buchberger(IdealBasis.build(b.binomials, order), order, budget)
    return all(ideal_contains(gb_b, x) for x in a) and all(ideal_contains(gb_a, x) for x in b)


def _check_seed(A, seed, lattice):
    for b in seed:
        if not b.in_kernel_of(A):
            raise DomainError(f"seed binomial {render_binomial(b, A.space)} is not in the toric ideal")
    seed_rank = rank([b.vector for b in seed]) if len(seed) else 0
    if seed_rank != len(lattice):
        logger.warning(
            f"Seed spans a lattice of rank {seed_rank}, kernel rank is {len(lattice)}; using the kernel instead"
        )
        return False
    # equal rank still admits finite-index sublattices
    echelon = hermite_rows([b.vector for b in seed])
    if not all(in_span(echelon, v) for v in lattice):
        logger.warning("Seed lattice has finite index > 1 in the kernel lattice; using the kernel instead")
        return False
    return True


def toric_markov_basis(A, seed=None, budget=None):
    """
    Minimal generating set (Markov basis) of the toric ideal I_A.

    `seed` may replace the kernel binomials with binomials whose exponent
    vectors span the whole kernel lattice over Z, e.g. the pairwise ideal of a
    graph. A seed of lower rank or of finite index > 1 falls back to the
    kernel binomials. Every returned element has disjoint plus and minus
    supports.
    """
    if budget is not None:
        budget.start()
    order = MonomialOrder.for_matrix(A)
    lattice = integer_kernel(A)

    if seed is not None and _check_seed(A, seed, lattice):
        gens = IdealBasis.build(seed.binomials, order)
        logger.info(f"Markov basis from {len(gens)} seed binomials")
    else:
        gens = lattice_to_binomials(lattice, order)
        logger.info(f"Markov basis from {len(gens)} kernel binomials")

    if len(gens) == 0:
        return IdealBasis((), order, is_groebner=True, is_saturated=True, is_minimalized=True)

    gb = buchberger(gens, order, budget)
    logger.info(f"Initial Gröbner basis: {len(gb)} elements")
    saturated = saturate(gb, budget)
    result = minimalize(saturated, budget)
    for b in result:
        if not b.is_lowest_terms():
            raise ContractError(f"Markov basis element {render_binomial(b, A.space)} shares a factor between its terms")
    logger.info(f"Markov basis histogram: {format_histogram(degree_histogram(result))}")
    return result


def _term_labels(exponents, space):
    labels = []
    for j, e in enumerate(exponents):
        name = f"p{space.label(j)}" if space is not None else f"p{j + 1}"
        labels.extend([name] * e)
    return labels


def render_binomial(b, space=None):
    """`+ p0100 p0111 - p0101 p0110`, factors in column order, repeated for powers."""
    return " ".join(["+", *_term_labels(b.plus, space), "-", *_term_labels(b.minus, space)])


def parse_binomial(text, space):
    """Inverse of render_binomial; also accepts '*' between factors and a leading term without '+'."""
    tokens = text.replace("*", " ").replace("·", " ").replace("−", "-").split()
    plus, minus = [0] * space.m, [0] * space.m
    target = plus
    seen_minus = False
    for token in tokens:
        if token == "+":
            continue
        if token == "-":
            if seen_minus:
                raise DomainError(f"binomial {text!r} has more than one '-'")
            seen_minus = True
            target = minus
            continue
        if not token.startswith("p"):
            raise DomainError(f"bad factor {token!r} in binomial {text!r}")
        target[space.index_of_label(token[1:])] += 1
    if not seen_minus:
        raise DomainError(f"binomial {text!r} has no '-' term")
    return Binomial(tuple(plus), tuple(minus))
