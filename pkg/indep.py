"""
Conditional independence: statements, cross-product differences and ratios,
their translation into quadratic binomials, and the pairwise and global
Markov ideals of an undirected graph.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

import networkx as nx

from ideal import Binomial, IdealBasis, MonomialOrder, normal_form, toric_markov_basis
from services import settings
from services.errors import DomainError, ResourceError, UndefinedValueError
from services.logger import setup_logger
logger = setup_logger(__name__)


@dataclass(frozen=True)
class IndependenceStatement:
    """X is independent of Y given Z."""
    X: tuple
    Y: tuple
    Z: tuple = ()

    def __post_init__(self):
        for name in ("X", "Y", "Z"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.X or not self.Y:
            raise DomainError("X and Y must be non-empty")
        X, Y, Z = set(self.X), set(self.Y), set(self.Z)
        if len(X) != len(self.X) or len(Y) != len(self.Y) or len(Z) != len(self.Z):
            raise DomainError("a variable is repeated inside a statement set")
        if X & Y or X & Z or Y & Z:
            raise DomainError(f"statement sets overlap: {self}")

    def validate(self, space):
        for name in self.X + self.Y + self.Z:
            space.position(name)
        return self

    def variables(self):
        return self.X + self.Y + self.Z

    def is_saturated(self, space):
        return set(self.variables()) == set(space.names)

    def __str__(self):
        z = ",".join(self.Z) or "{}"
        return f"{','.join(self.X)} _||_ {','.join(self.Y)} | {z}"


@dataclass(frozen=True)
class CpdSpec:
    statement: IndependenceStatement
    x: tuple
    x_prime: tuple
    y: tuple
    y_prime: tuple
    z: tuple = ()

    def __post_init__(self):
        if tuple(self.x) == tuple(self.x_prime):
            raise DomainError("x and x' must differ")
        if tuple(self.y) == tuple(self.y_prime):
            raise DomainError("y and y' must differ")

    def cells(self):
        """The four (x, y, z) combinations as (xyz, x'y'z, x'yz, xy'z)."""
        return (
            (self.x, self.y),
            (self.x_prime, self.y_prime),
            (self.x_prime, self.y),
            (self.x, self.y_prime),
        )


def _assignment(stmt, xs, ys, z):
    values = dict(zip(stmt.X, xs))
    values.update(zip(stmt.Y, ys))
    values.update(zip(stmt.Z, z))
    return values


def _joint_index(space, values):
    return space.index_of_state([values[name] for name in space.names])


def _require_saturated(stmt, space, what):
    stmt.validate(space)
    if not stmt.is_saturated(space):
        raise DomainError(
            f"{what} needs a saturated statement (X, Y and Z covering every variable); "
            f"use marginal_cpd for {stmt}"
        )


def _cell_probs(P, spec):
    _require_saturated(spec.statement, P.space, "cpd")
    return [
        P.probs[_joint_index(P.space, _assignment(spec.statement, xs, ys, spec.z))]
        for xs, ys in spec.cells()
    ]


def cpd(P, spec):
    """P(x,y,z)P(x',y',z) - P(x',y,z)P(x,y',z), exactly."""
    a, b, c, d = _cell_probs(P, spec)
    return a * b - c * d


def cpr(P, spec):
    """P(x,y,z)P(x',y',z) / P(x',y,z)P(x,y',z); undefined on a zero denominator."""
    a, b, c, d = _cell_probs(P, spec)
    if c * d == 0:
        raise UndefinedValueError(f"cross-product ratio denominator is zero for {spec.statement}")
    return Fraction(a * b) / (c * d)


def cpr_ratio(P, numerator, denominator):
    bottom = cpr(P, denominator)
    if bottom == 0:
        raise UndefinedValueError("ratio of cross-product ratios has a zero denominator")
    return cpr(P, numerator) / bottom


def marginal_cpd(P, spec):
    """cpd on the marginal of P over X, Y and Z; works for non-saturated statements."""
    space = P.space
    stmt = spec.statement.validate(space)
    names = stmt.variables()
    positions = [space.position(n) for n in names]
    marginal = {}
    for j, state in enumerate(space.states()):
        key = tuple(state[p] for p in positions)
        marginal[key] = marginal.get(key, Fraction(0)) + P.probs[j]

    def cell(xs, ys):
        values = _assignment(stmt, xs, ys, spec.z)
        return marginal.get(tuple(values[n] for n in names), Fraction(0))

    a, b, c, d = (cell(xs, ys) for xs, ys in spec.cells())
    return a * b - c * d


def statement_specs(stmt, space):
    """Every CpdSpec of a statement: unordered x pairs, unordered y pairs, each z."""
    stmt.validate(space)
    x_states = list(space.sub_space(stmt.X).states())
    y_states = list(space.sub_space(stmt.Y).states())
    z_states = list(space.sub_space(stmt.Z).states())
    for z in z_states:
        for x, x_prime in combinations(x_states, 2):
            for y, y_prime in combinations(y_states, 2):
                yield CpdSpec(stmt, x, x_prime, y, y_prime, z)


def statement_holds(P, stmt):
    return all(marginal_cpd(P, spec) == 0 for spec in statement_specs(stmt, P.space))


def _spec_binomial(space, spec):
    plus, minus = [0] * space.m, [0] * space.m
    (xyz, xpypz, xpyz, xypz) = [
        _joint_index(space, _assignment(spec.statement, xs, ys, spec.z)) for xs, ys in spec.cells()
    ]
    plus[xyz] += 1
    plus[xpypz] += 1
    minus[xpyz] += 1
    minus[xypz] += 1
    return Binomial(tuple(plus), tuple(minus))


def statement_binomials(stmt, space):
    """Square-free quadrics of a saturated statement, C(|I_X|,2) C(|I_Y|,2) |I_Z| of them."""
    _require_saturated(stmt, space, "statement_binomials")
    binomials = [_spec_binomial(space, spec) for spec in statement_specs(stmt, space)]
    return IdealBasis.build(binomials, MonomialOrder.grevlex(space.m))


def pairwise_ideal(G, space):
    """Quadrics of X_i _||_ X_j | rest, over every non-edge of G."""
    binomials = []
    for a, b in G.non_edges():
        rest = tuple(n for n in space.names if n not in (a, b))
        stmt = IndependenceStatement((a,), (b,), rest)
        binomials.extend(statement_binomials(stmt, space).binomials)
    basis = IdealBasis.build(binomials, MonomialOrder.grevlex(space.m))
    logger.info(f"Pairwise ideal: {len(G.non_edges())} non-edges, {len(basis)} binomials")
    return basis


def separates(G, X, Y, Z):
    X, Y, Z = set(X), set(Y), set(Z)
    if not X or not Y:
        raise DomainError("X and Y must be non-empty")
    if X & Y or X & Z or Y & Z:
        raise DomainError("X, Y and Z must be pairwise disjoint")
    graph = G.to_networkx()
    graph.remove_nodes_from(Z)
    for x in X:
        if nx.node_connected_component(graph, x) & Y:
            return False
    return True


def global_statements(G):
    """
    Every X _||_ Y | Z with Z separating X from Y. Each unordered {X, Y} appears
    once, with the earliest vertex of X and Y placed in X.
    """
    n = len(G.vertices)
    if n > settings.GLOBAL_MAX_VERTICES:
        raise ResourceError(f"global statements are enumerated for at most {settings.GLOBAL_MAX_VERTICES} vertices, got {n}")

    statements = []
    for assignment in product(range(4), repeat=n):
        X = tuple(v for v, a in zip(G.vertices, assignment) if a == 1)
        Y = tuple(v for v, a in zip(G.vertices, assignment) if a == 2)
        Z = tuple(v for v, a in zip(G.vertices, assignment) if a == 3)
        if not X or not Y:
            continue
        if assignment.index(1) > assignment.index(2):
            continue
        if separates(G, X, Y, Z):
            statements.append(IndependenceStatement(X, Y, Z))
    logger.debug(f"Found {len(statements)} global Markov statements on {n} vertices")
    return statements


def global_ideal(G, space):
    """Binomials of the saturated global statements."""
    binomials = []
    for stmt in global_statements(G):
        if stmt.is_saturated(space):
            binomials.extend(statement_binomials(stmt, space).binomials)
    return IdealBasis.build(binomials, MonomialOrder.grevlex(space.m))


def pairwise_multiplier(binomial, pairwise_gb, max_degree=None):
    """
    Smallest monomial w (by degree, then lexicographically) such that
    w * binomial reduces to zero modulo the pairwise Gröbner basis.
    Returns the exponent tuple of w, or None if no w up to max_degree works.
    """
    max_degree = settings.MULTIPLIER_MAX_DEGREE if max_degree is None else max_degree
    m = binomial.m
    for degree in range(max_degree + 1):
        for combo in combinations_with_replacement(range(m), degree):
            w = [0] * m
            for i in combo:
                w[i] += 1
            if normal_form(binomial.moved(tuple(w)), pairwise_gb) is None:
                return tuple(w)
    return None


def model_markov_basis(spec, from_kernel=False, budget=None):
    """Markov basis of a loaded model; graph models start from the pairwise ideal unless from_kernel."""
    seed = None
    if spec.is_graphical and not from_kernel:
        seed = pairwise_ideal(spec.graph, spec.space)
    return toric_markov_basis(spec.matrix(), seed=seed, budget=budget)
