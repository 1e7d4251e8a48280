"""
Text formats for models, distributions, contingency tables and CPD specs.

    # model file                 # distribution file       # table file
    var X1 2                     0000 1/16                 000 3
    var X2 2                     0101 1/8                  011 1
    edge X1 X2                   ...                       ...
    gen X1 X2      (log-linear mode; never mixed with edge)

`#` starts a comment anywhere on a line. Omitted states are zero.
"""

from fractions import Fraction
from pathlib import Path

from services.errors import DomainError, ModelFileError
from services.logger import setup_logger
logger = setup_logger(__name__)


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DomainError(f"cannot read {path}: {e.strerror or e}") from None


def _lines(text):
    """(1-based line number, tokens) for every non-blank line, comments stripped."""
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield number, tokens


def parse_model_text(text, path="<model>"):
    from model import GeneratorSet, ModelSpec, StateSpace, UndirectedGraph, Variable

    variables, edges, gens = [], [], []
    declared = {}
    mode = None

    for number, tokens in _lines(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword == "var":
            if len(args) != 2:
                raise ModelFileError(path, number, "expected 'var <name> <cardinality>'")
            name, card = args
            if name in declared:
                raise ModelFileError(path, number, f"variable {name} declared twice")
            try:
                card = int(card)
            except ValueError:
                raise ModelFileError(path, number, f"cardinality {card!r} is not an integer") from None
            if card < 2:
                raise ModelFileError(path, number, f"variable {name} needs at least 2 states, got {card}")
            declared[name] = number
            variables.append(Variable(name, card))
        elif keyword in ("edge", "gen"):
            if mode is not None and mode != keyword:
                raise ModelFileError(path, number, "cannot mix 'edge' and 'gen' declarations")
            mode = keyword
            for name in args:
                if name not in declared:
                    raise ModelFileError(path, number, f"undeclared variable {name}")
            if keyword == "edge":
                if len(args) != 2:
                    raise ModelFileError(path, number, "expected 'edge <name> <name>'")
                if args[0] == args[1]:
                    raise ModelFileError(path, number, f"self-loop on {args[0]}")
                edges.append((args[0], args[1]))
            else:
                if not args:
                    raise ModelFileError(path, number, "empty generator")
                if len(set(args)) != len(args):
                    raise ModelFileError(path, number, "generator repeats a variable")
                if frozenset(args) in {frozenset(g) for g in gens}:
                    raise ModelFileError(path, number, f"duplicate generator {' '.join(args)}")
                gens.append(tuple(args))
        else:
            raise ModelFileError(path, number, f"unknown declaration {keyword!r}")

    if not variables:
        raise ModelFileError(path, 1, "no variables declared")

    space = StateSpace(tuple(variables))
    if mode == "gen":
        return ModelSpec(space, generators=GeneratorSet(tuple(gens)))
    # a file with only var lines is the edgeless graph
    return ModelSpec(space, graph=UndirectedGraph.of(space.names, edges))


def load_model(path):
    spec = parse_model_text(_read(path), str(path))
    logger.info(f"Loaded model {path}: {len(spec.space.variables)} variables, m={spec.space.m}")
    return spec


def dump_model(spec):
    lines = [f"var {v.name} {v.cardinality}" for v in spec.space.variables]
    if spec.graph is not None:
        position = {name: i for i, name in enumerate(spec.space.names)}
        edges = sorted(
            (tuple(sorted(e, key=position.__getitem__)) for e in spec.graph.edges),
            key=lambda e: (position[e[0]], position[e[1]]),
        )
        lines.extend(f"edge {a} {b}" for a, b in edges)
    else:
        lines.extend("gen " + " ".join(g) for g in spec.generators)
    return "\n".join(lines) + "\n"


def _parse_valued_lines(text, space, path, parse_value):
    values = {}
    for number, tokens in _lines(text):
        if len(tokens) != 2:
            raise ModelFileError(path, number, "expected '<state> <value>'")
        label, raw = tokens
        try:
            index = space.index_of_label(label)
        except DomainError as e:
            raise ModelFileError(path, number, str(e)) from None
        if index in values:
            raise ModelFileError(path, number, f"state {label} listed twice")
        try:
            value = parse_value(raw)
        except (ValueError, ZeroDivisionError):
            raise ModelFileError(path, number, f"invalid value {raw!r}") from None
        if value < 0:
            raise ModelFileError(path, number, f"negative value for state {label}")
        values[index] = value
    return values


def parse_distribution_text(text, space, path="<dist>", normalize=True):
    from dist import Distribution

    values = _parse_valued_lines(text, space, path, Fraction)
    vector = [values.get(j, Fraction(0)) for j in range(space.m)]
    total = sum(vector)
    if total == 0:
        raise DomainError(f"{path}: all probabilities are zero")
    if total != 1:
        if not normalize:
            raise DomainError(f"{path}: probabilities sum to {total}, not 1")
        logger.warning(f"{path}: probabilities sum to {total}; normalizing")
        vector = [v / total for v in vector]
    return Distribution(tuple(vector), space)


def load_distribution(path, space, normalize=True):
    return parse_distribution_text(_read(path), space, str(path), normalize)


def dump_distribution(P):
    """Non-zero states only, in column order."""
    lines = []
    for j, p in enumerate(P.probs):
        if p:
            lines.append(f"{P.space.label(j)} {p.numerator}/{p.denominator}")
    return "\n".join(lines) + "\n"


def parse_table_text(text, space, path="<table>"):
    from fiber import Table

    values = _parse_valued_lines(text, space, path, int)
    return Table(tuple(values.get(j, 0) for j in range(space.m)), space)


def load_table(path, space):
    return parse_table_text(_read(path), space, str(path))


def dump_table(table):
    lines = [f"{table.space.label(j)} {c}" for j, c in enumerate(table.counts) if c]
    return "\n".join(lines) + "\n"


def _parse_states(space, names, raw, count):
    states = raw.split("/") if raw else []
    if len(states) != count:
        raise DomainError(f"expected {count} state(s) for {','.join(names) or 'Z'}, got {raw!r}")
    sub = space.sub_space(names)
    parsed = []
    for label in states:
        if not names:
            if label:
                raise DomainError("empty conditioning set takes no state")
            parsed.append(())
        else:
            parsed.append(sub.state_of_index(sub.index_of_label(label)))
    return parsed


def parse_cpd_spec(text, space):
    """
    Parse "X=X3:0/1;Y=X4:0/1;Z=X1,X2:01" into a CpdSpec.

    X and Y take two states separated by '/', Z takes one; an empty
    conditioning set is written "Z=" or omitted.
    """
    from indep import CpdSpec, IndependenceStatement

    parts = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, body = chunk.partition("=")
        key = key.strip().upper()
        if not sep or key not in ("X", "Y", "Z"):
            raise DomainError(f"bad CPD spec component {chunk!r}")
        if key in parts:
            raise DomainError(f"CPD spec repeats {key}")
        names, _, states = body.partition(":")
        names = tuple(n.strip() for n in names.split(",") if n.strip())
        parts[key] = (names, states.strip())

    if "X" not in parts or "Y" not in parts:
        raise DomainError("CPD spec needs both X and Y")
    z_names, z_raw = parts.get("Z", ((), ""))
    x_names, x_raw = parts["X"]
    y_names, y_raw = parts["Y"]

    stmt = IndependenceStatement(x_names, y_names, z_names)
    stmt.validate(space)
    x, x_prime = _parse_states(space, x_names, x_raw, 2)
    y, y_prime = _parse_states(space, y_names, y_raw, 2)
    (z,) = _parse_states(space, z_names, z_raw, 1) if z_names else [()]
    return CpdSpec(stmt, x, x_prime, y, y_prime, z)
