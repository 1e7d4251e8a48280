"""
Command-line front end.

    python cli.py markov-basis data/fourcycle.model
    python cli.py classify data/fourcycle.model data/uniform_fourcycle.dist
    python cli.py prop10 3

Exit codes: 0 success, 1 bad input, 2 resource or budget exhausted
(markov-basis prints TRUNCATED), 3 recover could not produce parameters.
Logs go to stderr; stdout carries only the deterministic result text.
"""

import argparse
import sys

from constructions import pairs_model, parity_binomial
from dist import Status, classify, recover_parameters
from fiber import WalkConfig, random_walk
from ideal import Budget, degree_histogram, format_histogram, render_binomial
from indep import cpr, model_markov_basis, pairwise_ideal
from lattice import integer_kernel, rank
from services import settings
from services.errors import BudgetExceeded, DomainError, ResourceError
from services.loaders import dump_model, dump_table, load_distribution, load_model, load_table, parse_cpd_spec
from services.logger import setup_logger
logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_RESOURCE = 2
EXIT_VERDICT = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors are bad input, not argparse's exit status 2."""

    def error(self, message):
        raise DomainError(f"{self.prog}: {message}")


def _fraction(q):
    return f"{q.numerator}/{q.denominator}"


def _budget(args):
    return Budget(seconds=args.budget, max_degree=args.max_degree)


def _markov_basis(spec, args):
    return model_markov_basis(spec, args.from_kernel, _budget(args))


def cmd_markov_basis(args):
    spec = load_model(args.model)
    basis = _markov_basis(spec, args)
    for b in basis:
        print(render_binomial(b, spec.space))
    print(format_histogram(degree_histogram(basis)))
    return EXIT_OK


def cmd_pairwise(args):
    spec = load_model(args.model)
    if not spec.is_graphical:
        raise DomainError("pairwise needs a graph model (edge declarations)")
    for b in pairwise_ideal(spec.graph, spec.space):
        print(render_binomial(b, spec.space))
    return EXIT_OK


def _verdict(args):
    spec = load_model(args.model)
    A = spec.matrix()
    P = load_distribution(args.dist, spec.space)
    verdict = classify(P, A, _markov_basis(spec, args))
    return spec, A, P, verdict


def _print_verdict(spec, verdict):
    print(verdict.status.value)
    print(f"support={len(verdict.support)} nice={str(verdict.nice).lower()}")
    if verdict.failing_binomial is not None:
        print(f"failing={render_binomial(verdict.failing_binomial, spec.space)}")


def cmd_classify(args):
    spec, _, _, verdict = _verdict(args)
    _print_verdict(spec, verdict)
    return EXIT_OK


def cmd_recover(args):
    spec, A, P, verdict = _verdict(args)
    if verdict.status is not Status.FACTORS:
        _print_verdict(spec, verdict)
        return EXIT_VERDICT
    result = recover_parameters(P, A, args.tol)
    if not result:
        print(f"FAILED {result.reason}")
        if result.max_relative_error is not None:
            logger.warning(f"max relative error {result.max_relative_error:.3e}")
        return EXIT_VERDICT
    print(Status.FACTORS.value)
    for label, t in zip(A.row_labels, result.t):
        print(f"{label} {_fraction(t)}")
    return EXIT_OK


def cmd_cpr(args):
    spec = load_model(args.model)
    P = load_distribution(args.dist, spec.space)
    print(_fraction(cpr(P, parse_cpd_spec(args.spec, spec.space))))
    return EXIT_OK


def cmd_walk(args):
    spec = load_model(args.model)
    table = load_table(args.table, spec.space)
    basis = _markov_basis(spec, args)
    result = random_walk(table, basis, WalkConfig(args.steps, args.seed))
    sys.stdout.write(dump_table(result))
    return EXIT_OK


def cmd_pairs_model(args):
    sys.stdout.write(dump_model(pairs_model(args.n).spec))
    return EXIT_OK


def cmd_parity(args):
    model = pairs_model(args.n)
    print(render_binomial(parity_binomial(args.n), model.space))
    return EXIT_OK


def cmd_kernel(args):
    A = load_model(args.model).matrix()
    print(f"rank={rank(A)}")
    for v in integer_kernel(A):
        print(" ".join(str(x) for x in v))
    return EXIT_OK


def _add_budget(parser):
    parser.add_argument("--budget", type=float, default=settings.DEFAULT_BUDGET_SECONDS,
                        help="Gröbner pipeline time budget in seconds (default: unlimited)")
    parser.add_argument("--max-degree", type=int, default=None,
                        help="Abort when an S-pair exceeds this degree")
    parser.add_argument("--from-kernel", action="store_true",
                        help="Start graph models from kernel binomials instead of the pairwise ideal")


def build_parser():
    parser = _Parser(
        prog="toric",
        description="Exact toric ideal, Markov basis and factorization toolkit.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("markov-basis", help="Minimal Markov basis and degree histogram")
    p.add_argument("model")
    _add_budget(p)
    p.set_defaults(func=cmd_markov_basis)

    p = subparsers.add_parser("pairwise", help="Pairwise Markov ideal of a graph model")
    p.add_argument("model")
    p.set_defaults(func=cmd_pairwise)

    p = subparsers.add_parser("classify", help="FACTORS / LIMIT_ONLY / OUTSIDE verdict")
    p.add_argument("model")
    p.add_argument("dist")
    _add_budget(p)
    p.set_defaults(func=cmd_classify)

    p = subparsers.add_parser("recover", help="Recover parameters of a factoring distribution")
    p.add_argument("model")
    p.add_argument("dist")
    p.add_argument("--tol", type=float, default=settings.DEFAULT_TOL, help="Relative tolerance (default: %(default)s)")
    _add_budget(p)
    p.set_defaults(func=cmd_recover)

    p = subparsers.add_parser("cpr", help="Exact cross-product ratio")
    p.add_argument("model")
    p.add_argument("dist")
    p.add_argument("--spec", required=True, help='e.g. "X=X3:0/1;Y=X4:0/1;Z=X1,X2:01"')
    p.set_defaults(func=cmd_cpr)

    p = subparsers.add_parser("walk", help="Lazy Markov-basis random walk on a table")
    p.add_argument("model")
    p.add_argument("table")
    p.add_argument("--steps", type=int, default=settings.DEFAULT_WALK_STEPS)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_WALK_SEED)
    _add_budget(p)
    p.set_defaults(func=cmd_walk)

    p = subparsers.add_parser("pairs-model", help="Model file of the n non-interacting pairs graph")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_pairs_model)

    p = subparsers.add_parser("prop10", aliases=["parity"], help="Parity binomial of degree 2^n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_parity)

    p = subparsers.add_parser("kernel", help="Rank and integer kernel basis")
    p.add_argument("model")
    p.set_defaults(func=cmd_kernel)

    return parser


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        # --help
        return e.code or EXIT_OK
    except BudgetExceeded as e:
        print("TRUNCATED")
        logger.error(str(e))
        return EXIT_RESOURCE
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
