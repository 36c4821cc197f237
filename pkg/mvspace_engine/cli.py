"""
Command line runner over space definition files.

Reports go to stdout as `key: value` lines; diagnostics go to stderr.
Exit codes: 0 success, 2 file or usage error, 3 invariant violation or
failed oracle check, 4 precondition failure.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from mvspace_engine import oracle
from mvspace_engine.config import configure, get_settings
from mvspace_engine.dimension_maps import (
    common_mbasis,
    im_restrict,
    ker_restrict,
    map_image,
    mdim,
    rank_nullity_check,
)
from mvspace_engine.errors import (
    BudgetExceeded,
    InvariantViolation,
    MVSpaceError,
    NotAMultiVectorSpace,
    PreconditionError,
    SpaceFileError,
)
from mvspace_engine.exact_linalg import LinearMap
from mvspace_engine.independence_basis import (
    find_mbasis,
    is_multi_linearly_independent,
    multi_index,
)
from mvspace_engine.mset import FiniteMSet
from mvspace_engine.mvspace import (
    MVSpace,
    count,
    equals,
    from_count_function,
    intersect,
    scalar,
    sum_spaces,
    to_count_function,
)
from mvspace_engine.spacefile import (
    SpaceFile,
    parse_file,
    parse_vector,
    parse_vector_list,
    serialize,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_PRECONDITION = 4

Report = List[Tuple[str, str]]


class CommandFailed(Exception):
    """A command produced its report but must exit non-zero."""

    def __init__(self, report: Report, code: int):
        super().__init__(f"command failed with exit code {code}")
        self.report = report
        self.code = code


def _split_pair(text: str) -> Tuple[str, str]:
    names = [n.strip() for n in text.split(",")]
    if len(names) != 2 or not all(names):
        raise SpaceFileError(f"expected two space names 'A,B', got {text!r}")
    return names[0], names[1]


class SpaceCommandRunner:
    """
    Runs one subcommand against a parsed space file.

    Every handler returns a list of (key, value) report lines.
    """

    def __init__(self, spacefile: SpaceFile):
        self.spacefile = spacefile

    def _space(self, name: str) -> MVSpace:
        return self.spacefile.get(name)

    def _fmt(self, vector) -> str:
        return self.spacefile.field.format_vector(vector)

    def _chain_report(self, space: MVSpace) -> Report:
        return [(f"level {n}", u.format()) for n, u in space.chain]

    # --- commands ---

    def validate(self) -> Report:
        report = [("spaces", str(len(self.spacefile.spaces)))]
        for name, space in self.spacefile.spaces.items():
            report.append((name, f"ok ({len(space.chain)} levels)"))
        return report

    def count(self, space: str, vector: str) -> Report:
        v = self._space(space)
        x = parse_vector(v.field, vector, v.ambient)
        return [("count", str(count(v, x)))]

    def dim(self, space: str) -> Report:
        v = self._space(space)
        return [("dim", str(mdim(v))), ("multi_index", multi_index(v).format())]

    def _combine(
        self, spaces: str, out: Optional[str], name: Optional[str], op: Callable, label: str
    ) -> Report:
        a, b = _split_pair(spaces)
        result = op(self._space(a), self._space(b))
        result_name = name or f"{a}_{label}_{b}"
        report = [("space", result_name)] + self._chain_report(result) + [("dim", str(mdim(result)))]
        if out:
            written = SpaceFile(
                self.spacefile.field, self.spacefile.ambient, self.spacefile.omega, {result_name: result}
            )
            with open(out, "w", encoding="utf-8") as f:
                f.write(serialize(written))
            report.append(("written", out))
        return report

    def sum(self, spaces: str, out: Optional[str] = None, name: Optional[str] = None) -> Report:
        return self._combine(spaces, out, name, sum_spaces, "sum")

    def meet(self, spaces: str, out: Optional[str] = None, name: Optional[str] = None) -> Report:
        return self._combine(spaces, out, name, intersect, "meet")

    def mbasis(self, space: str) -> Report:
        v = self._space(space)
        basis = find_mbasis(v)
        return [
            ("mbasis", " ".join(self._fmt(e) for e in basis.vectors)),
            ("counts", " ".join(str(c) for c in basis.counts)),
            ("multi_index", multi_index(v).format()),
        ]

    def indep(self, space: str, vectors: str, all_terms: bool = False) -> Report:
        v = self._space(space)
        xs = parse_vector_list(v.field, vectors, v.ambient)
        result = is_multi_linearly_independent(v, xs, all_terms=all_terms)
        if result.independent:
            return [("independent", "yes")]
        return [
            ("independent", "no"),
            ("witness", self._fmt(result.witness)),
            ("witness_count", str(result.witness_count)),
        ]

    def common_mbasis(self, spaces: str) -> Report:
        a, b = _split_pair(spaces)
        basis = common_mbasis(self._space(a), self._space(b))
        return [("common_mbasis", " ".join(self._fmt(e) for e in basis))]

    def map(self, space: str, matrix: str, what: str) -> Report:
        v = self._space(space)
        rows = parse_vector_list(v.field, matrix, v.ambient)
        f = LinearMap.from_rows(v.field, rows, v.ambient)
        if what == "image":
            result = map_image(f, v)
            return self._chain_report(result) + [("dim", str(mdim(result)))]
        if what in ("ker", "im"):
            restricted = ker_restrict(f, v) if what == "ker" else im_restrict(f, v)
            return (
                [("carrier", restricted.carrier.format())]
                + self._chain_report(restricted.space)
                + [("dim", str(mdim(restricted)))]
            )
        lhs, rhs = rank_nullity_check(f, v)
        return [
            ("ker_dim", str(mdim(ker_restrict(f, v)))),
            ("im_dim", str(mdim(im_restrict(f, v)))),
            ("dim", str(rhs)),
            ("holds", "yes" if lhs == rhs else "no"),
        ]

    def oracle_check(self) -> Report:
        spacefile = self.spacefile
        if spacefile.field.is_rational:
            raise PreconditionError("oracle-check needs a GF(p) space file")
        p = spacefile.field.p
        report: Report = []
        tables: Dict[str, FiniteMSet] = {}

        def table(name: str) -> FiniteMSet:
            # built on first use so an oversized universe skips its checks
            if name not in tables:
                tables[name] = to_count_function(spacefile.spaces[name])
            return tables[name]

        def record(check: str, fn: Callable[[], bool]) -> None:
            try:
                report.append((check, "ok" if fn() else "FAIL"))
            except BudgetExceeded as e:
                log.info("%s skipped: %s", check, e)
                report.append((check, "skipped"))

        for name, v in spacefile.spaces.items():
            record(
                f"count {name}",
                lambda v=v, name=name: equals(from_count_function(table(name)), v),
            )
            record(
                f"scalar {name}",
                lambda v=v, name=name: all(
                    to_count_function(scalar(lam, v)) == oracle.oracle_scalar(lam, table(name))
                    for lam in range(p)
                ),
            )
            record(f"mdim {name}", lambda v=v, name=name: oracle.oracle_mdim(table(name)) == mdim(v))
        names = list(spacefile.spaces)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                va, vb = spacefile.spaces[a], spacefile.spaces[b]
                record(
                    f"sum {a},{b}",
                    lambda va=va, vb=vb, a=a, b=b: to_count_function(sum_spaces(va, vb))
                    == oracle.oracle_sum(table(a), table(b)),
                )
                record(
                    f"meet {a},{b}",
                    lambda va=va, vb=vb, a=a, b=b: to_count_function(intersect(va, vb))
                    == oracle.oracle_intersection(table(a), table(b)),
                )
        if any(status == "FAIL" for _, status in report):
            raise CommandFailed(report, EXIT_INVARIANT)
        return report

    # --- dispatch ---

    def handle_command(self, name: str, arguments: dict) -> Report:
        """Route a subcommand to its handler."""
        handlers = {
            "validate": self.validate,
            "count": self.count,
            "dim": self.dim,
            "sum": self.sum,
            "meet": self.meet,
            "mbasis": self.mbasis,
            "indep": self.indep,
            "common-mbasis": self.common_mbasis,
            "map": self.map,
            "oracle-check": self.oracle_check,
        }
        handler = handlers.get(name)
        if not handler:
            raise ValueError(f"Unknown command: {name}")
        return handler(**arguments)


def get_command_definitions() -> List[dict]:
    """Subcommands with their argparse arguments."""
    space = ("--space", {"required": True, "help": "Space name"})
    spaces = ("--spaces", {"required": True, "help": "Two space names, 'A,B'"})
    out = ("--out", {"help": "Write the result as a space file"})
    name = ("--name", {"help": "Name of the written space"})
    return [
        {"name": "validate", "help": "Parse and validate every space", "arguments": []},
        {
            "name": "count",
            "help": "Count of a vector",
            "arguments": [space, ("--vector", {"required": True, "help": "Vector '(a,b,...)'"})],
        },
        {"name": "dim", "help": "Multi dimension", "arguments": [space]},
        {"name": "sum", "help": "Sum of two spaces", "arguments": [spaces, out, name]},
        {"name": "meet", "help": "Intersection of two spaces", "arguments": [spaces, out, name]},
        {"name": "mbasis", "help": "An M-basis and the multi index", "arguments": [space]},
        {
            "name": "indep",
            "help": "Multi linear independence of a family",
            "arguments": [
                space,
                ("--vectors", {"required": True, "help": "Vectors '(..);(..)'"}),
                (
                    "--all-terms",
                    {
                        "action": "store_true",
                        "dest": "all_terms",
                        "help": "Only test combinations with every coefficient nonzero",
                    },
                ),
            ],
        },
        {"name": "common-mbasis", "help": "Common M-basis of two spaces", "arguments": [spaces]},
        {
            "name": "map",
            "help": "Image, kernel and rank-nullity under a linear map",
            "arguments": [
                space,
                ("--matrix", {"required": True, "help": "Matrix rows 'r1;r2;...', entries comma separated"}),
                ("--what", {"required": True, "choices": ["image", "ker", "im", "rank-nullity"]}),
            ],
        },
        {"name": "oracle-check", "help": "Cross-check against brute force (GF files)", "arguments": []},
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvspace", description="Exact multi vector space engine")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("file", help="Space definition file")
    commands = parser.add_subparsers(dest="command", required=True)
    for definition in get_command_definitions():
        sub = commands.add_parser(definition["name"], help=definition["help"])
        for flag, kwargs in definition["arguments"]:
            sub.add_argument(flag, **kwargs)
    return parser


def _exit_code(error: Exception) -> int:
    if isinstance(error, (SpaceFileError, FileNotFoundError, KeyError)):
        return EXIT_PARSE
    if isinstance(error, (NotAMultiVectorSpace, InvariantViolation)):
        return EXIT_INVARIANT
    return EXIT_PRECONDITION


def _emit(report: Report) -> None:
    for key, value in report:
        sys.stdout.write(f"{key}: {value}\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = "DEBUG" if args.verbose else get_settings().log_level
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.verbose:
        configure(log_level="DEBUG")

    arguments = {
        key: value
        for key, value in vars(args).items()
        if key not in ("verbose", "file", "command")
    }
    try:
        spacefile = parse_file(args.file)
        report = SpaceCommandRunner(spacefile).handle_command(args.command, arguments)
    except CommandFailed as failed:
        _emit(failed.report)
        return failed.code
    except (MVSpaceError, FileNotFoundError, KeyError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        sys.stderr.write(f"error: {message}\n")
        return _exit_code(e)
    _emit(report)
    return EXIT_OK
