"""Command-line front end.

    kpeigen estimate   --jump 1 --c pi/2 --n 1..6
    kpeigen oracle     --a=-4/3 --b 2/3 --c pi/3 --n 2..6
    kpeigen asymptotic --jump 1 --c pi/3 --n 8..16
    kpeigen compare    --jump 1 --c pi/2 --r 5 --s 5 --n 1..6 --format csv
    kpeigen sweep      --jump 1 --c pi/2 --n 8..128 --column thm2_residual_scaled

Exit status: 0 on success, 2 on usage errors or inadmissible indices, 1 otherwise.
"""

from __future__ import annotations

import argparse
import ast
import math
import operator
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .asymptotics import second_order_kp, second_order_kp_corrected, sharp_estimate
from .gate import ConditionViolation, require_condition
from .oracle import find_eigenvalue
from .perturbation import SeriesConfig
from .potential import StepPotential, from_levels, from_pieces, make_kronig_penney, zero_potential
from .report import FORMATS, ComparisonRow, Report, render
from .solver import solve, worker_count

__all__ = ["main", "run_command", "parse_number", "parse_indices", "build_parser"]

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_node(node.operand))
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_eval_node(e) for e in node.elts]
    raise UsageError(f"unsupported expression element: {ast.dump(node)}")


def parse_number(text: str):
    """Evaluate arithmetic over numbers and ``pi`` (e.g. ``pi/2``, ``-4/3``)."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}") from exc
    return _eval_node(tree)


def _number(text: str) -> float:
    value = parse_number(text)
    if isinstance(value, list):
        raise UsageError(f"expected a number, got {text!r}")
    return float(value)


def parse_indices(text: str) -> list[int]:
    """``"3"``, ``"1..6"`` or ``"1,2,4"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise UsageError(f"indices must be positive integers, got {text!r}")
    return out


def read_config(path: str) -> dict[str, str]:
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


_POTENTIAL_KEYS = ("jump", "a", "b", "c", "pieces")
_SETTINGS = ("r", "s", "tol", "max_iter", "format", "n", "column")


def _merged(args) -> dict:
    """Config file values overridden by explicit flags."""
    values = read_config(args.config) if args.config else {}
    unknown = set(values) - set(_POTENTIAL_KEYS) - set(_SETTINGS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key in _POTENTIAL_KEYS + _SETTINGS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def build_potential(values: dict) -> StepPotential:
    has = {k for k in _POTENTIAL_KEYS if values.get(k) is not None}
    if "pieces" in has:
        if has - {"pieces"}:
            raise UsageError("pieces cannot be combined with jump/a/b/c")
        return from_pieces(parse_number(values["pieces"]))
    if "jump" in has:
        if has & {"a", "b"}:
            raise UsageError("give either --jump or --a/--b, not both")
        jump = _number(values["jump"])
        if jump == 0:
            return zero_potential()
        if "c" not in has:
            raise UsageError("--c is required with --jump")
        return make_kronig_penney(jump, _number(values["c"]))
    if {"a", "b", "c"} <= has:
        return from_levels(_number(values["a"]), _number(values["b"]), _number(values["c"]))
    raise UsageError("specify the potential with --jump/--c, --a/--b/--c or pieces in --config")


def _series_config(values: dict) -> SeriesConfig:
    return SeriesConfig(
        1,
        r=int(values.get("r", 5)),
        s=int(values.get("s", 5)),
        tol=_number(str(values.get("tol", "1e-15"))),
        max_iter=int(values.get("max_iter", 50)),
    )


def _pmap(fn, items):
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(fn, items))


def _gate(q, ns):
    for n in ns:
        require_condition(q, n)


def cmd_estimate(q, ns, values) -> Report:
    _gate(q, ns)
    base = _series_config(values)
    rows = []
    for est in _pmap(lambda n: solve(q, base.with_n(n)), ns):
        rows.append({"n": est.n, "value": est.value, "iterations": est.iterations,
                     "residual": est.residual, "total_bound": est.total_bound})
    return Report(("n", "value", "iterations", "residual", "total_bound"), rows)


def cmd_oracle(q, ns, values) -> Report:
    _gate(q, ns)
    rows = []
    for res in _pmap(lambda n: find_eigenvalue(q, n), ns):
        rows.append({"n": res.n, "value": res.value, "lo": res.bracket[0], "hi": res.bracket[1],
                     "residual": res.residual, "bisection_steps": res.bisection_steps})
    return Report(("n", "value", "lo", "hi", "residual", "bisection_steps"), rows)


def cmd_asymptotic(q, ns, values) -> Report:
    def row(n):
        return {"n": n, "thm2": second_order_kp(q, n),
                "thm2_corrected": second_order_kp_corrected(q, n),
                "sharp": sharp_estimate(q, n)}

    return Report(("n", "thm2", "thm2_corrected", "sharp"), _pmap(row, ns))


def comparison_rows(q, ns, base: SeriesConfig) -> list[ComparisonRow]:
    _gate(q, ns)

    def row(n):
        est = solve(q, base.with_n(n))
        truth = find_eigenvalue(q, n).value
        return ComparisonRow.build(n, est.value, truth, second_order_kp(q, n),
                                   sharp_estimate(q, n), est.total_bound)

    return _pmap(row, ns)


def cmd_compare(q, ns, values) -> Report:
    return Report.from_comparisons(comparison_rows(q, ns, _series_config(values)))


SWEEP_COLUMNS = ("oracle", "thm2", "thm2_corrected", "sharp", "thm2_residual_scaled",
                 "thm2_corrected_residual_scaled", "sharp_residual_scaled")


def cmd_sweep(q, ns, values) -> Report:
    _gate(q, ns)

    def row(n):
        truth = find_eigenvalue(q, n).value
        t2, t2c, sh = second_order_kp(q, n), second_order_kp_corrected(q, n), sharp_estimate(q, n)
        n3 = float(n) ** 3
        return {"n": n, "oracle": truth, "thm2": t2, "thm2_corrected": t2c, "sharp": sh,
                "thm2_residual_scaled": n3 * abs(truth - t2),
                "thm2_corrected_residual_scaled": n3 * abs(truth - t2c),
                "sharp_residual_scaled": n3 * abs(truth - sh)}

    rows = _pmap(row, ns)
    column = values.get("column")
    if column:
        if column not in SWEEP_COLUMNS:
            raise UsageError(f"unknown column {column!r}; choose from {SWEEP_COLUMNS}")
        return Report(("n", column), [{"n": r["n"], column: r[column]} for r in rows])
    return Report(("n",) + SWEEP_COLUMNS, rows)


COMMANDS = {
    "estimate": cmd_estimate,
    "oracle": cmd_oracle,
    "asymptotic": cmd_asymptotic,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    pot = common.add_argument_group("potential")
    pot.add_argument("--jump", help="b - a for the mean-zero two-piece potential (0: zero potential)")
    pot.add_argument("--a", help="level on [0, c]")
    pot.add_argument("--b", help="level on (c, pi]")
    pot.add_argument("--c", help="step position, e.g. pi/2")
    pot.add_argument("--pieces", help="[[x1, v1], [x2, v2], ...] with x_m = pi")
    common.add_argument("--config", help="file of key=value lines; flags take precedence")
    common.add_argument("--n", help="indices: 3, 1..6 or 1,2,4")
    common.add_argument("--r", type=int, help="coefficient index radius (default 5)")
    common.add_argument("--s", type=int, help="series depth (default 5)")
    common.add_argument("--tol", help="fixed-point step tolerance (default 1e-15)")
    common.add_argument("--max-iter", dest="max_iter", type=int, help="iteration cap (default 50)")
    common.add_argument("--format", choices=FORMATS, help="output format (default text)")
    common.add_argument("--column", help="sweep: emit only this column")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    parser = _Parser(prog="kpeigen", description="Dirichlet eigenvalues of step potentials on [0, pi].")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__name__.replace("cmd_", ""))
    return parser


def run_command(argv) -> tuple[int, bytes]:
    """Run one invocation; return the exit code and the rendered report."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        values = _merged(args)
        q = build_potential(values)
        ns = parse_indices(str(values.get("n", "1")))
        report = COMMANDS[args.command](q, ns, values)
        out = render(report, values.get("format") or "text")
    except ConditionViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, b""
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, b""
    except Exception as exc:  # noqa: BLE001 - reported as internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL, b""
    if args.output:
        Path(args.output).write_bytes(out)
        return EXIT_OK, b""
    return EXIT_OK, out


def main(argv=None) -> int:
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    if out:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
