"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 malformed input.
Every file argument may be ``-`` for standard input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any

from .algebra import Algebra, is_leibniz, leibniz_kernel, liezation
from .bimodule import (
    MATRIX_CONVENTION,
    Bimodule,
    BimoduleError,
    adjoint,
    check_axioms,
    heuristic_subbimodules,
    is_completely_reducible_general,
    is_simple_general,
    semidirect_sum,
    symmetric_from_right,
)
from .decompose import DecompositionError, decompose, is_sl2_bimodule
from .sl2ext import ExtensionError, antisymmetric_irrep, classify, irrep, m1, m2
from .algebra import sl2


class InputError(Exception):
    """Malformed input (exit code 2)."""


@dataclass(frozen=True)
class CommandConfig:
    command: str
    inputs: tuple[str, ...]
    output: str | None
    fmt: str
    n: int | None = None
    m: int | None = None
    stage: str = "full"
    kind: str = "antisymmetric"


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None


def _load_algebra(path: str) -> Algebra:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "c" not in data and isinstance(data.get("algebra"), dict):
        data = data["algebra"]
    try:
        return Algebra.from_json(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_bimodule(path: str, algebra: Algebra | None = None) -> Bimodule:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        if algebra is not None and "algebra" in data:
            if Algebra.from_json(data["algebra"]) != algebra:
                raise InputError(f"{path}: field 'algebra' differs from the given algebra")
        return Bimodule.from_json(data, algebra)
    except InputError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands; each returns (payload, exit code)
# ---------------------------------------------------------------------------

def _cmd_check_leibniz(cfg):
    a = _load_algebra(cfg.inputs[0])
    res = is_leibniz(a)
    out = {"leibniz": res.ok}
    if not res.ok:
        i, j, k = res.witness
        names = a.basis_names
        out["witness"] = {"triple": [names[i], names[j], names[k]],
                          "lhs": [str(x) for x in res.lhs], "rhs": [str(x) for x in res.rhs]}
    return out, 0 if res.ok else 1


def _cmd_leib_kernel(cfg):
    a = _load_algebra(cfg.inputs[0])
    if not is_leibniz(a):
        return {"leibniz": False, "error": "not a Leibniz algebra"}, 1
    k = leibniz_kernel(a)
    return {"leibniz_kernel": {"dim": k.dim, "basis": k.to_json()},
            "liezation": liezation(a).to_json()}, 0


def _cmd_irrep(cfg):
    if cfg.n is None or cfg.n < 0:
        raise InputError("--n must be a nonnegative integer")
    if cfg.kind == "symmetric":
        bm = symmetric_from_right(sl2(), irrep(cfg.n), tuple(f"x{k}" for k in range(cfg.n + 1)))
    else:
        bm = antisymmetric_irrep(cfg.n)
    out = bm.to_json()
    out["highest_weight"] = cfg.n
    return out, 0


def _cmd_semidirect(cfg):
    a = _load_algebra(cfg.inputs[0])
    if not is_leibniz(a):
        return {"error": "algebra is not a Leibniz algebra"}, 1
    bm = _load_bimodule(cfg.inputs[1], a)
    if not check_axioms(bm).ok:
        return {"error": "bimodule fails the axioms", "axioms": check_axioms(bm).to_json()}, 1
    return semidirect_sum(a, bm).to_json(), 0


def _cmd_check_bimodule(cfg):
    a = _load_algebra(cfg.inputs[0])
    if not is_leibniz(a):
        return {"error": "algebra is not a Leibniz algebra"}, 1
    bm = _load_bimodule(cfg.inputs[1], a)
    rep = check_axioms(bm)
    return rep.to_json(), 0 if rep.ok else 1


def _cmd_decompose(cfg):
    bm = _load_bimodule(cfg.inputs[0])
    if not is_leibniz(bm.algebra):
        return {"error": "algebra is not a Leibniz algebra"}, 1
    axioms = check_axioms(bm)
    if not axioms.ok:
        return {"error": "bimodule fails the axioms", "axioms": axioms.to_json()}, 1
    if is_sl2_bimodule(bm):
        out = {"route": "sl2"}
        out.update(decompose(bm).to_json())
        return out, 0
    subs = heuristic_subbimodules(bm)
    return {"route": "general",
            "completely_reducible": is_completely_reducible_general(bm),
            "simple": is_simple_general(bm),
            "heuristic_subbimodules": [s.to_json() for s in subs]}, 0


def _cmd_classify(cfg):
    if cfg.n is None or cfg.m is None:
        raise InputError("classify needs --n and --m")
    return classify(cfg.n, cfg.m, stage=cfg.stage).to_json(), 0


def _cmd_m(fn):
    def run(cfg):
        if cfg.n is None:
            raise InputError("--n is required")
        return fn(cfg.n).to_json(), 0
    return run


def _cmd_adjoint(cfg):
    a = _load_algebra(cfg.inputs[0])
    if not is_leibniz(a):
        return {"error": "algebra is not a Leibniz algebra"}, 1
    return adjoint(a).to_json(), 0


COMMANDS = {
    "check-leibniz": (_cmd_check_leibniz, 1),
    "leib-kernel": (_cmd_leib_kernel, 1),
    "irrep": (_cmd_irrep, 0),
    "semidirect": (_cmd_semidirect, 2),
    "check-bimodule": (_cmd_check_bimodule, 2),
    "decompose": (_cmd_decompose, 1),
    "classify": (_cmd_classify, 0),
    "m1": (_cmd_m(m1), 0),
    "m2": (_cmd_m(m2), 0),
    "adjoint": (_cmd_adjoint, 1),
}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _combo(coeffs, names) -> str:
    parts = []
    for c, name in zip(coeffs, names):
        if c in ("0", "-0"):
            continue
        if c == "1":
            parts.append(f"+ {name}")
        elif c == "-1":
            parts.append(f"- {name}")
        elif c.startswith("-"):
            parts.append(f"- {c[1:]}*{name}")
        else:
            parts.append(f"+ {c}*{name}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _algebra_lines(data: dict, prefix: str) -> list[str]:
    names = data["basis"]
    lines = [f"{prefix}dim = {data['dim']}", f"{prefix}basis = {' '.join(names)}"]
    for i, x in enumerate(names):
        for j, y in enumerate(names):
            lines.append(f"{prefix}[{x},{y}] = {_combo(data['c'][i][j], names)}")
    return lines


def _bimodule_lines(data: dict, prefix: str) -> list[str]:
    names = data["basis"]
    lines = [f"{prefix}dim = {data['dim']}", f"{prefix}basis = {' '.join(names)}",
             f"{prefix}convention = {data.get('convention', MATRIX_CONVENTION)}"]
    if "algebra" in data:
        lines += _algebra_lines(data["algebra"], prefix + "algebra.")
    for x, mat in data["left"].items():
        for c, src in enumerate(names):
            lines.append(f"{prefix}<{x},{src}> = {_combo([row[c] for row in mat], names)}")
    for x, mat in data["right"].items():
        for c, src in enumerate(names):
            lines.append(f"{prefix}[{src},{x}] = {_combo([row[c] for row in mat], names)}")
    return lines


def _is_bimodule(d) -> bool:
    return isinstance(d, dict) and {"dim", "basis", "left", "right"} <= d.keys()


def _is_algebra(d) -> bool:
    return isinstance(d, dict) and {"dim", "basis", "c"} <= d.keys()


def render_table(data: Any, prefix: str = "") -> list[str]:
    """Flatten a report into ``path = value`` lines; bimodules and algebras
    are written as bracket tables."""
    if _is_bimodule(data):
        lines = _bimodule_lines(data, prefix)
        extra = {k: v for k, v in data.items() if k not in ("dim", "basis", "left", "right",
                                                            "algebra", "convention")}
        return lines + render_table(extra, prefix) if extra else lines
    if _is_algebra(data):
        return _algebra_lines(data, prefix)
    if isinstance(data, dict):
        lines = []
        for k, v in data.items():
            lines += render_table(v, f"{prefix}{k}.")
        return lines or [f"{prefix.rstrip('.')} = {{}}"]
    if isinstance(data, list):
        if all(not isinstance(x, (dict, list)) for x in data):
            return [f"{prefix.rstrip('.')} = [{', '.join(json.dumps(x) for x in data)}]"]
        lines = []
        for i, v in enumerate(data):
            lines += render_table(v, f"{prefix.rstrip('.')}[{i}].")
        return lines or [f"{prefix.rstrip('.')} = []"]
    return [f"{prefix.rstrip('.')} = {json.dumps(data)}"]


def render(payload: Any, fmt: str) -> str:
    if fmt == "table":
        return "\n".join(render_table(payload)) + "\n"
    return json.dumps(payload, indent=2) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leibniz-bimod", description="Leibniz algebras and sl2-bimodules")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "table"), default="json", dest="fmt")
        p.add_argument("--output", default=None, help="write the report here instead of stdout")
        return p

    for name, (_, nfiles) in COMMANDS.items():
        p = common(sub.add_parser(name))
        for k in range(nfiles):
            p.add_argument(f"input{k}", help="JSON file or - for stdin")
        if name in ("irrep", "classify", "m1", "m2"):
            p.add_argument("--n", type=int, required=True)
        if name == "classify":
            p.add_argument("--m", type=int, required=True)
            p.add_argument("--stage", choices=("linear", "full"), default="full")
        if name == "irrep":
            p.add_argument("--kind", choices=("antisymmetric", "symmetric"), default="antisymmetric")
    return parser


def parse_config(argv) -> CommandConfig:
    ns = build_parser().parse_args(argv)
    nfiles = COMMANDS[ns.command][1]
    return CommandConfig(
        command=ns.command,
        inputs=tuple(getattr(ns, f"input{k}") for k in range(nfiles)),
        output=ns.output,
        fmt=ns.fmt,
        n=getattr(ns, "n", None),
        m=getattr(ns, "m", None),
        stage=getattr(ns, "stage", "full"),
        kind=getattr(ns, "kind", "antisymmetric"),
    )


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
        payload, code = COMMANDS[cfg.command][0](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BimoduleError, DecompositionError, ExtensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(payload, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
