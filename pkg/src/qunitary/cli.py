"""Command-line front end producing deterministic JSON or CSV reports.

Exit status: 0 on success, 1 on invalid input, 2 when an internal
consistency check fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import __version__
from .frobenius import (
    rank1_res_module,
    reality_preserving_algebra,
    sector_characters,
    tilde_data,
    verify_tilde_relations_rank1,
)
from .gram import (
    DEFAULT_HEIGHT_BUDGET,
    character_stability_scan,
    classical_limit_scan,
    gram_block,
    module_report,
    verify_shift_equivalence,
)
from .qfield import Cyclotomic, QRoot
from .qspec import (
    RealForm,
    RootOfUnitySpec,
    alcove_adjacency,
    compact_bound_check,
    compute_spec,
    hermitian_nodes,
    hyperplane_check,
    realizable_forms,
    singlet_p_from_z,
    singlet_weights,
    special_point,
)
from .rootdata import RootSystem, parse_algebra

__all__ = ["main", "run", "RunConfig"]

COMMANDS = (
    "spec",
    "dual",
    "special-points",
    "unitary-table",
    "gram",
    "shift-check",
    "limit-scan",
    "frobenius-check",
    "reality-algebra",
    "classify-forms",
)
HEIGHT_ENV = "QUNITARY_HEIGHT_BUDGET"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    algebra: str
    q: str
    form: str | None
    shift: str | None
    weight: str | None
    max_weight: int
    target: str | None
    z: str | None
    node: int | None
    k_max: int
    samples: str | None
    height_budget: int
    format: str
    output: str | None


# ---------------------------------------------------------------------------
# rendering


def _frac(x) -> str:
    return str(Fraction(x))


def _weight_key(w: Sequence) -> str:
    return ",".join(_frac(c) for c in w)


def _cyclotomic(x: Cyclotomic) -> dict:
    return {
        "conductor": x.m,
        "coeffs": [_frac(c) for c in x.coeffs],
        "approx": f"{x.approx().real:.12g}",
    }


def _spec_summary(spec: RootOfUnitySpec) -> dict:
    return {
        "M": spec.M,
        "parity": spec.parity,
        "M_i": list(spec.M_simple),
        "M_alpha": {",".join(map(str, a)): spec.M_per_root[a] for a in spec.rs.positive_roots},
        "dual_type": spec.dual_type,
    }


def _report_row(rep, bound: bool | None = None) -> dict:
    row = {
        "lambda": [_frac(c) for c in rep.lam],
        "form": str(rep.form),
        "dims": {_weight_key(w): d for w, d in rep.dims.items()},
        "total_dim": rep.total_dim,
        "unitary": rep.unitary,
        "classical_character": rep.classical_character,
        "truncated": rep.truncated,
    }
    if bound is not None:
        row["within_compact_bound"] = bound
    return row


def _parse_ints(text: str | None, rank: int, what: str) -> tuple[int, ...]:
    if text is None:
        raise ValueError(f"--{what} is required for this command")
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValueError(f"--{what} must be {rank} comma-separated integers, got {text!r}") from exc
    if len(vals) != rank:
        raise ValueError(f"--{what} needs {rank} entries, got {len(vals)}")
    return vals


def _parse_weight(text: str | None, rank: int) -> tuple[Fraction, ...]:
    if text is None:
        raise ValueError("--weight is required for this command")
    try:
        vals = tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"--weight must be comma-separated rationals, got {text!r}") from exc
    if len(vals) != rank:
        raise ValueError(f"--weight needs {rank} entries, got {len(vals)}")
    return vals


def _resolve_form(cfg: RunConfig, rs: RootSystem, spec: RootOfUnitySpec):
    """(form, lambda_r) from --form or --shift; lambda_r is zero for an explicit form."""
    if cfg.shift is not None:
        if cfg.form not in (None, "compact"):
            raise ValueError("give either --form or --shift, not both")
        lam_r, form = singlet_weights(rs, spec, _parse_ints(cfg.shift, rs.rank, "shift"))
        return form, lam_r
    form = RealForm.parse(cfg.form or "compact", rs.rank)
    return form, (Fraction(0),) * rs.rank


# ---------------------------------------------------------------------------
# commands


def _cmd_spec(cfg, rs, spec):
    td = tilde_data(rs, spec)
    return [
        {
            "cartan": [list(r) for r in rs.cartan],
            "d": list(rs.d),
            "roles_swapped": spec.roles_swapped,
            "s_matrix": [list(r) for r in td.s_matrix],
            "bipartition": list(td.a),
        }
    ]


def _cmd_dual(cfg, rs, spec):
    return [
        {
            "A": [list(r) for r in rs.cartan],
            "A_tilde": [list(r) for r in spec.dual_cartan],
            "dual_type": spec.dual_type,
            "roles_swapped": spec.roles_swapped,
        }
    ]


def _cmd_special_points(cfg, rs, spec):
    td = tilde_data(rs, spec)
    bound = cfg.max_weight
    rows = []
    for z in product(range(-bound, bound + 1), repeat=rs.rank):
        lam = special_point(z, spec)
        _, form = singlet_weights(rs, spec, singlet_p_from_z(z, spec))
        rows.append(
            {
                "z": list(z),
                "lambda": [_frac(c) for c in lam],
                "on_all_hyperplanes": hyperplane_check(lam, spec),
                "k_tilde": list(td.k_tilde(z)),
                "form": str(form),
            }
        )
    return rows


def _dominant_box(rank: int, bound: int):
    return sorted(product(range(bound + 1), repeat=rank), key=lambda w: (sum(w), w))


def _cmd_unitary_table(cfg, rs, spec):
    form, lam_r = _resolve_form(cfg, rs, spec)
    samples = [QRoot.parse(t) for t in cfg.samples.split(",")] if cfg.samples else []
    rows = []
    for lam0 in _dominant_box(rs.rank, cfg.max_weight):
        lam = tuple(a + b for a, b in zip(lam0, lam_r))
        rep = module_report(rs, spec, lam, form, cfg.height_budget)
        row = _report_row(rep, compact_bound_check(lam0, spec))
        if samples and form.is_compact:
            row["stability"] = character_stability_scan(rs, lam0, spec, samples, cfg.height_budget)
        rows.append(row)
    return rows


def _cmd_gram(cfg, rs, spec):
    form, lam_r = _resolve_form(cfg, rs, spec)
    lam = tuple(a + b for a, b in zip(_parse_weight(cfg.weight, rs.rank), lam_r))
    if cfg.target is None:
        rep = module_report(rs, spec, lam, form, cfg.height_budget)
        return [_report_row(rep)]
    block = gram_block(rs, spec, lam, form, _parse_ints(cfg.target, rs.rank, "target"))
    return [
        {
            "lambda": [_frac(c) for c in lam],
            "form": str(form),
            "weight": [_frac(c) for c in block.weight],
            "words": [list(w) for w in block.words],
            "matrix": [[_cyclotomic(x) for x in row] for row in block.matrix],
            "rank": block.rank,
            "signature": list(block.signature),
        }
    ]


def _cmd_shift_check(cfg, rs, spec):
    lam0 = _parse_weight(cfg.weight, rs.rank)
    p = _parse_ints(cfg.shift, rs.rank, "shift")
    lam_r, form = singlet_weights(rs, spec, p)
    height = min(8, cfg.height_budget)
    return [
        {
            "lambda_0": [_frac(c) for c in lam0],
            "lambda_r": [_frac(c) for c in lam_r],
            "form": str(form),
            "height": height,
            "blocks_equal": verify_shift_equivalence(rs, spec, lam0, p, height),
        }
    ]


def _cmd_limit_scan(cfg, rs, spec):
    lam = _parse_weight(cfg.weight, rs.rank)
    if cfg.node is None:
        raise ValueError("--node is required for limit-scan")
    stages = classical_limit_scan(rs, lam, cfg.node, spec.q, cfg.k_max, cfg.height_budget)
    return [
        {
            "k": st["k"],
            "q": st["q"],
            "lambda": [_frac(c) for c in lam],
            "lambda_0": [_frac(c) for c in st["lambda_0"]],
            "form": str(st["form"]),
            "unitary": st["unitary"],
            "total_dim": st["total_dim"],
            "truncated": st["truncated"],
        }
        for st in stages
    ]


def _cmd_frobenius_check(cfg, rs, spec):
    z = _parse_ints(cfg.z, rs.rank, "z")
    rows = []
    if rs.rank == 1:
        rel = verify_tilde_relations_rank1(rank1_res_module(z[0], spec))
        rows.append(
            {
                "check": "rank1_relations",
                "z": list(z),
                "ok": rel.ok,
                "h_tilde_eigenvalues": [None if e is None else _frac(e) for e in rel.eigenvalues],
                "failures": list(rel.failures),
            }
        )
    lam0 = _parse_weight(cfg.weight or ",".join(["0"] * rs.rank), rs.rank)
    by_sector, convolved = sector_characters(rs, spec, lam0, z, cfg.height_budget)
    order = lambda d: {_weight_key(w): d[w] for w in sorted(d)}
    rows.append(
        {
            "check": "tensor_character",
            "lambda_0": [_frac(c) for c in lam0],
            "z": list(z),
            "ok": by_sector == convolved,
            "total_dim": sum(by_sector.values()),
            "sector_character": order(by_sector),
            "convolved_character": order(convolved),
        }
    )
    return rows


def _cmd_reality_algebra(cfg, rs, spec):
    ra = reality_preserving_algebra(rs, spec)
    return [{"kind": ra.kind, "label": ra.label, "nodes": list(ra.nodes), "rank": ra.rank}]


def _cmd_classify_forms(cfg, rs, spec):
    rows = []
    realizable = {f.s for f in realizable_forms(rs, spec)}
    for node, name in hermitian_nodes(rs):
        p = tuple(-1 if j == node - 1 else 0 for j in range(rs.rank))
        lam_r, form = singlet_weights(rs, spec, p)
        adj = alcove_adjacency(lam_r, rs, spec)
        rows.append(
            {
                "node": node,
                "real_form": name,
                "lambda_r": [_frac(c) for c in lam_r],
                "form": str(form),
                "alcove_adjacent": adj is not None,
                "integral_singlet_realizes": form.s in realizable,
            }
        )
    return rows


_DISPATCH = {
    "spec": _cmd_spec,
    "dual": _cmd_dual,
    "special-points": _cmd_special_points,
    "unitary-table": _cmd_unitary_table,
    "gram": _cmd_gram,
    "shift-check": _cmd_shift_check,
    "limit-scan": _cmd_limit_scan,
    "frobenius-check": _cmd_frobenius_check,
    "reality-algebra": _cmd_reality_algebra,
    "classify-forms": _cmd_classify_forms,
}


# ---------------------------------------------------------------------------
# configuration


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qunitary", description="Unitary highest-weight modules at roots of unity.")
    parser.add_argument("--version", action="version", version=f"qunitary {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="file of key=value lines using the flag names")
        p.add_argument("--algebra", help="type such as A2, B3, G2")
        p.add_argument("--q", help="root of unity n/m meaning exp(2 pi i n/m)")
        p.add_argument("--form", help="'compact' or signs such as +,-")
        p.add_argument("--shift", help="singlet vector p1,p2,... selecting the real form")
        p.add_argument("--weight", help="highest weight in fundamental-weight coordinates")
        p.add_argument("--max-weight", type=int, help="table bound on each coordinate")
        p.add_argument("--target", help="root-lattice depth n1,n2,... of a single Gram block")
        p.add_argument("--z", help="special-point coordinates z1,z2,...")
        p.add_argument("--node", type=int, help="1-based Hermitian node for limit-scan")
        p.add_argument("--k-max", type=int, help="last stage of limit-scan")
        p.add_argument("--samples", help="comma list of n/m roots for stability scans")
        p.add_argument("--height-budget", type=int)
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--output", help="write the report here instead of stdout")
    return parser


_DEFAULTS = {
    "form": None,
    "shift": None,
    "weight": None,
    "max_weight": 3,
    "target": None,
    "z": None,
    "node": None,
    "k_max": 4,
    "samples": None,
    "height_budget": DEFAULT_HEIGHT_BUDGET,
    "format": "json",
    "output": None,
}
_INT_KEYS = {"max_weight", "node", "k_max", "height_budget"}


def _read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc.strerror}") from exc
    for num, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _DEFAULTS and key not in ("algebra", "q"):
            raise ValueError(f"{path}:{num}: unknown key {key!r}")
        out[key] = value
    return out


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults < config file < environment (height budget only) < flags."""
    values = dict(_DEFAULTS)
    values.update({"algebra": None, "q": None})
    if args.config:
        values.update(_read_config_file(args.config))
    env = os.environ.get(HEIGHT_ENV)
    if env is not None:
        values["height_budget"] = env
    for key in list(values):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    for key in _INT_KEYS:
        if values[key] is not None:
            try:
                values[key] = int(values[key])
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{key.replace('_', '-')} must be an integer, got {values[key]!r}") from exc
    if values["algebra"] is None or values["q"] is None:
        raise ValueError("--algebra and --q are required")
    if values["height_budget"] < 0:
        raise ValueError("height budget must be non-negative")
    if values["max_weight"] < 0 or values["k_max"] < 0:
        raise ValueError("--max-weight and --k-max must be non-negative")
    if values["format"] not in ("json", "csv"):
        raise ValueError("--format must be json or csv")
    return RunConfig(command=args.command, **values)


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    rows = doc["results"]
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for r in rows:
        writer.writerow([_csv_cell(r.get(k)) for k in keys])
    return buf.getvalue()


def _csv_cell(value) -> str:
    if isinstance(value, dict):
        return ";".join(f"{k}:{_csv_cell(v)}" for k, v in sorted(value.items()))
    if isinstance(value, list):
        return " ".join(_csv_cell(v) for v in value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError(parser.format_usage() + "qunitary: error: a subcommand is required")
        cfg = _resolve_config(args)
        rs = parse_algebra(cfg.algebra)
        q = QRoot.parse(cfg.q)
        spec = compute_spec(rs, q)
        results = _DISPATCH[cfg.command](cfg, rs, spec)
        doc = {
            "config": {**asdict(cfg), "algebra": rs.name, "q": str(q)},
            "spec": _spec_summary(spec),
            "results": results,
            "version": __version__,
        }
        text = _render(doc, cfg.format)
    except _UsageError as exc:
        print(str(exc), file=stderr)
        return 1
    except ValueError as exc:
        print(f"qunitary: error: {exc}", file=stderr)
        return 1
    except AssertionError as exc:
        print(f"qunitary: internal check failed: {exc}", file=stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
