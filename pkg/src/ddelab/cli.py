"""Batch front-end: corpus in, verdict/cascade/verifier/measurement reports out.

Reports are deterministic: the JSON body is a pure function of the corpus
text, the subcommand, the flags, and the tool version.  Wall-clock timings
therefore appear only in the text rendering.  Output files are written to a
sibling temp file and moved into place, so readers never observe a partial
report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .analytic import (
    EllipticSolutionModel,
    ExponentialModel,
    ParamDomainError,
    continuum_limit,
    elliptic_params,
    mkdv_reduction_check,
    verify_elliptic_family,
    verify_exponential,
)
from .cascade import (
    CascadeError,
    SeedKind,
    confinement_report,
    polynomial_blowup,
    run_cascade,
    seed_local_data,
)
from .classify import classify
from .corpus import CorpusEntry, CorpusError, demo_corpus_text, load_corpus
from .model import EqKind, rational_degree
from .nevanlinna import characteristic_table, growth_estimates, log_grid, ratio_checks

EXIT_OK = 0
EXIT_ANALYSIS_FAIL = 1
EXIT_USAGE = 2

_SEED_KINDS = {
    "zero-of-w": SeedKind.ZERO_OF_W,
    "pole-of-w": SeedKind.POLE_OF_W,
}


class RequestError(ValueError):
    """An analysis request names parameters the entry cannot satisfy."""


def _as_complex(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, Sequence)
        and not isinstance(value, str)
        and len(value) == 2
        and all(isinstance(x, (int, float)) for x in value)
    ):
        return complex(value[0], value[1])
    raise RequestError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _gauss_to_complex(g) -> complex:
    return complex(float(g.re), float(g.im))


def _confined_triple(entry: CorpusEntry) -> Tuple[complex, complex, complex]:
    """Extracted (lam, mu, nu) of an inverse-square entry, as complex."""
    if entry.kind != EqKind.INVERSE_SQUARE:
        raise RequestError("this request needs an inverse-square entry")
    verdict = classify(entry.eq)
    if verdict.params is None:
        raise RequestError(
            "this request needs the confined parameter triple, but the entry "
            "does not reduce to it"
        )
    p = verdict.params
    return _gauss_to_complex(p.lam), _gauss_to_complex(p.mu), _gauss_to_complex(p.nu)


# ---------------------------------------------------------------------------
# per-entry runners; each returns (result mapping, failed flag)


def _run_classify(entry: CorpusEntry, args) -> Tuple[Dict[str, Any], bool]:
    verdict = classify(entry.eq)
    result: Dict[str, Any] = {"verdict": verdict.export()}
    if entry.kind == EqKind.LOG_DERIV:
        deg = rational_degree(entry.eq)
        result["degrees"] = {
            "num": deg.deg_num, "den": deg.deg_den, "map": deg.deg_map,
        }
    return result, False


def _run_cascade(entry: CorpusEntry, args) -> Tuple[Dict[str, Any], bool]:
    request = dict(entry.requests.get("cascade", {}))
    steps = int(request.get("steps", 3))
    order = int(request.get("order", 1))
    seed_name = request.get("seed", "zero-of-w")
    seed_kind = _SEED_KINDS.get(seed_name)
    if seed_kind is None:
        raise RequestError(f"unknown cascade seed {seed_name!r}")
    if entry.kind == EqKind.INVERSE_SQUARE:
        pattern = run_cascade(
            entry.eq, seed_local_data(seed_kind, order, width=args.truncation), steps
        )
        verdict = confinement_report(pattern, entry.eq)
        return {"pattern": pattern.export(), "confinement": verdict.export()}, False
    if entry.kind == EqKind.LOG_DERIV and rational_degree(entry.eq).deg_den == 0:
        orders = polynomial_blowup(entry.eq, steps, q=order)
        return {"pole_orders": list(orders)}, False
    return {
        "skipped": "cascade analysis covers the inverse-square class and "
        "polynomial right sides"
    }, False


def _run_verify(entry: CorpusEntry, args) -> Tuple[Dict[str, Any], bool]:
    request = entry.requests.get("verify")
    if request is None:
        return {"skipped": "entry carries no verify request"}, False
    kind = request.get("kind")
    samples = int(request.get("samples", 100))
    if kind == "elliptic":
        lam, mu, nu = _confined_triple(entry)
        if mu != 0 or nu != 0:
            raise RequestError(
                "the doubly periodic family needs both the drift and the "
                "linear growth to vanish"
            )
        params = elliptic_params(
            g2=_as_complex(request.get("g2"), "verify.g2"),
            g3=_as_complex(request.get("g3"), "verify.g3"),
            omega=_as_complex(request.get("omega"), "verify.omega"),
            lam=lam,
            flip_alpha_square=bool(request.get("flip_scale_sign", False)),
        )
        report = verify_elliptic_family(params, samples=samples, seed=args.seed)
    elif kind == "exponential":
        if entry.kind != EqKind.PURE_LOG_DERIV:
            raise RequestError("the exponential family needs a pure-log-deriv entry")
        report = verify_exponential(
            entry.eq.a,
            p=int(request.get("p", 1)),
            C=_as_complex(request.get("C", 1.0), "verify.C"),
            samples=samples,
            seed=args.seed,
        )
    elif kind == "mkdv":
        lam, mu, nu = _confined_triple(entry)
        if mu != 0:
            raise RequestError("the mKdV reduction needs the drift to vanish")
        report = mkdv_reduction_check(lam, nu, samples=samples, seed=args.seed)
    else:
        raise RequestError(f"unknown verify kind {kind!r}")
    return {"verify": report.export()}, not report.passed


def _run_nev(entry: CorpusEntry, args) -> Tuple[Dict[str, Any], bool]:
    request = entry.requests.get("nev")
    if request is None:
        return {"skipped": "entry carries no nev request"}, False
    kind = request.get("kind")
    grid = log_grid(
        float(request.get("r_min", 1.0)),
        float(request.get("r_max", 16.0)),
        int(request.get("radii", 24)),
    )
    if kind == "elliptic":
        lam, mu, nu = _confined_triple(entry)
        if mu != 0 or nu != 0:
            raise RequestError(
                "the doubly periodic family needs both the drift and the "
                "linear growth to vanish"
            )
        params = elliptic_params(
            g2=_as_complex(request.get("g2"), "nev.g2"),
            g3=_as_complex(request.get("g3"), "nev.g3"),
            omega=_as_complex(request.get("omega"), "nev.omega"),
            lam=lam,
        )
        model = EllipticSolutionModel(params)
        table = characteristic_table(model, grid)
        ratios = ratio_checks(model, entry.eq, grid)
        result = {
            "table": table.export(),
            "growth": growth_estimates(table).export(),
            "ratios": ratios.export(),
        }
    elif kind == "exponential":
        model = ExponentialModel(
            C=_as_complex(request.get("C", 1.0), "nev.C"),
            p=int(request.get("p", 1)),
        )
        table = characteristic_table(model, grid)
        result = {
            "table": table.export(),
            "growth": growth_estimates(table).export(),
        }
    else:
        raise RequestError(f"unknown nev kind {kind!r}")
    return result, False


_RUNNERS = {
    "classify": _run_classify,
    "cascade": _run_cascade,
    "verify": _run_verify,
    "nev": _run_nev,
}


def _run_entries(entries, runner, args) -> Tuple[List[Dict[str, Any]], bool, List[float]]:
    """Run one analysis over all entries, in parallel, assembled in order."""

    def wrapped(entry: CorpusEntry):
        start = time.perf_counter()
        try:
            result, failed = runner(entry, args)
        except (RequestError, ParamDomainError, CascadeError, ValueError) as exc:
            result, failed = {"error": str(exc)}, True
        return {"id": entry.id, **result}, failed, time.perf_counter() - start

    if len(entries) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(entries))) as pool:
            outcomes = list(pool.map(wrapped, entries))
    else:
        outcomes = [wrapped(e) for e in entries]
    rows = [row for row, _, _ in outcomes]
    any_failed = any(failed for _, failed, _ in outcomes)
    timings = [elapsed for _, _, elapsed in outcomes]
    return rows, any_failed, timings


def _run_limit(args) -> Tuple[List[Dict[str, Any]], bool, List[float]]:
    start = time.perf_counter()
    truncation = max(int(args.truncation), 7)
    dp = continuum_limit(truncation=truncation)
    vanishing = [k for k in range(7) if dp.eps_coefficient(k).is_zero]
    leading = dp.leading_eps_order()
    row = {
        "id": "slow-modulation-limit",
        "truncation": truncation,
        "vanishing_orders": vanishing,
        "leading_order": leading,
        "leading_coefficient": str(dp.eps_coefficient(5)),
        "statement": (
            "the surviving balance is y3 = 12*y0*y1 + 1; integrating once in "
            "the slow variable gives y'' = 6*y^2 + t, the first Painleve "
            "equation, up to an additive constant absorbed by translation"
        ),
    }
    failed = leading != 5 or vanishing != [0, 1, 2, 3, 4, 6]
    return [row], failed, [time.perf_counter() - start]


# ---------------------------------------------------------------------------
# report assembly and output


def _config_hash(corpus_text: str, args, subcommand: str) -> str:
    payload = json.dumps(
        {
            "corpus": corpus_text,
            "entry_filter": sorted(getattr(args, "entry", None) or []),
            "seed": args.seed,
            "subcommand": subcommand,
            "truncation": args.truncation,
            "version": __version__,
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _render_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _render_text(report: Dict[str, Any], timings: List[float]) -> str:
    lines = [
        f"ddelab {report['version']} {report['subcommand']} "
        f"(seed {report['seed']}, config {report['config_hash'][:12]})"
    ]
    failures = 0
    for row, elapsed in zip(report["entries"], timings):
        parts = [f"  {row['id']:30s}"]
        if "error" in row:
            parts.append(f"ERROR: {row['error']}")
            failures += 1
        elif "verdict" in row:
            v = row["verdict"]
            parts.append(v["outcome"])
            if "params" in v:
                p = v["params"]
                parts.append(f"(lam={p['lam']}, mu={p['mu']}, nu={p['nu']})")
        elif "confinement" in row:
            c = row["confinement"]
            parts.append(c["kind"])
            if "witness" in c:
                parts.append(f"witness={c['witness']}")
        elif "pole_orders" in row:
            parts.append("pole orders " + ", ".join(map(str, row["pole_orders"])))
        elif "verify" in row:
            r = row["verify"]
            status = "pass" if r["pass"] else "FAIL"
            if not r["pass"]:
                failures += 1
            parts.append(f"{status} max residual {r['max_residual']:.3e}")
        elif "growth" in row:
            g = row["growth"]
            parts.append(f"order {g['order']:.3f} (+-{g['order_width']:.3f})")
        elif "leading_coefficient" in row:
            parts.append(f"eps^{row['leading_order']}: {row['leading_coefficient']}")
        elif "skipped" in row:
            parts.append(f"skipped: {row['skipped']}")
        parts.append(f"[{elapsed*1000:.0f} ms]")
        lines.append(" ".join(parts))
        if "statement" in row:
            lines.append(f"    {row['statement']}")
    lines.append(f"{len(report['entries'])} entries, {failures} failed")
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    parent = target.parent if str(target.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=str(parent), prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddelab",
        description=(
            "Exact singularity cascades, necessary-condition verdicts, "
            "closed-form solution verifiers, and growth measurements for "
            "delay differential equations."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("classify", "necessary-condition verdicts for every entry"),
        ("cascade", "singularity chains and confinement verdicts"),
        ("verify", "closed-form solution family residuals"),
        ("nev", "characteristic tables and growth estimates"),
        ("limit", "slow-modulation continuum limit of the lattice instance"),
    ):
        p = sub.add_parser(name, help=help_text)
        if name != "limit":
            p.add_argument("--corpus", help="corpus JSON path (default: built-in demo)")
            p.add_argument(
                "--entry", action="append",
                help="restrict to this entry id (repeatable)",
            )
        p.add_argument("--out", help="write the report here (atomic)")
        p.add_argument("--seed", type=int, default=0, help="verifier sampling seed")
        p.add_argument(
            "--truncation", type=int, default=8,
            help="series window width / expansion depth (cascades regrow "
            "adaptively when this is too small to certify an order)",
        )
        p.add_argument(
            "--format", choices=("json", "text"), default="text",
            help="report format",
        )
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    subcommand = args.subcommand
    if subcommand == "limit":
        corpus_text = ""
        try:
            rows, any_failed, timings = _run_limit(args)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        try:
            if args.corpus is None:
                corpus_text = demo_corpus_text()
                entries = load_corpus(json.loads(corpus_text))
            else:
                corpus_text = Path(args.corpus).read_text()
                entries = load_corpus(args.corpus)
        except FileNotFoundError:
            print(f"error: corpus file not found: {args.corpus}", file=sys.stderr)
            return EXIT_USAGE
        except OSError as exc:
            print(f"error: cannot read corpus: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except CorpusError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if args.entry:
            known = {e.id for e in entries}
            unknown = [i for i in args.entry if i not in known]
            if unknown:
                print(f"error: unknown entry ids {unknown}", file=sys.stderr)
                return EXIT_USAGE
            wanted = set(args.entry)
            entries = tuple(e for e in entries if e.id in wanted)
        rows, any_failed, timings = _run_entries(entries, _RUNNERS[subcommand], args)

    report = {
        "tool": "ddelab",
        "version": __version__,
        "subcommand": subcommand,
        "seed": args.seed,
        "truncation": args.truncation,
        "config_hash": _config_hash(corpus_text, args, subcommand)
        if subcommand != "limit"
        else _config_hash("", args, subcommand),
        "entries": rows,
    }
    body = (
        _render_json(report)
        if args.format == "json"
        else _render_text(report, timings)
    )
    if args.out:
        _atomic_write(args.out, body)
    else:
        sys.stdout.write(body)
    return EXIT_ANALYSIS_FAIL if any_failed else EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
