"""kfree: command line front end.

Subcommands: thresholds, census, sweep, sample, and a bounds group
(janson, fkg, exact, hoeffding, dsets, probe, pairsum).  Every artifact —
stdout or file, any format — begins with a reproducibility stanza
(package version, seed, RNG id, shard count) and nothing time- or
host-dependent, so identical invocations produce byte-identical output.

Exit codes: 0 success, 2 domain error, 3 size guard, 4 I/O; error
messages name the offending parameter.  KFREE_CACHE_DIR provides the
default for --cache-dir; cached censuses are stored in the checksummed
native format and verified on load.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__, bounds, census, sampler, thresholds
from .errors import CacheError, DomainError, KfreeError, SizeError
from .turan import ex_turan

_RNG_ID = "philox4x64"


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _stanza_line(meta: Dict[str, object]) -> str:
    return (
        f"# kfree {meta['version']} seed={meta['seed']} "
        f"rng={meta['rng']} shards={meta['shards']}"
    )


def _make_meta(seed: Optional[int], rng: Optional[str], shards: Optional[int]) -> Dict[str, object]:
    return {
        "version": __version__,
        "seed": "-" if seed is None else seed,
        "rng": rng or "none",
        "shards": "-" if shards is None else shards,
    }


def _emit(
    rows: List[Tuple[str, ...]],
    header: Tuple[str, ...],
    fmt: str,
    out: Optional[str],
    meta: Dict[str, object],
) -> None:
    """rows are pre-stringified; JSON re-parses numeric strings so the
    three formats carry identical values."""
    if fmt in ("text", "csv"):
        sep = "," if fmt == "csv" else "  "
        lines = [_stanza_line(meta), sep.join(header)]
        lines.extend(sep.join(row) for row in rows)
        payload = "\n".join(lines) + "\n"
    elif fmt == "json":
        def decode(s: str) -> object:
            try:
                return json.loads(s)
            except json.JSONDecodeError:
                return s

        payload = (
            json.dumps(
                {
                    "meta": meta,
                    "columns": list(header),
                    "rows": [[decode(c) for c in row] for row in rows],
                },
                indent=2,
            )
            + "\n"
        )
    else:
        raise DomainError(f"format={fmt}: expected text, csv, or json")
    if out:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _fnum(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_thresholds(args: argparse.Namespace) -> int:
    n, r = args.n, args.r
    rows = [
        ("theta", _fnum(thresholds.theta(r))),
        ("m_r", _fnum(thresholds.m_r(n, r))),
        ("p_r", _fnum(thresholds.p_r(n, r))),
        ("ex_turan", str(ex_turan(n, r + 1))),
    ]
    if args.ell is not None:
        rows.append(("t_ell", _fnum(thresholds.t_ell(n, args.ell))))
    _emit(rows, ("quantity", "value"), args.format, args.out, _make_meta(None, None, None))
    return 0


def _census_shard_count(n: int, shards: Optional[int]) -> int:
    if shards is not None:
        return shards
    return 16 if n * (n - 1) // 2 > 24 else 1


def _cached_census(args: argparse.Namespace) -> Tuple[census.CensusTable, int]:
    """Load from --cache-dir when a valid cache exists, else compute (and
    cache when a directory is configured)."""
    n, r = args.n, args.r
    shards = _census_shard_count(n, args.shards)
    cache_dir = args.cache_dir or os.environ.get("KFREE_CACHE_DIR")
    path = os.path.join(cache_dir, f"census_n{n}_r{r}.txt") if cache_dir else None
    if path and os.path.exists(path):
        return census.load_census(path), shards
    table = census.run_census(n, r, shards=args.shards, jobs=args.jobs)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        census.save_census(table, path)
    return table, shards


def cmd_census(args: argparse.Namespace) -> int:
    table, shards = _cached_census(args)
    rows = [
        (str(w.m), str(w.free), str(w.free_rcol), str(w.rcol), str(w.unique_rcol), str(w.pair_sum))
        for w in table.rows
    ]
    header = ("m", "free", "free_rcol", "rcol", "unique_rcol", "pair_sum")
    _emit(rows, header, args.format, args.out, _make_meta(None, None, shards))
    return 0


def _parse_grid(spec: str, n: int, r: int) -> List[int]:
    cap = ex_turan(n, r + 1)
    if spec == "auto":
        lo = min(n, cap)
        pts = {lo, cap}
        if cap > lo:
            steps = 12
            for i in range(1, steps):
                pts.add(
                    round(math.exp(math.log(lo) + (math.log(cap) - math.log(lo)) * i / steps))
                )
            forced = round(thresholds.m_r(n, r))
            if lo <= forced <= cap:
                pts.add(forced)
        return sorted(pts)
    try:
        grid = sorted({int(tok) for tok in spec.split(",") if tok.strip()})
    except ValueError:
        raise DomainError(f"m={spec!r}: expected 'auto' or comma-separated integers") from None
    if not grid:
        raise DomainError(f"m={spec!r}: empty grid")
    for m in grid:
        if not 0 <= m <= cap:
            raise DomainError(f"m={m}: grid values must lie in 0..ex_turan = {cap}")
    return grid


def cmd_sweep(args: argparse.Namespace) -> int:
    n, r = args.n, args.r
    grid = _parse_grid(args.m, n, r)
    cap = ex_turan(n, r + 1)
    header = ("n", "r", "m", "engine", "fraction_or_estimate", "stderr", "samples", "caveat")
    rows = []
    if args.engine == "census":
        if n > census.MAX_CENSUS_VERTICES:
            raise SizeError(
                f"n={n}: the census engine is capped at n <= "
                f"{census.MAX_CENSUS_VERTICES}; use --engine sampler"
            )
        table, shards = _cached_census(args)
        for m in grid:
            frac = census.fraction_rpartite(table, m)
            rows.append(
                (str(n), str(r), str(m), "census", _fnum(float(frac)), _fnum(0.0),
                 str(table.rows[m].free), "0")
            )
        meta = _make_meta(None, None, shards)
    else:
        for idx, m in enumerate(grid):
            cfg = sampler.ChainConfig(
                n=n,
                r=r,
                m=m,
                seed=args.seed + 1000003 * idx,
                burn_in=args.burn_in,
                thin=args.thin,
                chains=args.chains,
            )
            res = sampler.estimate_rpartite(cfg, args.steps)
            caveat = "1" if m > 0.9 * cap else "0"
            rows.append(
                (str(n), str(r), str(m), "sampler", _fnum(res.estimate),
                 _fnum(res.stderr), str(sampler.retained_samples(cfg, args.steps)),
                 caveat)
            )
        meta = _make_meta(args.seed, _RNG_ID, None)
    _emit(rows, header, args.format, args.out, meta)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = sampler.ChainConfig(
        n=args.n,
        r=args.r,
        m=args.m,
        seed=args.seed,
        burn_in=args.burn_in,
        thin=args.thin,
        chains=args.chains,
    )
    log: Optional[List[dict]] = [] if args.dump else None
    res = sampler.estimate_rpartite(cfg, args.steps, log=log)
    meta = _make_meta(args.seed, _RNG_ID, None)
    if args.dump:
        lines = [_stanza_line(meta), "step,is_rcol,triangles,edges_hash"]
        assert log is not None
        lines.extend(
            f"{rec['step']},{rec['is_rcol']},{rec['triangles']},{rec['edges_hash']}"
            for rec in log
        )
        with open(args.dump, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    rows = [
        ("estimate", _fnum(res.estimate)),
        ("stderr", _fnum(res.stderr)),
        ("samples", str(sampler.retained_samples(cfg, args.steps))),
        ("acceptance_rate", _fnum(res.acceptance_rate)),
    ]
    _emit(rows, ("quantity", "value"), args.format, args.out, meta)
    return 0


def _load_family(path: str) -> bounds.ForbiddenFamily:
    with open(path, "r", encoding="ascii") as fh:
        return bounds.family_from_json(fh.read())


def cmd_bounds(args: argparse.Namespace) -> int:
    sub = args.bound
    meta = _make_meta(None, None, None)
    if sub == "janson":
        fam = _load_family(args.family)
        md = bounds.mu_delta_exact(fam, args.m)
        rows = [
            ("mu", _fnum(md.mu)),
            ("delta", _fnum(md.delta)),
            ("janson_upper", _fnum(bounds.janson_upper(md))),
        ]
    elif sub == "fkg":
        fam = _load_family(args.family)
        rows = [("fkg_lower", _fnum(bounds.fkg_lower(fam, args.m, args.eta)))]
    elif sub == "exact":
        fam = _load_family(args.family)
        prob = bounds.avoidance_probability_exact(fam, args.m)
        rows = [
            ("avoidance_exact", f"{prob.numerator}/{prob.denominator}"),
            ("avoidance_float", _fnum(float(prob))),
        ]
    elif sub == "hoeffding":
        rows = [("hoeffding", _fnum(bounds.hypergeom_hoeffding(args.alpha, args.lam, args.d)))]
    elif sub == "dsets":
        sizes = [int(t) for t in args.sizes.split(",") if t.strip()]
        res = bounds.dsets_tail_bound(args.k, args.alpha, args.lam, sizes, args.d)
        rows = [("dsets_bound", _fnum(res.bound)), ("tau", _fnum(res.tau))]
    elif sub == "probe":
        rows = [("probe", _fnum(bounds.heuristic_threshold_probe(args.n, args.r, args.m)))]
    elif sub == "pairsum":
        rows = [("pair_sum", str(census.pair_sum(args.n, args.r, args.m, args.gamma)))]
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"bound={sub!r}: unknown bounds subcommand")
    _emit(rows, ("quantity", "value"), args.format, args.out, meta)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write the artifact to this path instead of stdout")


def _add_chain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--burn-in", type=int, default=1000, dest="burn_in")
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--chains", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="kfree",
        description="census, sampling, thresholds, and probability bounds "
        "for clique-free graphs",
    )
    top.add_argument("--version", action="version", version=f"kfree {__version__}")
    subs = top.add_subparsers(dest="command", required=True)

    p = subs.add_parser("thresholds", help="closed-form threshold quantities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ell", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_thresholds)

    p = subs.add_parser("census", help="exact labeled census (n <= 8)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--shards", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache-dir", dest="cache_dir", default=None)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_census)

    p = subs.add_parser("sweep", help="fraction-vs-m sweep over an edge-count grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument(
        "--m",
        default="auto",
        help="comma-separated edge counts, or 'auto' for a geometric grid "
        "from n to ex_turan with the m_r point forced in",
    )
    p.add_argument("--engine", choices=("census", "sampler"), default="census")
    p.add_argument("--shards", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache-dir", dest="cache_dir", default=None)
    _add_chain_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_sweep)

    p = subs.add_parser("sample", help="MCMC estimate of the r-colorable fraction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_chain_flags(p)
    p.add_argument("--dump", help="write one CSV row per retained sample to this path")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_sample)

    p = subs.add_parser("bounds", help="probability bound evaluations")
    bsubs = p.add_subparsers(dest="bound", required=True)

    def bound_parser(name: str, help_text: str) -> argparse.ArgumentParser:
        bp = bsubs.add_parser(name, help=help_text)
        _add_output_flags(bp)
        bp.set_defaults(fn=cmd_bounds)
        return bp

    bp = bound_parser("janson", "mu, Delta, and the Janson-type upper bound")
    bp.add_argument("--family", required=True, help="family JSON file")
    bp.add_argument("--m", type=int, required=True)

    bp = bound_parser("fkg", "correlation lower bound")
    bp.add_argument("--family", required=True, help="family JSON file")
    bp.add_argument("--m", type=int, required=True)
    bp.add_argument("--eta", type=float, required=True)

    bp = bound_parser("exact", "exact avoidance probability (inclusion-exclusion)")
    bp.add_argument("--family", required=True, help="family JSON file")
    bp.add_argument("--m", type=int, required=True)

    bp = bound_parser("hoeffding", "one-sided hypergeometric Hoeffding bound")
    bp.add_argument("--alpha", type=float, required=True)
    bp.add_argument("--lam", type=float, required=True)
    bp.add_argument("--d", type=int, required=True)

    bp = bound_parser("dsets", "random d-subsets tail bound and tau recipe")
    bp.add_argument("--k", type=int, required=True)
    bp.add_argument("--alpha", type=float, required=True)
    bp.add_argument("--lam", type=float, required=True)
    bp.add_argument("--d", type=int, required=True)
    bp.add_argument("--sizes", required=True, help="comma-separated class sizes")

    bp = bound_parser("probe", "P*m criticality probe at edge count m")
    bp.add_argument("--n", type=int, required=True)
    bp.add_argument("--r", type=int, required=True)
    bp.add_argument("--m", type=float, required=True)

    bp = bound_parser("pairsum", "partition pair-count sum, optionally gamma-balanced")
    bp.add_argument("--n", type=int, required=True)
    bp.add_argument("--r", type=int, required=True)
    bp.add_argument("--m", type=int, required=True)
    bp.add_argument("--gamma", type=float, default=None)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SizeError as exc:
        print(f"kfree: size guard: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"kfree: domain error: {exc}", file=sys.stderr)
        return 2
    except (CacheError, OSError) as exc:
        print(f"kfree: i/o error: {exc}", file=sys.stderr)
        return 4
    except KfreeError as exc:  # pragma: no cover - defensive catch-all
        print(f"kfree: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
