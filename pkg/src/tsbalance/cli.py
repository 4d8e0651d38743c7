"""``tsb`` command line.

Exit codes: 0 success / check true, 1 check false, 2 parse or usage error,
3 guard exceeded, 4 disconnected input.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .balance import (
    ALL,
    analyze,
    as_probability,
    balancing_probabilities,
    combine,
    is_pts_distance_balanced,
    is_ts_distance_balanced,
    pts_median_vertices,
    total_distance_vectors,
)
from .errors import DisconnectedError, GraphValidationError, GuardError, ParseError, TsbError
from .exact import RootSet, refine_interval
from .graph import (
    Graph,
    apsp,
    builtin,
    classify,
    emit_edge_list,
    emit_graph6,
    is_distance_balanced,
    is_nicely_distance_balanced,
    median_vertices,
    parse_edge_list,
    parse_graph6,
    total_distance,
)
from .symmetry import MAX_ORBIT_N, SearchStats, automorphism_orbits, search_counterexamples
from .walks import is_hamilton_connected, is_hamiltonian, max_n_guard, rho
from .wreath import check_wreath_balance, product_guard, wreath_product

EXIT_FALSE = 1
EXIT_PARSE = 2
EXIT_GUARD = 3
EXIT_DISCONNECTED = 4

APPROX_TOL = Fraction(1, 10**9)


# -- formatting ------------------------------------------------------------

def frac(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal(x: Fraction, places: int = 9) -> str:
    scaled = round(x * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, part = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{part:0{places}d}"


def _display_interval(roots: RootSet, index: int) -> str:
    """Bracket of width 1e-4 around the 4-decimal rounding of the root, verified exactly."""
    lo, hi = roots.refine_interval(index, Fraction(1, 10**7))
    mid = (lo + hi) / 2
    center = Fraction(round(mid * 10**4), 10**4)
    a, b = center - Fraction(1, 20000), center + Fraction(1, 20000)
    if not (a <= lo and hi <= b):
        lo, hi = refine_interval(roots.poly, (lo, hi), Fraction(1, 10**12))
        if not (a <= lo and hi <= b):  # root sits on a rounding boundary
            a = Fraction(math.floor(lo * 10**5), 10**5)
            b = Fraction(math.ceil(hi * 10**5), 10**5)
    return f"[{decimal(a, 5)},{decimal(b, 5)}]"


def roots_to_json(roots: str | RootSet) -> dict:
    if roots == ALL:
        return {"all": True, "text": "[0,1]"}
    assert isinstance(roots, RootSet)
    members = [(r, frac(r)) for r in roots.exact]
    intervals = []
    for i, (lo, hi) in enumerate(roots.intervals):
        shown = _display_interval(roots, i)
        approx = roots.refine(i, APPROX_TOL)
        intervals.append({
            "lo": frac(lo),
            "hi": frac(hi),
            "approx": decimal(approx),
            "tolerance": "1/1000000000",
            "display": shown,
        })
        members.append((approx, shown))
    text = "{" + ", ".join(s for _, s in sorted(members, key=lambda t: t[0])) + "}"
    return {
        "all": False,
        "polynomial": [str(c) for c in roots.poly.coeffs],
        "exact": [frac(r) for r in roots.exact],
        "intervals": intervals,
        "text": text,
    }


def dumps(obj, level: int = 0) -> str:
    """Indented JSON with lists of scalars kept on one line; key order preserved."""
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        items = [f"{pad}{dumps(v, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj)


def emit(ctx: click.Context, payload: dict) -> None:
    if ctx.obj["format"] == "json":
        click.echo(dumps(payload))
    else:
        click.echo(_table(payload))


def _format_override(ctx: click.Context, _param, value):
    if value is not None:
        ctx.ensure_object(dict)
        ctx.find_root().obj["format"] = value
    return value


format_option = click.option(
    "--format", "fmt_local", type=click.Choice(["json", "table"]), default=None,
    expose_value=False, callback=_format_override, is_eager=False, help="Output format.",
)


def _table(payload: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_table(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            lines.append(f"{pad}{key}:")
            for item in value:
                if isinstance(item, dict):
                    lines.append(_table(item, indent + 1))
                else:
                    lines.append(f"{pad}  {item}")
        else:
            if isinstance(value, bool):
                value = str(value).lower()
            elif value is None:
                value = "-"
            elif isinstance(value, list):
                value = " ".join(map(str, value))
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


# -- graph sources ---------------------------------------------------------

def load_graph(source: str) -> Graph:
    if source.startswith("builtin:"):
        name, *params = source[len("builtin:"):].split(":")
        try:
            args = [int(p) for p in params]
        except ValueError:
            raise ParseError(f"builtin parameters must be integers: {source!r}") from None
        return builtin(name, *args)
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {source!r}: {exc.strerror}") from None
    return parse_text(text, source)


def parse_text(text: str, source: str = "") -> Graph:
    data = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if source.endswith(".g6") or (len(data) == 1 and " " not in data[0] and not data[0].startswith("n=")):
        if len(data) != 1:
            raise ParseError(f"expected one graph6 record, found {len(data)}")
        return parse_graph6(data[0])
    return parse_edge_list(text)


def provenance(ctx: click.Context) -> dict:
    return {
        "tool": "tsbalance",
        "version": __version__,
        "max_n": ctx.obj["max_n"],
        "max_product": ctx.obj["max_product"],
    }


def metadata(g: Graph) -> dict:
    c = classify(g)
    return {
        "order": g.n,
        "size": g.size,
        "degree_sequence": list(c.degree_sequence),
        "connected": c.connected,
        "bipartite": c.bipartite,
        "regular": c.regular,
    }


def _parse_set(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated vertices, got {text!r}") from None


def _probability(_ctx, _param, value):
    if value is None:
        return None
    try:
        return as_probability(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


# -- commands --------------------------------------------------------------

class _Group(click.Group):
    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except DisconnectedError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_DISCONNECTED)
        except GuardError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_GUARD)
        except (ParseError, GraphValidationError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_PARSE)
        except TsbError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_PARSE)


@click.group(cls=_Group)
@click.version_option(__version__)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default=None,
              help="Output format (default: table on a terminal, json otherwise).")
@click.option("--max-n", type=int, default=None, help="Walk DP order guard [env TSB_MAX_N, default 20].")
@click.option("--max-product", type=int, default=None,
              help="Wreath product size guard [env TSB_MAX_PRODUCT, default 100000].")
@click.option("--threads", type=int, default=None, help="Worker threads (default: available CPUs).")
@click.pass_context
def cli(ctx: click.Context, fmt: str | None, max_n: int | None, max_product: int | None, threads: int | None) -> None:
    """Exact TS-type distance functionals and balance checks on small graphs.

    GRAPH arguments accept a file path (edge list or graph6), '-' for stdin,
    or builtin:<name>[:<params>] such as builtin:wheel:7 or builtin:gp:7:3.
    """
    if fmt is None:
        fmt = "table" if sys.stdout.isatty() else "json"
    ctx.obj = {
        "format": fmt,
        "max_n": max_n_guard(max_n),
        "max_product": product_guard(max_product),
        "threads": threads if threads is not None else (os.cpu_count() or 1),
    }


@cli.command()
@format_option
@click.argument("graph")
@click.pass_context
def info(ctx: click.Context, graph: str) -> None:
    """Classification and classical distance-balance summary."""
    g = load_graph(graph)
    dist = apsp(g)
    payload = {"graph": metadata(g)}
    payload["balance"] = {
        "distance_balanced": is_distance_balanced(g, dist),
        "nicely_distance_balanced": is_nicely_distance_balanced(g, dist),
        "vertex_transitive": len(automorphism_orbits(g)) == 1 if g.n <= MAX_ORBIT_N else None,
        "median_vertices": sorted(median_vertices(g, dist)),
        "total_distance": [frac(total_distance(g, u, dist)) for u in range(g.n)],
    }
    payload["provenance"] = provenance(ctx)
    emit(ctx, payload)


@cli.command("rho")
@format_option
@click.argument("graph")
@click.option("--set", "visit", default="", help="Comma-separated required vertices.")
@click.option("--from", "u", type=int, required=True)
@click.option("--to", "v", type=int, required=True)
@click.pass_context
def rho_cmd(ctx: click.Context, graph: str, visit: str, u: int, v: int) -> None:
    """Shortest walk length from --from to --to through every vertex of --set."""
    g = load_graph(graph)
    a = _parse_set(visit)
    emit(ctx, {"set": a, "from": u, "to": v, "rho": rho(g, a, u, v)})


@cli.command()
@format_option
@click.argument("graph")
@click.option("--vertex", type=int, default=None)
@click.option("--all", "all_", is_flag=True, help="Vectors for every vertex (default).")
@click.pass_context
def vector(ctx: click.Context, graph: str, vertex: int | None, all_: bool) -> None:
    """Total distance vectors (W_0, ..., W_n)."""
    g = load_graph(graph)
    if vertex is not None and all_:
        raise click.UsageError("--vertex and --all are exclusive")
    vecs = total_distance_vectors(g, ctx.obj["max_n"], ctx.obj["threads"])
    if vertex is not None:
        if not 0 <= vertex < g.n:
            raise click.BadParameter(f"vertex {vertex} out of range")
        payload = {"vertex": vertex, "vector": [str(w) for w in vecs[vertex]]}
    else:
        payload = {"vectors": {str(u): [str(w) for w in vec] for u, vec in enumerate(vecs)}}
    emit(ctx, payload)


@cli.command()
@format_option
@click.argument("graph")
@click.option("--p", "p", callback=_probability, default=None, help="Exact probability num/den, 0 or 1.")
@click.option("--ts", is_flag=True, help="Check balance for every p in [0,1].")
@click.option("--roots", is_flag=True, help="Report the set of balancing probabilities.")
@click.pass_context
def balance(ctx: click.Context, graph: str, p: Fraction | None, ts: bool, roots: bool) -> None:
    """TS-type balance: full report, or one check with --p / --ts / --roots."""
    if sum([p is not None, ts, roots]) > 1:
        raise click.UsageError("--p, --ts and --roots are exclusive")
    g = load_graph(graph)
    max_n = ctx.obj["max_n"]
    if p is not None:
        ok = is_pts_distance_balanced(g, p, max_n)
        vecs = total_distance_vectors(g, max_n, ctx.obj["threads"])
        values = [combine(vec, p) / g.n for vec in vecs]
        emit(ctx, {
            "p": frac(p),
            "pts_distance_balanced": ok,
            "expected_distance": {str(u): frac(x) for u, x in enumerate(values)},
        })
        ctx.exit(0 if ok else EXIT_FALSE)
    if ts:
        ok = is_ts_distance_balanced(g, max_n)
        emit(ctx, {"ts_distance_balanced": ok})
        ctx.exit(0 if ok else EXIT_FALSE)
    if roots:
        found = roots_to_json(balancing_probabilities(g, max_n))
        if ctx.obj["format"] == "json":
            emit(ctx, {"balancing_probabilities": found})
        else:
            click.echo(found["text"])
        return
    report = analyze(g, max_n, ctx.obj["threads"])
    dist = apsp(g)
    emit(ctx, {
        "graph": metadata(g),
        "balance": {
            "distance_balanced": report.distance_balanced,
            "nicely_distance_balanced": is_nicely_distance_balanced(g, dist),
            "ts_distance_balanced": report.ts_balanced,
            "balancing_probabilities": roots_to_json(report.balancing_set),
            "median_vertices": sorted(median_vertices(g, dist)),
            "vectors": {str(u): [str(w) for w in v] for u, v in enumerate(report.vectors)},
        },
        "provenance": provenance(ctx),
    })


@cli.command()
@format_option
@click.argument("graph")
@click.option("--p", "p", callback=_probability, default=None, help="Exact probability (default 0).")
@click.pass_context
def median(ctx: click.Context, graph: str, p: Fraction | None) -> None:
    """pTS-median vertices (classical medians for p = 0)."""
    g = load_graph(graph)
    p = Fraction(0) if p is None else p
    meds = pts_median_vertices(g, p, ctx.obj["max_n"])
    emit(ctx, {"p": frac(p), "median_vertices": sorted(meds), "self_median": len(meds) == g.n})


@cli.command()
@format_option
@click.argument("graph")
@click.option("--connected", "want_connected", is_flag=True,
              help="Exit status reflects Hamilton-connectedness instead of Hamiltonicity.")
@click.pass_context
def hamilton(ctx: click.Context, graph: str, want_connected: bool) -> None:
    """Hamiltonicity and Hamilton-connectedness from full visiting walks."""
    g = load_graph(graph)
    ham = is_hamiltonian(g, ctx.obj["max_n"]) if g.n >= 3 else None
    hc = is_hamilton_connected(g, ctx.obj["max_n"])
    emit(ctx, {"hamiltonian": ham, "hamilton_connected": hc})
    ok = hc if want_connected else bool(ham)
    ctx.exit(0 if ok else EXIT_FALSE)


@cli.command()
@format_option
@click.argument("graph")
@click.pass_context
def orbits(ctx: click.Context, graph: str) -> None:
    """Automorphism orbits."""
    g = load_graph(graph)
    found = automorphism_orbits(g)
    emit(ctx, {"orbits": [sorted(o) for o in found], "vertex_transitive": len(found) <= 1})


@cli.command()
@format_option
@click.argument("base")
@click.argument("colors")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the product (.g6 for graph6, anything else for edge list).")
@click.option("--check", is_flag=True, help="Compare factor prediction with the built product.")
@click.pass_context
def wreath(ctx: click.Context, base: str, colors: str, out: str | None, check: bool) -> None:
    """Build the wreath product BASE wr COLORS."""
    g, h = load_graph(base), load_graph(colors)
    product, codec = wreath_product(g, h, ctx.obj["max_product"])
    payload = {"product": metadata(product), "codec": codec.describe()}
    if out:
        if out.endswith(".g6"):
            Path(out).write_bytes(emit_graph6(product) + b"\n")
        else:
            Path(out).write_text(emit_edge_list(product, header=codec.describe()))
        payload["written"] = out
    result = None
    if check:
        result = check_wreath_balance(g, h, ctx.obj["max_product"], ctx.obj["max_n"])
        payload["check"] = {
            "p": frac(result.p),
            "product_db": result.product_db,
            "factor_pts_db": result.factor_pts_db,
            "factor_h_db": result.factor_h_db,
            "theorem_consistent": result.theorem_consistent,
        }
    payload["provenance"] = provenance(ctx)
    emit(ctx, payload)
    if result is not None and not result.theorem_consistent:
        ctx.exit(EXIT_FALSE)


@cli.command()
@format_option
@click.option("--input", "input_", type=click.Path(dir_okay=False), default=None,
              help="graph6 file, one record per line (default: stdin).")
@click.option("--skip", type=int, default=0, help="Skip this many input lines (resume an earlier run).")
@click.pass_context
def search(ctx: click.Context, input_: str | None, skip: int) -> None:
    """Stream vertex pairs in distinct orbits with equal total distance vectors (NDJSON)."""
    stream = open(input_) if input_ else sys.stdin
    stats = SearchStats()
    try:
        lines = (line for i, line in enumerate(stream) if i >= skip)
        for hit in search_counterexamples(lines, stats, ctx.obj["max_n"]):
            click.echo(json.dumps(hit.to_json()))
            sys.stdout.flush()
    finally:
        if input_:
            stream.close()
    click.echo(json.dumps({"summary": stats.to_json()}))


def main() -> None:
    cli(prog_name="tsb")


if __name__ == "__main__":
    main()
