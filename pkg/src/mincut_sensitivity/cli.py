"""Command-line front end.

Graph files: a header `p <n> <m>` then m lines `e <u> <v>` (1-based ids); repeated
`e` lines give parallel edges and `#` starts a comment. Query lines (1-based):

    ft s t x y          value after failing edge (x,y)
    in s t x y          value after inserting edge (x,y)
    ec s t y n1 .. nk   can one (s,t)-mincut cut every edge (y,n_i)
    cn s t y            is y on s's side of every (s,t)-mincut
    ap fail|ins x y     all pairs whose mincut value changes
"""
from __future__ import annotations

import json
import random
import sys
import time
from dataclasses import dataclass

import click

from .compact import (
    EdgeBundle,
    build_compact,
    check_compact,
    check_nearest_mincut,
    edge_contained_compact,
    ft_value_compact,
    in_value_compact,
    report_ft_cut_compact,
    report_in_cut_compact,
)
from .fixtures import random_multigraph
from .graph import Cut, InvalidArgument, Multigraph
from .labels import FAIL, INSERT, VertexLabel, affected_pairs, build_labels, on_nearest_side, value_changed
from .quadratic import (
    NotContained,
    build_quadratic,
    ft_mincut_value,
    in_mincut_value,
    nearest_at,
    report_ft_cut,
    report_in_cut,
)
from .serialize import DumpError, dump, load
from .trees import OpCounter
from .verify import corpus, verify_corpus

ORACLES = ("quad", "compact", "dist")
ARITY = {"ft": 4, "in": 4, "cn": 3}
CSV_HEADER = "oracle,n,m,build_ms,query_kind,ops,us"


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


# -- parsing ------------------------------------------------------------------------

def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise ParseError(line, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_graph(text: str) -> Multigraph:
    """Parse the `p`/`e` format into a graph on vertices 0..n-1."""
    n = m = None
    pairs: list[tuple[int, int]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise ParseError(no, "second header line")
            if len(tok) != 3:
                raise ParseError(no, "header must be 'p <n> <m>'")
            n, m = _ints(tok[1:], no)
            if n < 1 or m < 0:
                raise ParseError(no, "header counts out of range")
        elif tok[0] == "e":
            if n is None:
                raise ParseError(no, "edge before header")
            if len(tok) != 3:
                raise ParseError(no, "edge must be 'e <u> <v>'")
            u, v = _ints(tok[1:], no)
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(no, f"vertex out of range 1..{n}")
            if u == v:
                raise InvalidArgument(f"line {no}: self-loop on vertex {u}")
            pairs.append((u - 1, v - 1))
        else:
            raise ParseError(no, f"unknown line type {tok[0]!r}")
    if n is None:
        raise ParseError(0, "missing header 'p <n> <m>'")
    if len(pairs) != m:
        raise ParseError(0, f"header announces {m} edges, found {len(pairs)}")
    return Multigraph.from_edges(n, pairs)


def format_graph(g: Multigraph) -> str:
    lines = [f"p {g.n} {g.m}"] + [f"e {u + 1} {v + 1}" for _, u, v in g.edges]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class QueryRecord:
    kind: str  # ft, in, ec, cn, ap-fail, ap-ins
    args: tuple[int, ...]  # 0-based vertex ids


def parse_query(line: str, n: int, no: int = 0) -> QueryRecord:
    tok = line.split()
    head = tok[0]
    if head == "ap":
        if len(tok) != 4 or tok[1] not in ("fail", "ins"):
            raise ParseError(no, "expected 'ap fail|ins x y'")
        kind, rest = f"ap-{tok[1]}", tok[2:]
    elif head in ARITY:
        kind, rest = head, tok[1:]
        if len(rest) != ARITY[head]:
            raise ParseError(no, f"'{head}' takes {ARITY[head]} vertices")
    elif head == "ec":
        kind, rest = head, tok[1:]
        if len(rest) < 4:
            raise ParseError(no, "expected 'ec s t y n1 .. nk' with k >= 1")
    else:
        raise ParseError(no, f"unknown query {head!r}")
    args = _ints(rest, no)
    for v in args:
        if not 1 <= v <= n:
            raise ParseError(no, f"vertex {v} out of range 1..{n}")
    return QueryRecord(kind, tuple(v - 1 for v in args))


# -- answering ----------------------------------------------------------------------

def _fmt_cut(cut: Cut) -> str:
    return "cut: " + " ".join(str(v + 1) for v in sorted(cut.side))


def _bundle(g: Multigraph, y: int, others: tuple[int, ...]) -> EdgeBundle:
    """Edges (y, n_i); a repeated neighbour takes the next parallel edge."""
    used: set[int] = set()
    edges = []
    for w in others:
        eid = next((e for e, x in g.adjacency[y] if x == w and e not in used), None)
        if eid is None:
            raise InvalidArgument(f"no unused edge joins {y + 1} and {w + 1}")
        used.add(eid)
        edges.append(eid)
    return EdgeBundle.make(g, y, edges)


class Session:
    """A built oracle of one kind plus the query dispatch."""

    def __init__(self, kind: str, g: Multigraph, oracle=None, counter: OpCounter | None = None):
        self.kind, self.g = kind, g
        self.counter = counter or OpCounter()
        t0 = time.perf_counter()
        if oracle is None:
            if kind == "quad":
                oracle = build_quadratic(g, self.counter)
            elif kind == "compact":
                oracle = build_compact(g, self.counter)
            else:
                oracle = build_labels(g, build_quadratic(g, self.counter))
        else:
            self.counter = oracle.counter
            if kind == "dist":
                oracle = build_labels(g, oracle)
        self.build_ms = (time.perf_counter() - t0) * 1000
        self.oracle = oracle
        self._labels: dict[int, VertexLabel] | None = oracle if kind == "dist" else None

    @property
    def labels(self) -> dict[int, VertexLabel]:
        if self._labels is None:
            q = self.oracle if self.kind == "quad" else build_quadratic(self.g)
            self._labels = build_labels(self.g, q)
        return self._labels

    def value(self, s: int, t: int) -> int:
        if self.kind == "dist":
            h = next(iter(self.oracle.values())).shared.hierarchy
            if s == t:
                raise InvalidArgument("s and t must differ")
            return h[h.lca_of(s, t)].value
        return self.oracle.value(s, t)

    def _check(self, q: QueryRecord) -> None:
        """Reject bad arguments up front so messages use the 1-based ids of the input."""
        a = q.args
        if q.kind in ("ft", "in", "ec", "cn") and a[0] == a[1]:
            raise InvalidArgument("s and t must differ")
        ends = a[2:4] if q.kind in ("ft", "in") else a[:2] if q.kind.startswith("ap") else ()
        if ends and ends[0] == ends[1]:
            raise InvalidArgument(f"({ends[0] + 1},{ends[1] + 1}) would be a self-loop")
        if q.kind in ("ft", "ap-fail") and ends[1] not in {w for _, w in self.g.adjacency[ends[0]]}:
            raise InvalidArgument(f"({ends[0] + 1},{ends[1] + 1}) is not an edge")

    def answer(self, q: QueryRecord, report_cuts: bool, expand: bool, encoding: bool = False) -> list[str]:
        self._check(q)
        k, a = q.kind, q.args
        o = self.oracle
        if k == "ft":
            s, t, x, y = a
            if self.kind == "quad":
                val = ft_mincut_value(o, s, t, x, y)
            elif self.kind == "compact":
                val = ft_value_compact(o, s, t, x, y)
            else:
                val = self.value(s, t) - value_changed(o[x], o[y], s, t, FAIL)
            line = str(val)
            if report_cuts and self.kind != "dist" and val < self.value(s, t):
                cut = report_ft_cut(o, s, t, x, y) if self.kind == "quad" else report_ft_cut_compact(o, s, t, x, y)
                line += " " + _fmt_cut(cut)
            return [line]
        if k == "in":
            s, t, x, y = a
            if x == y:
                raise InvalidArgument("inserted edge would be a self-loop")
            if self.kind == "quad":
                val = in_mincut_value(o, s, t, x, y)
            elif self.kind == "compact":
                val = in_value_compact(o, s, t, x, y)
            else:
                val = self.value(s, t) + value_changed(o[x], o[y], s, t, INSERT)
            line = str(val)
            if report_cuts and self.kind != "dist":
                cut = report_in_cut(o, s, t, x, y) if self.kind == "quad" else report_in_cut_compact(o, s, t, x, y)
                line += " " + _fmt_cut(cut)
            return [line]
        if k == "cn":
            s, t, y = a
            if self.kind == "quad":
                self.value(s, t)
                got = y == s or nearest_at(o.at(s, t), y, s, t)
            elif self.kind == "compact":
                got = check_nearest_mincut(o, s, t, y)
            else:
                got = on_nearest_side(o[y], s, t)
            return ["TRUE" if got else "FALSE"]
        if k == "ec":
            s, t, y, *others = a
            bundle = _bundle(self.g, y, tuple(others))
            if self.kind == "compact":
                cut = edge_contained_compact(o, s, t, bundle)
                return ["NO"] if cut is None else ["YES " + _fmt_cut(cut)]
            if len(bundle.edges) != 1:
                raise InvalidArgument(f"the {self.kind} oracle answers single-edge containment only")
            w = others[0]
            if self.kind == "quad":
                try:
                    return ["YES " + _fmt_cut(report_ft_cut(o, s, t, y, w))]
                except NotContained:
                    return ["NO"]
            return ["YES" if value_changed(o[y], o[w], s, t, FAIL) else "NO"]
        # affected pairs
        x, y = a
        mode = FAIL if k == "ap-fail" else INSERT
        enc = affected_pairs(self.labels[x], self.labels[y], mode)
        pairs = enc.expand()
        out = [f"pairs: {len(pairs)}"]
        if encoding:
            out.append(f"records: {enc.size()}")
            out += [f"node {r.node} {r.kind} path {r.path[0]} {r.path[1]}" for r in enc.records]
        if expand:
            out += [f"{u + 1} {v + 1}" for u, v in pairs]
        return out


def run_queries(
    session: Session, lines, report_cuts: bool = False, expand: bool = True, bench: bool = False, encoding: bool = False
):
    """Yield output lines; errors are reported inline and processing continues."""
    if bench:
        yield CSV_HEADER
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            q = parse_query(line, session.g.n, no)
            session.counter.reset()
            t0 = time.perf_counter()
            out = session.answer(q, report_cuts, expand, encoding)
            us = (time.perf_counter() - t0) * 1e6
            ops = session.counter.reset()
        except (ParseError, InvalidArgument, KeyError) as exc:
            msg = exc.args[0] if exc.args else exc
            yield f"error: line {no}: {msg}" if not isinstance(exc, ParseError) else f"error: {msg}"
            continue
        if bench:
            yield f"{session.kind},{session.g.n},{session.g.m},{session.build_ms:.3f},{q.kind},{ops},{us:.1f}"
        else:
            yield from out


def space_stats(session: Session) -> dict:
    o = session.oracle
    if session.kind == "compact":
        st = check_compact(o)
        return {"levels": st.levels, "units": st.units, "non_steiner_units": st.non_steiner_units,
                "contracted_vertices": st.contracted_vertices, "graph_edges": st.graph_edges}
    if session.kind == "quad":
        units = sum(len(c.units.units) for c in o.carcass.values())
        nodes = sum(c.skeleton.n_nodes for c in o.carcass.values())
        return {"carcasses": len(o.carcass), "units": units, "skeleton_nodes": nodes}
    return {"labels": len(o), "max_label_records": max(lb.size() for lb in o.values())}


# -- commands -----------------------------------------------------------------------

def _read_graph(path: str) -> Multigraph:
    with click.open_file(path) as fh:
        text = fh.read()
    try:
        return parse_graph(text)
    except (ParseError, InvalidArgument) as exc:
        raise click.ClickException(f"{path}: {exc}")


@click.group()
def main():
    """Sensitivity oracles for all-pairs minimum cuts."""


@main.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.argument("queries", default="-", type=click.Path(allow_dash=True))
@click.option("--oracle", "kind", type=click.Choice(ORACLES), default="quad", show_default=True)
@click.option("--load", "dump_path", type=click.Path(exists=True, dir_okay=False), help="Use a dumped oracle instead of building one.")
@click.option("--report-cuts", is_flag=True, help="Print the (s,t)-mincut side holding s with ft/in answers.")
@click.option("--expand/--no-expand", default=True, show_default=True, help="List the pairs of ap queries.")
@click.option("--encoding", is_flag=True, help="Also print the compact per-node records of ap queries.")
@click.option("--bench", is_flag=True, help="Emit CSV timing/op-count rows instead of answers.")
def query(graph, queries, kind, dump_path, report_cuts, expand, encoding, bench):
    """Answer the queries in QUERIES (default: stdin) on GRAPH."""
    g = _read_graph(graph)
    if dump_path:
        try:
            with open(dump_path) as fh:
                kind, oracle = load(fh)
        except DumpError as exc:
            raise click.ClickException(f"{dump_path}: {exc}")
        if oracle.graph != g:
            raise click.ClickException("the dump was built for a different graph")
        session = Session(kind, g, oracle)
    else:
        try:
            session = Session(kind, g)
        except InvalidArgument as exc:
            raise click.ClickException(str(exc))
    with click.open_file(queries) as fh:
        for line in run_queries(session, fh, report_cuts, expand, bench, encoding):
            click.echo(line)
    if bench:
        click.echo("# space " + json.dumps(space_stats(session), sort_keys=True))


@main.command(name="dump")
@click.argument("graph", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.option("--oracle", "kind", type=click.Choice(ORACLES), default="quad", show_default=True)
@click.option("-o", "--output", default="-", type=click.Path(allow_dash=True))
def dump_cmd(graph, kind, output):
    """Build an oracle for GRAPH and write its text dump."""
    g = _read_graph(graph)
    oracle = build_compact(g) if kind == "compact" else build_quadratic(g)
    with click.open_file(output, "w") as fh:
        dump(oracle, kind, fh)


@main.command()
@click.option("--seed", default=1, show_default=True)
@click.option("--count", default=50, show_default=True, help="Random graphs in the corpus.")
@click.option("--max-n", default=10, show_default=True)
@click.option("--density", default=2.5, show_default=True, help="Edge cap as a multiple of n.")
@click.option("--fixtures/--no-fixtures", default=True, show_default=True)
@click.option("-v", "--verbose", is_flag=True)
def verify(seed, count, max_n, density, fixtures, verbose):
    """Run the equivalence matrix against brute force; nonzero exit on any mismatch."""
    graphs = corpus(seed, count, max_n, density, fixtures)
    if not graphs:
        click.echo("warning: empty corpus, nothing to check", err=True)
    progress = (lambda tag, rep: click.echo(f"{tag}: {rep.total_mismatches} mismatches so far", err=True)) if verbose else None
    rep = verify_corpus(graphs, progress)
    click.echo(json.dumps(rep.summary(), sort_keys=True))
    click.echo(f"{rep.total_mismatches} mismatches")
    sys.exit(1 if rep.total_mismatches else 0)


@main.command()
@click.option("--oracle", "kind", type=click.Choice(ORACLES), default="quad", show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--max-n", default=128, show_default=True)
@click.option("--queries", "per_kind", default=50, show_default=True, help="Queries per kind and size.")
@click.option("--density", default=1.5, show_default=True)
def bench(kind, seed, max_n, per_kind, density):
    """CSV sweep over random graphs with n = 8, 16, ... up to --max-n."""
    rng = random.Random(seed)
    click.echo(CSV_HEADER)
    n = 8
    while n <= max_n:
        g = random_multigraph(rng, n, max(n - 1, int(density * n)))
        session = Session(kind, g)
        lines = []
        for _ in range(per_kind):
            s, t = rng.sample(range(n), 2)
            _, x, y = rng.choice(g.edges)
            u, v = rng.sample(range(n), 2)
            lines += [f"ft {s + 1} {t + 1} {x + 1} {y + 1}", f"in {s + 1} {t + 1} {u + 1} {v + 1}"]
        for row in run_queries(session, lines, bench=True):
            if row != CSV_HEADER:
                click.echo(row)
        click.echo("# space n=%d %s" % (n, json.dumps(space_stats(session), sort_keys=True)))
        n *= 2


if __name__ == "__main__":
    main()
