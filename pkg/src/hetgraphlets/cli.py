"""Command-line entry point: ``hetgraphlets <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import keys as K
from .aggregate import global_counts, write_global
from .counting import ConsistencyError, count_all, orbits_to_graphlets
from .embedding import EmbeddingError, embed, motif_weighted_graph, write_embedding
from .generators import gen_chung_lu, gen_er, gen_small_world, permute_types, typed_graph
from .graph import GraphFormatError, load_graph, write_graph
from .oracle import OracleRefused, oracle_counts
from .storage import CountFormatError, read_counts, write_counts

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _mode(s):
    if s in ("typed", "pa"):
        return K.TYPED if s == "typed" else K.POSITION_AWARE
    raise argparse.ArgumentTypeError("mode must be 'typed' or 'pa'")


def _positive(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def cmd_count(a):
    g = load_graph(a.edges, a.types, symmetrize=a.symmetrize)
    table = count_all(g, a.mode, workers=a.threads)
    if a.level == "graphlet":
        table = orbits_to_graphlets(table)
    write_counts(table, a.out)
    keys = [K.decode(h, table.L, table.mode) for h in table.distinct_keys().tolist()]
    K.write_lookup_table(keys, table.L, f"{a.out}.keys")
    print(f"{table.M} edges, {len(table.distinct_keys())} distinct keys -> {a.out}")


def cmd_global(a):
    gt = global_counts(read_counts(a.counts))
    write_global(gt, a.out)
    print(f"{len(gt.counts)} graphlet keys -> {a.out}")


def cmd_generate(a):
    n = a.nodes
    if a.model == "er":
        edges = gen_er(n, a.p, a.seed)
    elif a.model == "cl":
        edges = gen_chung_lu(n, a.seed, exponent=a.exponent, mean_degree=a.mean_degree)
    else:
        edges = gen_small_world(n, a.k, a.beta, a.seed)
    g = typed_graph(edges, n, a.types, a.seed)
    prefix = Path(a.out_prefix)
    write_graph(g, f"{prefix}.edges", f"{prefix}.types")
    print(f"{g.num_nodes} nodes, {g.num_edges} edges -> {prefix}.edges, {prefix}.types")


def _read_types(path):
    nodes, types = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: malformed type line {s!r}")
            nodes.append(int(parts[0]))
            types.append(int(parts[1]))
    return nodes, types


def cmd_permute_types(a):
    nodes, types = _read_types(a.types)
    new = permute_types(types, a.seed)
    with open(a.out, "w", newline="\n") as fh:
        for v, t in zip(nodes, new.tolist()):
            fh.write(f"{v} {t}\n")


def cmd_verify(a):
    g = load_graph(a.edges, a.types, symmetrize=a.symmetrize)
    ref = oracle_counts(g, a.mode, max_nodes=a.max_nodes)
    got = count_all(g, a.mode, workers=a.threads)
    diff = ref.first_difference(got)
    if diff is None:
        print(f"ok: {g.num_edges} edges, engine matches oracle")
        return EXIT_OK
    e, h, want, have = diff
    if e is None:
        print(f"MISMATCH: edge count oracle={want} engine={have}")
    else:
        u, v = ref.endpoints[e]
        key = K.decode(h, g.num_types, a.mode)
        print(f"MISMATCH: edge ({u}, {v}) key {key} (hash {h}): oracle={want} engine={have}")
    return EXIT_INTERNAL


def cmd_embed(a):
    g = load_graph(a.edges, a.types, symmetrize=a.symmetrize)
    table = orbits_to_graphlets(count_all(g, a.mode, workers=a.threads))
    mwg = motif_weighted_graph(g, table, a.key)
    emb = embed(mwg, a.dim, workers=a.threads)
    write_embedding(emb, a.out)
    print(f"{g.num_nodes} x {a.dim} embedding for {mwg.key} -> {a.out}")


def cmd_stats(a):
    table = read_counts(a.counts)
    gl = orbits_to_graphlets(table)
    keys = [K.decode(h, gl.L, gl.mode) for h in gl.distinct_keys().tolist()]
    print(f"mode={table.mode} L={table.L} N={table.N} M={table.M}")
    print(f"mean nonzeros per edge: {table.mean_nonzeros():.4f}")
    per_shape = {}
    for k in keys:
        s = K.SHAPE_OF_ORBIT[k.orbit]
        per_shape[s] = per_shape.get(s, 0) + 1
    print("distinct graphlet keys per shape:")
    for s in sorted(per_shape):
        print(f"  {K.SHAPE_NAMES[s]:<16} {per_shape[s]}")
    uniq, inv = np.unique(table.keys, return_inverse=True)
    tot = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(tot, inv.reshape(-1), table.counts)
    order = np.lexsort((uniq, -tot))[:a.top]
    print(f"top {len(order)} keys by edge-summed count:")
    for i in order:
        k = K.decode(int(uniq[i]), table.L, table.mode)
        print(f"  {int(uniq[i]):>12} {K.ORBIT_NAMES[k.orbit]:<28} {k.types} {int(tot[i])}")


def build_parser():
    p = _Parser(prog="hetgraphlets", description="Typed graphlet counting on node-typed graphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="per-edge counts to a tgc file")
    c.add_argument("--edges", required=True)
    c.add_argument("--types", required=True)
    c.add_argument("--symmetrize", action="store_true", help="accept a directed edge list")
    c.add_argument("--mode", type=_mode, default=K.TYPED)
    c.add_argument("--level", choices=("orbit", "graphlet"), default="orbit")
    c.add_argument("--threads", type=_positive, default=1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("global", help="whole-graph counts from a tgc file")
    c.add_argument("--counts", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_global)

    c = sub.add_parser("generate", help="seeded synthetic typed graph")
    c.add_argument("--model", choices=("er", "cl", "sw"), required=True)
    c.add_argument("--nodes", type=_positive, required=True)
    c.add_argument("--types", type=_positive, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--p", type=float, default=0.01, help="ER edge probability")
    c.add_argument("--exponent", type=float, default=1.8, help="CL power-law exponent")
    c.add_argument("--mean-degree", type=float, default=10.0, help="CL mean degree")
    c.add_argument("--k", type=int, default=6, help="SW ring degree")
    c.add_argument("--beta", type=float, default=0.3, help="SW rewiring probability")
    c.add_argument("--out-prefix", required=True)
    c.set_defaults(func=cmd_generate)

    c = sub.add_parser("permute-types", help="shuffle an existing type assignment")
    c.add_argument("--types", required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_permute_types)

    c = sub.add_parser("verify", help="compare the engine against the brute-force oracle")
    c.add_argument("--edges", required=True)
    c.add_argument("--types", required=True)
    c.add_argument("--symmetrize", action="store_true", help="accept a directed edge list")
    c.add_argument("--mode", type=_mode, default=K.TYPED)
    c.add_argument("--max-nodes", type=_positive, default=40)
    c.add_argument("--threads", type=_positive, default=1)
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("embed", help="spectral embedding of a motif-weighted graph")
    c.add_argument("--edges", required=True)
    c.add_argument("--types", required=True)
    c.add_argument("--symmetrize", action="store_true", help="accept a directed edge list")
    c.add_argument("--key", type=int, required=True, help="graphlet key hash")
    c.add_argument("--dim", type=_positive, required=True)
    c.add_argument("--mode", type=_mode, default=K.TYPED)
    c.add_argument("--threads", type=_positive, default=1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_embed)

    c = sub.add_parser("stats", help="summary of a tgc file")
    c.add_argument("--counts", required=True)
    c.add_argument("--top", type=_positive, default=10)
    c.set_defaults(func=cmd_stats)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        rc = a.func(a)
    except (ConsistencyError, EmbeddingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, GraphFormatError, CountFormatError, OracleRefused, K.KeyDomainError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK if rc is None else rc


if __name__ == "__main__":
    sys.exit(main())
