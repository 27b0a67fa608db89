"""Command-line entry point: ``citefuse --project DIR <command> ...``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .clustering import ClusteringError, DrillDownError
from .config import Config
from .ingest import ParseError
from .lexical import WordTreeError
from .project import Project, ProjectError

REPORTS = ("most-cited", "refs", "types", "categories", "bins")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="citefuse", description=__doc__)
    p.add_argument("--project", default=".", help="project directory holding the stores (default: .)")
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--threads", type=int, help="worker threads for parsing")
    p.add_argument("--seed", type=int, help="seed for synthetic corpora")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="parse WoS (.txt) and Scopus (.csv) exports into records.jsonl")
    s.add_argument("files", nargs="+")
    sub.add_parser("link", help="merge source records and consolidate cited references")
    sub.add_parser("network", help="build the co-citation network (network.graphml, edges.csv)")
    sub.add_parser("cluster", help="cluster the network (clusters.csv, timeline.json)")
    s = sub.add_parser("drill", help="re-run the analysis on the records citing one cluster")
    s.add_argument("--path", required=True, help='cluster path such as "#0" or "#0#0"')
    s = sub.add_parser("bursts", help="citation bursts of network nodes (bursts.csv)")
    s.add_argument("--min-duration", type=int)
    sub.add_parser("halflife", help="citation half-lives of canonical references (halflife.csv)")
    s = sub.add_parser("wordtree", help="keyword word-tree (wordtree.json, wordtree.txt)")
    s.add_argument("--min-freq", type=int)
    s.add_argument("--field", choices=("DE", "WC", "hybrid"))
    s = sub.add_parser("alluvial", help="keyword threads across years (alluvial.csv)")
    s.add_argument("--k", type=float)
    s = sub.add_parser("dualmap", help="dual-map overlay arcs over a base map (dualmap.csv)")
    s.add_argument("--basemap", required=True)
    s = sub.add_parser("report", help="rankings and tallies")
    s.add_argument("kind", choices=REPORTS)
    s = sub.add_parser("run", help="full pipeline from export files")
    s.add_argument("files", nargs="+")
    s.add_argument("--basemap")
    s = sub.add_parser("synth", help="write a synthetic WoS/Scopus corpus into the project directory")
    s.add_argument("--records", type=int, default=200)
    s.add_argument("--refs-per-record", type=int, default=30)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = Config.load(args.config)
        if args.threads is not None:
            config.threads = args.threads
        if args.seed is not None:
            config.seed = args.seed
        project = Project(args.project, config)
    except (ProjectError, ValueError, OSError) as exc:
        print(f"citefuse: error: {exc}", file=sys.stderr)
        return 2
    try:
        return _dispatch(project, args)
    except (ProjectError, ParseError, DrillDownError, ClusteringError, WordTreeError, ValueError) as exc:
        print(f"citefuse: error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"citefuse: error: {exc.args[0]}", file=sys.stderr)
        return 1
    finally:
        project.close()


def _dispatch(project: Project, args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "ingest":
        records = project.ingest(args.files)
        print(f"{len(records)} records -> {project.path('records.jsonl')}")
    elif cmd == "link":
        merged, canon = project.link()
        print(f"{len(merged)} records, {len(canon)} canonical references")
    elif cmd == "network":
        project.network()
        net = project.analysis.network
        print(f"{len(net.nodes)} nodes, {len(net.edges)} links")
    elif cmd == "cluster":
        project.cluster()
        a = project.analysis
        print(f"{len(a.clusters)} clusters, modularity {a.modularity:.3f}")
        for c in a.clusters:
            print(f"{c.path}\t{c.size}\t{c.silhouette:.3f}\t{c.display_year}\t{c.llr_label}")
    elif cmd == "drill":
        sub = project.drill(args.path)
        for c in sub.clusters:
            print(f"{c.path}\t{c.size}\t{c.silhouette:.3f}\t{c.display_year}\t{c.llr_label}")
    elif cmd == "bursts":
        kept = project.write_bursts(args.min_duration)
        print(f"{len(kept)} references with bursts")
    elif cmd == "halflife":
        project.halflife()
    elif cmd == "wordtree":
        project.wordtree(args.min_freq, args.field)
    elif cmd == "alluvial":
        project.alluvial(args.k)
    elif cmd == "dualmap":
        project.dualmap(args.basemap)
    elif cmd == "report":
        print(project.report(args.kind))
    elif cmd == "run":
        project.run_all(args.files, args.basemap)
    elif cmd == "synth":
        from .synthetic import write_corpus

        paths = write_corpus(project.root, n_records=args.records, refs_per_record=args.refs_per_record,
                             seed=project.config.seed)
        for p in paths:
            print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
