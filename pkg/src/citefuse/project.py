"""Project directory: persisted stores and the analysis steps that read and write them."""
from __future__ import annotations

import logging
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .clustering import ClusterAnalysis, analyze, drill_path, write_cluster_csv
from .config import Config
from .ingest import Record, Source, dump_records, load_records, parse_files
from .lexical import build_word_tree, hybrid_tree, wordtree_document
from .linkage import (
    attach_ref_ids, collect_refs, consolidate_refs, dump_canonrefs, load_canonrefs, merge_source_records,
    write_variant_map,
)
from .linkage.consolidate import CanonicalRef
from .network import largest_component_share, connected_components, write_edge_list, write_graphml
from .report import (
    BaseMap, bin_source_comparison, cited_ref_rows, dualmap_arcs, most_cited_rows, rank_cited_refs,
    rank_most_cited, tally, write_dualmap_csv, write_rows,
)
from .temporal import (
    alluvial_threads, filter_bursts, half_life, reference_bursts, timeline_export, write_alluvial_csv,
    write_bursts_csv, write_json,
)

RECORDS = "records.jsonl"
MERGED = "merged.jsonl"
CANONREFS = "canonrefs.jsonl"
VARIANTS = "variants.csv"


class ProjectError(RuntimeError):
    pass


class Project:
    def __init__(self, root: str | Path, config: Config | None = None):
        self.root = Path(root)
        if not self.root.is_dir():
            raise ProjectError(f"project directory {self.root} does not exist")
        self.config = config or Config()
        self.log = logging.getLogger("citefuse.project")
        self._handler = logging.FileHandler(self.root / "diagnostics.log", encoding="utf-8")
        self._handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        self.log.addHandler(self._handler)
        self.log.setLevel(logging.INFO)

    def close(self) -> None:
        self.log.removeHandler(self._handler)
        self._handler.close()

    def path(self, name: str) -> Path:
        return self.root / name

    def _require(self, name: str, step: str) -> Path:
        p = self.path(name)
        if not p.exists():
            raise ProjectError(f"{name} is missing; run `{step}` first")
        return p

    # -- ingest / link -----------------------------------------------------

    def ingest(self, paths: Sequence[str | Path]) -> list[Record]:
        if not paths:
            raise ProjectError("no input files given")
        records = parse_files(paths, threads=self.config.threads)
        dump_records(records, self.path(RECORDS))
        unlinkable = sum(not r.linkable for r in records)
        self.log.info("ingest: %d records from %d file(s); %d unlinkable", len(records), len(paths), unlinkable)
        return records

    def link(self) -> tuple[list[Record], list[CanonicalRef]]:
        records = load_records(self._require(RECORDS, "ingest"))
        wos = [r for r in records if r.source is Source.WOS]
        scopus = [r for r in records if r.source is Source.SCOPUS]
        merged = merge_source_records(wos, scopus)
        overlap = len(wos) + len(scopus) - len(merged)
        pairs = collect_refs(merged)
        canon = consolidate_refs(pairs, {r.id: r.year for r in merged}, self.config.similarity_threshold)
        merged = attach_ref_ids(merged, canon)
        dump_records(merged, self.path(MERGED))
        dump_canonrefs(canon, self.path(CANONREFS))
        write_variant_map(canon, self.path(VARIANTS))
        for name in ("analysis", "bursts"):
            self.__dict__.pop(name, None)
        self.__dict__["records"] = merged
        self.__dict__["canon"] = {c.id: c for c in canon}
        after = sum(c.n_citations for c in canon)
        self.log.info("link: %d WoS + %d Scopus - %d overlap = %d records", len(wos), len(scopus), overlap,
                      len(merged))
        self.log.info("link: %d cited references -> %d canonical (citation pairs %d -> %d)",
                      len(pairs), len(canon), len(pairs), after)
        return merged, canon

    @cached_property
    def records(self) -> list[Record]:
        return load_records(self._require(MERGED, "link"))

    @cached_property
    def canon(self) -> dict[str, CanonicalRef]:
        return {c.id: c for c in load_canonrefs(self._require(CANONREFS, "link"))}

    # -- network / clusters ------------------------------------------------

    @cached_property
    def analysis(self) -> ClusterAnalysis:
        cfg = self.config
        return analyze(self.records, self.canon, k=cfg.g_index_k, slice_length=cfg.slice_length,
                       min_size=cfg.min_cluster_size)

    @cached_property
    def bursts(self) -> dict:
        cfg = self.config
        return reference_bursts(self.analysis.network, self.analysis.records, 1, cfg.burst_scale, cfg.burst_gamma)

    def network(self) -> None:
        net = self.analysis.network
        write_graphml(net, self.path("network.graphml"), self.bursts)
        write_edge_list(net, self.path("edges.csv"))
        comps = connected_components(net)
        self.log.info("network: %d nodes, %d links, %d components, largest share %.3f", len(net.nodes),
                      len(net.edges), len(comps), largest_component_share(net))

    def cluster(self) -> None:
        a = self.analysis
        write_cluster_csv(a, self.path("clusters.csv"))
        write_json(timeline_export(a.clusters, a.network, self.bursts), self.path("timeline.json"))
        self.log.info("cluster: %d clusters (%d noise blocks), modularity %.3f", len(a.clusters),
                      len(a.partition.noise), a.modularity)

    def drill(self, path: str) -> ClusterAnalysis:
        cfg = self.config
        sub = drill_path(self.analysis, path, self.canon, max_depth=cfg.drill_max_depth,
                         min_records=cfg.drill_min_records, k=cfg.g_index_k, slice_length=cfg.slice_length,
                         min_size=cfg.min_cluster_size)
        tag = path.replace("#", "_").strip("_")
        write_cluster_csv(sub, self.path(f"clusters_{tag}.csv"))
        sub_bursts = reference_bursts(sub.network, sub.records, 1, cfg.burst_scale, cfg.burst_gamma)
        write_json(timeline_export(sub.clusters, sub.network, sub_bursts), self.path(f"timeline_{tag}.json"))
        self.log.info("drill %s: %d records, %d clusters", path, len(sub.records), len(sub.clusters))
        return sub

    # -- temporal ----------------------------------------------------------

    def write_bursts(self, min_duration: int | None = None) -> dict:
        n = self.config.burst_min_duration if min_duration is None else min_duration
        kept = {k: f for k, v in self.bursts.items() if (f := filter_bursts(v, n))}
        write_bursts_csv(kept, self.analysis.network, self.path("bursts.csv"))
        self.log.info("bursts: %d references with bursts of %d year(s) or longer", len(kept), n)
        return kept

    def halflife(self) -> None:
        rows = []
        for c in rank_cited_refs(self.canon.values(), len(self.canon)):
            try:
                h = half_life(c)
            except ValueError:
                continue
            rows.append([c.id, c.label, c.year, len(c.citing_ids), h])
        write_rows(self.path("halflife.csv"), ["reference_id", "reference", "year", "citations", "half_life"], rows)
        self.log.info("halflife: %d references (citations observed in the loaded corpus only)", len(rows))

    def alluvial(self, k: float | None = None) -> None:
        k = self.config.alluvial_k if k is None else k
        threads = alluvial_threads(self.records, k)
        write_alluvial_csv(threads, self.records, self.path("alluvial.csv"))
        self.log.info("alluvial: %d keyword threads (k=%s)", len(threads), k)

    # -- lexical / reports -------------------------------------------------

    def wordtree(self, min_freq: int | None = None, field: str | None = None) -> None:
        cfg = self.config
        field = field or cfg.wordtree_field
        if field == "hybrid":
            root = hybrid_tree(self.records, cfg.category_min, cfg.keyword_min, cfg.wordtree_weighting)
        else:
            n = cfg.wordtree_min_freq if min_freq is None else min_freq
            root = build_word_tree(self.records, field, n, cfg.wordtree_weighting)
        write_json(wordtree_document(root), self.path("wordtree.json"))
        self.path("wordtree.txt").write_text(root.outline(), encoding="utf-8")
        self.log.info("wordtree: %d terms", len(list(root.walk())))

    def dualmap(self, basemap: str | Path) -> None:
        cfg = self.config
        result = dualmap_arcs(self.records, BaseMap.load(basemap),
                              cfg.dualmap_bundle_threshold if cfg.dualmap_bundle else None,
                              cfg.dualmap_match_threshold)
        write_dualmap_csv(result, self.path("dualmap.csv"))
        self.log.info("dualmap: %d arcs, %d resolved and %d unresolved references", len(result.arcs),
                      result.resolved, result.unresolved)

    def report(self, kind: str) -> Path:
        cfg = self.config
        out = self.path(f"report_{kind.replace('-', '_')}.csv")
        if kind == "most-cited":
            write_rows(out, ["rank", "citations", "wos", "scopus", "first_author", "year", "title", "venue"],
                       most_cited_rows(rank_most_cited(self.records, cfg.report_top)))
        elif kind == "refs":
            write_rows(out, ["rank", "citations", "reference_id", "reference", "half_life"],
                       cited_ref_rows(rank_cited_refs(self.canon.values(), cfg.report_top), self._half_lives()))
        elif kind == "types":
            write_rows(out, ["doc_type", "count"], tally(self.records, "doc_type"))
        elif kind == "categories":
            write_rows(out, ["subject_category", "count"], tally(self.records, "subject_category"))
        elif kind == "bins":
            rows = [[b.low, "" if b.high == float("inf") else b.high, b.count, f"{b.mean_wos:.3f}",
                     f"{b.mean_scopus:.3f}"] for b in bin_source_comparison(self.records, cfg.bins)]
            write_rows(out, ["bin_low", "bin_high", "records", "mean_wos", "mean_scopus"], rows)
        else:
            raise ProjectError(f"unknown report {kind!r}")
        return out

    def _half_lives(self) -> dict[str, int | None]:
        out: dict[str, int | None] = {}
        for c in self.canon.values():
            try:
                out[c.id] = half_life(c)
            except ValueError:
                out[c.id] = None
        return out

    def run_all(self, inputs: Iterable[str | Path], basemap: str | Path | None = None) -> None:
        """ingest -> link -> network -> cluster -> bursts -> trees -> reports."""
        self.ingest(list(inputs))
        self.link()
        self.network()
        self.cluster()
        self.write_bursts()
        self.halflife()
        self.wordtree()
        self.alluvial()
        if basemap is not None:
            self.dualmap(basemap)
        for kind in ("most-cited", "refs", "types", "categories", "bins"):
            self.report(kind)
