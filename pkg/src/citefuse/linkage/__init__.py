"""Record merging across databases and cited-reference consolidation."""
from .consolidate import (
    THRESHOLD, CanonicalRef, attach_ref_ids, collect_refs, consolidate_refs, dump_canonrefs,
    link_variants, load_canonrefs, medoid_similarities, write_variant_map,
)
from .merge import CompositeKey, UnlinkableError, composite_key, merge_source_records
from .similarity import IncomparableError, field_scores, jaro, jaro_winkler, overall_similarity
from .unionfind import UnionFind

__all__ = [
    "THRESHOLD", "CanonicalRef", "attach_ref_ids", "collect_refs", "consolidate_refs",
    "dump_canonrefs", "link_variants", "load_canonrefs", "medoid_similarities", "write_variant_map",
    "CompositeKey", "UnlinkableError", "composite_key", "merge_source_records",
    "IncomparableError", "field_scores", "jaro", "jaro_winkler", "overall_similarity", "UnionFind",
]
