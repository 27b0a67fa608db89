"""Seeded synthetic WoS/Scopus corpora with planted reference variants and topics.

Used by the acceptance tests and the ``synth`` command. Every cited-reference
string is recorded in a ground-truth map (raw text -> work id), so
consolidation precision and recall can be measured exactly.
"""
from __future__ import annotations

import json
import random
from itertools import accumulate
from dataclasses import dataclass, field
from pathlib import Path

from .ingest.model import Author, CitedRef, Record, Source
from .ingest.scopus import format_reference, parse_reference, write_scopus
from .ingest.wos import format_cr, parse_cr, write_wos

# (full title, WoS abbreviation, base-map region)
JOURNALS = [
    ("Scientometrics", "SCIENTOMETRICS", "information science"),
    ("Journal of Informetrics", "J INFORMETR", "information science"),
    ("Journal of the American Society for Information Science and Technology", "J AM SOC INF SCI TEC", "information science"),
    ("Research Evaluation", "RES EVALUAT", "information science"),
    ("Journal of Documentation", "J DOC", "information science"),
    ("Science", "SCIENCE", "multidisciplinary"),
    ("Nature", "NATURE", "multidisciplinary"),
    ("Current Contents", "CURR CONTENTS", "multidisciplinary"),
    ("The Scientist", "SCIENTIST", "multidisciplinary"),
    ("JAMA", "JAMA-J AM MED ASSOC", "medicine"),
    ("British Medical Journal", "BRIT MED J", "medicine"),
    ("Canadian Medical Association Journal", "CAN MED ASSOC J", "medicine"),
    ("Annals of Internal Medicine", "ANN INTERN MED", "medicine"),
    ("Lancet", "LANCET", "medicine"),
    ("Research Policy", "RES POLICY", "economics"),
    ("Science and Public Policy", "SCI PUBL POLICY", "economics"),
    ("Minerva", "MINERVA", "economics"),
    ("Social Studies of Science", "SOC STUD SCI", "sociology"),
    ("American Sociological Review", "AM SOCIOL REV", "sociology"),
    ("PLoS One", "PLOS ONE", "biology"),
    ("Cell", "CELL", "biology"),
    ("Journal of Molecular Biology", "J MOL BIOL", "biology"),
    ("Communications of the ACM", "COMMUN ACM", "computing"),
    ("Information Processing and Management", "INFORM PROCESS MANAG", "computing"),
    ("Journal of Computer and System Sciences", "J COMPUT SYST SCI", "computing"),
]

TOPICS = [
    {"term": "altmetrics", "keyword": "altmetrics", "category": "Computer Science, Information Systems",
     "years": (2010, 2017), "journals": [0, 1, 19, 22]},
    {"term": "h-index", "keyword": "h-index", "category": "Information Science & Library Science",
     "years": (2005, 2017), "journals": [0, 1, 2, 3]},
    {"term": "histcite", "keyword": "histcite", "category": "Computer Science, Interdisciplinary Applications",
     "years": (2000, 2012), "journals": [4, 2, 23, 24]},
    {"term": "journals", "keyword": "impact factor", "category": "Medicine, General & Internal",
     "years": (2000, 2017), "journals": [9, 10, 11, 12, 13]},
]

GENERAL_KEYWORDS = [
    "citation analysis", "bibliometrics", "scientometrics", "research evaluation", "peer review",
    "science citation index", "web of science", "scopus", "co-citation", "citation indexing",
    "research policy", "open access", "self-citation", "journal ranking", "collaboration",
]

FILLER = """
measuring evidence patterns trends role effects performance outcomes indicators comparison dynamics
structure growth survey assessment framework perspective lessons limits challenges practice quality
relationship distribution field national global international institutions universities authors
countries decades emerging revisited critical empirical longitudinal cross-sectional statistical
""".split()

SYLLABLES = ["ka", "lo", "mi", "ren", "sto", "val", "dor", "fen", "gra", "hul", "jor", "kir", "lan",
             "mor", "nes", "pol", "quin", "ras", "sel", "tor", "ub", "vin", "wes", "yar", "zel"]

DOC_TYPES = [("Article", 0.78), ("Review", 0.08), ("Editorial Material", 0.07),
             ("Proceedings Paper", 0.04), ("Letter", 0.03)]

CURLY = "’"
HIRSCH_TITLE = "An index to quantify an individual's scientific research output"
HIRSCH_WOS = [
    "Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569, DOI 10.1073/pnas.0507655102",
    "Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569, DOI [10.1073/pnas.0507655102, DOI 10.1073/PNAS.0507655102]",
    "Hirsch J., 2005, P NATL ACAD SCI USA, V102, P165",
    "Hirsch J. E., 2005, P NATL ACAD SCI USA, V102, P4",
    "Hirsch J. E., 2005, P NAT AC SCI US",
    "Hirsch J. E., 2005, P NATL ACAD SCI US",
]
HIRSCH_SCOPUS = [
    f"Hirsch, J.E., An index to quantify an individual{CURLY}s scientific research output (2005) "
    "Proceedings of the National Academy of Sciences of the United States of America, 102 (46), pp. 16569-16572",
    f"Hirsch, J.E., An index to quantify an individual{CURLY}s scientific research output (2005) "
    "Proceedings of the National Academy of Sciences of the United States of America, 102, pp. 16569-16572",
    "Hirsch, J.E., An Index to Quantify an Individual's Scientific Research Output (2005) "
    "Proceedings of the National Academy of Sciences, 102 (46), pp. 16569-16572",
    "Hirsch, J.E., (2005) Proc. Natl. Acad. Sci. USA, 102, pp. 16569-16572",
    "Hirsch, J.E., An index to quantify an individual's scientific research output (2005) "
    "Proc. Nation. Acad. Sci. USA, 102 (46), pp. 16569-16572",
    "Hirsch, J., An index to quantify an individual's scientific research output, "
    "Proceedings of the National Academy of Sciences USA, 102, pp. 16569-16572",
]
HIRSCH_ID = "W-hirsch-2005"


@dataclass
class Work:
    id: str
    surname: str
    initials: str
    year: int
    title: str
    journal: int
    volume: str
    page: str
    topic: int | None
    wos_forms: list[str] = field(default_factory=list)
    scopus_forms: list[str] = field(default_factory=list)

    def ref(self, **changes) -> CitedRef:
        full, abbrev, _ = JOURNALS[self.journal]
        base = dict(raw="", author_surname=self.surname, author_initials=self.initials, year=self.year,
                    source_name=abbrev, volume=self.volume, first_page=self.page)
        base.update(changes)
        return CitedRef(**base)


@dataclass
class Corpus:
    wos: list[Record]
    scopus: list[Record]
    truth: dict[str, str]
    works: list[Work]
    planted: list[str]
    record_topics: dict[str, int]


def _surname(rng: random.Random) -> str:
    n = rng.choice((2, 3))
    return "".join(rng.choice(SYLLABLES) for _ in range(n)).capitalize()


def _title(rng: random.Random, topic_term: str | None, n_words: int = 5) -> str:
    words = rng.sample(FILLER, n_words)
    if topic_term:
        words.insert(rng.randrange(len(words) + 1), topic_term)
    return " ".join(words).capitalize()


def _wos_variants(w: Work, rng: random.Random, allow_missing: bool) -> list[str]:
    full, abbrev, _ = JOURNALS[w.journal]
    canonical = format_cr(w.ref())
    forms = [canonical]
    dotted = " ".join(f"{c}." for c in w.initials)
    options = [
        format_cr(w.ref(doi=f"10.{1000 + int(w.id[2:]) % 9000}/syn.{w.id.lower()}")),
        format_cr(w.ref(author_initials=None)).replace(f"{w.surname},", f"{w.surname} {dotted},", 1),
        format_cr(w.ref(source_name=abbrev.rsplit(" ", 1)[0] if " " in abbrev else abbrev + " J")),
    ]
    forms += rng.sample(options, rng.randint(1, 2))
    if allow_missing and rng.random() < 0.5:
        forms.append(format_cr(w.ref(volume=None, first_page=None)))
        if rng.random() < 0.5:
            forms.append(format_cr(w.ref(first_page=w.page[:-1] or "1")))
    return forms


def _scopus_variants(w: Work, rng: random.Random) -> list[str]:
    full, abbrev, _ = JOURNALS[w.journal]
    canonical = format_reference(w.ref(source_name=full, title=w.title))
    short_title = " ".join(w.title.split()[:-1]) or w.title
    options = [
        format_reference(w.ref(source_name=full, title=short_title)),
        format_reference(w.ref(source_name=abbrev.title(), title=w.title)),
        format_reference(w.ref(source_name=full, title=None)),
        format_reference(w.ref(source_name=full, title=w.title, year=None, author_initials=w.initials[:1])),
    ]
    return [canonical] + rng.sample(options, rng.randint(1, 3))


def _hirsch(topic: int) -> Work:
    w = Work(HIRSCH_ID, "Hirsch", "JE", 2005, HIRSCH_TITLE, 5, "102", "16569", topic)
    w.wos_forms = list(HIRSCH_WOS)
    w.scopus_forms = list(HIRSCH_SCOPUS)
    return w


def _next_form(forms: list[str], key: str, turns: dict[str, int]) -> str:
    # round-robin so every planted variant is actually cited
    i = turns.get(key, 0)
    turns[key] = i + 1
    return forms[i % len(forms)]


def _pick_doc_type(rng: random.Random) -> str:
    x = rng.random()
    for name, p in DOC_TYPES:
        if x < p:
            return name
        x -= p
    return DOC_TYPES[0][0]


def generate_corpus(n_records: int = 200, refs_per_record: int = 30, seed: int = 0,
                    planted_groups: int = 40, overlap: float = 0.15, scopus_only: float = 0.25,
                    works_per_record: float = 1.5) -> Corpus:
    """Build a corpus; ``planted_groups`` works (the Hirsch h-index article first) carry deliberate variants."""
    rng = random.Random(seed)
    used_keys: set[tuple] = set()
    works: list[Work] = []

    def new_work(topic: int | None, year_range: tuple[int, int]) -> Work:
        while True:
            surname, initials = _surname(rng), rng.choice("ABCDEFGHJKLMNPRSTW") + rng.choice(["", "", "J", "M"])
            year = rng.randint(*year_range)
            if (surname.casefold(), initials[0], year) not in used_keys:
                break
        used_keys.add((surname.casefold(), initials[0], year))
        journal = rng.choice(TOPICS[topic]["journals"]) if topic is not None else rng.randrange(len(JOURNALS))
        w = Work(f"W-{len(works):06d}", surname, initials, year, _title(rng, None, 6), journal,
                 str(rng.randint(1, 120)), str(rng.randint(1, 2000)), topic)
        works.append(w)
        return w

    planted: list[Work] = [_hirsch(1)]
    works.append(planted[0])
    used_keys.add(("hirsch", "J", 2005))
    per_topic = max(1, (planted_groups - 1) // len(TOPICS) + 1)
    t = 0
    while len(planted) < planted_groups:
        if sum(1 for p in planted if p.topic == t) < per_topic:
            lo, hi = TOPICS[t]["years"]
            # early enough to be cited by most of the topic's records
            w = new_work(t, (max(1955, lo - 25), lo + (hi - lo) // 2))
            allow_missing = len(planted) % 3 != 0
            w.wos_forms = _wos_variants(w, rng, allow_missing)
            w.scopus_forms = _scopus_variants(w, rng)
            planted.append(w)
        t = (t + 1) % len(TOPICS)

    n_background = max(50, int(n_records * works_per_record))
    topic_pool: dict[int, list[Work]] = {i: [p for p in planted if p.topic == i] for i in range(len(TOPICS))}
    general_pool: list[Work] = []
    for i in range(n_background):
        topic = i % (len(TOPICS) + 1)
        if topic < len(TOPICS):
            lo, hi = TOPICS[topic]["years"]
            w = new_work(topic, (max(1955, lo - 25), hi - 1))
            topic_pool[topic].append(w)
        else:
            w = new_work(None, (1955, 2015))
            general_pool.append(w)
    for w in works:
        if not w.wos_forms:
            full, _, _ = JOURNALS[w.journal]
            w.wos_forms = [format_cr(w.ref())]
            w.scopus_forms = [format_reference(w.ref(source_name=full, title=w.title))]
    planted_ids = {p.id for p in planted}

    truth: dict[str, str] = {}
    for w in works:
        for raw in w.wos_forms + w.scopus_forms:
            truth[raw] = w.id

    wos: list[Record] = []
    scopus: list[Record] = []
    record_topics: dict[str, int] = {}
    turns: dict[str, int] = {}
    pools: dict[tuple[int, int], tuple] = {}
    weights = {i: [1.0 / (rank + 1) ** 0.8 for rank in range(len(pool))] for i, pool in topic_pool.items()}
    for n in range(n_records):
        topic = n % len(TOPICS)
        spec = TOPICS[topic]
        year = rng.randint(*spec["years"])
        if (topic, year) not in pools:
            chosen = [(w, weights[topic][i]) for i, w in enumerate(topic_pool[topic]) if w.year <= year]
            pools[(topic, year)] = ([w for w, _ in chosen], list(accumulate(x for _, x in chosen)),
                                    [w for w in general_pool if w.year <= year])
        pool, pool_cum, general = pools[(topic, year)]
        n_refs = max(2, int(rng.gauss(refs_per_record, refs_per_record * 0.15)))
        cited: dict[str, Work] = {}
        guard = 0
        while len(cited) < n_refs and guard < n_refs * 20:
            guard += 1
            if pool and rng.random() < 0.75:
                w = rng.choices(pool, cum_weights=pool_cum)[0]
            elif general:
                w = rng.choice(general)
            else:
                continue
            cited.setdefault(w.id, w)
        keywords = [spec["keyword"]] if rng.random() < 0.85 else []
        keywords += rng.sample(GENERAL_KEYWORDS[:6], rng.randint(0, 2))
        if rng.random() < 0.7:
            keywords.insert(0, "citation analysis")
        keywords += rng.sample(GENERAL_KEYWORDS[6:], rng.randint(0, 2))
        keywords = list(dict.fromkeys(keywords))
        categories = [spec["category"]]
        if rng.random() < 0.4:
            categories.append("Information Science & Library Science")
        categories = list(dict.fromkeys(categories))
        full, abbrev, _ = JOURNALS[rng.choice(spec["journals"])]
        authors = [Author(_surname(rng), rng.choice("ABCDEFGHJKLMNPRSTW")) for _ in range(rng.randint(1, 3))]
        base = dict(authors=authors, year=year, title=_title(rng, spec["term"]),
                    volume=str(rng.randint(1, 120)), issue=str(rng.randint(1, 12)),
                    first_page=str(rng.randint(1, 3000)), doc_type=_pick_doc_type(rng),
                    author_keywords=keywords)
        wos_tc = int(rng.paretovariate(1.2)) - 1 + rng.randint(0, 5)
        roll = rng.random()
        in_wos = roll >= scopus_only
        in_scopus = roll < scopus_only + overlap
        order = sorted(cited.values(), key=lambda w: w.id)
        if in_wos:
            rid = f"WOS:{n:09d}"
            refs = [_next_form(w.wos_forms, w.id + "/wos", turns) for w in order]
            wos.append(Record(id=rid, source=Source.WOS, venue=full.upper() if rng.random() < 0.5 else abbrev,
                              subject_categories=categories, times_cited={"WOS": wos_tc},
                              cited_refs=[parse_cr(r) for r in refs], **base))
            record_topics[rid] = topic
        if in_scopus:
            rid = f"2-s2.0-{85000000000 + n}"
            refs = [_next_form(w.scopus_forms, w.id + "/scopus", turns) for w in order]
            scopus.append(Record(id=rid, source=Source.SCOPUS, venue=full,
                                 times_cited={"SCOPUS": wos_tc + rng.randint(0, 6)},
                                 cited_refs=[parse_reference(r) for r in refs], **base))
            record_topics[rid] = topic
    return Corpus(wos, scopus, truth, works, [p.id for p in planted], record_topics)


def basemap_rows() -> list[tuple[str, str, float, float]]:
    regions = sorted({r for _, _, r in JOURNALS})
    rows = []
    for i, (full, abbrev, region) in enumerate(JOURNALS):
        x, y = float(regions.index(region) * 100), float(i * 10)
        rows.append((full, region, x, y))
        rows.append((abbrev, region, x, y))
    return rows


def write_corpus(directory: str | Path, n_records: int = 200, refs_per_record: int = 30, seed: int = 0,
                 **options) -> list[Path]:
    """Write ``synthetic_wos.txt``, ``synthetic_scopus.csv``, ``synthetic_truth.json`` and ``synthetic_basemap.csv``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    corpus = generate_corpus(n_records, refs_per_record, seed, **options)
    paths = [d / "synthetic_wos.txt", d / "synthetic_scopus.csv", d / "synthetic_truth.json",
             d / "synthetic_basemap.csv"]
    paths[0].write_text(write_wos(corpus.wos), encoding="utf-8", newline="\n")
    paths[1].write_text(write_scopus(corpus.scopus), encoding="utf-8", newline="\n")
    truth = {"planted": corpus.planted, "variants": corpus.truth, "record_topics": corpus.record_topics,
             "topics": [t["term"] for t in TOPICS]}
    paths[2].write_text(json.dumps(truth, indent=1, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    lines = ["journal,region,x,y"] + [f'"{j}",{r},{x},{y}' for j, r, x, y in basemap_rows()]
    paths[3].write_text("\n".join(lines) + "\n", encoding="utf-8")
    return paths
