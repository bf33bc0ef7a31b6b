"""Freezes oracle outputs for the fixture corpus and a set of edge-case
texts into tests/data/fixture_golden.json.

    python3 tests/oracles/make_golden.py
"""

import json
import os

import oracle

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.normpath(os.path.join(HERE, "..", ".."))
FIXTURE = os.path.join(ROOT, "tests", "data", "fixture")
OUT = os.path.join(ROOT, "tests", "data", "fixture_golden.json")

EDGE_TEXTS = {
    "latin": [
        "Version 3.5 is OUT. Really?! Yes... done",
        "First paragraph without a stop\n\nSecond one\nstill second.\n \t\nThird: the end",
        "  Leading spaces, «quoted» words—and a dash\ttab separated.  ",
        "Soft­hyphen and curly’s apostrophe. 1.2.3 and 4. 5",
        "...!!! ?",
        "",
        "Cats and dogs. The biggest, quickest, oldest stories were told.",
        "a.b 10.5cm x.5 5.x end",
    ],
    "persian": [
        "کتاب‌های دانشگاه را خواندم. آيا مقاله‌ها بزرگ‌تر است؟ بله!",
        "پژوهشــها در كتابخانهَ انجام شد.\n\nپایان",
    ],
}

RETRIEVAL_CONFIGS = [
    dict(oracle.DEFAULT_RETRIEVAL),
    dict(oracle.DEFAULT_RETRIEVAL, chunk_len=20, min_tail=6, discard_ratio=0.34, top_sentences=2,
         max_query_terms=4, hits_per_query=2, candidates_per_doc=3, tfidf_high_percentile=0.5),
    dict(oracle.DEFAULT_RETRIEVAL, chunk_len=12, min_tail=12, search_control_overlap=0.3,
         tfidf_high_percentile=0.9),
]

SEARCH_QUERIES = [
    (["cat"], 10),
    (["cat", "dog", "garden"], 10),
    (["retrieval", "method", "method", "index"], 2),
    (["unseenword", "tree"], 10),
    (["unseenword"], 10),
    ([], 10),
    (["sentenc", "noun"], 10),
]

ALIGN_SETTINGS = [
    ("VSM", 4, 0.65, 1),
    ("VSM", 4, 0.3, 0),
    ("VSM", 4, 0.3, 3),
    ("CHAR_NGRAM", 4, 0.5, 1),
    ("CHAR_NGRAM", 3, 0.2, 0),
    ("WORD_NGRAM", 2, 0.3, 1),
    ("WORD_NGRAM", 1, 0.4, 2),
]


def doc_json(d):
    return {
        "doc_id": d.doc_id,
        "raw": d.raw,
        "norm": d.norm,
        "offset_map": d.omap,
        "sentences": [list(s) for s in d.sentences],
        "sentence_tokens": [list(s) for s in d.sent_tokens],
        "tokens": d.tokens,
    }


def read_pairs():
    with open(os.path.join(FIXTURE, "pairs"), encoding="utf-8") as f:
        return [tuple(line.split()) for line in f if line.strip()]


def read_gold():
    import xml.etree.ElementTree as ET

    gold = []
    xml_dir = os.path.join(FIXTURE, "xml")
    for name in sorted(os.listdir(xml_dir)):
        text = open(os.path.join(xml_dir, name), encoding="utf-8").read()
        if not text.strip():
            continue
        root = ET.fromstring(text)
        susp = root.get("reference") or name[:-4] + ".txt"
        for f in root.iter("feature"):
            if f.get("name") != "plagiarism":
                continue
            so, sl = int(f.get("this_offset")), int(f.get("this_length"))
            ro, rl = int(f.get("source_offset")), int(f.get("source_length"))
            gold.append({"susp_doc_id": susp, "susp": [so, so + sl], "src_doc_id": f.get("source_reference"),
                         "src": [ro, ro + rl]})
    return gold


def main():
    latin = oracle.Resources(os.path.join(ROOT, "resources", "latin"))
    persian = oracle.Resources(os.path.join(ROOT, "resources", "persian"))
    srcs = oracle.read_dir(os.path.join(FIXTURE, "src"), latin)
    susps = oracle.read_dir(os.path.join(FIXTURE, "susp"), latin)
    index = oracle.Index(srcs)

    out = {"texts": [], "fixture_docs": [], "index": {}, "search": [], "retrieval": [], "alignment": [],
           "evaluation": {}}

    for bundle, res in (("latin", latin), ("persian", persian)):
        for k, text in enumerate(EDGE_TEXTS[bundle]):
            entry = doc_json(oracle.preprocess(f"edge-{bundle}-{k}", text, res))
            entry["bundle"] = bundle
            entry["stems"] = {t["surface"]: t["stem"] for t in entry["tokens"]}
            out["texts"].append(entry)
    out["fixture_docs"] = [doc_json(d) for d in srcs + susps]

    out["index"] = {
        "n": index.n,
        "docs": [d.doc_id for d in index.docs],
        "df": dict(sorted(index.df.items())),
        "idf": {t: index.idf(t) for t in sorted(index.df)},
        "norms": index.norms,
        "unseen_idf": index.idf("unseenword"),
    }
    for terms, k in SEARCH_QUERIES:
        hits = index.search(terms, k)
        out["search"].append({"terms": terms, "k": k, "hits": [{"doc_id": h[1], "score": h[0]} for h in hits]})

    for cfg in RETRIEVAL_CONFIGS:
        entry = {"config": cfg, "docs": []}
        for d in susps:
            r = oracle.retrieve(d, index, cfg)
            r["doc_id"] = d.doc_id
            entry["docs"].append(r)
        out["retrieval"].append(entry)

    by_id = {d.doc_id: d for d in srcs + susps}
    all_pairs = [(s.doc_id, r.doc_id) for s in susps for r in srcs]
    default_dets = []
    for susp_id, src_id in all_pairs:
        susp, src = by_id[susp_id], by_id[src_id]
        entry = {
            "susp": susp_id,
            "src": src_id,
            "vsm": oracle.vsm_matrix(susp, src, index),
            "char": {str(n): oracle.char_matrix(susp, src, n) for n in (3, 4, 5)},
            "word": {str(n): oracle.word_matrix(susp, src, n) for n in (1, 2, 3)},
            "detections": [],
        }
        for method, n, theta, gap in ALIGN_SETTINGS:
            if method == "VSM":
                m = entry["vsm"]
            elif method == "CHAR_NGRAM":
                m = entry["char"][str(n)]
            else:
                m = entry["word"][str(n)]
            dets = oracle.detections(m, susp, src, theta, gap, method)
            entry["detections"].append({"method": method, "n": n, "threshold": theta, "merge_gap": gap,
                                        "detections": dets})
            if (method, theta, gap) == ("VSM", 0.65, 1) and (susp_id, src_id) in read_pairs():
                default_dets.extend(dets)
        out["alignment"].append(entry)

    gold = read_gold()
    p, r = oracle.macro_measures(gold, default_dets)
    g = oracle.granularity(gold, default_dets)
    out["evaluation"] = {"gold": gold, "detections": default_dets, "precision": p, "recall": r,
                         "granularity": g, "plagdet": oracle.plagdet(p, r, g)}

    with open(OUT, "w", encoding="utf-8") as f:
        json.dump(out, f, ensure_ascii=False, indent=1, allow_nan=False)
        f.write("\n")


if __name__ == "__main__":
    main()
