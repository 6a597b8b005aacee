#!/usr/bin/env python3
# Copyright 2026 The rulebridge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference results for the fixture corpus.

Re-derives ontology names, catalog cleaning, dataset stats, embedding
similarity (numpy), the lexical entailment proxy, all three rankings and the
evaluation buckets, then freezes them to fixture_oracle.json. The C++ tests
compare against that file.

usage: fixture_oracle.py [repo_root]
"""

import csv
import json
import re
import sys
import unicodedata
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

THRESHOLD = 0.55
TOP = 5
ANTONYMS = [("on", "off"), ("above", "below"), ("rises", "drops"),
            ("increased", "decreased"), ("start", "stop"), ("open", "close")]
RDF = "{http://www.w3.org/1999/02/22-rdf-syntax-ns#}"
RDFS = "{http://www.w3.org/2000/01/rdf-schema#}"
OWL = "{http://www.w3.org/2002/07/owl#}"


def local(iri):
    return re.split(r"[#/]", iri)[-1]


def display(raw):
    changed = True
    while changed:
        changed = False
        for suffix in ("Trigger", "Action"):
            if raw.endswith(suffix) and len(raw) > len(suffix):
                raw = raw[: -len(suffix)]
                changed = True
    words = re.findall(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z0-9]+|[A-Z]+", raw)
    return " ".join(words)


def ontology(path):
    root = ET.parse(path).getroot()
    parents = {}
    order = []
    for cls in root.iter(OWL + "Class"):
        name = local(cls.get(RDF + "about") or cls.get(RDF + "ID"))
        order.append(name)
        parents[name] = [local(s.get(RDF + "resource"))
                         for s in cls.findall(RDFS + "subClassOf")
                         if s.get(RDF + "resource")]
    out = {}
    for kind, top in (("trigger", "Trigger"), ("action", "Action")):
        below = {top}
        grew = True
        while grew:
            grew = False
            for n in order:
                if n not in below and any(p in below for p in parents[n]):
                    below.add(n)
                    grew = True
        names = {display(n) for n in order if n in below and n != top}
        out[kind] = sorted(n for n in names if n)
    return out


def clean(raw):
    text = " ".join(raw.replace("/", "").split())
    return unicodedata.normalize("NFC", text)


def catalog(path):
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    out = {}
    stats = {"total_recipes": len(rows)}
    for kind, col in (("trigger", "triggerName"), ("action", "actionName")):
        counts = {}
        dropped = 0
        for r in rows:
            name = clean(r[col])
            if not name:
                dropped += 1
                continue
            counts[name] = counts.get(name, 0) + 1
        out[kind] = [[n, c] for n, c in counts.items()]
        stats[kind + "s"] = {
            "distinct": len(counts),
            "once_only": sum(1 for c in counts.values() if c == 1),
            "duplicates": sum(1 for c in counts.values() if c > 1),
            "distinct_before_cleaning": len({r[col] for r in rows}),
            "dropped_rows": dropped,
            "total_usage": sum(counts.values()),
        }
    return out, stats


def tokens(text):
    ascii_lower = "".join(chr(ord(c) + 32) if "A" <= c <= "Z" else c for c in text)
    return re.findall(r"[a-z0-9\x80-\U0010ffff]+", ascii_lower)


def vectors(path):
    table = {}
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    for line in lines[1:]:
        parts = line.split()
        table[parts[0].lower()] = np.array([float(x) for x in parts[1:]])
    return table


def similarity(a, b, table):
    va = [table[t] for t in tokens(a) if t in table]
    vb = [table[t] for t in tokens(b) if t in table]
    if not va or not vb:
        return None
    ma = np.mean(va, axis=0)
    mb = np.mean(vb, axis=0)
    na, nb = np.linalg.norm(ma), np.linalg.norm(mb)
    if na == 0 or nb == 0:
        return 0.0
    return float(max(0.0, min(1.0, ma.dot(mb) / (na * nb))))


def entail(premise, hypothesis):
    p, h = set(tokens(premise)), set(tokens(hypothesis))
    e = 100.0 * len(p & h) / len(h)
    rest = 100.0 - e
    clash = any((x in p and y in h) or (y in p and x in h) for x, y in ANTONYMS)
    c = (0.6 if clash else 0.1) * rest
    return [e, c, rest - c]


def translate(name, candidates, method, table):
    out = []
    covered = similarity(name, name, table) is not None
    for cand in candidates:
        rec = {"name": cand}
        if method in ("embedding", "combined"):
            if not covered:
                continue
            s = similarity(name, cand, table)
            s = 0.0 if s is None else s
            if s < THRESHOLD:
                continue
            rec["embedding"] = s
        if method in ("entailment", "combined"):
            if not tokens(cand):
                continue
            rec["entailment"] = entail(name, cand)
        if method == "combined":
            rec["combined"] = (100.0 * rec["embedding"] + rec["entailment"][0]) / 2.0
        out.append(rec)
    key = {"embedding": lambda r: r["embedding"],
           "entailment": lambda r: r["entailment"][0],
           "combined": lambda r: r["combined"]}[method]
    out.sort(key=lambda r: (-key(r), r["name"]))
    return out


def evaluate(annotations, ranked):
    buckets = {}
    for kind in ("trigger", "action"):
        for method in ("embedding", "entailment", "combined"):
            b = {"first_result": 0, "top_five": 0, "no_result": 0, "ambiguous_excluded": 0}
            for a in annotations:
                if a["kind"] != kind:
                    continue
                if a["label"] == "ambiguous":
                    b["ambiguous_excluded"] += 1
                    continue
                if a["label"] == "none":
                    b["no_result"] += 1
                    continue
                names = [r["name"] for r in ranked[(clean(a["name"]), kind, method)][:TOP]]
                if names and names[0] == a["match"]:
                    b["first_result"] += 1
                elif a["match"] in names:
                    b["top_five"] += 1
                else:
                    b["no_result"] += 1
            buckets[f"{kind}/{method}"] = b
    return buckets


def main():
    repo = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[2])
    fx = repo / "data" / "fixtures"
    onto = ontology(fx / "ontology.owl")
    cat, stats = catalog(fx / "recipes.csv")
    table = vectors(fx / "vectors.txt")
    annotations = [json.loads(l) for l in open(fx / "annotations.jsonl", encoding="utf-8")
                   if l.strip()]

    extra = ["A C turned off"]
    ranked = {}
    translations = []
    for kind in ("trigger", "action"):
        names = [n for n, _ in cat[kind]] + (extra if kind == "trigger" else [])
        for name in names:
            for method in ("embedding", "entailment", "combined"):
                r = translate(name, onto[kind], method, table)
                ranked[(name, kind, method)] = r
                translations.append({"name": name, "kind": kind, "method": method,
                                     "candidates": r})

    pairs = [["ac turned off", "device turned off"], ["Any event starts", "Every Time"],
             ["Any event starts", "Started Activity"], ["Send message", "Send Email"],
             ["Add file to Dropbox", "Save File"]]
    cosines = [[a, b, similarity(a, b, table)] for a, b in pairs]

    doc = {
        "threshold": THRESHOLD,
        "ontology": onto,
        "catalog": cat,
        "stats": stats,
        "cosine": cosines,
        "translations": translations,
        "evaluation": evaluate(annotations, ranked),
    }
    out = Path(__file__).with_name("fixture_oracle.json")
    out.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(translations)} translations)")


if __name__ == "__main__":
    main()
