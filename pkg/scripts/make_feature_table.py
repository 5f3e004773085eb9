#!/usr/bin/env python3
"""Regenerate src/ppmgpn/data/features.tsv.

Base consonants and vowels are described by place/manner (height/backness)
and expanded into 24 ternary articulatory features. A handful of diacritics
are then applied to produce derived segments (long, aspirated, palatalized,
labialized, nasalized, non-syllabic, ejective).

usage: python scripts/make_feature_table.py [out.tsv]
"""

import sys
from pathlib import Path

FEATURES = [
    "syl", "son", "cons", "cont", "delrel", "lat", "nas", "strid", "voi",
    "sg", "cg", "ant", "cor", "distr", "lab", "hi", "lo", "back", "round",
    "velaric", "tense", "long", "hitone", "hireg",
]

# place -> (lab, cor, ant, distr, hi, lo, back)
PLACES = {
    "bilabial": ("+", "-", "-", "-", "-", "-", "-"),
    "labiodental": ("+", "-", "-", "+", "-", "-", "-"),
    "dental": ("-", "+", "+", "+", "-", "-", "-"),
    "alveolar": ("-", "+", "+", "-", "-", "-", "-"),
    "postalveolar": ("-", "+", "-", "+", "-", "-", "-"),
    "retroflex": ("-", "+", "-", "-", "-", "-", "-"),
    "alveolopalatal": ("-", "+", "-", "+", "+", "-", "-"),
    "palatal": ("-", "-", "-", "-", "+", "-", "-"),
    "velar": ("-", "-", "-", "-", "+", "-", "+"),
    "uvular": ("-", "-", "-", "-", "-", "-", "+"),
    "pharyngeal": ("-", "-", "-", "-", "-", "+", "+"),
    "glottal": ("-", "-", "-", "-", "-", "+", "-"),
}

# manner -> (son, cont, delrel, lat, nas, strid)
MANNERS = {
    "stop": ("-", "-", "-", "-", "-", "-"),
    "fricative": ("-", "+", "-", "-", "-", "-"),
    "sibilant": ("-", "+", "-", "-", "-", "+"),
    "affricate": ("-", "-", "+", "-", "-", "+"),
    "nasal": ("+", "-", "-", "-", "+", "-"),
    "trill": ("+", "+", "-", "-", "-", "-"),
    "tap": ("+", "-", "-", "-", "-", "-"),
    "approximant": ("+", "+", "-", "-", "-", "-"),
    "lateral": ("+", "+", "-", "+", "-", "-"),
    "latfricative": ("-", "+", "-", "+", "-", "-"),
}

# symbol, place, manner, voiced
CONSONANTS = [
    ("p", "bilabial", "stop", False), ("b", "bilabial", "stop", True),
    ("t", "alveolar", "stop", False), ("d", "alveolar", "stop", True),
    ("t̪", "dental", "stop", False), ("d̪", "dental", "stop", True),
    ("ʈ", "retroflex", "stop", False), ("ɖ", "retroflex", "stop", True),
    ("c", "palatal", "stop", False), ("ɟ", "palatal", "stop", True),
    ("k", "velar", "stop", False), ("ɡ", "velar", "stop", True),
    ("q", "uvular", "stop", False), ("ɢ", "uvular", "stop", True),
    ("ʔ", "glottal", "stop", False),
    ("m", "bilabial", "nasal", True), ("ɱ", "labiodental", "nasal", True),
    ("n", "alveolar", "nasal", True), ("ɳ", "retroflex", "nasal", True),
    ("ɲ", "palatal", "nasal", True), ("ŋ", "velar", "nasal", True),
    ("ɴ", "uvular", "nasal", True),
    ("ɸ", "bilabial", "fricative", False), ("β", "bilabial", "fricative", True),
    ("f", "labiodental", "sibilant", False), ("v", "labiodental", "sibilant", True),
    ("θ", "dental", "fricative", False), ("ð", "dental", "fricative", True),
    ("s", "alveolar", "sibilant", False), ("z", "alveolar", "sibilant", True),
    ("ʃ", "postalveolar", "sibilant", False), ("ʒ", "postalveolar", "sibilant", True),
    ("ʂ", "retroflex", "sibilant", False), ("ʐ", "retroflex", "sibilant", True),
    ("ɕ", "alveolopalatal", "sibilant", False), ("ʑ", "alveolopalatal", "sibilant", True),
    ("ç", "palatal", "fricative", False), ("ʝ", "palatal", "fricative", True),
    ("x", "velar", "fricative", False), ("ɣ", "velar", "fricative", True),
    ("χ", "uvular", "fricative", False), ("ʁ", "uvular", "fricative", True),
    ("ħ", "pharyngeal", "fricative", False), ("ʕ", "pharyngeal", "fricative", True),
    ("h", "glottal", "fricative", False), ("ɦ", "glottal", "fricative", True),
    ("ɬ", "alveolar", "latfricative", False), ("ɮ", "alveolar", "latfricative", True),
    ("t͡s", "alveolar", "affricate", False), ("d͡z", "alveolar", "affricate", True),
    ("t͡ʃ", "postalveolar", "affricate", False), ("d͡ʒ", "postalveolar", "affricate", True),
    ("t͡ɕ", "alveolopalatal", "affricate", False), ("d͡ʑ", "alveolopalatal", "affricate", True),
    ("ʈ͡ʂ", "retroflex", "affricate", False), ("ɖ͡ʐ", "retroflex", "affricate", True),
    ("p͡f", "labiodental", "affricate", False),
    ("r", "alveolar", "trill", True), ("ʀ", "uvular", "trill", True),
    ("ɾ", "alveolar", "tap", True), ("ɽ", "retroflex", "tap", True),
    ("ʋ", "labiodental", "approximant", True), ("ɹ", "alveolar", "approximant", True),
    ("ɻ", "retroflex", "approximant", True),
    ("l", "alveolar", "lateral", True), ("ɭ", "retroflex", "lateral", True),
    ("ʎ", "palatal", "lateral", True), ("ʟ", "velar", "lateral", True),
]

# symbol, hi, lo, back, round, tense
VOWELS = [
    ("i", "+", "-", "-", "-", "+"), ("y", "+", "-", "-", "+", "+"),
    ("ɨ", "+", "-", "0", "-", "+"), ("ʉ", "+", "-", "0", "+", "+"),
    ("ɯ", "+", "-", "+", "-", "+"), ("u", "+", "-", "+", "+", "+"),
    ("ɪ", "+", "-", "-", "-", "-"), ("ʏ", "+", "-", "-", "+", "-"),
    ("ʊ", "+", "-", "+", "+", "-"),
    ("e", "-", "-", "-", "-", "+"), ("ø", "-", "-", "-", "+", "+"),
    ("ɘ", "-", "-", "0", "-", "+"), ("ɵ", "-", "-", "0", "+", "+"),
    ("ɤ", "-", "-", "+", "-", "+"), ("o", "-", "-", "+", "+", "+"),
    ("ə", "-", "-", "0", "-", "0"),
    ("ɛ", "-", "-", "-", "-", "-"), ("œ", "-", "-", "-", "+", "-"),
    ("ɜ", "-", "-", "0", "-", "-"), ("ɞ", "-", "-", "0", "+", "-"),
    ("ʌ", "-", "-", "+", "-", "-"), ("ɔ", "-", "-", "+", "+", "-"),
    ("æ", "-", "+", "-", "-", "-"), ("ɐ", "-", "+", "0", "-", "-"),
    ("a", "-", "+", "-", "-", "+"), ("ɶ", "-", "+", "-", "+", "+"),
    ("ɑ", "-", "+", "+", "-", "+"), ("ɒ", "-", "+", "+", "+", "+"),
]


def consonant(place: str, manner: str, voiced: bool) -> dict[str, str]:
    lab, cor, ant, distr, hi, lo, back = PLACES[place]
    son, cont, delrel, lat, nas, strid = MANNERS[manner]
    row = {
        "syl": "-", "son": son, "cons": "-" if manner == "approximant" else "+",
        "cont": cont, "delrel": delrel, "lat": lat, "nas": nas,
        "strid": strid, "voi": "+" if voiced else "-", "sg": "-",
        "cg": "+" if place == "glottal" and manner == "stop" else "-",
        "ant": ant, "cor": cor, "distr": distr, "lab": lab, "hi": hi,
        "lo": lo, "back": back, "round": "-", "velaric": "-",
        "tense": "0", "long": "-", "hitone": "0", "hireg": "0",
    }
    if place == "glottal" and manner == "fricative":
        row["sg"] = "+"
    return row


def vowel(hi: str, lo: str, back: str, rnd: str, tense: str) -> dict[str, str]:
    return {
        "syl": "+", "son": "+", "cons": "-", "cont": "+", "delrel": "-",
        "lat": "-", "nas": "-", "strid": "-", "voi": "+", "sg": "-",
        "cg": "-", "ant": "0", "cor": "-", "distr": "0", "lab": rnd,
        "hi": hi, "lo": lo, "back": back, "round": rnd, "velaric": "-",
        "tense": tense, "long": "-", "hitone": "0", "hireg": "0",
    }


def glides() -> dict[str, dict[str, str]]:
    out = {}
    for sym, hi, back, rnd in (("j", "+", "-", "-"), ("w", "+", "+", "+"),
                               ("ɥ", "+", "-", "+"), ("ɰ", "+", "+", "-")):
        row = vowel(hi, "-", back, rnd, "0")
        row["syl"] = "-"
        out[sym] = row
    return out


DIACRITICS = {
    "ː": {"long": "+"},
    "ʰ": {"sg": "+"},
    "ʲ": {"hi": "+", "back": "-"},
    "ʷ": {"lab": "+", "round": "+"},
    "ʼ": {"cg": "+"},
    "̃": {"nas": "+"},
    "̯": {"syl": "-"},
}


def build() -> dict[str, dict[str, str]]:
    table: dict[str, dict[str, str]] = {}
    for sym, place, manner, voiced in CONSONANTS:
        table[sym] = consonant(place, manner, voiced)
    for sym, hi, lo, back, rnd, tense in VOWELS:
        table[sym] = vowel(hi, lo, back, rnd, tense)
    table.update(glides())
    table["ɫ"] = dict(table["l"], hi="+", back="+")

    base = dict(table)
    for sym, row in base.items():
        is_vowel = row["syl"] == "+"
        is_obstruent = row["son"] == "-" and row["cons"] == "+"
        marks = ["ː"]
        if is_vowel:
            marks += ["̃", "̯"]
        elif row["cons"] == "+":
            marks += ["ʷ"]
            postalveolar = row["cor"] == "+" and row["ant"] == "-" and row["distr"] == "+"
            if row["hi"] == "-" and row["back"] == "-" and not postalveolar:
                marks += ["ʲ"]
            if is_obstruent and row["cont"] == "-":
                marks += ["ʰ"]
                if row["voi"] == "-" and row["cg"] == "-":
                    marks += ["ʼ"]
        for mark in marks:
            derived = dict(row)
            derived.update(DIACRITICS[mark])
            table[sym + mark] = derived
    # stacked combinations that show up in real inventories
    for sym in ("p", "t", "k", "t͡ʃ", "t͡s"):
        derived = dict(table[sym + "ʰ"])
        derived["long"] = "+"
        table[sym + "ʰː"] = derived
    for sym, _hi, _lo, _back, _rnd, _tense in VOWELS:
        derived = dict(table[sym + "̃"])
        derived["long"] = "+"
        table[sym + "̃ː"] = derived
    return table


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "src/ppmgpn/data/features.tsv")
    table = build()
    seen: dict[tuple[str, ...], str] = {}
    for sym, row in table.items():
        vec = tuple(row[f] for f in FEATURES)
        if vec in seen:
            print(f"note: {sym} shares its vector with {seen[vec]}", file=sys.stderr)
        seen.setdefault(vec, sym)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# 24 ternary articulatory features per IPA segment\n")
        fh.write("# generated by scripts/make_feature_table.py\n")
        fh.write("\t".join(["segment"] + FEATURES) + "\n")
        for sym in sorted(table):
            fh.write("\t".join([sym] + [table[sym][f] for f in FEATURES]) + "\n")
    print(f"wrote {len(table)} segments to {out}")


if __name__ == "__main__":
    main()
