#!/usr/bin/env python3
"""Regenerates resources/latin/vocabulary.txt and the pseudo-word part of
resources/latin/lexicon.txt. Output is deterministic."""
import random
import sys
from pathlib import Path

ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z",
          "br", "dr", "kl", "pr", "tr", "st", "gr", "fl", "sk"]
VOWELS = ["a", "e", "i", "o", "u"]
CODAS = ["", "", "", "n", "m", "r", "l", "k", "t"]
BANNED_ENDINGS = ("s", "er", "est", "ing", "ed", "ly", "es")

# Readable entries used by unit-test fixtures.
ENGLISH = {
    "NOUN": "cat dog house garden river city school teacher student book paper "
            "method system model result table corpus document sentence word "
            "query index source plan tree road market water light".split(),
    "ADJ": "big small green old new fast quick large red dark bright".split(),
    "VERB": "run write read build find see make take give show sleep".split(),
}


def syllable(rng):
    return rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS)


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "resources/latin")
    rng = random.Random(20240611)
    words = set()
    while len(words) < 1500:
        w = "".join(syllable(rng) for _ in range(rng.choice([2, 2, 3])))
        if w.endswith(BANNED_ENDINGS) or len(w) < 4:
            continue
        words.add(w)
    words = sorted(words)
    rng.shuffle(words)
    tags = []
    for i, w in enumerate(words):
        r = i % 10
        tag = "NOUN" if r < 5 else "ADJ" if r < 7 else "VERB" if r < 9 else None
        tags.append((w, tag))
    (out / "vocabulary.txt").write_text("".join(w + "\n" for w, _ in tags))
    english = [(w, t) for t, ws in ENGLISH.items() for w in ws]
    (out / "lexicon.txt").write_text(
        "".join(f"{w} {t}\n" for w, t in english + tags if t))


if __name__ == "__main__":
    main()
