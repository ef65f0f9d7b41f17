#!/usr/bin/env python3
"""Regenerates tests/data/nfc_cases.tsv (input<TAB>expected, \\uXXXX escaped).

Reference values come from Python's unicodedata.normalize, which implements
the UCD the generated tables in this repo were built from.
"""

import random
import sys
import unicodedata


def esc(s):
    return "".join(f"\\u{{{ord(c):X}}}" for c in s)


def main():
    cases = [
        "é",                      # e + combining acute -> U+00E9
        "ȩ́",           # out-of-order marks (acute, cedilla)
        "ȩ́",           # same marks, canonical order
        "á̖́",          # mixed ccc run
        "ḍ̇",                 # d-dot-above + dot-below, reorders
        "q̣̇",
        "가",                       # Hangul LV
        "각",           # Hangul L+V+T -> single syllable
        "가",                 # Hangul L+V
        "Å",                       # Angstrom sign -> A-ring (singleton)
        "̈́",                       # composition exclusion (non-starter)
        "क़",                       # Devanagari qa, excluded composite
        "གྷ",                       # Tibetan, excluded
        "ṩ",
        "ṩ",
        "பொ",
        "ො",                 # Sinhala two-part vowel parts
        "páter",                  # embedded in ASCII
        "Ǯ",                 # Ezh + caron
        "ɔ́ ɛ̀",    # open-o/epsilon with tones (African Latin)
        "ọ́",                 # Yoruba o-dot + acute
        "مَّ",           # Arabic shadda/fatha reordering
        "ግዕዝ",           # Ethiopic (no decompositions)
        "\U0001d15e",                   # musical note, excluded decomposition
        "",
    ]

    rng = random.Random(20240901)
    pools = [
        list(range(0x41, 0x7B)),
        [0x300, 0x301, 0x302, 0x303, 0x304, 0x306, 0x307, 0x308, 0x30A,
         0x30C, 0x316, 0x317, 0x323, 0x327, 0x328, 0x331],
        [0xC0, 0xE9, 0x1E0B, 0x1ECD, 0x254, 0x25B, 0x1E69, 0x212B],
        [0x1100, 0x1101, 0x1161, 0x1162, 0x11A8, 0x11A9, 0xAC00, 0xB098],
        [0x621, 0x623, 0x645, 0x64E, 0x64F, 0x651, 0x654],
        [0x1200, 0x1208, 0x130D, 0x2D30, 0x2D4F, 0x7C1, 0x7CA, 0xA500],
    ]
    for _ in range(400):
        n = rng.randint(1, 12)
        s = "".join(chr(rng.choice(rng.choice(pools))) for _ in range(n))
        cases.append(s)

    for s in cases:
        expected = unicodedata.normalize("NFC", s)
        sys.stdout.write(f"{esc(s)}\t{esc(expected)}\n")


if __name__ == "__main__":
    main()
