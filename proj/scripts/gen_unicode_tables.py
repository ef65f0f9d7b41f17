#!/usr/bin/env python3
"""Regenerates include/lidforge/detail/unicode_data.hpp from Python's UCD.

Hangul syllables (U+AC00..U+D7A3) are excluded: composition and
decomposition for that block are algorithmic and implemented directly in
unicode.hpp.
"""

import sys
import unicodedata

HANGUL_BASE = 0xAC00
HANGUL_END = 0xD7A3
MAX_CP = 0x110000


def canonical_decompositions():
    """cp -> (first, second-or-0) single-step canonical mappings."""
    out = {}
    for cp in range(MAX_CP):
        if HANGUL_BASE <= cp <= HANGUL_END:
            continue
        d = unicodedata.decomposition(chr(cp))
        if not d or d.startswith("<"):
            continue  # no decomposition, or a compatibility one
        parts = [int(p, 16) for p in d.split()]
        if len(parts) == 1:
            out[cp] = (parts[0], 0)
        elif len(parts) == 2:
            out[cp] = (parts[0], parts[1])
        else:
            raise AssertionError(f"canonical decomposition of len>2 at {cp:04X}")
    return out


def combining_classes():
    out = {}
    for cp in range(MAX_CP):
        ccc = unicodedata.combining(chr(cp))
        if ccc:
            out[cp] = ccc
    return out


def compositions(decomps):
    """(first, second) -> composed, for primary composites only.

    A pair recomposes iff NFC maps it back to the composed form; this folds
    in the full composition-exclusion list without needing the raw UCD file.
    """
    out = {}
    for cp, (first, second) in decomps.items():
        if second == 0:
            continue
        if unicodedata.normalize("NFC", chr(first) + chr(second)) == chr(cp):
            out[(first, second)] = cp
    return out


def emit(fp):
    decomps = canonical_decompositions()
    cccs = combining_classes()
    comps = compositions(decomps)

    w = fp.write
    w("#pragma once\n\n")
    w("// Generated by scripts/gen_unicode_tables.py from the Unicode "
      f"{unicodedata.unidata_version} UCD.\n")
    w("// Do not edit by hand.\n\n")
    w("#include <cstdint>\n\n")
    w("namespace lidforge::detail {\n\n")
    w(f"inline constexpr char kUnicodeDataVersion[] = "
      f"\"{unicodedata.unidata_version}\";\n\n")

    w("struct Decomposition { char32_t cp; char32_t first; char32_t second; };\n\n")
    w(f"inline constexpr Decomposition kDecompositions[{len(decomps)}] = {{\n")
    for cp in sorted(decomps):
        first, second = decomps[cp]
        w(f"    {{0x{cp:X}, 0x{first:X}, 0x{second:X}}},\n")
    w("};\n\n")

    w("struct CombiningClass { char32_t cp; std::uint8_t ccc; };\n\n")
    w(f"inline constexpr CombiningClass kCombiningClasses[{len(cccs)}] = {{\n")
    for cp in sorted(cccs):
        w(f"    {{0x{cp:X}, {cccs[cp]}}},\n")
    w("};\n\n")

    w("struct Composition { char32_t first; char32_t second; char32_t composed; };\n\n")
    w(f"inline constexpr Composition kCompositions[{len(comps)}] = {{\n")
    for first, second in sorted(comps):
        w(f"    {{0x{first:X}, 0x{second:X}, 0x{comps[(first, second)]:X}}},\n")
    w("};\n\n")
    w("}  // namespace lidforge::detail\n")


if __name__ == "__main__":
    emit(sys.stdout)
