#pragma once

// Language registry: ISO 639-3 codes, script sets, and genealogical family
// paths. Built once during a single-threaded load phase, then immutable;
// concurrent reads need no synchronization.

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lidforge/errors.hpp"

namespace lidforge {

enum class ScriptCode : std::uint8_t { Latn, Arab, Ethi, Nkoo, Tfng, Copt, Vaii };

inline constexpr std::array<std::string_view, 7> kScriptNames = {
    "Latn", "Arab", "Ethi", "Nkoo", "Tfng", "Copt", "Vaii"};

inline constexpr std::array<std::string_view, 9> kTopLevelFamilies = {
    "Afro-Asiatic", "Austronesian",  "Creole",
    "Indo-European", "Khoe-Kwadi",   "Kx'a",
    "Mixed language", "Niger-Congo", "Nilo-Saharan"};

inline std::string_view to_string(ScriptCode s) {
  return kScriptNames[static_cast<std::size_t>(s)];
}

inline std::optional<ScriptCode> parse_script(std::string_view name) {
  for (std::size_t i = 0; i < kScriptNames.size(); ++i)
    if (kScriptNames[i] == name) return static_cast<ScriptCode>(i);
  return std::nullopt;
}

// Set over the 7 supported scripts, stored as a bitmask.
class ScriptSet {
 public:
  ScriptSet() = default;
  ScriptSet(std::initializer_list<ScriptCode> codes) {
    for (auto c : codes) insert(c);
  }

  void insert(ScriptCode c) { bits_ |= bit(c); }
  bool contains(ScriptCode c) const { return bits_ & bit(c); }
  bool empty() const { return bits_ == 0; }
  bool intersects(const ScriptSet& other) const { return bits_ & other.bits_; }
  bool operator==(const ScriptSet& other) const = default;

  int size() const {
    int n = 0;
    for (std::uint8_t b = bits_; b; b >>= 1) n += b & 1;
    return n;
  }

  std::vector<ScriptCode> codes() const {  // in enum (canonical) order
    std::vector<ScriptCode> out;
    for (std::size_t i = 0; i < kScriptNames.size(); ++i)
      if (bits_ & (1u << i)) out.push_back(static_cast<ScriptCode>(i));
    return out;
  }

 private:
  static std::uint8_t bit(ScriptCode c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

// Ordered family names from coarse to fine; level 0 must be one of the nine
// top-level groupings.
struct FamilyPath {
  std::vector<std::string> levels;

  bool operator==(const FamilyPath&) const = default;
  const std::string& top() const { return levels.front(); }
};

struct LanguageEntry {
  std::string iso;
  ScriptSet scripts;
  FamilyPath family;
  std::string display_name;  // optional human label; may be empty
};

enum class Relation {
  SameFamilySameScript,
  SameFamilyDiffScript,
  DiffFamilySameScript,
  DiffFamilyDiffScript,
};

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::SameFamilySameScript: return "same_family_same_script";
    case Relation::SameFamilyDiffScript: return "same_family_diff_script";
    case Relation::DiffFamilySameScript: return "diff_family_same_script";
    case Relation::DiffFamilyDiffScript: return "diff_family_diff_script";
  }
  return "";
}

inline bool is_valid_iso(std::string_view iso) {
  if (iso.size() != 3) return false;
  for (char c : iso)
    if (c < 'a' || c > 'z') return false;
  return true;
}

// Parses "xxx" or "xxx_Ssss" labels; the script suffix must be one of the
// seven supported codes.
inline std::pair<std::string, std::optional<ScriptCode>> resolve_label(
    std::string_view label) {
  if (is_valid_iso(label)) return {std::string(label), std::nullopt};
  if (label.size() == 8 && label[3] == '_' && is_valid_iso(label.substr(0, 3))) {
    if (auto script = parse_script(label.substr(4)))
      return {std::string(label.substr(0, 3)), script};
  }
  throw MalformedLabel("not an `iso` or `iso_Script` label: " +
                       std::string(label));
}

inline std::string format_label(std::string_view iso,
                                std::optional<ScriptCode> script) {
  std::string out(iso);
  if (script) {
    out += '_';
    out += to_string(*script);
  }
  return out;
}

class Registry {
 public:
  const LanguageEntry& register_language(std::string iso, ScriptSet scripts,
                                         FamilyPath family,
                                         std::string display_name = "") {
    if (!is_valid_iso(iso))
      throw MalformedCode("not a 3-lowercase-letter ISO 639-3 code: " + iso);
    if (scripts.empty())
      throw MalformedCode("empty script set for: " + iso);
    if (family.levels.empty())
      throw MalformedCode("empty family path for: " + iso);
    bool known_top = false;
    for (auto f : kTopLevelFamilies) known_top |= (f == family.top());
    if (!known_top)
      throw MalformedCode("unknown top-level family '" + family.top() +
                          "' for: " + iso);

    auto it = entries_.find(iso);
    if (it != entries_.end()) {
      // Idempotent for identical metadata only.
      if (it->second.scripts != scripts || it->second.family != family)
        throw ConflictingRegistration("conflicting metadata for: " + iso);
      if (!display_name.empty() && it->second.display_name.empty())
        it->second.display_name = std::move(display_name);
      return it->second;
    }
    auto [pos, _] = entries_.emplace(
        iso, LanguageEntry{iso, scripts, std::move(family),
                           std::move(display_name)});
    return pos->second;
  }

  bool contains(std::string_view iso) const {
    return entries_.find(std::string(iso)) != entries_.end();
  }

  const LanguageEntry& get(std::string_view iso) const {
    auto it = entries_.find(std::string(iso));
    if (it == entries_.end())
      throw UnknownLanguage("not registered: " + std::string(iso));
    return it->second;
  }

  // Family comparison uses the top-level family; scripts are compatible iff
  // the sets intersect (languages may be multi-script).
  Relation relation(std::string_view a, std::string_view b) const {
    const LanguageEntry& ea = get(a);
    const LanguageEntry& eb = get(b);
    bool same_family = ea.family.top() == eb.family.top();
    bool same_script = ea.scripts.intersects(eb.scripts);
    if (same_family)
      return same_script ? Relation::SameFamilySameScript
                         : Relation::SameFamilyDiffScript;
    return same_script ? Relation::DiffFamilySameScript
                       : Relation::DiffFamilyDiffScript;
  }

  std::size_t size() const { return entries_.size(); }

  const std::map<std::string, LanguageEntry>& entries() const {
    return entries_;
  }

  // Loads the TSV metadata format:
  //   iso<TAB>scripts(comma-sep)<TAB>family(">"-separated)<TAB>name
  // '#'-prefixed comment lines and blank lines are ignored.
  void load_tsv(std::istream& in, const std::string& origin = "<stream>") {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cols;
      std::size_t start = 0;
      for (;;) {
        std::size_t tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (cols.size() < 3)
        throw MalformedCode(origin + ":" + std::to_string(lineno) +
                            ": expected at least 3 tab-separated columns");
      ScriptSet scripts;
      for (const auto& name : split(cols[1], ',')) {
        auto sc = parse_script(name);
        if (!sc)
          throw MalformedCode(origin + ":" + std::to_string(lineno) +
                              ": unknown script '" + name + "'");
        scripts.insert(*sc);
      }
      FamilyPath family{split(cols[2], '>')};
      register_language(cols[0], scripts, std::move(family),
                        cols.size() > 3 ? cols[3] : "");
    }
  }

  void load_tsv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open metadata file: " + path);
    load_tsv(in, path);
  }

 private:
  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      std::size_t pos = s.find(sep, start);
      std::string piece = s.substr(start, pos - start);
      // trim surrounding spaces
      std::size_t b = piece.find_first_not_of(' ');
      std::size_t e = piece.find_last_not_of(' ');
      out.push_back(b == std::string::npos ? std::string()
                                           : piece.substr(b, e - b + 1));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  }

  std::map<std::string, LanguageEntry> entries_;
};

}  // namespace lidforge
