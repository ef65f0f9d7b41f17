#pragma once

// Corpus ingestion: normalization, exact dedup with tier priority, metadata
// domain attribution, capped train/dev/test splitting, and the external-eval
// leakage filter. Record I/O is UTF-8 JSON-lines.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lidforge/detail/rng.hpp"
#include "lidforge/errors.hpp"
#include "lidforge/hashing.hpp"
#include "lidforge/langmeta.hpp"
#include "lidforge/unicode.hpp"

namespace lidforge {

enum class Domain : std::uint8_t {
  Speech, Government, Benchmarks, Stories, News, Health, Wikipedia,
  Religious, Web, Unknown,
};

inline constexpr std::array<std::string_view, 10> kDomainNames = {
    "Speech", "Government", "Benchmarks", "Stories",  "News",
    "Health", "Wikipedia",  "Religious",  "Web",      "Unknown"};

inline std::string_view to_string(Domain d) {
  return kDomainNames[static_cast<std::size_t>(d)];
}

inline std::optional<Domain> parse_domain(std::string_view name) {
  for (std::size_t i = 0; i < kDomainNames.size(); ++i)
    if (kDomainNames[i] == name) return static_cast<Domain>(i);
  return std::nullopt;
}

enum class Tier : std::uint8_t { Primary, Secondary };

inline std::string_view to_string(Tier t) {
  return t == Tier::Primary ? "primary" : "secondary";
}

struct SentenceRecord {
  std::string text;
  std::string lang;
  std::optional<ScriptCode> script;
  Domain domain = Domain::Unknown;
  std::string source_dataset;
  std::string meta_id;
  Tier tier = Tier::Primary;

  bool operator==(const SentenceRecord&) const = default;
};

// NFC, strip, collapse whitespace runs to single spaces, drop Cc controls.
// May return an empty string (caller decides whether that is an error or a
// drop).
inline std::string normalize(std::string_view text) {
  std::u32string cps = nfc(utf8_decode(text));
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (is_whitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (is_control(cp)) continue;
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(cp);
  }
  return utf8_encode(out);
}

namespace detail {

struct DomainKeywords {
  Domain domain;
  std::vector<std::string> keywords;  // lowercased, longest first
};

inline const std::vector<DomainKeywords>& domain_keyword_table() {
  static const std::vector<DomainKeywords> table = [] {
    // Category order is the tie-breaking priority; within a category,
    // keywords are tried longest-first.
    std::vector<DomainKeywords> t = {
        {Domain::Speech, {"speech", "commonvoice", "tts", "audio"}},
        {Domain::Government,
         {"human rights", "autshumato", "legal", "gov", "parliament",
          "gazette"}},
        {Domain::Benchmarks,
         {"flores", "nlb", "mt560", "tatoeba", "ud", "ai4d", "lti",
          "benchmark", "human", "madar", "iadd"}},
        {Domain::Stories, {"story", "stories", "fiction", "bloom", "lyrics"}},
        {Domain::News,
         {"news", "xlsum", "vukuzenzele", "cbc", "bbc", "afriqa", "masakha",
          "goud"}},
        {Domain::Health, {"health", "covid", "medical", "med"}},
        {Domain::Wikipedia, {"wiki", "leipzig", "wili", "encyclopedia"}},
        {Domain::Religious,
         {"bible", "jw", "tanzil", "pbc", "quran", "scripture", "religion"}},
        {Domain::Web,
         {"oscar", "cc", "commoncrawl", "web", "dialect", "social", "forum"}},
    };
    for (auto& cat : t) {
      std::sort(cat.keywords.begin(), cat.keywords.end(),
                [](const std::string& a, const std::string& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a < b;
                });
    }
    return t;
  }();
  return table;
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace detail

// Case-insensitive keyword lookup against the metadata identifier; first hit
// in category-priority order wins, Unknown when nothing matches.
inline Domain attribute_domain(std::string_view meta_id) {
  std::string folded = detail::ascii_lower(meta_id);
  for (const auto& cat : detail::domain_keyword_table())
    for (const auto& kw : cat.keywords)
      if (folded.find(kw) != std::string::npos) return cat.domain;
  return Domain::Unknown;
}

// Exactly one record per distinct normalized text. Primary-tier records are
// considered before any secondary-tier record; within a tier the first
// occurrence in input order wins. Output order: retained primaries in input
// order, then retained secondaries in input order.
inline std::vector<SentenceRecord> dedup(
    const std::vector<SentenceRecord>& records) {
  std::vector<SentenceRecord> out;
  out.reserve(records.size());
  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (Tier tier : {Tier::Primary, Tier::Secondary}) {
    for (const auto& rec : records) {
      if (rec.tier != tier) continue;
      if (seen.insert(rec.text).second) out.push_back(rec);
    }
  }
  return out;
}

struct SplitSpec {
  std::uint64_t train_cap = 100000;
  std::uint64_t dev_cap = 100;
  std::uint64_t test_cap = 100;
  std::uint64_t seed = 0;
};

struct Splits {
  std::vector<SentenceRecord> train;
  std::vector<SentenceRecord> dev;
  std::vector<SentenceRecord> test;
};

// Per-language capped sampling. Test is drawn first, then dev, then train,
// so evaluation coverage outranks training volume when a language is small.
// Train exhausts primary-tier records before touching secondary ones.
//
// A pure function of the record multiset: records are put in a canonical
// order (unique normalized text) before the seeded shuffle, so permuting the
// input changes nothing.
inline Splits build_splits(const std::vector<SentenceRecord>& deduped,
                           const SplitSpec& spec, const Registry& registry) {
  std::map<std::string, std::vector<const SentenceRecord*>> by_lang;
  for (const auto& rec : deduped) {
    if (!registry.contains(rec.lang))
      throw UnknownLanguage("record language not registered: " + rec.lang);
    by_lang[rec.lang].push_back(&rec);
  }

  Splits splits;
  for (auto& [lang, pool] : by_lang) {
    std::sort(pool.begin(), pool.end(),
              [](const SentenceRecord* a, const SentenceRecord* b) {
                return a->text < b->text;
              });
    detail::Rng rng(detail::mix_seed(spec.seed, fnv1a64(lang)));
    detail::shuffle(pool, rng);

    std::size_t n = pool.size();
    std::size_t n_test = std::min<std::size_t>(spec.test_cap, n);
    std::size_t n_dev = std::min<std::size_t>(spec.dev_cap, n - n_test);
    for (std::size_t i = 0; i < n_test; ++i)
      splits.test.push_back(*pool[i]);
    for (std::size_t i = n_test; i < n_test + n_dev; ++i)
      splits.dev.push_back(*pool[i]);

    std::vector<const SentenceRecord*> rest(pool.begin() + n_test + n_dev,
                                            pool.end());
    std::stable_partition(rest.begin(), rest.end(),
                          [](const SentenceRecord* r) {
                            return r->tier == Tier::Primary;
                          });
    std::size_t n_train = std::min<std::size_t>(spec.train_cap, rest.size());
    for (std::size_t i = 0; i < n_train; ++i)
      splits.train.push_back(*rest[i]);
  }
  return splits;
}

using Provenance = std::map<std::string, std::set<std::string>>;

inline Provenance build_provenance(const std::vector<SentenceRecord>& train) {
  Provenance prov;
  for (const auto& rec : train) prov[rec.lang].insert(rec.source_dataset);
  return prov;
}

// Drops every external record whose (lang, source_dataset) pair contributed
// to training; order preserved.
inline std::vector<SentenceRecord> external_eval_filter(
    const std::vector<SentenceRecord>& external, const Provenance& provenance) {
  std::vector<SentenceRecord> out;
  out.reserve(external.size());
  for (const auto& rec : external) {
    auto it = provenance.find(rec.lang);
    if (it != provenance.end() && it->second.count(rec.source_dataset)) continue;
    out.push_back(rec);
  }
  return out;
}

// --- JSONL record I/O ------------------------------------------------------

inline nlohmann::json record_to_json(const SentenceRecord& rec) {
  nlohmann::json j;
  j["text"] = rec.text;
  j["lang"] = rec.lang;
  if (rec.script) j["script"] = std::string(to_string(*rec.script));
  j["domain"] = std::string(to_string(rec.domain));
  j["source"] = rec.source_dataset;
  j["meta_id"] = rec.meta_id;
  j["tier"] = std::string(to_string(rec.tier));
  return j;
}

// Parses one record object. `text` is stored verbatim (not normalized);
// `domain` is recomputed from meta_id when absent.
inline SentenceRecord record_from_json(const nlohmann::json& j,
                                       const std::string& context) {
  SentenceRecord rec;
  try {
    rec.text = j.at("text").get<std::string>();
    rec.lang = j.at("lang").get<std::string>();
    rec.source_dataset = j.value("source", std::string());
    rec.meta_id = j.value("meta_id", std::string());
    if (j.contains("script")) {
      auto sc = parse_script(j["script"].get<std::string>());
      if (!sc)
        throw InvalidRecord(context + ": unknown script '" +
                            j["script"].get<std::string>() + "'");
      rec.script = *sc;
    }
    if (j.contains("domain")) {
      auto d = parse_domain(j["domain"].get<std::string>());
      if (!d)
        throw InvalidRecord(context + ": unknown domain '" +
                            j["domain"].get<std::string>() + "'");
      rec.domain = *d;
    } else {
      rec.domain = attribute_domain(rec.meta_id);
    }
    std::string tier = j.value("tier", std::string("primary"));
    if (tier == "primary") {
      rec.tier = Tier::Primary;
    } else if (tier == "secondary") {
      rec.tier = Tier::Secondary;
    } else {
      throw InvalidRecord(context + ": unknown tier '" + tier + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidRecord(context + ": " + e.what());
  }
  if (!is_valid_iso(rec.lang))
    throw InvalidRecord(context + ": malformed lang '" + rec.lang + "'");
  return rec;
}

struct LoadStats {
  std::size_t lines = 0;
  std::size_t kept = 0;
  std::size_t dropped_empty = 0;  // empty after normalization
};

// Reads, normalizes, and domain-attributes a JSONL corpus. Records that
// normalize to the empty string are dropped and counted.
inline std::vector<SentenceRecord> load_corpus(const std::string& path,
                                               LoadStats* stats = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open corpus file: " + path);
  std::vector<SentenceRecord> out;
  LoadStats local;
  std::string line;
  while (std::getline(in, line)) {
    ++local.lines;
    if (line.empty()) continue;
    std::string context = path + ":" + std::to_string(local.lines);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw InvalidRecord(context + ": malformed JSON");
    SentenceRecord rec = record_from_json(j, context);
    rec.text = normalize(rec.text);
    if (rec.text.empty()) {
      ++local.dropped_empty;
      continue;
    }
    ++local.kept;
    out.push_back(std::move(rec));
  }
  if (stats) *stats = local;
  return out;
}

// Shards ingestion by input file. The merge is in input-file order, so the
// result is bit-identical to the single-threaded run regardless of the
// thread count.
inline std::vector<SentenceRecord> load_corpora(
    const std::vector<std::string>& paths, unsigned threads,
    LoadStats* stats = nullptr) {
  std::vector<std::vector<SentenceRecord>> shards(paths.size());
  std::vector<LoadStats> shard_stats(paths.size());
  if (threads <= 1 || paths.size() <= 1) {
    for (std::size_t i = 0; i < paths.size(); ++i)
      shards[i] = load_corpus(paths[i], &shard_stats[i]);
  } else {
    std::vector<std::future<void>> pending;
    std::atomic<std::size_t> next{0};
    unsigned workers = std::min<unsigned>(threads, paths.size());
    for (unsigned w = 0; w < workers; ++w) {
      pending.push_back(std::async(std::launch::async, [&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= paths.size()) return;
          shards[i] = load_corpus(paths[i], &shard_stats[i]);
        }
      }));
    }
    for (auto& f : pending) f.get();  // rethrows shard errors
  }
  std::vector<SentenceRecord> out;
  LoadStats total;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    out.insert(out.end(), std::make_move_iterator(shards[i].begin()),
               std::make_move_iterator(shards[i].end()));
    total.lines += shard_stats[i].lines;
    total.kept += shard_stats[i].kept;
    total.dropped_empty += shard_stats[i].dropped_empty;
  }
  if (stats) *stats = total;
  return out;
}

inline void write_jsonl(const std::string& path,
                        const std::vector<SentenceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  for (const auto& rec : records) out << record_to_json(rec).dump() << '\n';
  if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace lidforge
