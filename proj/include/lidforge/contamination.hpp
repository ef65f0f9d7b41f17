#pragma once

// Word-4-gram containment audit: a test sentence is contaminated when all of
// its 4-grams occur in a single training sentence. Test sentences with fewer
// than 4 tokens fall back to contiguous-substring containment.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lidforge/corpus.hpp"
#include "lidforge/errors.hpp"

namespace lidforge {

// Tokenization is a split on single spaces; inputs are already normalized so
// whitespace runs cannot occur.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(' ', start);
    if (pos == std::string_view::npos) {
      if (start < text.size()) tokens.emplace_back(text.substr(start));
      break;
    }
    if (pos > start) tokens.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return tokens;
}

class ContainmentIndex {
 public:
  using SentenceId = std::uint32_t;

  void add(std::string_view text) {
    SentenceId id = static_cast<SentenceId>(sentences_.size());
    sentences_.push_back(tokenize(text));
    const auto& toks = sentences_.back();
    for (const auto& tok : toks) append_id(unigrams_[tok], id);
    if (toks.size() >= 4) {
      for (std::size_t i = 0; i + 4 <= toks.size(); ++i)
        append_id(fourgrams_[join4(toks, i)], id);
    }
  }

  static ContainmentIndex build(const std::vector<SentenceRecord>& train) {
    ContainmentIndex index;
    index.sentences_.reserve(train.size());
    for (const auto& rec : train) index.add(rec.text);
    return index;
  }

  // Read-only once built; safe for concurrent callers.
  bool is_contaminated(std::string_view test_sentence) const {
    std::vector<std::string> toks = tokenize(test_sentence);
    if (toks.empty()) return false;
    if (toks.size() >= 4) return contained_by_fourgrams(toks);
    return contained_contiguously(toks);
  }

  std::size_t sentence_count() const { return sentences_.size(); }

  std::size_t token_count(SentenceId id) const {
    return sentences_[id].size();
  }

 private:
  static void append_id(std::vector<SentenceId>& ids, SentenceId id) {
    if (ids.empty() || ids.back() != id) ids.push_back(id);  // ids arrive sorted
  }

  static std::string join4(const std::vector<std::string>& toks,
                           std::size_t i) {
    std::string key = toks[i];
    for (std::size_t k = 1; k < 4; ++k) {
      key.push_back('\x1f');
      key += toks[i + k];
    }
    return key;
  }

  // True iff one training sentence id lies in the intersection of the id
  // sets of every 4-gram of the test sentence.
  bool contained_by_fourgrams(const std::vector<std::string>& toks) const {
    std::vector<SentenceId> alive;
    for (std::size_t i = 0; i + 4 <= toks.size(); ++i) {
      auto it = fourgrams_.find(join4(toks, i));
      if (it == fourgrams_.end()) return false;
      if (i == 0) {
        alive = it->second;
      } else {
        std::vector<SentenceId> next;
        std::set_intersection(alive.begin(), alive.end(), it->second.begin(),
                              it->second.end(), std::back_inserter(next));
        alive.swap(next);
      }
      if (alive.empty()) return false;
    }
    return !alive.empty();
  }

  bool contained_contiguously(const std::vector<std::string>& toks) const {
    std::vector<SentenceId> alive;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      auto it = unigrams_.find(toks[i]);
      if (it == unigrams_.end()) return false;
      if (i == 0) {
        alive = it->second;
      } else {
        std::vector<SentenceId> next;
        std::set_intersection(alive.begin(), alive.end(), it->second.begin(),
                              it->second.end(), std::back_inserter(next));
        alive.swap(next);
      }
      if (alive.empty()) return false;
    }
    for (SentenceId id : alive) {
      const auto& sent = sentences_[id];
      if (std::search(sent.begin(), sent.end(), toks.begin(), toks.end()) !=
          sent.end())
        return true;
    }
    return false;
  }

  std::vector<std::vector<std::string>> sentences_;
  std::unordered_map<std::string, std::vector<SentenceId>> fourgrams_;
  std::unordered_map<std::string, std::vector<SentenceId>> unigrams_;
};

struct LanguageContamination {
  std::size_t total = 0;
  std::size_t contaminated = 0;

  double rate() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(contaminated) /
                                  static_cast<double>(total);
  }
};

struct ContaminationReport {
  std::string dataset;
  std::size_t total = 0;
  std::size_t contaminated = 0;
  std::map<std::string, LanguageContamination> per_language;

  double rate() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(contaminated) /
                                  static_cast<double>(total);
  }
  std::size_t languages() const { return per_language.size(); }

  // Bucket semantics: (0,10) strictly positive and below 10; >= 10.
  std::size_t bucket_0_10() const {
    std::size_t n = 0;
    for (const auto& [_, lc] : per_language)
      if (lc.rate() > 0.0 && lc.rate() < 10.0) ++n;
    return n;
  }
  std::size_t bucket_ge_10() const {
    std::size_t n = 0;
    for (const auto& [_, lc] : per_language)
      if (lc.rate() >= 10.0) ++n;
    return n;
  }
};

inline ContaminationReport audit_one(
    const std::string& name, const std::vector<SentenceRecord>& test_set,
    const ContainmentIndex& index) {
  ContaminationReport report;
  report.dataset = name;
  for (const auto& rec : test_set) {
    bool hit = index.is_contaminated(rec.text);
    ++report.total;
    report.contaminated += hit ? 1 : 0;
    auto& lc = report.per_language[rec.lang];
    ++lc.total;
    lc.contaminated += hit ? 1 : 0;
  }
  return report;
}

inline std::vector<ContaminationReport> audit(
    const std::map<std::string, std::vector<SentenceRecord>>& test_sets,
    const std::vector<SentenceRecord>& train) {
  ContainmentIndex index = ContainmentIndex::build(train);
  std::vector<ContaminationReport> reports;
  reports.reserve(test_sets.size());
  for (const auto& [name, records] : test_sets)
    reports.push_back(audit_one(name, records, index));
  return reports;
}

}  // namespace lidforge
