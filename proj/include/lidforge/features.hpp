#pragma once

// Character-n-gram features with the hashing trick. Words above the corpus
// count threshold get dense vocabulary ids [0, V); every char n-gram of the
// '<'-'>' padded word hashes into the bucket range [V, V+B).

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lidforge/contamination.hpp"  // tokenize
#include "lidforge/corpus.hpp"
#include "lidforge/errors.hpp"
#include "lidforge/hashing.hpp"
#include "lidforge/unicode.hpp"

namespace lidforge {

struct FeatureConfig {
  std::uint32_t minn = 2;
  std::uint32_t maxn = 5;
  std::uint32_t word_ngrams = 1;
  std::uint64_t bucket = 1000000;
  std::uint64_t min_count = 1000;
};

class Vocab {
 public:
  Vocab() = default;
  Vocab(std::vector<std::string> words, std::uint64_t bucket)
      : words_(std::move(words)), bucket_(bucket) {
    for (std::size_t i = 0; i < words_.size(); ++i) ids_[words_[i]] = i;
  }

  std::uint64_t size() const { return words_.size(); }       // V
  std::uint64_t bucket() const { return bucket_; }           // B
  std::uint64_t feature_space() const { return size() + bucket_; }

  std::optional<std::uint64_t> id(std::string_view word) const {
    auto it = ids_.find(std::string(word));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;  // id order
  std::unordered_map<std::string, std::uint64_t> ids_;
  std::uint64_t bucket_ = 0;
};

// Words with corpus count >= min_count, ids assigned in descending-count
// order, ties broken lexicographically.
inline Vocab build_vocab(const std::vector<SentenceRecord>& train,
                         const FeatureConfig& cfg) {
  if (train.empty()) throw EmptyCorpus("empty training corpus");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& rec : train)
    for (auto& tok : tokenize(rec.text)) ++counts[tok];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, count] : counts)
    if (count >= cfg.min_count) kept.emplace_back(word, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [word, _] : kept) words.push_back(word);
  return Vocab(std::move(words), cfg.bucket);
}

struct FeatureVector {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries;  // id -> count
  std::uint64_t total = 0;  // sum of counts

  bool empty() const { return entries.empty(); }
};

namespace detail {

// Emits every char n-gram (over Unicode scalars) of the padded word, plus
// the full padded form when it is exactly one scalar longer than maxn, so
// short words keep a dedicated feature.
inline void emit_char_ngrams(std::string_view word, const FeatureConfig& cfg,
                             const Vocab& vocab,
                             std::map<std::uint64_t, std::uint32_t>& acc) {
  std::u32string padded;
  padded.reserve(word.size() + 2);
  padded.push_back(U'<');
  for (char32_t cp : utf8_decode(word)) padded.push_back(cp);
  padded.push_back(U'>');

  const std::size_t len = padded.size();
  std::string bytes;
  auto emit = [&](std::size_t pos, std::size_t n) {
    bytes.clear();
    for (std::size_t k = 0; k < n; ++k) utf8_encode_to(padded[pos + k], bytes);
    std::uint64_t id = vocab.size() + fnv1a32(bytes) % vocab.bucket();
    acc[id] += 1;
  };
  std::size_t hi = std::min<std::size_t>(cfg.maxn, len);
  for (std::size_t n = cfg.minn; n <= hi; ++n)
    for (std::size_t pos = 0; pos + n <= len; ++pos) emit(pos, n);
  if (len == static_cast<std::size_t>(cfg.maxn) + 1) emit(0, len);
}

}  // namespace detail

// Bag extraction over a pre-tokenized word sequence; duplicate features
// accumulate counts. Pure and safe for concurrent use.
inline FeatureVector extract_words(const std::vector<std::string>& words,
                                   const Vocab& vocab,
                                   const FeatureConfig& cfg) {
  std::map<std::uint64_t, std::uint32_t> acc;
  for (const auto& word : words) {
    if (auto id = vocab.id(word)) acc[*id] += 1;
    detail::emit_char_ngrams(word, cfg, vocab, acc);
  }
  FeatureVector fv;
  fv.entries.assign(acc.begin(), acc.end());
  for (auto& [_, count] : fv.entries) fv.total += count;
  return fv;
}

inline FeatureVector extract(std::string_view text, const Vocab& vocab,
                             const FeatureConfig& cfg) {
  return extract_words(tokenize(text), vocab, cfg);
}

}  // namespace lidforge
