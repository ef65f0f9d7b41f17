#pragma once

// Synthetic corpora for desk-scale experiments: order-2 character Markov
// "languages" and a shared-vocabulary confusable pair.

#include <cstdint>
#include <string>
#include <vector>

#include "lidforge/corpus.hpp"
#include "lidforge/detail/rng.hpp"

namespace synth {

using lidforge::SentenceRecord;
using lidforge::Tier;
using lidforge::detail::Rng;

// Order-2 character Markov chain over a contiguous lowercase alphabet
// slice. Distinct seeds give distinct (sharply peaked) transition tables.
class MarkovLang {
 public:
  explicit MarkovLang(std::uint64_t seed, char first = 'a', int alphabet = 15)
      : first_(first), alphabet_(alphabet) {
    Rng rng(seed);
    table_.resize(static_cast<std::size_t>(alphabet) * alphabet * alphabet);
    for (int ctx = 0; ctx < alphabet * alphabet; ++ctx) {
      double total = 0;
      std::vector<double> weights(alphabet);
      for (int c = 0; c < alphabet; ++c) {
        double u = rng.real();
        weights[c] = u * u * u;  // peaked so chains are clearly distinct
        total += weights[c];
      }
      double acc = 0;
      for (int c = 0; c < alphabet; ++c) {
        acc += weights[c] / total;
        table_[static_cast<std::size_t>(ctx) * alphabet + c] = acc;
      }
    }
  }

  std::string word(Rng& rng, int min_len = 2, int max_len = 8) const {
    int len = min_len + static_cast<int>(rng.below(max_len - min_len + 1));
    std::string w;
    int prev1 = static_cast<int>(rng.below(alphabet_));
    int prev2 = static_cast<int>(rng.below(alphabet_));
    for (int i = 0; i < len; ++i) {
      int ctx = prev1 * alphabet_ + prev2;
      double u = rng.real();
      int c = 0;
      while (c + 1 < alphabet_ &&
             table_[static_cast<std::size_t>(ctx) * alphabet_ + c] < u)
        ++c;
      w.push_back(static_cast<char>(first_ + c));
      prev1 = prev2;
      prev2 = c;
    }
    return w;
  }

  std::string sentence(Rng& rng, int min_words = 3, int max_words = 10) const {
    int n = min_words + static_cast<int>(rng.below(max_words - min_words + 1));
    std::string s;
    for (int i = 0; i < n; ++i) {
      if (i) s.push_back(' ');
      s += word(rng);
    }
    return s;
  }

 private:
  char first_;
  int alphabet_;
  std::vector<double> table_;  // cumulative next-char distribution per context
};

inline SentenceRecord make_record(std::string text, std::string lang,
                                  std::string source = "synth",
                                  Tier tier = Tier::Primary) {
  SentenceRecord rec;
  rec.text = std::move(text);
  rec.lang = std::move(lang);
  rec.source_dataset = std::move(source);
  rec.meta_id = rec.source_dataset + "-" + rec.lang;
  rec.tier = tier;
  return rec;
}

inline std::vector<SentenceRecord> markov_corpus(const std::string& lang,
                                                 const MarkovLang& gen,
                                                 std::size_t n, Rng& rng) {
  std::vector<SentenceRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(make_record(gen.sentence(rng), lang));
  return out;
}

// Two "languages" drawing sentences from 100-word vocabularies that share a
// fixed fraction of their words; the remainder is language-unique. Words use
// the 'p'..'z' letter range so the pair does not collide with MarkovLang
// corpora built on earlier alphabet slices.
class SharedVocabPair {
 public:
  SharedVocabPair(std::uint64_t seed, double shared_frac = 0.8,
                  std::size_t vocab_size = 100)
      : rng_words_(seed) {
    std::size_t shared = static_cast<std::size_t>(
        shared_frac * static_cast<double>(vocab_size));
    std::vector<std::string> shared_words = make_words(shared);
    vocab_x_ = shared_words;
    vocab_y_ = shared_words;
    for (auto& w : make_words(vocab_size - shared)) vocab_x_.push_back(w);
    for (auto& w : make_words(vocab_size - shared)) vocab_y_.push_back(w);
  }

  std::string sentence(Rng& rng, bool lang_x, int min_words = 3,
                       int max_words = 6) const {
    const auto& vocab = lang_x ? vocab_x_ : vocab_y_;
    int n = min_words + static_cast<int>(rng.below(max_words - min_words + 1));
    std::string s;
    for (int i = 0; i < n; ++i) {
      if (i) s.push_back(' ');
      s += vocab[rng.below(vocab.size())];
    }
    return s;
  }

 private:
  std::vector<std::string> make_words(std::size_t n) {
    std::vector<std::string> words;
    words.reserve(n);
    while (words.size() < n) {
      std::size_t len = 3 + rng_words_.below(5);
      std::string w;
      for (std::size_t i = 0; i < len; ++i)
        w.push_back(static_cast<char>('p' + rng_words_.below(11)));
      bool dup = false;
      for (const auto& seen : words) dup |= (seen == w);
      for (const auto& seen : vocab_x_) dup |= (seen == w);
      for (const auto& seen : vocab_y_) dup |= (seen == w);
      if (!dup) words.push_back(std::move(w));
    }
    return words;
  }

  Rng rng_words_;
  std::vector<std::string> vocab_x_, vocab_y_;
};

}  // namespace synth
