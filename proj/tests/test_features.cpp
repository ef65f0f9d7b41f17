#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "lidforge/features.hpp"
#include "support/synth.hpp"

using namespace lidforge;

namespace {

std::vector<SentenceRecord> corpus(std::initializer_list<const char*> texts) {
  std::vector<SentenceRecord> out;
  for (const char* t : texts) out.push_back(synth::make_record(t, "aaa"));
  return out;
}

std::uint64_t hashed_id(const Vocab& vocab, const std::string& ngram) {
  return vocab.size() + fnv1a32(ngram) % vocab.bucket();
}

std::set<std::uint64_t> id_set(const FeatureVector& fv) {
  std::set<std::uint64_t> ids;
  for (const auto& [id, _] : fv.entries) ids.insert(id);
  return ids;
}

}  // namespace

TEST_CASE("fnv1a32 reference vectors") {
  CHECK(fnv1a32("") == 2166136261u);
  CHECK(fnv1a32("a") == 0xE40C292Cu);
  CHECK(fnv1a32("a") == fnv1a32("a"));  // pure function
}

TEST_CASE("build_vocab applies the min_count threshold exactly") {
  FeatureConfig cfg;
  cfg.min_count = 1000;
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 1500; ++i) records.push_back(synth::make_record("the", "aaa"));
  for (int i = 0; i < 999; ++i) records.push_back(synth::make_record("rare", "aaa"));
  Vocab vocab = build_vocab(records, cfg);
  CHECK(vocab.size() == 1);
  CHECK(vocab.id("the").has_value());
  CHECK(!vocab.id("rare").has_value());
}

TEST_CASE("build_vocab orders by descending count then lexicographically") {
  FeatureConfig cfg;
  cfg.min_count = 1;
  Vocab vocab = build_vocab(corpus({"a b", "b c"}), cfg);
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.words() == std::vector<std::string>{"b", "a", "c"});
  CHECK(*vocab.id("b") == 0);
  CHECK(*vocab.id("a") == 1);
  CHECK(*vocab.id("c") == 2);
}

TEST_CASE("build_vocab rejects an empty corpus") {
  CHECK_THROWS_AS(build_vocab({}, FeatureConfig{}), EmptyCorpus);
}

TEST_CASE("extract enumerates padded char n-grams") {
  FeatureConfig cfg;  // minn 2, maxn 5
  cfg.bucket = 1 << 20;
  Vocab vocab({}, cfg.bucket);

  FeatureVector fv = extract("ab", vocab, cfg);
  std::set<std::uint64_t> expected;
  for (const char* g : {"<a", "ab", "b>", "<ab", "ab>", "<ab>"})
    expected.insert(hashed_id(vocab, g));
  CHECK(id_set(fv) == expected);
  CHECK(fv.total == 6);
}

TEST_CASE("extract on the empty string is empty") {
  FeatureConfig cfg;
  Vocab vocab({}, cfg.bucket);
  CHECK(extract("", vocab, cfg).empty());
}

TEST_CASE("duplicate words accumulate counts") {
  FeatureConfig cfg;
  cfg.bucket = 1 << 20;
  Vocab vocab({}, cfg.bucket);
  FeatureVector once = extract("ab", vocab, cfg);
  FeatureVector twice = extract("ab ab", vocab, cfg);
  REQUIRE(once.entries.size() == twice.entries.size());
  for (std::size_t i = 0; i < once.entries.size(); ++i) {
    CHECK(twice.entries[i].first == once.entries[i].first);
    CHECK(twice.entries[i].second == 2 * once.entries[i].second);
  }
  CHECK(twice.total == 2 * once.total);
}

TEST_CASE("padded word one scalar beyond maxn still gets a whole-word feature") {
  FeatureConfig cfg;  // maxn 5, so "<abcd>" has length maxn+1
  cfg.bucket = 1 << 20;
  Vocab vocab({}, cfg.bucket);
  FeatureVector fv = extract("abcd", vocab, cfg);
  CHECK(id_set(fv).count(hashed_id(vocab, "<abcd>")) == 1);
  // One scalar longer than that gets no whole-word feature.
  FeatureVector fv2 = extract("abcde", vocab, cfg);
  CHECK(id_set(fv2).count(hashed_id(vocab, "<abcde>")) == 0);
}

TEST_CASE("n-gram slicing is on Unicode scalars, not bytes") {
  FeatureConfig cfg;
  cfg.minn = 2;
  cfg.maxn = 2;
  cfg.bucket = 1 << 20;
  Vocab vocab({}, cfg.bucket);
  // Two Ethiopic scalars: bigrams are <X, XY, Y> (each hashed over UTF-8).
  FeatureVector fv = extract("መነ", vocab, cfg);
  std::set<std::uint64_t> expected;
  expected.insert(hashed_id(vocab, "<መ"));
  expected.insert(hashed_id(vocab, "መነ"));
  expected.insert(hashed_id(vocab, "ነ>"));
  CHECK(id_set(fv) == expected);
}

TEST_CASE("word ids only appear for vocab words") {
  FeatureConfig cfg;
  cfg.min_count = 2;
  cfg.bucket = 1 << 16;
  Vocab vocab = build_vocab(corpus({"seen seen", "unseen"}), cfg);
  REQUIRE(vocab.size() == 1);

  FeatureVector with_word = extract("seen", vocab, cfg);
  CHECK(id_set(with_word).count(0) == 1);  // dense id 0

  FeatureVector without = extract("unseen", vocab, cfg);
  for (const auto& [id, _] : without.entries) CHECK(id >= vocab.size());
}

TEST_CASE("extract is order-independent at the word level") {
  FeatureConfig cfg;
  cfg.bucket = 1 << 18;
  Vocab vocab({}, cfg.bucket);
  FeatureVector a = extract("alpha beta", vocab, cfg);
  FeatureVector b = extract("beta alpha", vocab, cfg);
  CHECK(a.entries == b.entries);  // entries are canonically sorted by id
  CHECK(a.total == b.total);
}

TEST_CASE("all emitted ids stay inside the feature space on fuzzed input") {
  FeatureConfig cfg;
  cfg.bucket = 4096;
  Vocab vocab({"w0", "w1"}, cfg.bucket);
  synth::Rng rng(2024);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    int words = 1 + static_cast<int>(rng.below(6));
    for (int w = 0; w < words; ++w) {
      if (w) text.push_back(' ');
      int len = 1 + static_cast<int>(rng.below(8));
      for (int i = 0; i < len; ++i) {
        char32_t cp;
        switch (rng.below(4)) {
          case 0: cp = static_cast<char32_t>(0x61 + rng.below(26)); break;
          case 1: cp = static_cast<char32_t>(0x1200 + rng.below(0x80)); break;
          case 2: cp = static_cast<char32_t>(0x627 + rng.below(20)); break;
          default: cp = static_cast<char32_t>(0x07C1 + rng.below(30)); break;
        }
        utf8_encode_to(cp, text);
      }
    }
    FeatureVector fv = extract(text, vocab, cfg);
    CHECK(!fv.empty());
    for (const auto& [id, count] : fv.entries) {
      CHECK(id < vocab.feature_space());
      CHECK(count >= 1);
    }
  }
}
