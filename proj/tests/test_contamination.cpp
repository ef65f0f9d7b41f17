#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "lidforge/contamination.hpp"
#include "support/synth.hpp"

using namespace lidforge;

namespace {

SentenceRecord rec(std::string text, std::string lang = "aaa") {
  return synth::make_record(std::move(text), std::move(lang));
}

std::vector<SentenceRecord> recs(std::initializer_list<const char*> texts) {
  std::vector<SentenceRecord> out;
  for (const char* t : texts) out.push_back(rec(t));
  return out;
}

// Independent oracle: scan every training sentence; a test sentence with
// >= 4 tokens is contaminated iff some single training sentence's 4-gram
// set contains all of the test sentence's 4-grams; shorter test sentences
// must occur contiguously in one training sentence.
bool oracle_contaminated(const std::string& test,
                         const std::vector<std::string>& train) {
  std::vector<std::string> toks = tokenize(test);
  if (toks.empty()) return false;
  for (const auto& sentence : train) {
    std::vector<std::string> train_toks = tokenize(sentence);
    if (toks.size() < 4) {
      if (std::search(train_toks.begin(), train_toks.end(), toks.begin(),
                      toks.end()) != train_toks.end())
        return true;
      continue;
    }
    std::set<std::vector<std::string>> train_grams;
    for (std::size_t i = 0; i + 4 <= train_toks.size(); ++i)
      train_grams.insert({train_toks.begin() + i, train_toks.begin() + i + 4});
    bool all = true;
    for (std::size_t i = 0; all && i + 4 <= toks.size(); ++i)
      all = train_grams.count({toks.begin() + i, toks.begin() + i + 4}) > 0;
    if (all) return true;
  }
  return false;
}

// Random sentences over a vocabulary pool whose size controls overlap.
std::string random_sentence(synth::Rng& rng, int vocab, int min_len,
                            int max_len) {
  int len = min_len + static_cast<int>(rng.below(max_len - min_len + 1));
  std::string s;
  for (int i = 0; i < len; ++i) {
    if (i) s.push_back(' ');
    s += "w" + std::to_string(rng.below(vocab));
  }
  return s;
}

}  // namespace

TEST_CASE("tokenize splits on single spaces") {
  CHECK(tokenize("a b c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("a") == std::vector<std::string>{"a"});
  CHECK(tokenize("") == std::vector<std::string>{});
}

TEST_CASE("index records sentence token counts") {
  ContainmentIndex index = ContainmentIndex::build(recs({"a b c d e", "a b c"}));
  CHECK(index.sentence_count() == 2);
  CHECK(index.token_count(0) == 5);
  CHECK(index.token_count(1) == 3);
}

TEST_CASE("subsequence containment is detected") {
  ContainmentIndex index = ContainmentIndex::build(recs({"a b c d e f"}));
  CHECK(index.is_contaminated("a b c d e"));
  CHECK(index.is_contaminated("b c d e f"));
  CHECK(!index.is_contaminated("a b c d x"));
}

TEST_CASE("4-grams split across two training sentences do not contaminate") {
  ContainmentIndex index =
      ContainmentIndex::build(recs({"a b c d x", "x b c d e"}));
  CHECK(!index.is_contaminated("a b c d e"));
  // But each training sentence still contains itself.
  CHECK(index.is_contaminated("a b c d x"));
}

TEST_CASE("short test sentences use contiguous containment") {
  ContainmentIndex index = ContainmentIndex::build(recs({"p q r s"}));
  CHECK(index.is_contaminated("q r"));
  CHECK(index.is_contaminated("p q r"));
  CHECK(index.is_contaminated("s"));
  CHECK(!index.is_contaminated("r q"));  // order matters
  CHECK(!index.is_contaminated("p r"));  // not contiguous
  CHECK(!index.is_contaminated(""));
}

TEST_CASE("short training sentences can still contaminate short tests") {
  ContainmentIndex index = ContainmentIndex::build(recs({"a b c"}));
  CHECK(index.is_contaminated("a b c"));
  CHECK(index.is_contaminated("b c"));
  CHECK(!index.is_contaminated("a b c d"));  // no 4-gram exists in train
}

TEST_CASE("is_contaminated agrees with the brute-force oracle") {
  synth::Rng rng(424242);
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    // Vocabulary size spans heavy to near-zero overlap regimes.
    int vocab = 2 + static_cast<int>(rng.below(40));
    std::vector<std::string> train_texts;
    std::vector<SentenceRecord> train;
    int n_train = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n_train; ++i) {
      train_texts.push_back(random_sentence(rng, vocab, 1, 10));
      train.push_back(rec(train_texts.back()));
    }
    ContainmentIndex index = ContainmentIndex::build(train);
    for (int t = 0; t < 5; ++t) {
      std::string test = rng.below(4) == 0 && !train_texts.empty()
                             ? train_texts[rng.below(train_texts.size())]
                             : random_sentence(rng, vocab, 1, 8);
      CHECK(index.is_contaminated(test) ==
            oracle_contaminated(test, train_texts));
      ++checked;
    }
  }
  CHECK(checked == 1500);
}

TEST_CASE("adding training sentences never flips contaminated to clean") {
  synth::Rng rng(77);
  for (int round = 0; round < 50; ++round) {
    std::vector<SentenceRecord> train;
    for (int i = 0; i < 4; ++i)
      train.push_back(rec(random_sentence(rng, 6, 2, 8)));
    std::string test = random_sentence(rng, 6, 2, 8);

    ContainmentIndex small = ContainmentIndex::build(train);
    train.push_back(rec(random_sentence(rng, 6, 2, 8)));
    ContainmentIndex big = ContainmentIndex::build(train);
    if (small.is_contaminated(test)) CHECK(big.is_contaminated(test));
  }
}

TEST_CASE("audit reports rates and buckets") {
  std::vector<SentenceRecord> train = recs({"a b c d e", "f g h i j"});

  SECTION("identical test set is fully contaminated") {
    std::map<std::string, std::vector<SentenceRecord>> sets{{"self", train}};
    auto reports = audit(sets, train);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].total == 2);
    CHECK(reports[0].contaminated == 2);
    CHECK(reports[0].rate() == 100.0);
    CHECK(reports[0].bucket_ge_10() == 1);
    CHECK(reports[0].bucket_0_10() == 0);
  }

  SECTION("disjoint vocabulary scores zero") {
    std::map<std::string, std::vector<SentenceRecord>> sets{
        {"clean", recs({"q r s t u", "v w x y z"})}};
    auto reports = audit(sets, train);
    CHECK(reports[0].rate() == 0.0);
    CHECK(reports[0].bucket_0_10() == 0);
    CHECK(reports[0].bucket_ge_10() == 0);
  }

  SECTION("per-language buckets follow the (0,10) and >=10 semantics") {
    // Language aaa: 1 of 20 contaminated (5%); bbb: 2 of 10 (20%).
    std::vector<SentenceRecord> test_set;
    test_set.push_back(rec("a b c d e", "aaa"));
    for (int i = 0; i < 19; ++i)
      test_set.push_back(rec("n" + std::to_string(i) + " m o p q", "aaa"));
    test_set.push_back(rec("a b c d e", "bbb"));
    test_set.push_back(rec("f g h i j", "bbb"));
    for (int i = 0; i < 8; ++i)
      test_set.push_back(rec("r" + std::to_string(i) + " s t u v", "bbb"));

    std::map<std::string, std::vector<SentenceRecord>> sets{
        {"mixed", test_set}};
    auto reports = audit(sets, train);
    CHECK(reports[0].languages() == 2);
    CHECK(reports[0].bucket_0_10() == 1);   // aaa at 5%
    CHECK(reports[0].bucket_ge_10() == 1);  // bbb at 20%
  }
}

TEST_CASE("audit rates are permutation invariant") {
  synth::Rng rng(5);
  std::vector<SentenceRecord> train, test_set;
  for (int i = 0; i < 30; ++i) train.push_back(rec(random_sentence(rng, 8, 3, 8)));
  for (int i = 0; i < 30; ++i)
    test_set.push_back(rec(random_sentence(rng, 8, 3, 8)));

  std::map<std::string, std::vector<SentenceRecord>> sets{{"t", test_set}};
  auto base = audit(sets, train);

  synth::Rng shuffler(9);
  lidforge::detail::shuffle(train, shuffler);
  lidforge::detail::shuffle(test_set, shuffler);
  std::map<std::string, std::vector<SentenceRecord>> sets2{{"t", test_set}};
  auto permuted = audit(sets2, train);
  CHECK(base[0].rate() == permuted[0].rate());
  CHECK(base[0].contaminated == permuted[0].contaminated);
}
