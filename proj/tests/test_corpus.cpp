#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "lidforge/corpus.hpp"
#include "support/synth.hpp"

using namespace lidforge;

namespace {

// \u{XXXX}-escaped strings from the frozen NFC oracle file.
std::string parse_escaped(const std::string& s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 3, "\\u{") == 0) {
      std::size_t close = s.find('}', i + 3);
      char32_t cp = static_cast<char32_t>(
          std::stoul(s.substr(i + 3, close - i - 3), nullptr, 16));
      utf8_encode_to(cp, out);
      i = close + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

Registry two_lang_registry() {
  Registry reg;
  reg.register_language("aaa", {ScriptCode::Latn}, FamilyPath{{"Niger-Congo"}});
  reg.register_language("bbb", {ScriptCode::Latn}, FamilyPath{{"Niger-Congo"}});
  return reg;
}

SentenceRecord rec(std::string text, std::string lang, Tier tier,
                   std::string source = "synth") {
  return synth::make_record(std::move(text), std::move(lang),
                            std::move(source), tier);
}

}  // namespace

TEST_CASE("normalize whitespace and control handling") {
  CHECK(normalize("  foo\t bar ") == "foo bar");
  CHECK(normalize("abc") == "abc");
  CHECK(normalize("a b") == "a b");          // NBSP is whitespace
  CHECK(normalize("a\x01") == "a");               // control removed
  CHECK(normalize("a\x01v") == "av");             // no space inserted
  CHECK(normalize(" \t\n ") == "");
  CHECK(normalize("") == "");
}

TEST_CASE("normalize applies NFC") {
  CHECK(normalize("é") == "é");
  // No precomposed open-o-acute exists, the sequence stays decomposed.
  CHECK(normalize("ɔ́") == "ɔ́");
  CHECK(normalize("ọ́") == "ọ́");
}

TEST_CASE("normalize matches the frozen NFC reference vectors") {
  std::ifstream in(std::string(LIDFORGE_SOURCE_DIR) +
                   "/tests/data/nfc_cases.tsv");
  REQUIRE(in.good());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    std::string input = parse_escaped(line.substr(0, tab));
    std::string expected = parse_escaped(line.substr(tab + 1));
    CHECK(nfc_utf8(input) == expected);
    ++n;
  }
  CHECK(n > 400);
}

TEST_CASE("normalize rejects invalid UTF-8") {
  CHECK_THROWS_AS(normalize("\xff\xfe"), InvalidEncoding);
  CHECK_THROWS_AS(normalize("\xc3"), InvalidEncoding);          // truncated
  CHECK_THROWS_AS(normalize("\xc0\xaf"), InvalidEncoding);      // overlong
  CHECK_THROWS_AS(normalize("\xed\xa0\x80"), InvalidEncoding);  // surrogate
}

TEST_CASE("dedup keeps the primary-tier record for a shared key") {
  auto a = rec("x", "aaa", Tier::Primary, "A");
  auto b = rec("x", "bbb", Tier::Secondary, "B");
  auto out = dedup({b, a});  // secondary arrives first in input order
  REQUIRE(out.size() == 1);
  CHECK(out[0].source_dataset == "A");
}

TEST_CASE("dedup keeps distinct keys and is idempotent") {
  auto a = rec("x", "aaa", Tier::Primary, "A");
  auto b = rec("y", "bbb", Tier::Primary, "B");
  auto c = rec("x", "aaa", Tier::Secondary, "C");
  auto out = dedup({a, b, c});
  CHECK(out.size() == 2);
  CHECK(dedup(out) == out);
}

TEST_CASE("dedup ties within a tier go to first input occurrence") {
  auto a1 = rec("x", "aaa", Tier::Primary, "first");
  auto a2 = rec("x", "bbb", Tier::Primary, "second");
  auto out = dedup({a1, a2});
  REQUIRE(out.size() == 1);
  CHECK(out[0].source_dataset == "first");
}

TEST_CASE("attribute_domain matches the published metadata samples") {
  CHECK(attribute_domain("Bible-aar_line94") == Domain::Religious);
  CHECK(attribute_domain("Bible-aar_line392") == Domain::Religious);
  CHECK(attribute_domain("CC100_zu.txt.tsv_f17_line64983") == Domain::Web);
  CHECK(attribute_domain("JW-zul_line3295") == Domain::Religious);
  CHECK(attribute_domain("mystery_source_7") == Domain::Unknown);
}

TEST_CASE("attribute_domain keyword table covers every category") {
  CHECK(attribute_domain("CommonVoice-xyz") == Domain::Speech);
  CHECK(attribute_domain("autshumato.tmx") == Domain::Government);
  CHECK(attribute_domain("flores200-dev") == Domain::Benchmarks);
  CHECK(attribute_domain("tatoeba-sentences") == Domain::Benchmarks);
  CHECK(attribute_domain("bloom-lm") == Domain::Stories);
  CHECK(attribute_domain("xlsum_v2") == Domain::News);
  CHECK(attribute_domain("covid-factsheet") == Domain::Health);
  CHECK(attribute_domain("leipzig-corpora") == Domain::Wikipedia);
  CHECK(attribute_domain("tanzil-quran") == Domain::Religious);
  CHECK(attribute_domain("oscar-2019") == Domain::Web);
}

TEST_CASE("attribute_domain priority order and longest-first tie break") {
  // Government's "Human Rights" outranks Benchmarks' "Human" because the
  // Government category is tested first.
  CHECK(attribute_domain("universal human rights decl") == Domain::Government);
  CHECK(attribute_domain("human-annotated set") == Domain::Benchmarks);
  // News is tested before Wikipedia.
  CHECK(attribute_domain("wikinews-dump") == Domain::News);
  // Case-insensitive.
  CHECK(attribute_domain("BIBLE") == Domain::Religious);
  CHECK(attribute_domain("bible") == Domain::Religious);
}

TEST_CASE("attribute_domain is total on arbitrary bytes") {
  synth::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (int k = 0; k < 12; ++k)
      s.push_back(static_cast<char>('!' + rng.below(90)));
    CHECK_NOTHROW(attribute_domain(s));
  }
}

TEST_CASE("build_splits small-N allocates test before dev before train") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 50; ++i)
    records.push_back(rec("s" + std::to_string(i), "aaa", Tier::Primary));
  Splits s = build_splits(records, SplitSpec{100000, 100, 100, 42}, reg);
  CHECK(s.test.size() == 50);
  CHECK(s.dev.size() == 0);
  CHECK(s.train.size() == 0);
}

TEST_CASE("build_splits mid-N fills test, then dev, then train") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 150; ++i)
    records.push_back(rec("s" + std::to_string(i), "aaa", Tier::Primary));
  Splits s = build_splits(records, SplitSpec{100000, 100, 100, 42}, reg);
  CHECK(s.test.size() == 100);
  CHECK(s.dev.size() == 50);
  CHECK(s.train.size() == 0);
}

TEST_CASE("build_splits train cap binds") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 200000; ++i)
    records.push_back(rec("s" + std::to_string(i), "aaa", Tier::Primary));
  Splits s = build_splits(records, SplitSpec{100000, 100, 100, 42}, reg);
  CHECK(s.train.size() == 100000);
  for (const auto& r : s.train) CHECK(r.tier == Tier::Primary);
  CHECK(s.dev.size() == 100);
  CHECK(s.test.size() == 100);
}

TEST_CASE("build_splits exhausts primary tier before secondary") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 60000; ++i)
    records.push_back(rec("p" + std::to_string(i), "aaa", Tier::Primary));
  for (int i = 0; i < 80000; ++i)
    records.push_back(rec("s" + std::to_string(i), "aaa", Tier::Secondary));

  // With dev/test caps zeroed the tier counts are exact.
  Splits s = build_splits(records, SplitSpec{100000, 0, 0, 42}, reg);
  std::size_t primary = 0, secondary = 0;
  for (const auto& r : s.train)
    (r.tier == Tier::Primary ? primary : secondary) += 1;
  CHECK(primary == 60000);
  CHECK(secondary == 40000);
}

TEST_CASE("build_splits never draws secondary while primary remains") {
  Registry reg = two_lang_registry();
  synth::Rng rng(11);
  for (int round = 0; round < 20; ++round) {
    std::vector<SentenceRecord> records;
    int n_primary = 1 + static_cast<int>(rng.below(40));
    int n_secondary = 1 + static_cast<int>(rng.below(40));
    for (int i = 0; i < n_primary; ++i)
      records.push_back(rec("p" + std::to_string(i), "aaa", Tier::Primary));
    for (int i = 0; i < n_secondary; ++i)
      records.push_back(rec("s" + std::to_string(i), "aaa", Tier::Secondary));
    SplitSpec spec{rng.below(30), rng.below(10), rng.below(10),
                   static_cast<std::uint64_t>(round)};

    Splits s = build_splits(records, spec, reg);
    bool train_has_secondary = false;
    std::set<std::string> train_texts;
    for (const auto& r : s.train) {
      train_has_secondary |= r.tier == Tier::Secondary;
      train_texts.insert(r.text);
    }
    if (train_has_secondary) {
      std::set<std::string> held;
      for (const auto& r : s.dev) held.insert(r.text);
      for (const auto& r : s.test) held.insert(r.text);
      for (const auto& r : records)
        if (r.tier == Tier::Primary && !held.count(r.text))
          CHECK(train_texts.count(r.text) == 1);
    }
  }
}

TEST_CASE("build_splits is invariant under input permutation") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 300; ++i)
    records.push_back(rec("t" + std::to_string(i), i % 2 ? "aaa" : "bbb",
                          i % 3 ? Tier::Primary : Tier::Secondary));
  SplitSpec spec{80, 20, 30, 1234};
  Splits base = build_splits(records, spec, reg);

  synth::Rng rng(5);
  for (int round = 0; round < 5; ++round) {
    synth::Rng shuffler(rng.next());
    std::vector<SentenceRecord> permuted = records;
    lidforge::detail::shuffle(permuted, shuffler);
    Splits got = build_splits(permuted, spec, reg);
    CHECK(got.train == base.train);
    CHECK(got.dev == base.dev);
    CHECK(got.test == base.test);
  }
}

TEST_CASE("build_splits changes with the seed") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 400; ++i)
    records.push_back(rec("t" + std::to_string(i), "aaa", Tier::Primary));
  Splits a = build_splits(records, SplitSpec{100, 50, 50, 1}, reg);
  Splits b = build_splits(records, SplitSpec{100, 50, 50, 2}, reg);
  CHECK(a.train != b.train);
}

TEST_CASE("build_splits rejects unregistered languages") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records{rec("x", "zzz", Tier::Primary)};
  CHECK_THROWS_AS(build_splits(records, SplitSpec{}, reg), UnknownLanguage);
}

TEST_CASE("splits are pairwise disjoint on text and respect caps") {
  Registry reg = two_lang_registry();
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 500; ++i)
    records.push_back(
        rec("u" + std::to_string(i), i % 2 ? "aaa" : "bbb", Tier::Primary));
  SplitSpec spec{150, 30, 40, 9};
  Splits s = build_splits(records, spec, reg);

  std::set<std::string> seen;
  for (const auto* split : {&s.train, &s.dev, &s.test})
    for (const auto& r : *split) CHECK(seen.insert(r.text).second);

  std::map<std::string, std::size_t> train_n, dev_n, test_n;
  for (const auto& r : s.train) ++train_n[r.lang];
  for (const auto& r : s.dev) ++dev_n[r.lang];
  for (const auto& r : s.test) ++test_n[r.lang];
  for (const auto& [lang, n] : train_n) CHECK(n <= spec.train_cap);
  for (const auto& [lang, n] : dev_n) CHECK(n <= spec.dev_cap);
  for (const auto& [lang, n] : test_n) CHECK(n <= spec.test_cap);
}

TEST_CASE("external_eval_filter drops trained (lang, source) pairs") {
  Provenance prov{{"aaa", {"bloom"}}};
  std::vector<SentenceRecord> external{
      rec("1", "aaa", Tier::Secondary, "bloom"),
      rec("2", "aaa", Tier::Secondary, "mcs"),
      rec("3", "bbb", Tier::Secondary, "bloom"),
  };
  auto out = external_eval_filter(external, prov);
  REQUIRE(out.size() == 2);
  CHECK(out[0].text == "2");  // order preserved
  CHECK(out[1].text == "3");

  CHECK(external_eval_filter(external, {}) == external);
}

TEST_CASE("JSONL round-trip and domain recomputation") {
  std::string path = "corpus_test_roundtrip.jsonl";
  std::vector<SentenceRecord> records{
      rec("foo bar", "aaa", Tier::Primary, "srcA"),
      rec("baz", "bbb", Tier::Secondary, "srcB"),
  };
  records[0].script = ScriptCode::Latn;
  records[0].domain = Domain::News;
  write_jsonl(path, records);
  auto loaded = load_corpus(path);
  CHECK(loaded == records);

  // Domain recomputed from meta_id when the key is absent.
  {
    std::ofstream out(path);
    out << R"({"text":"x","lang":"aaa","source":"s","meta_id":"Bible-aaa_1","tier":"primary"})"
        << "\n"
        << R"({"text":"  y  ","lang":"aaa","source":"s","meta_id":"m","tier":"secondary"})"
        << "\n"
        << R"({"text":"   ","lang":"aaa","source":"s","meta_id":"m","tier":"primary"})"
        << "\n";
  }
  LoadStats stats;
  auto loaded2 = load_corpus(path, &stats);
  REQUIRE(loaded2.size() == 2);
  CHECK(loaded2[0].domain == Domain::Religious);
  CHECK(loaded2[1].text == "y");  // normalized on load
  CHECK(stats.dropped_empty == 1);
  std::remove(path.c_str());
}

TEST_CASE("JSONL loader rejects malformed records") {
  std::string path = "corpus_test_bad.jsonl";
  auto write_line = [&](const std::string& line) {
    std::ofstream out(path);
    out << line << "\n";
  };
  write_line("not json");
  CHECK_THROWS_AS(load_corpus(path), InvalidRecord);
  write_line(R"({"lang":"aaa"})");
  CHECK_THROWS_AS(load_corpus(path), InvalidRecord);
  write_line(R"({"text":"x","lang":"aaa","tier":"tertiary"})");
  CHECK_THROWS_AS(load_corpus(path), InvalidRecord);
  write_line(R"({"text":"x","lang":"not-iso","tier":"primary"})");
  CHECK_THROWS_AS(load_corpus(path), InvalidRecord);
  write_line(R"({"text":"x","lang":"aaa","script":"Qaaa","tier":"primary"})");
  CHECK_THROWS_AS(load_corpus(path), InvalidRecord);
  std::remove(path.c_str());
}

TEST_CASE("sharded load equals single-threaded load") {
  std::vector<std::string> paths;
  for (int f = 0; f < 4; ++f) {
    std::string path = "corpus_shard_" + std::to_string(f) + ".jsonl";
    std::vector<SentenceRecord> records;
    for (int i = 0; i < 50; ++i)
      records.push_back(rec(
          "f" + std::to_string(f) + "_" + std::to_string(i), "aaa",
          Tier::Primary));
    write_jsonl(path, records);
    paths.push_back(path);
  }
  auto serial = load_corpora(paths, 1);
  auto parallel = load_corpora(paths, 4);
  CHECK(serial == parallel);
  for (const auto& p : paths) std::remove(p.c_str());
}
