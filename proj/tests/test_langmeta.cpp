#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "lidforge/detail/rng.hpp"
#include "lidforge/langmeta.hpp"

using namespace lidforge;

namespace {

Registry seed_registry() {
  Registry reg;
  reg.load_tsv_file(std::string(LIDFORGE_SOURCE_DIR) +
                    "/data/langmeta_seed.tsv");
  return reg;
}

}  // namespace

TEST_CASE("register accepts well-formed entries") {
  Registry reg;
  const auto& hau = reg.register_language(
      "hau", {ScriptCode::Latn}, FamilyPath{{"Afro-Asiatic", "Chadic"}});
  CHECK(hau.scripts.size() == 1);

  const auto& gof = reg.register_language(
      "gof", {ScriptCode::Latn, ScriptCode::Ethi},
      FamilyPath{{"Afro-Asiatic", "Omotic"}});
  CHECK(gof.scripts.size() == 2);
  CHECK(gof.scripts.contains(ScriptCode::Ethi));
  CHECK(reg.size() == 2);
}

TEST_CASE("register rejects malformed input") {
  Registry reg;
  CHECK_THROWS_AS(reg.register_language("ha", {ScriptCode::Latn},
                                        FamilyPath{{"Afro-Asiatic"}}),
                  MalformedCode);
  CHECK_THROWS_AS(reg.register_language("hausa", {ScriptCode::Latn},
                                        FamilyPath{{"Afro-Asiatic"}}),
                  MalformedCode);
  CHECK_THROWS_AS(reg.register_language("hAu", {ScriptCode::Latn},
                                        FamilyPath{{"Afro-Asiatic"}}),
                  MalformedCode);
  CHECK_THROWS_AS(
      reg.register_language("hau", {}, FamilyPath{{"Afro-Asiatic"}}),
      MalformedCode);
  CHECK_THROWS_AS(reg.register_language("hau", {ScriptCode::Latn},
                                        FamilyPath{{}}),
                  MalformedCode);
  CHECK_THROWS_AS(reg.register_language("hau", {ScriptCode::Latn},
                                        FamilyPath{{"Bantu"}}),
                  MalformedCode);  // not a top-level family
}

TEST_CASE("re-registration is idempotent for identical metadata only") {
  Registry reg;
  reg.register_language("hau", {ScriptCode::Latn},
                        FamilyPath{{"Afro-Asiatic", "Chadic"}});
  CHECK_NOTHROW(reg.register_language(
      "hau", {ScriptCode::Latn}, FamilyPath{{"Afro-Asiatic", "Chadic"}}));
  CHECK(reg.size() == 1);
  CHECK_THROWS_AS(
      reg.register_language("hau", {ScriptCode::Latn, ScriptCode::Arab},
                            FamilyPath{{"Afro-Asiatic", "Chadic"}}),
      ConflictingRegistration);
  CHECK_THROWS_AS(reg.register_language("hau", {ScriptCode::Latn},
                                        FamilyPath{{"Niger-Congo"}}),
                  ConflictingRegistration);
}

TEST_CASE("resolve_label grammar") {
  auto [iso, script] = resolve_label("aar");
  CHECK(iso == "aar");
  CHECK(!script.has_value());

  auto [iso2, script2] = resolve_label("gof_Ethi");
  CHECK(iso2 == "gof");
  REQUIRE(script2.has_value());
  CHECK(*script2 == ScriptCode::Ethi);

  CHECK_THROWS_AS(resolve_label("gof-Ethi"), MalformedLabel);
  CHECK_THROWS_AS(resolve_label("gof_ethi"), MalformedLabel);
  CHECK_THROWS_AS(resolve_label("gof_Xyzw"), MalformedLabel);
  CHECK_THROWS_AS(resolve_label("go_Ethi"), MalformedLabel);
  CHECK_THROWS_AS(resolve_label("GOF"), MalformedLabel);
  CHECK_THROWS_AS(resolve_label(""), MalformedLabel);
  CHECK_THROWS_AS(resolve_label("abcd"), MalformedLabel);
}

TEST_CASE("resolve_label round-trips format_label for every registered entry") {
  Registry reg = seed_registry();
  for (const auto& [iso, entry] : reg.entries()) {
    auto [bare, none] = resolve_label(format_label(iso, std::nullopt));
    CHECK(bare == iso);
    CHECK(!none.has_value());
    for (ScriptCode sc : entry.scripts.codes()) {
      auto [got_iso, got_script] = resolve_label(format_label(iso, sc));
      CHECK(got_iso == iso);
      REQUIRE(got_script.has_value());
      CHECK(*got_script == sc);
    }
  }
}

TEST_CASE("relation categories") {
  Registry reg = seed_registry();
  // Reflexive.
  for (const auto& [iso, _] : reg.entries())
    CHECK(reg.relation(iso, iso) == Relation::SameFamilySameScript);
  // Two Niger-Congo Latn languages.
  CHECK(reg.relation("swh", "kon") == Relation::SameFamilySameScript);
  // Latn Niger-Congo vs Ethi Afro-Asiatic.
  CHECK(reg.relation("swh", "amh") == Relation::DiffFamilyDiffScript);
  // Same family, disjoint scripts.
  CHECK(reg.relation("amh", "hau") == Relation::SameFamilyDiffScript);
  // Different family, intersecting scripts.
  CHECK(reg.relation("hau", "swh") == Relation::DiffFamilySameScript);
  // Multi-script intersection counts as script compatibility.
  CHECK(reg.relation("gof", "amh") == Relation::SameFamilySameScript);

  CHECK_THROWS_AS(reg.relation("qqq", "swh"), UnknownLanguage);
}

TEST_CASE("relation is symmetric on random registered pairs") {
  Registry reg = seed_registry();
  std::vector<std::string> isos;
  for (const auto& [iso, _] : reg.entries()) isos.push_back(iso);
  detail::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto& a = isos[rng.below(isos.size())];
    const auto& b = isos[rng.below(isos.size())];
    CHECK(reg.relation(a, b) == reg.relation(b, a));
  }
}

TEST_CASE("registry returns exactly the entries inserted") {
  detail::Rng rng(99);
  Registry reg;
  std::set<std::string> inserted;
  while (inserted.size() < 60) {
    std::string iso;
    for (int k = 0; k < 3; ++k)
      iso.push_back(static_cast<char>('a' + rng.below(26)));
    ScriptSet scripts{static_cast<ScriptCode>(rng.below(7))};
    FamilyPath family{{std::string(kTopLevelFamilies[rng.below(9)])}};
    if (inserted.count(iso)) continue;
    reg.register_language(iso, scripts, family);
    inserted.insert(iso);
  }
  CHECK(reg.size() == inserted.size());
  for (const auto& iso : inserted) CHECK(reg.contains(iso));
}

TEST_CASE("TSV seed file loads with full script and family coverage") {
  Registry reg = seed_registry();
  CHECK(reg.size() >= 30);

  ScriptSet all_scripts;
  std::set<std::string> families;
  for (const auto& [_, entry] : reg.entries()) {
    for (ScriptCode sc : entry.scripts.codes()) all_scripts.insert(sc);
    families.insert(entry.family.top());
  }
  CHECK(all_scripts.size() == 7);
  CHECK(families.size() == 9);

  const auto& gof = reg.get("gof");
  CHECK(gof.scripts == ScriptSet{ScriptCode::Latn, ScriptCode::Ethi});
  CHECK(gof.family.levels ==
        std::vector<std::string>{"Afro-Asiatic", "Omotic"});
  CHECK(reg.get("swh").display_name == "Swahili");
}

TEST_CASE("TSV parser rejects bad rows and skips comments") {
  Registry reg;
  std::istringstream good("# comment\n\nabc\tLatn\tCreole\tName\n");
  CHECK_NOTHROW(reg.load_tsv(good));
  CHECK(reg.size() == 1);

  Registry reg2;
  std::istringstream bad_script("abc\tQaaa\tCreole\tName\n");
  CHECK_THROWS_AS(reg2.load_tsv(bad_script), MalformedCode);

  Registry reg3;
  std::istringstream too_few("abc\tLatn\n");
  CHECK_THROWS_AS(reg3.load_tsv(too_few), MalformedCode);
}
