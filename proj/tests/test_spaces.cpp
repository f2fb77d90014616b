#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "roofflop/spaces.hpp"

using namespace roofflop;
using nlohmann::json;

TEST(Catalog, ContainsTheRoofSpaces) {
  const Catalog& c = standard_catalog();
  for (const char* n : {"P1", "S_plus", "S_minus", "E_D4", "Q6", "Q5", "OGr37", "FlagB3", "R"}) EXPECT_NO_THROW(c.space(n)) << n;
  EXPECT_THROW(c.space("Gr25"), CatalogError);
  EXPECT_THROW(c.sequence("nope"), CatalogError);
  EXPECT_THROW(c.fibration("nope"), CatalogError);
}

TEST(Catalog, PicardRanksAndNodes) {
  const Catalog& c = standard_catalog();
  EXPECT_EQ(c.space("E_D4").picard_rank(), 2);
  EXPECT_EQ(c.space("E_D4").homogeneous->picard_nodes(), (NodeSet{4, 3}));
  EXPECT_EQ(c.space("S_plus").homogeneous->picard_nodes(), (NodeSet{4}));
  EXPECT_EQ(c.space("S_minus").homogeneous->picard_nodes(), (NodeSet{3}));
  EXPECT_EQ(c.space("FlagB3").homogeneous->picard_nodes(), (NodeSet{1, 3}));
  EXPECT_EQ(c.space("R").picard_rank(), 2);
}

TEST(Catalog, DivisorRidesOnItsHost) {
  const SpaceEntry& r = standard_catalog().space("R");
  EXPECT_EQ(r.kind, SpaceEntry::Kind::Divisor);
  EXPECT_EQ(r.host, "FlagB3");
  EXPECT_EQ(r.homogeneous->name(), "FlagB3");
  EXPECT_EQ(r.dimension(), 7);
  EXPECT_EQ(r.divisor_class, (std::vector<int>{0, 1}));
}

TEST(Catalog, DictionaryKinds) {
  const Catalog& c = standard_catalog();
  const auto& fl = c.space("FlagB3").dictionary;
  EXPECT_EQ(fl.at("S").kind, SymbolDef::Kind::Pullback);
  EXPECT_EQ(fl.at("S").from, "Q5");
  EXPECT_EQ(fl.at("EE").kind, SymbolDef::Kind::Triangle);
  EXPECT_TRUE(fl.at("EE").nonsplit);
  EXPECT_TRUE(fl.at("S'").nonsplit);
  EXPECT_EQ(c.space("E_D4").dictionary.at("V").kind, SymbolDef::Kind::Irr);
  EXPECT_TRUE(c.space("E_D4").dictionary.at("V").dual);
}

TEST(Catalog, SequencesAndFibrationsPointAtKnownSpaces) {
  const Catalog& c = standard_catalog();
  EXPECT_EQ(c.sequences.size(), 10u);
  for (const auto& [n, s] : c.sequences) {
    EXPECT_EQ(n, s.name);
    EXPECT_NO_THROW(c.space(s.space)) << n;
  }
  EXPECT_EQ(c.fibrations.size(), 4u);
  for (const auto& [n, f] : c.fibrations) {
    EXPECT_NO_THROW(c.space(f.total));
    EXPECT_NO_THROW(c.space(f.base));
    // R maps onto a hyperplane section of OGr37
    const int image = c.space(f.base).dimension() - (n == "p'" ? 1 : 0);
    EXPECT_EQ(c.space(f.total).dimension(), image + f.fiber_dim) << n;
  }
  EXPECT_EQ(c.triality.size(), 3u);
}

TEST(Catalog, JsonRoundTrip) {
  const json once = catalog_to_json(standard_catalog());
  const json twice = catalog_to_json(catalog_from_json(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once, catalog_to_json(catalog_from_json(json::parse(standard_catalog_json()))));
}

TEST(Catalog, MalformedEntriesAreRejected) {
  json j = json::parse(standard_catalog_json());
  json bad = j;
  bad["spaces"][0]["levi"] = json::array({7});
  EXPECT_THROW(catalog_from_json(bad), CatalogError);
  bad = j;
  for (auto& s : bad["spaces"]) {
    if (s["name"] == "R") s["host"] = "nowhere";
  }
  EXPECT_THROW(catalog_from_json(bad), CatalogError);
}

TEST(Catalog, EnvironmentOverride) {
  const auto path = std::filesystem::temp_directory_path() / "roofflop_catalog_test.json";
  json j = json::parse(standard_catalog_json());
  j["triality"] = json::array({"only one"});
  std::ofstream(path) << j.dump();
  ::setenv("ROOFFLOP_CATALOG", path.c_str(), 1);
  const Catalog c = load_standard_catalog();
  ::unsetenv("ROOFFLOP_CATALOG");
  EXPECT_EQ(c.triality.size(), 1u);
  std::filesystem::remove(path);
  ::setenv("ROOFFLOP_CATALOG", "/nonexistent/catalog.json", 1);
  EXPECT_THROW(load_standard_catalog(), CatalogError);
  ::unsetenv("ROOFFLOP_CATALOG");
}

TEST(Restrict, LineBundlesFollowTheLineMap) {
  const Catalog& c = standard_catalog();
  EXPECT_EQ(print_expr(restrict(c, parse_expr("O(2)"), "S_plus", "E_D4")), "O(2,0)");
  EXPECT_EQ(print_expr(restrict(c, parse_expr("O(2)"), "S_minus", "E_D4")), "O(0,2)");
  EXPECT_EQ(print_expr(restrict(c, parse_expr("O(1)"), "Q6", "Q5")), "O(1)");
  EXPECT_EQ(print_expr(restrict(c, parse_expr("O(-1)"), "OGr37", "R")), "O(0,-1)");
}

TEST(Restrict, SymbolsAreRenamed) {
  const Catalog& c = standard_catalog();
  EXPECT_EQ(print_expr(restrict(c, parse_expr("S+(1)"), "Q6", "Q5")), "S(1)");
  EXPECT_EQ(print_expr(restrict(c, parse_expr("V^v(1)"), "OGr37", "R")), "G'^v(0,1)");
  EXPECT_EQ(print_expr(restrict(c, parse_expr("U+^v(-2)"), "S_plus", "E_D4")), "U+^v(-2,0)");
  EXPECT_EQ(print_expr(restrict(c, parse_expr("EE[1]"), "FlagB3", "R")), "EE[1]");
}

TEST(Restrict, MissingRouteOrSymbol) {
  const Catalog& c = standard_catalog();
  EXPECT_THROW(restrict(c, parse_expr("O"), "Q5", "Q6"), CatalogError);
  EXPECT_THROW(restrict(c, parse_expr("G"), "S_plus", "E_D4"), CatalogError);
  EXPECT_EQ(restrict(c, parse_expr("V"), "E_D4", "E_D4"), parse_expr("V"));
}
