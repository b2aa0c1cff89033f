#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "surface/callgraph_eloc.hpp"
#include "surface/error.hpp"
#include "surface/io.hpp"

using namespace surface;
using namespace surface::graph;

namespace {

const std::string kFixtures = SURFACE_LEDGER_FIXTURES_DIR;

CallGraph battery() {
  return load_callgraph(read_file(kFixtures + "/battery/nodes.csv"), read_file(kFixtures + "/battery/edges.csv"));
}

const std::vector<std::string> kBatteryStandards = {"BA", "GEO"};

FunctionNode impl(std::string id, std::uint64_t loc = 1) {
  return {std::move(id), "", FunctionKind::implementation, loc, std::nullopt, false};
}

FunctionNode binding(std::string id, std::string standard) {
  return {std::move(id), "", FunctionKind::binding, 0, std::move(standard), false};
}

}  // namespace

TEST_CASE("battery fixture reproduces the pruning outcome") {
  const auto g = battery();
  CHECK(g.size() == 8);
  CHECK(exclusive_functions(g, "BA", kBatteryStandards) ==
        std::set<std::string>{"I_charging", "I_chargingTime", "I_dischargingTime"});
  CHECK(exclusive_loc(g, "BA", kBatteryStandards) == 60);
  CHECK(exclusive_functions(g, "GEO", kBatteryStandards).empty());
  CHECK(testing::oracle_exclusive(g, "BA") == exclusive_functions(g, "BA", kBatteryStandards));
  CHECK(testing::oracle_exclusive_zero_indegree(g, "BA") == exclusive_functions(g, "BA", kBatteryStandards));

  const auto table = eloc_table(g, kBatteryStandards);
  REQUIRE(table.size() == 2);
  CHECK(table[0].standard == "BA");
  CHECK(table[0].eloc == 60);
  CHECK(table[0].eloc_share == 1.0);
  CHECK(table[1].eloc_share == 0.0);
}

TEST_CASE("load_callgraph validation") {
  CHECK(CallGraph::build({}, {}).size() == 0);
  CHECK_THROWS_WITH(CallGraph::build({impl("a")}, {{"a", "b"}}), doctest::Contains("dangling edge"));
  CHECK_THROWS_WITH(CallGraph::build({impl("a"), impl("a")}, {}), doctest::Contains("duplicate node id"));
  auto b = binding("b", "S");
  b.standard.reset();
  CHECK_THROWS_WITH(CallGraph::build({b}, {}), doctest::Contains("has no standard"));
  auto i = impl("i");
  i.standard = "S";
  CHECK_THROWS_WITH(CallGraph::build({i}, {}), doctest::Contains("has a standard"));
  auto tp = binding("t", "S");
  tp.third_party = true;
  CHECK_THROWS_WITH(CallGraph::build({tp}, {}), doctest::Contains("third-party"));
  CHECK_THROWS_AS(parse_nodes_csv("id,display_name,kind,loc,standard\na,,binary,1,\n"), ParseError);
  CHECK_THROWS_AS(parse_nodes_csv("id,display_name,kind,loc,standard\na,,implementation,-3,\n"), ParseError);
  CHECK_THROWS_AS(parse_nodes_csv("id,display_name,kind\na,,implementation\n"), ValidationError);
}

TEST_CASE("JSON-lines nodes match CSV nodes") {
  const auto csv = parse_nodes_csv(read_file(kFixtures + "/battery/nodes.csv"));
  std::string jsonl;
  for (const auto& n : csv) {
    jsonl += "{\"id\":\"" + n.id + "\",\"display_name\":\"" + n.display_name + "\",\"kind\":\"" +
             std::string(to_string(n.kind)) + "\",\"loc\":" + std::to_string(n.loc) + ",\"standard\":" +
             (n.standard ? "\"" + *n.standard + "\"" : std::string("null")) + ",\"third_party\":false}\n";
  }
  CHECK(parse_nodes_jsonl(jsonl) == csv);
  const auto g = load_callgraph(jsonl, read_file(kFixtures + "/battery/edges.csv"));
  CHECK(exclusive_loc(g, "BA", kBatteryStandards) == 60);
  CHECK_THROWS_AS(parse_nodes_jsonl("{\"id\":\"a\"}\n"), ParseError);
}

TEST_CASE("standards without bindings") {
  const auto g = CallGraph::build({binding("b", "S"), impl("x")}, {});
  const std::vector<std::string> known = {"S", "T"};
  CHECK(exclusive_functions(g, "S", known).empty());  // bindings call nothing
  CHECK(exclusive_functions(g, "T", known).empty());  // known, no bindings
  CHECK(exclusive_loc(g, "T", known) == 0);
  CHECK_THROWS_WITH(exclusive_functions(g, "U", known), doctest::Contains("unknown standard"));
  CHECK_THROWS_WITH(eloc_table(g, std::vector<std::string>{"T"}), doctest::Contains("not in the catalog"));
}

TEST_CASE("zero in-degree implementation node is never exclusive") {
  const auto g = CallGraph::build({impl("dead", 9)}, {});
  const std::vector<std::string> known = {"S"};
  CHECK(exclusive_functions(g, "S", known).empty());
  CHECK(testing::oracle_exclusive(g, "S").empty());
  const auto table = eloc_table(g, known);
  CHECK(table[0].eloc_share == 0.0);
}

TEST_CASE("self edges and owned cycles") {
  // b -> x <-> y, y -> y : the cycle is entered only from b.
  const auto g = CallGraph::build({binding("b", "S"), impl("x", 2), impl("y", 3)},
                                  {{"b", "x"}, {"x", "y"}, {"y", "x"}, {"y", "y"}});
  const std::vector<std::string> known = {"S"};
  CHECK(exclusive_functions(g, "S", known) == std::set<std::string>{"x", "y"});
  CHECK(exclusive_loc(g, "S", known) == 5);
}

TEST_CASE("orphan cycle calling into the candidate set expels it") {
  // o1 <-> o2 has no entry from any binding but calls x.
  const auto g = CallGraph::build({binding("b", "S"), impl("x"), impl("o1"), impl("o2")},
                                  {{"b", "x"}, {"o1", "o2"}, {"o2", "o1"}, {"o2", "x"}});
  const std::vector<std::string> known = {"S"};
  CHECK(exclusive_functions(g, "S", known).empty());
  CHECK(testing::oracle_exclusive(g, "S").empty());
  // The zero in-degree formulation misses this case, which is why the oracle
  // also treats unreachable nodes as external roots.
  CHECK(testing::oracle_exclusive_zero_indegree(g, "S") == std::set<std::string>{"x"});
}

TEST_CASE("calls through another standard's binding do not propagate") {
  // a -> T's binding -> y: y belongs to T even though S reaches the binding.
  const auto g = CallGraph::build({binding("a", "S"), binding("t", "T"), impl("x"), impl("y")},
                                  {{"a", "x"}, {"x", "t"}, {"t", "y"}});
  const std::vector<std::string> known = {"S", "T"};
  CHECK(exclusive_functions(g, "S", known) == std::set<std::string>{"x"});
  CHECK(exclusive_functions(g, "T", known) == std::set<std::string>{"y"});
}

TEST_CASE("third-party lines are excluded unless requested") {
  auto tp = impl("lib", 1000);
  tp.third_party = true;
  const auto g = CallGraph::build({binding("b", "S"), impl("x", 10), tp}, {{"b", "x"}, {"x", "lib"}});
  const std::vector<std::string> known = {"S"};
  CHECK(exclusive_functions(g, "S", known).count("lib") == 1);
  CHECK(exclusive_loc(g, "S", known) == 10);
  PruneOptions with;
  with.include_third_party = true;
  CHECK(exclusive_loc(g, "S", known, with) == 1010);
}

TEST_CASE("random graphs: oracle equivalence, disjointness, no bindings") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 60; ++round) {
    testing::RandomGraphSpec spec;
    spec.max_nodes = 120;
    spec.standards = 3 + round % 3;
    const auto g = testing::random_graph(rng, spec);
    const auto names = testing::standard_names(spec.standards);
    std::set<std::string> seen;
    for (const auto& s : names) {
      const auto e = exclusive_functions(g, s, names);
      REQUIRE(e == testing::oracle_exclusive(g, s));
      for (const auto& id : e) {
        CHECK(seen.insert(id).second);
        CHECK(g.node(*g.index_of(id)).kind == FunctionKind::implementation);
      }
    }
  }
}

TEST_CASE("random DAGs: the zero in-degree oracle agrees") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    testing::RandomGraphSpec spec;
    spec.acyclic = true;
    spec.max_nodes = 100;
    const auto g = testing::random_graph(rng, spec);
    for (const auto& s : testing::standard_names(spec.standards)) {
      CHECK(exclusive_functions(g, s, testing::standard_names(spec.standards)) ==
            testing::oracle_exclusive_zero_indegree(g, s));
    }
  }
}

TEST_CASE("monotone shrinkage when an outside caller is added") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    testing::RandomGraphSpec spec;
    spec.max_nodes = 80;
    const auto g = testing::random_graph(rng, spec);
    const auto names = testing::standard_names(spec.standards);
    const auto& s = names[round % names.size()];
    const auto before = exclusive_functions(g, s, names);
    if (before.empty()) continue;
    std::vector<std::string> outside;
    for (const auto& n : g.nodes()) {
      const bool own_binding = n.kind == FunctionKind::binding && *n.standard == s;
      if (!own_binding && !before.count(n.id)) outside.push_back(n.id);
    }
    if (outside.empty()) continue;
    std::vector<std::string> inside(before.begin(), before.end());
    auto edges = g.edges();
    edges.push_back({outside[rng() % outside.size()], inside[rng() % inside.size()]});
    const auto g2 = CallGraph::build(g.nodes(), edges);
    const auto after = exclusive_functions(g2, s, names);
    CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
    CHECK(after.size() < before.size());
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("worklist order does not change the result") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 10; ++round) {
    const auto g = testing::random_graph(rng, {});
    const auto names = testing::standard_names(3);
    for (const auto& s : names) {
      const auto reference = exclusive_functions(g, s, names);
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PruneOptions o;
        o.worklist_seed = seed * 7919 + round;
        CHECK(exclusive_functions(g, s, names, o) == reference);
      }
    }
  }
}

TEST_CASE("eloc table shares and CSV round trip") {
  std::mt19937_64 rng(11);
  const auto g = testing::random_graph(rng, {});
  const auto names = testing::standard_names(3);
  const auto table = eloc_table(g, names);
  double sum = 0;
  std::uint64_t total = 0;
  for (const auto& r : table) {
    sum += r.eloc_share;
    total += r.eloc;
    CHECK(r.eloc_share >= 0.0);
    CHECK(r.eloc_share <= 1.0);
  }
  if (total > 0) CHECK(sum == doctest::Approx(1.0));
  const auto back = parse_eloc_csv(eloc_table_csv(table));
  REQUIRE(back.size() == table.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].eloc == table[i].eloc);
    CHECK(back[i].eloc_share == table[i].eloc_share);
  }
  CHECK(eloc_table_json(table).front() == '[');
}
