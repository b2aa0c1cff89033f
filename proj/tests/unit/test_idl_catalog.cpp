#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "surface/error.hpp"
#include "surface/idl_catalog.hpp"

using namespace surface;
using namespace surface::idl;

TEST_CASE("readonly attribute yields only a getter") {
  const auto defs = parse_webidl("interface BatteryManager { readonly attribute boolean charging; };");
  REQUIRE(defs.size() == 1);
  CHECK(defs[0].name == "BatteryManager");
  REQUIRE(defs[0].members.size() == 1);
  CHECK(defs[0].members[0].kind == MemberKind::attribute_get);
  CHECK(defs[0].members[0].name == "charging");
  CHECK(defs[0].members[0].is_readonly);
  CHECK(defs[0].members[0].type == "boolean");
}

TEST_CASE("writable attribute yields getter and setter") {
  const auto defs = parse_webidl("interface GainNode { attribute long channelCount; };");
  REQUIRE(defs[0].members.size() == 2);
  CHECK(defs[0].members[0].kind == MemberKind::attribute_get);
  CHECK(defs[0].members[1].kind == MemberKind::attribute_set);
  CHECK(defs[0].members[1].name == "channelCount");
}

TEST_CASE("empty document parses to nothing") {
  CHECK(parse_webidl("").empty());
  CHECK(parse_webidl("  // only a comment\n/* and a block */ ").empty());
}

TEST_CASE("operations, constructors, inheritance and extended attributes") {
  const auto defs = parse_webidl(R"(
    [Exposed=Window, LegacyUnenumerableNamedProperties]
    interface AudioContext : BaseAudioContext {
      constructor(optional AudioContextOptions contextOptions = {});
      [NewObject] GainNode createGain();
      Promise<void> close();
      undefined setSinkId((DOMString or AudioSinkOptions) sinkId, sequence<long>... rest);
      readonly attribute double baseLatency;
    };
    partial interface AudioContext { attribute EventHandler onstatechange; };
  )");
  REQUIRE(defs.size() == 2);
  CHECK(defs[0].parent == std::optional<std::string>("BaseAudioContext"));
  CHECK_FALSE(defs[0].is_partial);
  CHECK(defs[1].is_partial);
  const auto& m = defs[0].members;
  REQUIRE(m.size() == 5);
  CHECK(m[0].kind == MemberKind::constructor);
  CHECK(m[0].name == "constructor");
  CHECK(m[0].arguments == "optional AudioContextOptions contextOptions = {}");
  CHECK(m[1].name == "createGain");
  CHECK(m[1].type == "GainNode");
  CHECK(m[2].type == "Promise<void>");
  CHECK(m[3].arguments == "(DOMString or AudioSinkOptions) sinkId, sequence<long>... rest");
}

TEST_CASE("syntax errors report line and column") {
  try {
    parse_webidl("interface A {\n  attribute long;\n};");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_webidl("interface A { void f() };"), ParseError);
  CHECK_THROWS_AS(parse_webidl("interface A { void f();"), ParseError);
  CHECK_THROWS_AS(parse_webidl("interface { };"), ParseError);
  CHECK_THROWS_AS(parse_webidl("interface A { } "), ParseError);
  CHECK_THROWS_AS(parse_webidl("interface A { void f(; };"), ParseError);
  CHECK_THROWS_AS(parse_webidl("interface A { /* open"), ParseError);
  CHECK_THROWS_AS(parse_webidl("interface A { void f(); }; @"), ParseError);
  CHECK_THROWS_AS(parse_webidl("partial interface A : B { };"), ParseError);
}

TEST_CASE("duplicate members and unknown keywords are rejected") {
  CHECK_THROWS_WITH(parse_webidl("interface A { void f(); long f(); };"), doctest::Contains("duplicate member 'f'"));
  CHECK_THROWS_WITH(parse_webidl("interface A { attribute long x; readonly attribute long x; };"),
                    doctest::Contains("duplicate member"));
  CHECK_THROWS_WITH(parse_webidl("dictionary D { long x; };"), doctest::Contains("unknown keyword 'dictionary'"));
  CHECK_THROWS_WITH(parse_webidl("callback F = void ();"), doctest::Contains("unknown keyword 'callback'"));
  CHECK_THROWS_WITH(parse_webidl("interface A { static void f(); };"), doctest::Contains("unknown keyword 'static'"));
  CHECK_THROWS_WITH(parse_webidl("interface A { getter any item(long i); };"), doctest::Contains("unknown keyword"));
  CHECK_THROWS_WITH(parse_webidl("partial dictionary D { };"), doctest::Contains("unknown keyword 'dictionary'"));
  // The same name in different blocks is fine at parse time.
  CHECK(parse_webidl("interface A { void f(); }; partial interface A { void g(); };").size() == 2);
}

TEST_CASE("serialize then parse is the identity") {
  const std::string src = R"(interface Console {
  undefined log(any... data);
  undefined timeline(optional DOMString label);
};
partial interface Console {
  readonly attribute long depth;
  attribute DOMString? prefix;
  constructor();
};
)";
  const auto defs = parse_webidl(src);
  const auto text = serialize_webidl(defs);
  CHECK(parse_webidl(text) == defs);
  CHECK(serialize_webidl(parse_webidl(text)) == text);
}

TEST_CASE("randomized IDL: round trip and readonly never yields a setter") {
  std::mt19937_64 rng(20240611);
  for (int round = 0; round < 200; ++round) {
    const auto defs = testing::random_idl(rng, 1 + round % 7);
    const auto text = serialize_webidl(defs);
    const auto parsed = parse_webidl(text);
    REQUIRE(parsed == defs);
    StandardMapping mapping;
    for (const auto& d : parsed) mapping[d.name] = StandardId{"Std " + d.name, "S" + d.name.substr(5)};
    const auto catalog = build_catalog(parsed, mapping);
    for (const auto& d : parsed) {
      for (const auto& m : d.members) {
        if (m.kind == MemberKind::attribute_get && m.is_readonly) {
          CHECK(catalog.assignments().count(FeatureId{d.name, m.name, MemberKind::attribute_set}) == 0);
        }
      }
    }
  }
}

namespace {

StandardMapping console_battery_mapping() {
  StandardMapping m;
  m["BatteryManager"] = {"Battery Status API", "BA"};
  m["Console"] = {"Console API", "CO"};
  m["Gamepad"] = {"Gamepad", "GP"};
  return m;
}

}  // namespace

TEST_CASE("build_catalog assigns members to their interface's standard") {
  const auto defs = parse_webidl(R"(
    interface BatteryManager { readonly attribute boolean charging; };
    interface Console { undefined log(any... data); undefined timeline(); };
  )");
  const auto catalog = build_catalog(defs, console_battery_mapping());
  CHECK(catalog.standard_of({"BatteryManager", "charging", MemberKind::attribute_get}) == "BA");
  CHECK(features_of(catalog, "BA") == std::set<FeatureId>{{"BatteryManager", "charging", MemberKind::attribute_get}});
  CHECK(features_of(catalog, "CO") == std::set<FeatureId>{{"Console", "log", MemberKind::method},
                                                          {"Console", "timeline", MemberKind::method}});
  // A mapped standard with no defined interface is present and empty.
  CHECK(catalog.has_standard("GP"));
  CHECK(features_of(catalog, "GP").empty());
  CHECK_THROWS_WITH(features_of(catalog, "NOPE"), doctest::Contains("unknown standard"));
}

TEST_CASE("partial interfaces merge under one standard") {
  const auto defs = parse_webidl(R"(
    partial interface Console { undefined timeline(); };
    interface Console { undefined log(); };
    partial interface Console { readonly attribute long depth; undefined log(); };
  )");
  const auto catalog = build_catalog(defs, console_battery_mapping());
  CHECK(features_of(catalog, "CO").size() == 3);
}

TEST_CASE("build_catalog errors") {
  CHECK_THROWS_WITH(build_catalog(parse_webidl("interface Unknown { void f(); };"), console_battery_mapping()),
                    doctest::Contains("no standard assignment"));
  CHECK_THROWS_WITH(build_catalog(parse_webidl("interface Console { void f(); }; partial interface Console { "
                                               "attribute long f; };"),
                                  console_battery_mapping()),
                    doctest::Contains("conflicting"));
  CHECK_THROWS_WITH(build_catalog(parse_webidl("interface Console { attribute long x; }; partial interface Console { "
                                               "readonly attribute long x; };"),
                                  console_battery_mapping()),
                    doctest::Contains("conflicting"));
  CHECK_THROWS_WITH(
      build_catalog(parse_webidl("interface Console { }; interface Console { };"), console_battery_mapping()),
      doctest::Contains("more than once"));
}

TEST_CASE("partition property holds on a catalog") {
  std::mt19937_64 rng(7);
  const auto defs = testing::random_idl(rng, 12);
  StandardMapping mapping;
  for (const auto& d : defs) mapping[d.name] = StandardId{"Std" + std::to_string(d.name.size() % 3), "S" + std::to_string(d.name.size() % 3)};
  const auto catalog = build_catalog(defs, mapping);
  std::set<FeatureId> seen;
  std::size_t total = 0;
  for (const auto& s : catalog.abbreviations()) {
    const auto fs = features_of(catalog, s);
    for (const auto& f : fs) CHECK(seen.insert(f).second);
    total += fs.size();
  }
  CHECK(total == catalog.assignments().size());
}

TEST_CASE("standard mapping CSV") {
  const auto m = parse_standard_mapping("interface,standard_name,abbreviation\nBatteryManager,Battery Status API,BA\n");
  CHECK(m.at("BatteryManager").abbreviation == "BA");
  CHECK_THROWS_WITH(parse_standard_mapping("interface,standard_name,abbreviation\nA,X,X1\nA,X,X1\n"),
                    doctest::Contains("listed twice"));
  CHECK_THROWS_WITH(parse_standard_mapping("interface,standard_name,abbreviation\nA,X,X1\nB,Y,X1\n"),
                    doctest::Contains("abbreviation 'X1'"));
  CHECK_THROWS_AS(parse_standard_mapping("interface,standard_name\nA,X\n"), ValidationError);
  CHECK_THROWS_AS(parse_standard_mapping("interface,standard_name,abbreviation\n1A,X,Y\n"), ParseError);
}

TEST_CASE("catalog JSON export round-trips") {
  const auto catalog = build_catalog(parse_webidl("interface BatteryManager { readonly attribute boolean charging; };"),
                                     console_battery_mapping());
  const auto json = catalog.to_json();
  CHECK(json.find("\"standards\"") < json.find("\"features\""));
  CHECK(json.find(R"("kind": "attribute_get")") != std::string::npos);
  const auto back = FeatureCatalog::from_json(json);
  CHECK(back.to_json() == json);
  CHECK(back.assignments() == catalog.assignments());
  CHECK_THROWS_AS(FeatureCatalog::from_json("{"), ValidationError);
  CHECK_THROWS_AS(FeatureCatalog::from_json(R"({"standards":[],"features":[{"interface":"A","member":"b","kind":"method","standard_abbrev":"Z"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(FeatureCatalog::from_json(R"({"standards":[{"name":"a","abbrev":"A"},{"name":"b","abbrev":"A"}],"features":[]})"),
                  ValidationError);
}
