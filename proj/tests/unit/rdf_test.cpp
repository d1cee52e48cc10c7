// Copyright 2026 The seloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "rdf/store.hpp"
#include "rdf/turtle.hpp"
#include "test_util.hpp"

using namespace seloc;
using rdf::Term;

namespace {

std::string codeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Term, RejectsRelativeIri) {
  EXPECT_EQ(codeOf([] { Term::iri("relative/path"); }), "InvalidIriError");
  EXPECT_NO_THROW(Term::iri("urn:x:y"));
}

TEST(Term, ValidatesNumericLexicalForms) {
  EXPECT_EQ(codeOf([] { Term::literal("12a", std::string(rdf::xsd::kInteger)); }), "InvalidLiteralError");
  EXPECT_EQ(Term::number(94).datatype(), rdf::xsd::kInteger);
  EXPECT_EQ(Term::number(0.5).datatype(), rdf::xsd::kDecimal);
  EXPECT_EQ(*rdf::numericValue(Term::literal("1.5E2", std::string(rdf::xsd::kDouble))), 150.0);
}

TEST(Term, NumericComparisonPromotes) {
  auto c = rdf::compareNumeric(Term::integer(94), Term::literal("94.0", std::string(rdf::xsd::kDecimal)));
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, std::partial_ordering::equivalent);
}

TEST(Graph, RejectsLiteralSubject) {
  rdf::Graph g;
  EXPECT_EQ(codeOf([&] { g.insert(Term::literal("x"), Term::iri("urn:p"), Term::iri("urn:o")); }),
            "InvalidTripleError");
}

TEST(Graph, IsomorphismIgnoresBlankLabels) {
  rdf::Graph a, b;
  a.insert(Term::iri("urn:s"), Term::iri("urn:p"), Term::blank("x"));
  a.insert(Term::blank("x"), Term::iri("urn:q"), Term::literal("v"));
  b.insert(Term::iri("urn:s"), Term::iri("urn:p"), Term::blank("other"));
  b.insert(Term::blank("other"), Term::iri("urn:q"), Term::literal("v"));
  EXPECT_TRUE(rdf::isomorphic(a, b));
  b.insert(Term::blank("other"), Term::iri("urn:q"), Term::literal("w"));
  EXPECT_FALSE(rdf::isomorphic(a, b));
}

TEST(Graph, IsomorphismDistinguishesBlankStructure) {
  // Two disjoint 2-cycles vs one 4-cycle: same degree sequence.
  rdf::Graph a, b;
  const Term p = Term::iri("urn:p");
  a.insert(Term::blank("a"), p, Term::blank("b"));
  a.insert(Term::blank("b"), p, Term::blank("a"));
  a.insert(Term::blank("c"), p, Term::blank("d"));
  a.insert(Term::blank("d"), p, Term::blank("c"));
  b.insert(Term::blank("a"), p, Term::blank("b"));
  b.insert(Term::blank("b"), p, Term::blank("c"));
  b.insert(Term::blank("c"), p, Term::blank("d"));
  b.insert(Term::blank("d"), p, Term::blank("a"));
  EXPECT_FALSE(rdf::isomorphic(a, b));
}

TEST(Dataset, UnionMatchAcrossGraphs) {
  rdf::Dataset ds;
  ds.insert("urn:g1", rdf::Triple::make(Term::iri("urn:s"), Term::iri("urn:p"), Term::iri("urn:o")));
  ds.insert("urn:g2", rdf::Triple::make(Term::iri("urn:s"), Term::iri("urn:p"), Term::iri("urn:o")));
  ds.insert("urn:g2", rdf::Triple::make(Term::iri("urn:s"), Term::iri("urn:p"), Term::iri("urn:o2")));
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.match(Term::iri("urn:s"), std::nullopt, std::nullopt).size(), 2u);
  ds.removeGraph("urn:g2");
  EXPECT_EQ(ds.count(std::nullopt, std::nullopt, std::nullopt), 1u);
}

TEST(Turtle, ParsesCommonSyntax) {
  const char* text = R"(
    @prefix ex: <http://example.org/> .
    PREFIX schema: <https://schema.org/>
    ex:a a ex:Thing ;
      schema:name "A"@en , "B" ;
      ex:count 42 ;
      ex:ratio 0.5 ;
      ex:flag true ;
      ex:child [ ex:name 'inner' ] ;
      ex:long """multi
line""" .
    _:n ex:p <http://example.org/b> .
  )";
  auto g = rdf::parseTurtle(text);
  EXPECT_EQ(g.size(), 10u);
  EXPECT_TRUE(g.contains(rdf::Triple::make(Term::iri("http://example.org/a"), Term::iri("http://example.org/count"),
                                           Term::integer(42))));
  EXPECT_TRUE(g.contains(rdf::Triple::make(Term::iri("http://example.org/a"), Term::iri("https://schema.org/name"),
                                           Term::literal("A", "", "en"))));
}

TEST(Turtle, ResolvesRelativeIrisAgainstBase) {
  auto g = rdf::parseTurtle("<thing> <p> <#frag> .", std::string("http://example.org/dir/"));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.begin()->subject.value(), "http://example.org/dir/thing");
}

TEST(Turtle, SyntaxErrorCarriesPosition) {
  try {
    rdf::parseTurtle("@prefix ex: <http://e/> .\nex:a ex:b .\n");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Turtle, UnknownPrefix) {
  EXPECT_EQ(codeOf([] { rdf::parseTurtle("nope:a nope:b nope:c ."); }), "UnknownPrefixError");
}

TEST(Turtle, CollectionsAreRejected) {
  EXPECT_EQ(codeOf([] { rdf::parseTurtle("<urn:a> <urn:b> ( 1 2 ) ."); }), "SyntaxError");
}

TEST(Turtle, SerializationIsDeterministic) {
  std::mt19937 rng(7);
  auto g = testutil::randomGraph(rng);
  rdf::PrefixMap prefixes{{"ex", "http://example.org/"}};
  EXPECT_EQ(rdf::serializeTurtle(g, prefixes), rdf::serializeTurtle(g, prefixes));
}

TEST(Turtle, FixturesRoundTrip) { EXPECT_EQ(testutil::fixturesRoundTripFailure(), ""); }

TEST(TurtleProperty, RandomGraphsRoundTrip) {
  auto r = testutil::runTurtleRoundTrip(20230509, 600);
  EXPECT_EQ(r.failure, "");
  EXPECT_EQ(r.cases, 600);
  EXPECT_GT(r.withBlankNodes, 300);
  EXPECT_GT(r.withTypedLiterals, 300);
}

TEST(Store, SaveLoadRoundTrip) {
  testutil::TempDir dir;
  std::mt19937 rng(3);
  rdf::Dataset ds;
  for (int i = 0; i < 3; ++i) {
    auto g = testutil::randomGraph(rng);
    g.setName("urn:seloc:graph:g" + std::to_string(i));
    ds.putGraph(g);
  }
  rdf::saveDataset(ds, dir.path());
  auto loaded = rdf::loadDataset(dir.path());
  ASSERT_EQ(loaded.graphNames(), ds.graphNames());
  for (const auto& name : ds.graphNames()) EXPECT_TRUE(rdf::isomorphic(*ds.graph(name), *loaded.graph(name)));
}

TEST(Store, MissingFileIsCorrupt) {
  testutil::TempDir dir;
  rdf::Dataset ds;
  ds.insert("urn:g", rdf::Triple::make(Term::iri("urn:s"), Term::iri("urn:p"), Term::iri("urn:o")));
  rdf::saveDataset(ds, dir.path());
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    if (e.path().extension() == ".ttl") std::filesystem::remove(e.path());
  }
  EXPECT_EQ(codeOf([&] { rdf::loadDataset(dir.path()); }), "CorruptStoreError");
}

TEST(Store, GarbledManifestIsCorrupt) {
  testutil::TempDir dir;
  std::ofstream(dir.path() / "manifest.json") << "{not json";
  EXPECT_EQ(codeOf([&] { rdf::loadDataset(dir.path()); }), "CorruptStoreError");
}
