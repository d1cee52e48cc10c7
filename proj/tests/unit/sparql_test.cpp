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

#include <algorithm>
#include <map>
#include <random>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "json.hpp"
#include "property_sparql.hpp"
#include "rdf/turtle.hpp"
#include "sparql/query.hpp"

using namespace seloc;
using rdf::Term;
using testutil::sparqlprop::run;
using testutil::sparqlprop::Solution;
using testutil::sparqlprop::solutions;

namespace {

rdf::Dataset datasetOf(const std::string& turtle) {
  rdf::Dataset ds;
  auto g = rdf::parseTurtle(turtle);
  g.setName("urn:g");
  ds.putGraph(g);
  return ds;
}

std::string codeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

const char* kPeople = R"(
  @prefix ex: <http://example.org/> .
  ex:alice ex:age 30 ; ex:knows ex:bob , ex:carol ; ex:name "Alice" .
  ex:bob ex:age 25 ; ex:knows ex:carol ; ex:name "Bob" .
  ex:carol ex:age 35 ; ex:name "Carol" .
  ex:dave ex:name "Dave" .
)";

}  // namespace

TEST(Sparql, BasicJoinWithFilter) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, R"(PREFIX ex: <http://example.org/>
    SELECT ?a ?b WHERE { ?a ex:knows ?b . ?b ex:age ?age . FILTER (?age > 26) } ORDER BY ?a ?b)");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0]->value(), "http://example.org/alice");
  EXPECT_EQ(t.rows[0][1]->value(), "http://example.org/carol");
  EXPECT_EQ(t.rows[1][0]->value(), "http://example.org/bob");
}

TEST(Sparql, OrderLimitOffsetDistinct) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, "PREFIX ex: <http://example.org/> SELECT ?age WHERE { ?p ex:age ?age } ORDER BY DESC(?age) "
                   "LIMIT 2 OFFSET 1");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0]->value(), "30");
  EXPECT_EQ(t.rows[1][0]->value(), "25");
  auto d = run(ds, "PREFIX ex: <http://example.org/> SELECT DISTINCT ?a WHERE { ?a ex:knows ?b }");
  EXPECT_EQ(d.rows.size(), 2u);
}

TEST(Sparql, SelectStarProjectsInOrderOfAppearance) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, "PREFIX ex: <http://example.org/> SELECT * WHERE { ?x ex:knows ?y . ?y ex:age ?z }");
  EXPECT_EQ(t.vars, (std::vector<std::string>{"x", "y", "z"}));
}

TEST(Sparql, NotExistsExcludesMatches) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, "PREFIX ex: <http://example.org/> SELECT ?p WHERE { ?p ex:name ?n . "
                   "FILTER NOT EXISTS { ?p ex:age ?a } }");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0]->value(), "http://example.org/dave");
}

TEST(Sparql, BooleanConnectives) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, "PREFIX ex: <http://example.org/> SELECT ?p WHERE { ?p ex:age ?a . "
                   "FILTER (?a < 26 || (?a > 32 && !(?a = 40))) } ORDER BY ?p");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0]->value(), "http://example.org/bob");
  EXPECT_EQ(t.rows[1][0]->value(), "http://example.org/carol");
}

TEST(Sparql, TypeErrorsDropRows) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, "PREFIX ex: <http://example.org/> SELECT ?p WHERE { ?p ex:name ?n . FILTER (?n > 3) }");
  EXPECT_TRUE(t.rows.empty());
}

TEST(Sparql, DefaultPrefixesCoverTheSchema) {
  EXPECT_NO_THROW(sparql::parseQuery("SELECT ?nn WHERE { ?nn a nnet:NeuralNetwork ; s3n:hasProcedureFeature ?x }",
                                     vocab::defaultPrefixes()));
}

TEST(Sparql, ErrorsNameTheProblem) {
  EXPECT_EQ(codeOf([] { sparql::parseQuery("SELECT ?x WHERE { ?x nope:p ?y }"); }), "UnknownPrefixError");
  EXPECT_EQ(codeOf([] { sparql::parseQuery("SELECT ?x WHERE { ?x <urn:p> ?y OPTIONAL { ?x <urn:q> ?z } }"); }),
            "UnsupportedFeatureError");
  EXPECT_EQ(codeOf([] { sparql::parseQuery("SELECT ?x WHERE { ?x <urn:p>/<urn:q> ?y }"); }),
            "UnsupportedFeatureError");
  EXPECT_EQ(codeOf([] { sparql::parseQuery("SELECT ?x WHERE { ?x <urn:p> ?y "); }), "SyntaxError");
  EXPECT_EQ(codeOf([] { sparql::parseQuery("SELECT ?x WHERE { ?x <urn:p> ?y FILTER(STRLEN(?y) > 2) }"); }),
            "UnsupportedFeatureError");
}

TEST(Sparql, ResultsJsonShape) {
  auto ds = datasetOf(kPeople);
  auto t = run(ds, "PREFIX ex: <http://example.org/> SELECT ?p ?n ?a WHERE { ?p ex:name ?n . ?p ex:age ?a } "
                   "ORDER BY ?a LIMIT 1");
  auto doc = nlohmann::json::parse(sparql::toResultsJson(t));
  EXPECT_EQ(doc["head"]["vars"], nlohmann::json({"p", "n", "a"}));
  const auto& b = doc["results"]["bindings"][0];
  EXPECT_EQ(b["p"]["type"], "uri");
  EXPECT_EQ(b["n"], nlohmann::json({{"type", "literal"}, {"value", "Bob"}}));
  EXPECT_EQ(b["a"]["datatype"], std::string(rdf::xsd::kInteger));
}

TEST(SparqlProperty, RandomBgpsAgreeWithOracles) {
  auto r = testutil::sparqlprop::runProperty(1337, 600);
  EXPECT_EQ(r.failure, "");
  EXPECT_EQ(r.cases, 600);
  EXPECT_GT(r.nonEmpty, 100);  // the generator must exercise real joins
}
