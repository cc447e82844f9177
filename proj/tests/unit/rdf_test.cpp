#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "capgen/rdf/isomorphism.hpp"
#include "capgen/rdf/turtle.hpp"
#include "capgen/rdf/vocab.hpp"
#include "support/brute_force_iso.hpp"
#include "support/random_graph.hpp"

using namespace capgen::rdf;
namespace vocab = capgen::vocab;

namespace {

Graph parse_ok(std::string_view doc) {
  auto r = parse_turtle(doc);
  EXPECT_TRUE(r.ok()) << (r.issues.empty() ? "" : r.issues.front().message);
  return r.graph.value_or(Graph{});
}

}  // namespace

TEST(ParseTurtle, MinimalDocument) {
  Graph g = parse_ok("@prefix ex: <http://e/> . ex:a ex:p ex:b .");
  ASSERT_EQ(count_triples(g), 1u);
  const Triple& t = *g.triples().begin();
  EXPECT_EQ(t.subject, Term::iri("http://e/a"));
  EXPECT_EQ(t.predicate, Term::iri("http://e/p"));
  EXPECT_EQ(t.object, Term::iri("http://e/b"));
  EXPECT_EQ(g.prefixes().at("ex"), "http://e/");
}

TEST(ParseTurtle, EmptyDocumentIsEmptyGraph) {
  auto r = parse_turtle("");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(count_triples(*r.graph), 0u);
  EXPECT_TRUE(parse_turtle("  # only a comment\n").ok());
}

TEST(ParseTurtle, MissingPrefixesReportedPerLabel) {
  auto r = parse_turtle("ex:Cap1 a cask:Capability .");
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.issues.size(), 2u);
  EXPECT_EQ(r.issues[0].category, IssueCategory::MissingPrefix);
  EXPECT_EQ(r.issues[0].offending_token, "ex");
  EXPECT_EQ(r.issues[1].category, IssueCategory::MissingPrefix);
  EXPECT_EQ(r.issues[1].offending_token, "cask");
  EXPECT_EQ(r.issues[1].line, 1);
  EXPECT_EQ(r.issues[1].column, 11);
}

TEST(ParseTurtle, RepeatedUndeclaredPrefixCountsOnce) {
  auto r = parse_turtle("@prefix ex: <http://e/> .\nex:a ex:p cask:X .\nex:b ex:p cask:Y .\n");
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].line, 2);
}

TEST(ParseTurtle, RecoversAndReportsEveryIndependentIssue) {
  const char* doc =
      "@prefix ex: <http://e/> .\n"
      "ex:a ex:p ex:b ex:c .\n"        // malformed: two objects without comma
      "ex:d ex:p \"unterminated .\n"   // bad literal
      "ex:e ex:p <http://bad iri> .\n"  // bad IRI
      "ex:f ex:p ex:g .\n";
  auto r = parse_turtle(doc);
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.issues.size(), 3u);
  EXPECT_EQ(r.issues[0].category, IssueCategory::MalformedStatement);
  EXPECT_EQ(r.issues[0].line, 2);
  EXPECT_EQ(r.issues[1].category, IssueCategory::BadLiteral);
  EXPECT_EQ(r.issues[1].line, 3);
  EXPECT_EQ(r.issues[2].category, IssueCategory::BadIri);
  EXPECT_EQ(r.issues[2].line, 4);
  // The well-formed trailing statement still made it into the partial graph.
  EXPECT_TRUE(r.partial.contains(Triple{Term::iri("http://e/f"), Term::iri("http://e/p"), Term::iri("http://e/g")}));
  for (const auto& issue : r.issues) {
    EXPECT_GE(issue.line, 1);
    EXPECT_GE(issue.column, 1);
  }
}

TEST(ParseTurtle, MissingTerminatorDoesNotSwallowNextPrefix) {
  auto r = parse_turtle("@prefix ex: <http://e/> .\nex:a ex:p ex:b\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\nex:a a owl:Thing .\n");
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].category, IssueCategory::MalformedStatement);
}

TEST(ParseTurtle, DuplicateStatementsCollapse) {
  Graph once = parse_ok("@prefix ex: <http://e/> . ex:a ex:p ex:b .");
  Graph twice = parse_ok("@prefix ex: <http://e/> . ex:a ex:p ex:b . ex:a ex:p ex:b .");
  EXPECT_EQ(once, twice);
}

TEST(ParseTurtle, PrefixRedeclarationLastWins) {
  Graph g = parse_ok("@prefix ex: <http://one/> . @prefix ex: <http://two/> . ex:a ex:p ex:b .");
  EXPECT_EQ(g.triples().begin()->subject.value, "http://two/a");
}

TEST(ParseTurtle, AbbreviatedForms) {
  Graph g = parse_ok(R"(
    @prefix ex: <http://e/> .
    @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
    PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
    ex:s a ex:C ;
      ex:p ex:o1, ex:o2 ;
      ex:q [ ex:r 1 ; ex:t 2.5 ] ;
      ex:list ( 1 -2 3.0e1 ) ;
      ex:flag true ;
      rdfs:label "hi"@en-GB , 'single' , """long "quoted"
text""" ;
      ex:typed "7"^^xsd:integer .
    [] ex:p ex:o .
    [ ex:p ex:z ] .
  )");
  EXPECT_EQ(count_triples(g), 20u);
  Term s = Term::iri("http://e/s");
  EXPECT_EQ(g.types(s), std::set<std::string>{"http://e/C"});
  auto list = g.objects(s, "http://e/list");
  ASSERT_EQ(list.size(), 1u);
  auto items = g.list_items(list.front());
  ASSERT_TRUE(items);
  ASSERT_EQ(items->size(), 3u);
  EXPECT_EQ((*items)[1], Term::literal("-2", vocab::xsd("integer")));
  EXPECT_EQ((*items)[2], Term::literal("3.0e1", vocab::xsd("double")));
  auto labels = g.objects(s, vocab::rdfs("label"));
  EXPECT_EQ(labels.size(), 3u);
  EXPECT_TRUE(std::count(labels.begin(), labels.end(), Term::literal("long \"quoted\"\ntext")));
  EXPECT_TRUE(std::count(labels.begin(), labels.end(), Term::literal("hi", "", "en-GB")));
}

TEST(ParseTurtle, LiteralInvariants) {
  Graph g = parse_ok("@prefix ex: <http://e/> . ex:a ex:p \"x\"@de, \"y\", \"\\u00e9\" .");
  for (const auto& t : g.triples()) {
    ASSERT_TRUE(t.object.is_literal());
    EXPECT_FALSE(!t.object.language.empty() && !t.object.datatype.empty());
  }
  EXPECT_TRUE(g.contains(Triple{Term::iri("http://e/a"), Term::iri("http://e/p"), Term::literal("\xC3\xA9")}));
}

TEST(ParseTurtle, BaseResolution) {
  auto r = parse_turtle("@base <http://x.org/a/b> . <c> <#p> <../d> .");
  ASSERT_TRUE(r.ok());
  const Triple& t = *r.graph->triples().begin();
  EXPECT_EQ(t.subject.value, "http://x.org/a/c");
  EXPECT_EQ(t.predicate.value, "http://x.org/a/b#p");
  EXPECT_EQ(t.object.value, "http://x.org/d");

  auto no_base = parse_turtle("<c> <http://e/p> <http://e/o> .");
  ASSERT_EQ(no_base.issues.size(), 1u);
  EXPECT_EQ(no_base.issues[0].category, IssueCategory::BadIri);

  auto given = parse_turtle("<c> <http://e/p> <http://e/o> .", "http://base.org/dir/");
  ASSERT_TRUE(given.ok());
  EXPECT_EQ(given.graph->triples().begin()->subject.value, "http://base.org/dir/c");
}

TEST(ParseTurtle, IriResolutionReferenceCases) {
  const std::string base = "http://a/b/c/d;p?q";
  EXPECT_EQ(resolve_iri(base, "g"), "http://a/b/c/g");
  EXPECT_EQ(resolve_iri(base, "./g"), "http://a/b/c/g");
  EXPECT_EQ(resolve_iri(base, "g/"), "http://a/b/c/g/");
  EXPECT_EQ(resolve_iri(base, "/g"), "http://a/g");
  EXPECT_EQ(resolve_iri(base, "//g"), "http://g");
  EXPECT_EQ(resolve_iri(base, "?y"), "http://a/b/c/d;p?y");
  EXPECT_EQ(resolve_iri(base, "#s"), "http://a/b/c/d;p?q#s");
  EXPECT_EQ(resolve_iri(base, ""), "http://a/b/c/d;p?q");
  EXPECT_EQ(resolve_iri(base, "../g"), "http://a/b/g");
  EXPECT_EQ(resolve_iri(base, "../../g"), "http://a/g");
  EXPECT_EQ(resolve_iri(base, "../../../g"), "http://a/g");
}

TEST(ParseTurtle, ProseIsNotTurtle) {
  auto r = parse_turtle("Here is the ontology you asked for.");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(count_triples(r.partial), 0u);
}

TEST(SerializeTurtle, EmptyGraphHasOnlyPrefixes) {
  Graph g;
  g.prefixes()["ex"] = "http://e/";
  std::string text = serialize_turtle(g);
  EXPECT_EQ(text, "@prefix ex: <http://e/> .\n");
  EXPECT_EQ(serialize_turtle(Graph{}), "");
}

TEST(SerializeTurtle, RoundTripsSingleTriple) {
  Graph g = parse_ok("@prefix ex: <http://e/> . ex:a ex:p \"v\\n\\\"q\\\"\"@en .");
  auto back = parse_turtle(serialize_turtle(g));
  ASSERT_TRUE(back.ok());
  EXPECT_TRUE(graph_isomorphic(g, *back.graph));
}

TEST(SerializeTurtle, DeclaresEveryAbbreviatedNamespace) {
  Graph g;
  g.insert(Triple{Term::iri("http://undeclared.org/ns#a"), Term::iri("http://other.org/p"),
                  Term::literal("5", "http://undeclared.org/ns#dt")});
  std::string text = serialize_turtle(g);
  auto back = parse_turtle(text);
  ASSERT_TRUE(back.ok()) << text;
  EXPECT_EQ(*back.graph, g);
}

TEST(Isomorphism, Identity) {
  Graph g = parse_ok("@prefix ex: <http://e/> . ex:a ex:p [ ex:q _:x ] . _:x ex:r ex:a .");
  EXPECT_TRUE(graph_isomorphic(g, g));
}

TEST(Isomorphism, RemovedTripleIsNotIsomorphic) {
  Graph g = parse_ok("@prefix ex: <http://e/> . ex:a ex:p ex:b ; ex:q ex:c .");
  Graph h = g;
  h.erase(*h.triples().begin());
  EXPECT_FALSE(graph_isomorphic(g, h));
}

TEST(Isomorphism, RenamedBlankNodeAgreesWithBruteForce) {
  Graph a = parse_ok("@prefix ex: <http://e/> . _:x ex:p ex:a . _:y ex:p ex:a . _:x ex:q _:y .");
  Graph b = parse_ok("@prefix ex: <http://e/> . _:m ex:p ex:a . _:n ex:p ex:a . _:n ex:q _:m .");
  Graph c = parse_ok("@prefix ex: <http://e/> . _:m ex:p ex:a . _:n ex:p ex:a . _:n ex:q _:n .");
  EXPECT_TRUE(capgen::testing::brute_force_isomorphic(a, b));
  EXPECT_TRUE(graph_isomorphic(a, b));
  EXPECT_FALSE(capgen::testing::brute_force_isomorphic(a, c));
  EXPECT_FALSE(graph_isomorphic(a, c));
}

TEST(Isomorphism, AgreesWithBruteForceOnRandomPerturbations) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    Graph a = capgen::testing::random_graph(rng, 12, 4);
    Graph b = capgen::testing::relabel_blanks(a, rng);
    if (trial % 2 == 1 && !b.empty()) {
      // Perturb: redirect one triple's object to a different blank node or IRI.
      Triple t = *std::next(b.triples().begin(), static_cast<long>(rng() % b.size()));
      b.erase(t);
      t.object = t.object.is_blank() ? Term::iri("http://e/elsewhere") : Term::blank("fresh");
      b.insert(t);
    }
    EXPECT_EQ(graph_isomorphic(a, b), capgen::testing::brute_force_isomorphic(a, b)) << "trial " << trial;
    EXPECT_EQ(capgen::testing::backtracking_isomorphic(a, b), capgen::testing::brute_force_isomorphic(a, b))
        << "trial " << trial;
  }
}

TEST(Isomorphism, BudgetExhaustionIsReported) {
  // Twelve interchangeable blank nodes forming two 6-cycles vs one 12-cycle:
  // colour refinement cannot separate them, so the search must enumerate.
  Graph a, b;
  auto p = Term::iri("http://e/p");
  for (int i = 0; i < 12; ++i) {
    int j = (i % 6 == 5) ? i - 5 : i + 1;
    a.insert(Triple{Term::blank("a" + std::to_string(i)), p, Term::blank("a" + std::to_string(j))});
    b.insert(Triple{Term::blank("b" + std::to_string(i)), p, Term::blank("b" + std::to_string((i + 1) % 12))});
  }
  EXPECT_THROW(graph_isomorphic(a, b, 50), SearchBudgetExceeded);
  EXPECT_FALSE(graph_isomorphic(a, b));
}
