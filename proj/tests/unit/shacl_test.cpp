#include <gtest/gtest.h>

#include "capgen/rdf/vocab.hpp"
#include "capgen/shacl/shacl.hpp"
#include "support/corpus.hpp"

using namespace capgen;
using namespace capgen::shacl;
using capgen::testing::gold;
using capgen::testing::parse_or_throw;
using rdf::Term;
using rdf::Triple;

namespace {

const reasoning::TBoxIndex& tbox() {
  static const reasoning::TBoxIndex idx = reasoning::index_tbox(capgen::testing::load_graph("corpus/tbox/cask.ttl"));
  return idx;
}

const ShapeSet& shapes() {
  static const ShapeSet s = load_shapes(capgen::testing::load_graph("corpus/shapes/cask-shapes.ttl"));
  return s;
}

const char* kPrefixes =
    "@prefix : <http://example.org/t#> .\n"
    "@prefix sh: <http://www.w3.org/ns/shacl#> .\n"
    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
    "@prefix cask: <http://www.w3id.org/hsu-aut/cask#> .\n"
    "@prefix vdi3682: <http://www.w3id.org/hsu-aut/VDI3682#> .\n";

rdf::Graph doc(const std::string& body) { return parse_or_throw(std::string(kPrefixes) + body); }

const std::string kParity = "http://example.org/capabilities/parity#";

}  // namespace

TEST(LoadShapes, CorpusShapesLoadCleanly) {
  EXPECT_EQ(shapes().shapes.size(), 6u);
  EXPECT_TRUE(shapes().warnings.empty());
  int closed = 0;
  for (const auto& s : shapes().shapes) closed += s.closed;
  EXPECT_EQ(closed, 2);
}

TEST(LoadShapes, MissingPathNamesTheShape) {
  try {
    load_shapes(doc(":S a sh:NodeShape ; sh:targetClass cask:Capability ; sh:property [ sh:minCount 1 ] ."));
    FAIL() << "expected ShapeLoadError";
  } catch (const ShapeLoadError& e) {
    EXPECT_NE(std::string(e.what()).find("http://example.org/t#S"), std::string::npos);
  }
}

TEST(LoadShapes, MinAboveMaxIsRejected) {
  EXPECT_THROW(load_shapes(doc(":S sh:targetClass cask:Capability ; "
                               "sh:property [ sh:path vdi3682:hasInput ; sh:minCount 2 ; sh:maxCount 1 ] .")),
               ShapeLoadError);
}

TEST(LoadShapes, UnsupportedFeaturesWarn) {
  auto s = load_shapes(doc(":S sh:targetClass cask:Capability ; "
                           "sh:property [ sh:path vdi3682:hasInput ; sh:pattern \"^a\" ] ; "
                           "sh:property [ sh:path [ sh:inversePath vdi3682:hasInput ] ; sh:minCount 1 ] . "
                           ":T a sh:NodeShape ; sh:property [ sh:path vdi3682:hasInput ; rdfs:label \"ok\" ] ."));
  EXPECT_EQ(s.shapes.size(), 2u);
  EXPECT_EQ(s.warnings.size(), 3u);
}

TEST(Validate, GoldGraphsConform) {
  for (const char* id : capgen::testing::kCapabilities) {
    auto v = validate(shapes(), gold(id), tbox());
    EXPECT_TRUE(v.empty()) << id << ": " << (v.empty() ? "" : v.front().message);
  }
}

TEST(Validate, MissingInputIsMinCount) {
  rdf::Graph g = gold("C1");
  ASSERT_TRUE(g.erase({Term::iri(kParity + "Parity"), Term::iri(vocab::vdi3682("hasInput")), Term::iri(kParity + "A")}));
  auto v = validate(shapes(), g, tbox());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::MinCount);
  EXPECT_EQ(v[0].path, vocab::vdi3682("hasInput"));
  auto c = classify(v);
  EXPECT_EQ(c.incomplete, 1);
  EXPECT_EQ(c.hallucinated, 0);
}

TEST(Validate, ClosedShapeFlagsEachExtraTriple) {
  rdf::Graph g = gold("C1");
  Term cap = Term::iri(kParity + "Parity");
  g.insert({cap, Term::iri(vocab::rdfs("label")), Term::literal("parity")});
  g.insert({cap, Term::iri(vocab::rdfs("comment")), Term::literal("checks parity")});
  auto v = validate(shapes(), g, tbox());
  ASSERT_EQ(v.size(), 2u);
  for (const auto& x : v) EXPECT_EQ(x.kind, ViolationKind::Closed);
  EXPECT_EQ(classify(v).hallucinated, 2);
}

TEST(Validate, TargetsFollowSubclasses) {
  auto v = validate(shapes(), doc(":c a cask:AtomicCapability ."), tbox());
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, ViolationKind::MinCount);
  EXPECT_EQ(v[1].kind, ViolationKind::MinCount);
}

TEST(Validate, MaxCountCountsSurplusOnce) {
  auto v = validate(shapes(),
                    doc(":id a cask:InstanceDescription ; cask:hasExpressionGoal cask:Requirement, cask:Assurance, "
                        "cask:ActualValue ."),
                    tbox());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::MaxCount);
  EXPECT_EQ(v[0].amount, 2);
  EXPECT_EQ(classify(v).hallucinated, 2);
}

TEST(Validate, ClassConstraintOnLiteral) {
  auto v = validate(shapes(),
                    doc(":de a cask:DataElement ; cask:hasTypeDescription :td ; cask:hasInstanceDescription \"x\" ."),
                    tbox());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Class);
  ASSERT_TRUE(v[0].value.has_value());
  EXPECT_TRUE(v[0].value->is_literal());
}

TEST(Validate, DatatypeAndNodeKind) {
  ShapeSet s = load_shapes(doc(":S sh:targetClass cask:TypeDescription ; "
                               "sh:property [ sh:path cask:hasName ; sh:datatype "
                               "<http://www.w3.org/2001/XMLSchema#string> ; sh:nodeKind sh:Literal ] ."));
  auto v = validate(s, doc(":td a cask:TypeDescription ; cask:hasName 3, \"ok\", :iri ."), tbox());
  int datatype = 0, node_kind = 0;
  for (const auto& x : v) {
    datatype += x.kind == ViolationKind::Datatype;
    node_kind += x.kind == ViolationKind::NodeKind;
  }
  EXPECT_EQ(datatype, 2);
  EXPECT_EQ(node_kind, 1);
  EXPECT_EQ(classify(v).hallucinated, 2);
}

TEST(Validate, OrderIsDeterministic) {
  rdf::Graph g = doc(":c2 a cask:Capability ; rdfs:label \"b\" . :c1 a cask:Capability ; rdfs:label \"a\" .");
  auto v = validate(shapes(), g, tbox());
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v.front().focus, Term::iri("http://example.org/t#c1"));
  EXPECT_EQ(v.back().focus, Term::iri("http://example.org/t#c2"));
  nlohmann::json j = v;
  EXPECT_EQ(j[0]["focus"], "<http://example.org/t#c1>");
}
