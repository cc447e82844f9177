#include <gtest/gtest.h>

#include <set>

#include "capgen/prompt/corpus.hpp"
#include "support/corpus.hpp"

using namespace capgen::prompt;

namespace {

const Corpus& corpus() {
  static const Corpus c = load_corpus(capgen::testing::source_path("corpus"));
  return c;
}

const std::string kTemplate =
    "technique: one-shot\nexamples: E9\n---\nDo it.\n\nContext:\n{CONTEXT}\n{EXAMPLES}Task:\n{TASK}\n";

}  // namespace

TEST(Template, ParsesHeaderAndBody) {
  PromptTemplate t = parse_template(kTemplate);
  EXPECT_EQ(t.technique, "one-shot");
  EXPECT_EQ(t.example_ids, std::vector<std::string>{"E9"});
  EXPECT_EQ(t.instruction, "Do it.");
  EXPECT_EQ(t.body.rfind("Do it.", 0), 0u);
}

TEST(Template, RejectsWrongExampleCountAndMissingMarkers) {
  EXPECT_THROW(parse_template("technique: few-shot\nexamples: E1\n---\n{CONTEXT}{EXAMPLES}{TASK}"), TemplateError);
  EXPECT_THROW(parse_template("technique: zero-shot\nexamples:\n---\n{CONTEXT}{TASK}"), TemplateError);
  EXPECT_THROW(parse_template("technique: zero-shot\n{CONTEXT}{EXAMPLES}{TASK}"), TemplateError);
  EXPECT_THROW(parse_template("technique: two-shot\nexamples:\n---\n{CONTEXT}{EXAMPLES}{TASK}"), TemplateError);
}

TEST(Render, SubstitutesLiterally) {
  PromptTemplate t = parse_template(kTemplate);
  PromptInstance p = render_prompt(t, "TBOX {TASK}", {{"desc", "sol"}}, "the task", "C9");
  EXPECT_EQ(p.text,
            "Do it.\n\nContext:\nTBOX {TASK}\n<<<EXAMPLE>>>\nTask description:\ndesc\n\nOntology:\nsol\n"
            "<<<END EXAMPLE>>>\nTask:\nthe task\n");
  EXPECT_EQ(p.capability_id, "C9");
  EXPECT_EQ(count_example_blocks(p.text), 1);
  EXPECT_THROW(render_prompt(t, "x", {}, "y"), TemplateError);
}

TEST(Tokens, CeilingOfQuarterCharacters) {
  EXPECT_EQ(estimate_tokens(""), 0);
  EXPECT_EQ(estimate_tokens(std::string(400, 'a')), 100);
  EXPECT_EQ(estimate_tokens(std::string(401, 'a')), 101);
  EXPECT_EQ(estimate_tokens("\xc3\xa4\xc3\xa4"), 1);
}

TEST(Techniques, KeysAndNames) {
  EXPECT_EQ(technique_key("few-shot"), "few");
  EXPECT_EQ(technique_name("zero"), "zero-shot");
  EXPECT_THROW(technique_name("many"), TemplateError);
}

TEST(Corpus, LoadsManifest) {
  EXPECT_EQ(corpus().capabilities.size(), 7u);
  EXPECT_EQ(corpus().examples.size(), 3u);
  EXPECT_EQ(corpus().templates.size(), 3u);
  EXPECT_EQ(corpus().template_for("few").example_ids, (std::vector<std::string>{"E1", "E3", "E2"}));
  EXPECT_EQ(corpus().capability("C5").name, "Transport");
  EXPECT_THROW(corpus().capability("E1"), CorpusError);
  EXPECT_THROW(load_corpus(capgen::testing::source_path("no-such-dir")), CorpusError);
}

TEST(Matrix, FullStudyHas21DistinctPrompts) {
  auto m = build_matrix(corpus());
  ASSERT_EQ(m.size(), 21u);
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& p : m) {
    keys.insert({p.capability_id, p.technique});
    int expected = p.technique == "zero-shot" ? 0 : p.technique == "one-shot" ? 1 : 3;
    EXPECT_EQ(count_example_blocks(p.text), expected);
    EXPECT_NE(p.text.find(corpus().tbox_text), std::string::npos);
    EXPECT_NE(p.text.find(corpus().capability(p.capability_id).description), std::string::npos);
  }
  EXPECT_EQ(keys.size(), 21u);
  EXPECT_EQ(m[0].capability_id, "C1");
  EXPECT_EQ(m[1].technique, "one-shot");
  EXPECT_EQ(m[3].capability_id, "C2");
}

TEST(Matrix, SubsetsAndEmpty) {
  EXPECT_EQ(build_matrix(corpus(), {"C3"}, {"one"}).size(), 1u);
  EXPECT_TRUE(build_matrix({}, corpus().templates, corpus().tbox_text, {{}, {}, {}}).empty());
}

TEST(Matrix, FewShotExamplesFollowTemplateOrder) {
  auto p = build_matrix(corpus(), {"C1"}, {"few"}).front();
  auto e1 = p.text.find(corpus().example("E1").description);
  auto e3 = p.text.find(corpus().example("E3").description);
  auto e2 = p.text.find(corpus().example("E2").description);
  ASSERT_NE(e1, std::string::npos);
  EXPECT_LT(e1, e3);
  EXPECT_LT(e3, e2);
}

TEST(Matrix, RenderingIsDeterministic) {
  auto a = build_matrix(corpus());
  auto b = build_matrix(corpus());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].text, b[i].text);
}
