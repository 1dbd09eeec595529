#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace sharp;
using testing_helpers::parse_text;
using testing_helpers::to_jsonl;
using testing_helpers::uniform_record;

namespace {

std::string line_for(const JudgeAssessment& r) {
  auto c = Corpus::from_records({r}, default_categories());
  return to_jsonl(c);
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

template <typename F>
std::string validation_message(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST(Normalization, Ordinal) {
  EXPECT_DOUBLE_EQ(norm_ordinal(1), 0.0);
  EXPECT_DOUBLE_EQ(norm_ordinal(10), 1.0);
  EXPECT_NEAR(norm_ordinal(4), 0.333333, 1e-6);
  EXPECT_THROW(norm_ordinal(0), std::out_of_range);
  EXPECT_THROW(norm_ordinal(11), std::out_of_range);
}

TEST(Normalization, BoolAndExplicitness) {
  EXPECT_EQ(norm_bool(false), 0.0);
  EXPECT_EQ(norm_bool(true), 1.0);
  std::map<std::string, bool> flags{{"g", true}, {"r", false}};
  std::map<std::string, double> mapped;
  for (const auto& [k, v] : flags) mapped[k] = norm_bool(v);
  EXPECT_EQ(mapped["g"], 1.0);
  EXPECT_EQ(mapped["r"], 0.0);

  EXPECT_EQ(norm_explicitness(Explicitness::kNone), 0.0);
  EXPECT_EQ(norm_explicitness(Explicitness::kImplicit), 0.5);
  EXPECT_EQ(norm_explicitness(Explicitness::kExplicit), 1.0);
  EXPECT_EQ(parse_explicitness("implicit"), Explicitness::kImplicit);
  EXPECT_THROW(parse_explicitness("loud"), ValidationError);
}

TEST(ParseCorpus, MinimalCompleteGrid) {
  std::string text;
  for (const char* j : {"j1", "j2", "j3"}) text += line_for(uniform_record("m", "q", j));
  const Corpus c = parse_text(text);
  EXPECT_EQ(c.num_prompts(), 1);
  EXPECT_EQ(c.num_models(), 1);
  EXPECT_EQ(c.num_judges(), 3);
  EXPECT_TRUE(c.missing().empty());
}

TEST(ParseCorpus, OrdinalOutOfRangeNamesLineAndField) {
  std::string text = line_for(uniform_record("m", "q", "j1"));
  text += replace(line_for(uniform_record("m", "q", "j2")), "\"bias_severity\":1", "\"bias_severity\":11");
  const auto msg = validation_message([&] { parse_text(text); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("ordinal out of range"), std::string::npos) << msg;
  EXPECT_NE(msg.find("bias_severity=11"), std::string::npos) << msg;
}

TEST(ParseCorpus, RoundTripOnGeneratedFixture) {
  auto spec = testing_helpers::three_model_spec(5, 3, 3);
  const Corpus c = generate_synthetic(spec);
  ASSERT_EQ(c.records().size(), 27u);
  const Corpus back = parse_text(to_jsonl(c));
  EXPECT_TRUE(back == c);
  EXPECT_EQ(to_jsonl(back), to_jsonl(c));
}

TEST(ParseCorpus, RejectsStructuralProblems) {
  const std::string good = line_for(uniform_record("m", "q", "j1"));
  EXPECT_NE(validation_message([&] { parse_text(good + good); }).find("duplicate triple"), std::string::npos);
  EXPECT_NE(validation_message([&] { parse_text("{not json\n"); }).find("line 1"), std::string::npos);
  EXPECT_NE(validation_message([&] { parse_text(replace(good, "\"age\":false,", "")); })
                .find("missing category key"),
            std::string::npos);
  EXPECT_NE(validation_message([&] { parse_text(replace(good, "\"race\"", "\"height\"")); })
                .find("unknown category key"),
            std::string::npos);
  EXPECT_NE(validation_message([&] { parse_text(replace(good, "\"none\"", "\"loud\"")); }).find("explicitness"),
            std::string::npos);
  EXPECT_NE(validation_message([&] { parse_text(replace(good, ",\"epistemic_k2\":1", "")); })
                .find("missing field 'epistemic_k2'"),
            std::string::npos);
  EXPECT_THROW(parse_text(""), ValidationError);
}

TEST(ParseCorpus, UnknownFieldStrictVsPartial) {
  const std::string extra = replace(line_for(uniform_record("m", "q", "j1")), "{", "{\"note\":\"x\",");
  EXPECT_NE(validation_message([&] { parse_text(extra); }).find("unknown field 'note'"), std::string::npos);
  ParseOptions partial;
  partial.mode = CompletenessMode::partial;
  const Corpus c = parse_text(extra, partial);
  ASSERT_EQ(c.warnings().size(), 1u);
  EXPECT_NE(c.warnings()[0].find("note"), std::string::npos);
}

TEST(ParseCorpus, IncompleteGridStrictFailsPartialRecordsMissing) {
  std::string text = line_for(uniform_record("m1", "q", "j1")) + line_for(uniform_record("m1", "q", "j2")) +
                     line_for(uniform_record("m2", "q", "j1"));
  EXPECT_NE(validation_message([&] { parse_text(text); }).find("incomplete grid"), std::string::npos);
  ParseOptions partial;
  partial.mode = CompletenessMode::partial;
  const Corpus c = parse_text(text, partial);
  ASSERT_EQ(c.missing().size(), 1u);
  EXPECT_EQ(c.missing()[0].model_id, "m2");
  EXPECT_EQ(c.missing()[0].judge_id, "j2");
  EXPECT_EQ(c.find(1, 0, 1), nullptr);
  ASSERT_NE(c.find(1, 0, 0), nullptr);
  EXPECT_EQ(c.find(1, 0, 0)->model_id, "m2");
}

TEST(ParseCorpus, CustomCategorySet) {
  auto r = uniform_record("m", "q", "j");
  r.bias_flags = {{"a", true}, {"b", false}};
  const auto c = Corpus::from_records({r}, {"a", "b"});
  ParseOptions opts;
  opts.categories = {"a", "b"};
  EXPECT_TRUE(parse_text(to_jsonl(c), opts) == c);
  EXPECT_THROW(parse_text(to_jsonl(c)), ValidationError);
}

TEST(ParseCorpus, PreNormalizedIndicators) {
  std::string text = replace(line_for(uniform_record("m", "q", "j")), "\"fairness_f1\":1", "\"fairness_f1\":0.5");
  ParseOptions opts;
  opts.scale = IndicatorScale::unit;
  text = replace(text, "\"fairness_f2\":1", "\"fairness_f2\":0");
  text = replace(text, "\"fairness_f3\":1", "\"fairness_f3\":0");
  text = replace(text, "\"ethics_g1\":1,\"ethics_g2\":1,\"ethics_g3\":1,\"ethics_g4\":1,\"ethics_g5\":1",
                 "\"ethics_g1\":0,\"ethics_g2\":0,\"ethics_g3\":0,\"ethics_g4\":0,\"ethics_g5\":0");
  text = replace(text, "\"epistemic_k1\":1,\"epistemic_k2\":1", "\"epistemic_k1\":0,\"epistemic_k2\":0");
  const Corpus c = parse_text(text, opts);
  EXPECT_EQ(c.records()[0].fairness[0], 0.5);
  const auto bad = replace(text, "\"fairness_f1\":0.5", "\"fairness_f1\":1.5");
  EXPECT_THROW(parse_text(bad, opts), ValidationError);
}

TEST(ParseCorpus, IdentifierOrderIsLexicographic) {
  std::string text;
  for (const char* m : {"zeta", "alpha"})
    for (const char* q : {"q2", "q1"}) text += line_for(uniform_record(m, q, "j"));
  const Corpus c = parse_text(text);
  EXPECT_EQ(c.models(), (std::vector<std::string>{"alpha", "zeta"}));
  EXPECT_EQ(c.prompts(), (std::vector<std::string>{"q1", "q2"}));
  EXPECT_EQ(c.records().front().model_id, "alpha");
  EXPECT_EQ(c.records().front().prompt_id, "q1");
}
