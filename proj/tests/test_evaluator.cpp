#include "doctest.h"

#include <random>
#include <stdexcept>

#include "annopipe/error.hpp"
#include "annopipe/evaluator.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace annopipe;
namespace fx = annopipe::testing::fixtures;
namespace oracle = annopipe::testing::oracle;

namespace {

bool same(const Tally& t, const oracle::Counts& c) {
  return t.gold == c.gold && t.pred == c.pred && t.correct == c.correct;
}

const std::pair<EvalField, const char*> kFields[] = {
    {EvalField::lemma, "lemma"},
    {EvalField::upos, "upos"},
    {EvalField::xpos, "xpos"},
    {EvalField::feats, "feats"},
    {EvalField::morph_pooled, "morph-pooled"},
    {EvalField::morph_strict, "morph-strict"},
    {EvalField::srl, "srl"},
};

}  // namespace

TEST_SUITE("evaluator") {
  TEST_CASE("word-level metrics match the oracle") {
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 60; ++iter) {
      auto gold = annopipe::testing::random_document(rng);
      auto pred = annopipe::testing::perturb(gold, rng, 0.3);
      auto gs = serialize_document(gold);
      auto ps = serialize_document(pred);
      REQUIRE(oracle::aligned(gs, ps));
      for (auto [field, name] : kFields) {
        auto t = micro_f1_counts(gold, pred, field, Exec::serial);
        CHECK_MESSAGE(same(t, oracle::micro(gs, ps, name)), name);
        CHECK(micro_f1(gold, pred, field) == doctest::Approx(oracle::f1(oracle::micro(gs, ps, name))));
      }
      CHECK(same(las_counts(gold, pred), oracle::las(gs, ps)));
      CHECK(per_label_accuracy(gold, pred, LabelField::upos) == oracle::per_label(gs, ps, 3));
      CHECK(per_label_accuracy(gold, pred, LabelField::deprel) == oracle::per_label(gs, ps, 7));
    }
  }

  TEST_CASE("span metrics match the oracle under retokenization") {
    std::mt19937_64 rng(8);
    for (int iter = 0; iter < 60; ++iter) {
      auto gold = annopipe::testing::random_document(rng);
      auto pred = annopipe::testing::retokenize(gold, rng);
      auto gs = serialize_document(gold);
      auto ps = serialize_document(pred);
      CHECK(same(span_counts(gold, pred, SpanUnit::token), oracle::spans(gs, ps, "token")));
      CHECK(same(span_counts(gold, pred, SpanUnit::sentence), oracle::spans(gs, ps, "sentence")));
      CHECK(span_f1(gold, gold, SpanUnit::token) == 1.0);
    }
  }

  TEST_CASE("identical documents score 1") {
    auto doc = parse_document(std::string(fx::kFigureUd) + fx::kTastare);
    auto report = evaluate(doc, doc);
    for (const auto& [name, score] : report.scores) CHECK_MESSAGE(score == 1.0, name);
  }

  TEST_CASE("misaligned word metrics raise DataError with a hint") {
    auto a = parse_document(fx::kParlaMent);
    auto b = parse_document(fx::kParlaMent);
    b.sentences[0].tokens[5].form = "parlament";
    try {
      micro_f1(a, b, EvalField::upos);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("span") != std::string::npos);
    }
    // Spans still work: the characters are the same.
    CHECK(span_f1(a, b, SpanUnit::token) == 1.0);
    auto report = evaluate(a, b);
    CHECK(report.scores.count("tokens"));
    CHECK(!report.scores.count("upos"));

    auto c = parse_document(fx::kFigureUd);
    CHECK_THROWS_AS(span_counts(a, c, SpanUnit::token), DataError);
  }

  TEST_CASE("LAS needs trees") {
    auto gold = parse_document(fx::kFigureUd);
    auto pred = gold;
    pred.sentences[0].tokens[2].head.reset();
    CHECK_THROWS_AS(las_counts(gold, pred), DataError);
    CHECK(!evaluate(gold, pred).scores.count("las"));
  }

  TEST_CASE("JOS vs UD labels per label") {
    auto ud = parse_document(fx::kFigureUd);
    auto jos = parse_document(fx::kFigureJos);
    auto labels = per_label_accuracy(ud, jos, LabelField::deprel);
    CHECK(labels.at("nsubj") == 0.0);
    CHECK(!labels.at("ena").has_value());
  }

  TEST_CASE("relative error reduction") {
    CHECK(relative_error_reduction(0.819, 0.997) * 100 == doctest::Approx(98.3).epsilon(0.001));
    CHECK(relative_error_reduction(0.5, 0.75) == doctest::Approx(0.5));
    CHECK(relative_error_reduction(0.9, 0.8) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(relative_error_reduction(1.0, 1.0), std::domain_error);
  }

  TEST_CASE("tally edge cases") {
    CHECK(Tally{}.f1() == 1.0);
    CHECK(Tally{}.accuracy() == 1.0);
    CHECK(Tally{4, 2, 2}.f1() == doctest::Approx(2.0 / 3.0));
    CHECK(Tally{4, 2, 2}.accuracy() == doctest::Approx(0.5));
    CHECK(eval_field_from_string("morph-strict") == EvalField::morph_strict);
  }

  TEST_CASE("report formats") {
    auto gold = parse_document(fx::kFigureUd);
    auto pred = gold;
    pred.sentences[0].tokens[0].upos = "NOUN";
    auto report = evaluate(gold, pred);
    auto kv = report.key_values();
    CHECK(kv.find("score.upos=0.857143\n") != std::string::npos);
    CHECK(kv.find("gold.upos=7\n") != std::string::npos);
    CHECK(kv.find("correct.upos=6\n") != std::string::npos);
    CHECK(kv.find("label.upos.NOUN=1.000000\n") != std::string::npos);
    CHECK(kv.find("label.upos.PROPN=0.000000\n") != std::string::npos);
    CHECK(kv.find("score.las=1.000000\n") != std::string::npos);
    auto table = report.table();
    CHECK(table.find("upos") != std::string::npos);
    CHECK(table.find("0.8571") != std::string::npos);
    CHECK(table.find("per-label accuracy (deprel)") != std::string::npos);
  }
}
