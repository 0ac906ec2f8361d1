#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "annopipe/conllu.hpp"
#include "annopipe/error.hpp"
#include "fixtures.hpp"
#include "synth.hpp"

using namespace annopipe;
namespace fx = annopipe::testing::fixtures;

TEST_SUITE("conllu") {
  TEST_CASE("published fixtures round-trip byte for byte") {
    for (const char* text : {fx::kTastare, fx::kParlaMent, fx::kFigureUd, fx::kFigureJos}) {
      auto doc = parse_document(text);
      CHECK(serialize_document(doc) == text);
      CHECK(validate_document(doc).empty());
    }
  }

  TEST_CASE("range token keeps its form and covers two words") {
    auto doc = parse_document(fx::kTastare);
    const auto& s = doc.sentences.at(0);
    CHECK(s.word_count() == 26);
    auto it = std::find_if(s.tokens.begin(), s.tokens.end(), [](const Token& t) { return t.is_range(); });
    REQUIRE(it != s.tokens.end());
    CHECK(it->id.str() == "14-15");
    CHECK(it->form == "tastare");
    CHECK((it + 1)->form == "ta");
    CHECK((it + 2)->form == "stare");
    CHECK(surface_text(s) == *s.text());
  }

  TEST_CASE("form with an internal space survives parsing") {
    auto doc = parse_document(fx::kParlaMent);
    CHECK(doc.sentences[0].words()[5]->form == "parla ment");
  }

  TEST_CASE("randomized documents round-trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      auto text = serialize_document(testing::random_document(rng));
      CHECK(serialize_document(parse_document(text)) == text);
    }
  }

  TEST_CASE("strict mode rejects malformed input with a line number") {
    CHECK_THROWS_AS(parse_document(""), ParseError);
    CHECK_THROWS_AS(parse_document("1\ta\t_\t_\t_\t_\t_\t_\t_\t_\n"), ParseError);  // no blank line
    CHECK_THROWS_AS(parse_document("1\ta\t_\t_\n\n"), ParseError);
    CHECK_THROWS_AS(parse_document("1\ta\t_\t_\t_\t_\t_\t_\t_\t_\n3\tb\t_\t_\t_\t_\t_\t_\t_\t_\n\n"), ParseError);
    CHECK_THROWS_AS(parse_document("1\ta\t_\t_\t_\t_\t5\t_\t_\t_\n\n"), ParseError);
    try {
      parse_document("1\ta\t_\t_\t_\t_\t_\t_\t_\t_\n\n1\tb\t_\n\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("lenient mode accepts CRLF and missing final blank line") {
    auto doc = parse_document("1\ta\t_\t_\t_\t_\t_\t_\t_\t_\r\n\r\n\r\n1\tb\t_\t_\t_\t_\t_\t_\t_\t_", {true});
    CHECK(doc.sentences.size() == 2);
    CHECK_THROWS_AS(parse_document("1\ta\t_\t_\t_\t_\t_\t_\t_\t_\r\n\r\n"), ParseError);
  }

  TEST_CASE("SpaceAfter accessors") {
    Token t;
    CHECK(t.space_after());
    t.set_space_after(false);
    CHECK(t.misc->str() == "SpaceAfter=No");
    t.set_space_after(true);
    CHECK(t.space_after());
    CHECK((!t.misc || t.misc->empty()));
  }

  TEST_CASE("feats canonical order and lookup") {
    auto f = Feats::parse("Number=Sing|Case=Nom");
    CHECK_FALSE(f.is_canonical());
    CHECK(f.canonical().str() == "Case=Nom|Number=Sing");
    CHECK(f.get("Number") == "Sing");
    CHECK_THROWS_AS(Feats::parse("Case"), std::invalid_argument);
  }

  TEST_CASE("validation reports rule names") {
    Sentence s;
    Token a;
    a.id = TokenId::single(1);
    a.form = "a";
    a.head = 3;
    Token b;
    b.id = TokenId::single(3);
    b.form = "b";
    b.feats = Feats::parse("Number=Sing|Case=Nom");
    s.tokens = {a, b};
    s.set_comment("text", "a c");
    std::set<std::string> rules;
    for (const auto& v : validate_sentence(s, 0)) rules.insert(v.rule);
    CHECK(rules.count("id-contiguity"));
    CHECK(rules.count("feats-order"));
    CHECK(rules.count("text-mismatch"));
  }

  TEST_CASE("strip_annotations keeps tokenization, comments and SpaceAfter") {
    auto doc = parse_document(fx::kFigureUd);
    auto stripped = strip_annotations(doc);
    const auto& w = stripped.sentences[0].words();
    CHECK_FALSE(w[0]->lemma);
    CHECK_FALSE(w[0]->head);
    CHECK_FALSE(w[5]->space_after());
    CHECK(stripped.sentences[0].comments == doc.sentences[0].comments);
    CHECK(validate_document(stripped).empty());
  }
}
