#include "doctest.h"

#include <random>

#include "annopipe/error.hpp"
#include "annopipe/lemmatizer.hpp"
#include "fixtures.hpp"
#include "synth.hpp"
#include "tempdir.hpp"

using namespace annopipe;
using annopipe::testing::CorpusOptions;
using annopipe::testing::SynthLanguage;
namespace fx = annopipe::testing::fixtures;

namespace {

// Rows of "form lemma xpos".
Document pairs(const std::vector<std::array<const char*, 3>>& rows) {
  std::string text = "# sent_id = p1\n";
  int id = 1;
  for (const auto& r : rows)
    text += std::to_string(id++) + "\t" + r[0] + "\t" + r[1] + "\t_\t" + r[2] + "\t_\t_\t_\t_\t_\n";
  return parse_document(text + "\n");
}

Document tagged_words(const std::vector<std::pair<std::string, std::string>>& words) {
  Sentence s;
  s.set_comment("sent_id", "w1");
  int id = 1;
  for (const auto& [form, xpos] : words) {
    Token t;
    t.id = TokenId::single(id++);
    t.form = form;
    if (!xpos.empty()) t.xpos = xpos;
    s.tokens.push_back(t);
  }
  return Document{{s}};
}

}  // namespace

TEST_SUITE("lemmatizer") {
  TEST_CASE("extract_rule is the longest-common-prefix edit") {
    CHECK(extract_rule("pece", "pecati", "Vmpr3s") == SuffixRule{"e", "V", "ati", 1});
    CHECK(extract_rule("hoče", "hoteti", "Vmpr3s") == SuffixRule{"če", "V", "teti", 1});
    CHECK(extract_rule("hiše", "hiša", "Ncfsg") == SuffixRule{"e", "N", "a", 1});
    CHECK(extract_rule("lev", "lev", "Ncmsn") == SuffixRule{"", "N", "", 1});
    CHECK(extract_rule("šel", "iti", "Vmep-sm") == SuffixRule{"šel", "V", "iti", 1});
  }

  TEST_CASE("tier order: train, lexicon, rule, identity") {
    auto train = pairs({{"pece", "pecati", "Vmpr3s"}, {"hiše", "hiša", "Ncfsg"}, {"gre", "iti", "Vmpr3s"}});
    auto lex = Lexicon::parse("gre\tgreti\tVmpr3s\t1\nmize\tmiza\tNcfsg\t5\n");
    auto model = train_lemmatizer(train, &lex);

    CHECK(model.lemmatize("pece", "Vmpr3s").tier == LemmaTier::train);
    // The lexicon owns pairs it lists, even when training disagrees.
    auto gre = model.lemmatize("gre", "Vmpr3s");
    CHECK(gre.lemma == "greti");
    CHECK(gre.tier == LemmaTier::lexicon);
    CHECK(model.lemmatize("mize", "Ncfsg").tier == LemmaTier::lexicon);
    auto rule = model.lemmatize("koče", "Ncfsg");
    CHECK(rule.lemma == "koča");
    CHECK(rule.tier == LemmaTier::rule);
    auto id = model.lemmatize("xyz", "Qo");
    CHECK(id.lemma == "xyz");
    CHECK(id.tier == LemmaTier::identity);
  }

  TEST_CASE("dediacritized 'hoce' is mislemmatized by rules, fixed by the lexicon") {
    auto train = pairs({{"pece", "pecati", "Vmpr3s"}, {"hoče", "hoteti", "Vmpr3s"}, {"dela", "delati", "Vmpr3s"}});
    auto std_lex = Lexicon::parse("hoče\thoteti\tVmpr3s\t10\n");
    auto standard = train_lemmatizer(train, &std_lex);

    std::vector<std::pair<std::string, std::string>> words;
    std::string text = fx::kHoceText;
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find(' ', start);
      if (end == std::string::npos) end = text.size();
      words.emplace_back(text.substr(start, end - start), "Q");
      start = end + 1;
    }
    words.back().second = "Vmpr3s";
    auto out = lemmatize_document(tagged_words(words), standard);
    const auto& hoce = out.sentences[0].tokens.back();
    CHECK(hoce.form == "hoce");
    CHECK(hoce.lemma == "hocati");
    CHECK(hoce.misc_value("Lemmatizer") == "rule");

    auto web_lex = Lexicon::parse("hoče\thoteti\tVmpr3s\t10\nhoce\thoteti\tVmpr3s\t10\n");
    auto nonstandard = train_lemmatizer(train, &web_lex);
    auto fixed = lemmatize_document(tagged_words(words), nonstandard);
    CHECK(fixed.sentences[0].tokens.back().lemma == "hoteti");
    CHECK(fixed.sentences[0].tokens.back().misc_value("Lemmatizer") == "lexicon");
  }

  TEST_CASE("in-lexicon pairs always get a lexicon lemma") {
    SynthLanguage lang(200, 9);
    auto train = lang.corpus(CorpusOptions{.sentences = 300, .seed = 4});
    // Conflicting training lemmas for every third word.
    std::mt19937_64 rng(2);
    for (auto& s : train.sentences)
      for (auto* w : s.words())
        if (rng() % 3 == 0) w->lemma = *w->lemma + "x";
    auto lex = lang.lexicon();
    auto model = train_lemmatizer(train, &lex);
    auto out = lemmatize_document(train, model, LemmatizeOptions{.exec = Exec::serial});
    std::size_t checked = 0;
    for (const auto& s : out.sentences)
      for (const auto* w : s.words()) {
        const auto* entries = lex.entries(w->form);
        if (!entries) continue;
        bool listed = false;
        bool lemma_ok = false;
        for (const auto& e : *entries)
          if (e.xpos == *w->xpos) {
            listed = true;
            lemma_ok = lemma_ok || e.lemma == *w->lemma;
          }
        if (!listed) continue;
        ++checked;
        CHECK(lemma_ok);
      }
    CHECK(checked > 1000);
  }

  TEST_CASE("closed-class words keep the tokenizer lemma") {
    auto model = train_lemmatizer(pairs({{"a", "a", "Ncmsn"}}));
    auto doc = tagged_words({{"a", "Ncmsn"}, {".", "Z"}});
    doc.sentences[0].tokens[1].lemma = ".";
    doc.sentences[0].tokens[1].closed_fixed = true;
    auto out = lemmatize_document(doc, model);
    CHECK(out.sentences[0].tokens[1].misc_value("Lemmatizer") == "closed");

    ClosedClassTable table;
    table.add("%", ClosedCategory::symbol, "Z");
    auto pretok = lemmatize_document(tagged_words({{"%", ""}}), model, LemmatizeOptions{.closed_table = &table});
    CHECK(pretok.sentences[0].tokens[0].lemma == "%");

    auto quiet = lemmatize_document(tagged_words({{"a", "Ncmsn"}}), model, LemmatizeOptions{.tier_key = ""});
    CHECK(!quiet.sentences[0].tokens[0].misc_value("Lemmatizer"));
  }

  TEST_CASE("archive round-trip with embedded lexicon") {
    SynthLanguage lang(100, 3);
    auto train = lang.corpus(CorpusOptions{.sentences = 100, .seed = 8});
    auto lex = lang.lexicon(400);
    auto model = train_lemmatizer(train, &lex, ModelInfo{.language = "sl"});
    annopipe::testing::TempDir dir;
    model.save(dir / "lemma.model");
    auto loaded = LemmatizerModel::load(dir / "lemma.model");
    REQUIRE(loaded.lexicon());
    CHECK(loaded.lexicon()->to_text() == lex.to_text());
    CHECK(loaded.rules() == model.rules());
    CHECK(loaded.lookup_size() == model.lookup_size());
    CHECK(loaded.to_archive().to_bytes() == model.to_archive().to_bytes());
    for (const auto& f : lang.forms()) CHECK(loaded.lemmatize(f.form, f.xpos).lemma == model.lemmatize(f.form, f.xpos).lemma);
    CHECK(loaded.lemmatize("Nekaj", "Ncmsn").lemma == model.lemmatize("Nekaj", "Ncmsn").lemma);

    auto no_lex = train_lemmatizer(train);
    CHECK(!LemmatizerModel::from_archive(no_lex.to_archive()).lexicon());
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(train_lemmatizer(tagged_words({{"a", "X"}})), TrainingError);
    auto model = train_lemmatizer(pairs({{"a", "a", "Ncmsn"}}));
    try {
      lemmatize_document(tagged_words({{"a", "Ncmsn"}, {"b", ""}}), model);
      FAIL("expected StageError");
    } catch (const StageError& e) {
      CHECK(e.stage() == "lemma");
      CHECK(std::string(e.what()).find("w1") != std::string::npos);
    }
    Archive wrong;
    wrong.put("meta", write_meta("tagger", {}));
    CHECK_THROWS_AS(LemmatizerModel::from_archive(wrong), ModelError);
  }
}
