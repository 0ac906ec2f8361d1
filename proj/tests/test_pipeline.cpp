#include "doctest.h"

#include "annopipe/error.hpp"
#include "annopipe/pipeline.hpp"
#include "models.hpp"

using namespace annopipe;
using annopipe::testing::CorpusOptions;
using annopipe::testing::SynthLanguage;
using annopipe::testing::TempDir;

namespace {

const SynthLanguage& language() {
  static const SynthLanguage lang(150, 7);
  return lang;
}

PipelineConfig config_for(const annopipe::testing::ModelSet& set, ProcessingType type) {
  PipelineConfig c;
  c.language = Language::sl;
  c.type = type;
  c.model_dir = set.model_dir;
  c.exec = Exec::serial;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("availability matrix") {
    using enum Task;
    auto row = [](Language l, Variety v) {
      std::vector<Task> out;
      for (auto t : kTasks)
        if (task_supported(l, v, t)) out.push_back(t);
      return out;
    };
    CHECK(row(Language::sl, Variety::standard) == std::vector{tokenize, morph, lemma, depparse, ner, srl});
    CHECK(row(Language::sl, Variety::nonstandard) == std::vector{tokenize, morph, lemma, ner});
    for (auto l : {Language::hr, Language::sr}) {
      CHECK(row(l, Variety::standard) == std::vector{tokenize, morph, lemma, depparse, ner});
      CHECK(row(l, Variety::nonstandard) == std::vector{tokenize, morph, lemma, ner});
    }
    CHECK(row(Language::bg, Variety::standard) == std::vector{tokenize, morph, lemma, depparse, ner});
    CHECK(row(Language::bg, Variety::nonstandard).empty());
    CHECK(row(Language::mk, Variety::standard) == std::vector{tokenize, morph, lemma});
    CHECK(row(Language::mk, Variety::nonstandard).empty());
    CHECK(task_availability(Language::sl, Variety::standard, ner) == Availability::not_implemented);
    CHECK(task_availability(Language::mk, Variety::standard, depparse) == Availability::unavailable);
  }

  TEST_CASE("routing by processing type") {
    auto S = Variety::standard;
    auto N = Variety::nonstandard;
    CHECK(route(ProcessingType::standard) == Components{S, S, S, S});
    CHECK(route(ProcessingType::nonstandard) == Components{N, N, N, S});
    CHECK(route(ProcessingType::web) == Components{S, N, N, S});
  }

  TEST_CASE("names and task lists") {
    CHECK(language_from_string("hr") == Language::hr);
    CHECK_THROWS_AS(language_from_string("de"), ConfigError);
    CHECK(processing_type_from_string("web") == ProcessingType::web);
    CHECK(parse_tasks("depparse,tokenize,morph,morph") == std::vector{Task::tokenize, Task::morph, Task::depparse});
    CHECK_THROWS_AS(parse_tasks(""), ConfigError);
    CHECK_THROWS_AS(parse_tasks("tokenize,parse"), ConfigError);
  }

  TEST_CASE("configuration errors name the matrix cell") {
    PipelineConfig c;
    c.language = Language::mk;
    c.tasks = {Task::tokenize, Task::depparse};
    try {
      resolve_components(c);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("(mk, standard, depparse)") != std::string::npos);
    }
    c.language = Language::bg;
    c.type = ProcessingType::nonstandard;
    c.tasks = {Task::tokenize};
    CHECK_THROWS_AS(resolve_components(c), ConfigError);
    c.language = Language::sl;
    c.tasks = {Task::ner};
    CHECK_THROWS_WITH_AS(resolve_components(c), doctest::Contains("not implemented"), ConfigError);
    // Nonstandard processing parses with the standard parser.
    c.tasks = {Task::tokenize, Task::morph, Task::lemma, Task::depparse};
    CHECK(resolve_components(c).parser == Variety::standard);
  }

  TEST_CASE("default model paths") {
    PipelineConfig c;
    c.model_dir = "m";
    c.type = ProcessingType::web;
    CHECK(model_path(c, Task::morph) == std::filesystem::path("m/sl/nonstandard/tagger.model"));
    CHECK(model_path(c, Task::depparse) == std::filesystem::path("m/sl/standard/parser.model"));
    c.schema = TreeSchema::jos();
    CHECK(model_path(c, Task::depparse) == std::filesystem::path("m/sl/standard/parser-jos.model"));
    c.model_paths[Task::lemma] = "x.model";
    CHECK(model_path(c, Task::lemma) == std::filesystem::path("x.model"));
  }

  TEST_CASE("missing or mismatched models are ModelErrors") {
    TempDir dir;
    PipelineConfig c;
    c.model_dir = dir.path();
    CHECK_THROWS_WITH_AS(Pipeline{c}, doctest::Contains("missing morph model"), ModelError);

    auto set = annopipe::testing::write_synth_models(dir, language(), "sl", 60);
    auto wrong = config_for(set, ProcessingType::standard);
    wrong.schema = TreeSchema::jos();
    wrong.model_paths[Task::depparse] = set.model_dir / "sl" / "standard" / "parser.model";
    CHECK_THROWS_AS(Pipeline{wrong}, ModelError);

    auto hr = config_for(set, ProcessingType::standard);
    hr.language = Language::hr;
    hr.model_paths[Task::morph] = set.model_dir / "sl" / "standard" / "tagger.model";
    hr.tasks = {Task::tokenize, Task::morph};
    CHECK_THROWS_WITH_AS(Pipeline{hr}, doctest::Contains("trained for language 'sl'"), ModelError);
  }

  TEST_CASE("end to end on raw text") {
    TempDir dir;
    auto set = annopipe::testing::write_synth_models(dir, language(), "sl", 200);
    auto gold = language().corpus(CorpusOptions{.sentences = 20, .seed = 555, .capitalize = true});
    std::string text;
    for (const auto& s : gold.sentences) text += *s.text() + " ";

    for (auto type : kProcessingTypes) {
      CAPTURE(to_string(type));
      Pipeline p(config_for(set, type));
      auto out = p.annotate(text);
      CHECK(validate_document(out).empty());
      CHECK(out.word_count() == gold.word_count());
      for (std::size_t i = 0; i < out.sentences.size(); ++i)
        CHECK(validate_tree(out.sentences[i], TreeSchema::ud(), i).empty());
      for (const auto& s : out.sentences)
        for (const auto* w : s.words()) {
          CHECK(w->upos);
          CHECK(w->lemma);
          CHECK(w->misc_value("Lemmatizer"));
        }
    }
  }

  TEST_CASE("pretokenized input keeps tokenization and untouched fields") {
    TempDir dir;
    auto set = annopipe::testing::write_synth_models(dir, language(), "sl", 100);
    auto gold = language().corpus(CorpusOptions{.sentences = 10, .seed = 9});
    auto c = config_for(set, ProcessingType::standard);
    c.tasks = {Task::tokenize, Task::morph};
    c.lemma_tier_key = "";
    Pipeline p(c);
    auto out = p.annotate(gold);
    REQUIRE(out.sentences.size() == gold.sentences.size());
    for (std::size_t i = 0; i < out.sentences.size(); ++i) {
      REQUIRE(out.sentences[i].tokens.size() == gold.sentences[i].tokens.size());
      for (std::size_t k = 0; k < out.sentences[i].tokens.size(); ++k) {
        CHECK(out.sentences[i].tokens[k].form == gold.sentences[i].tokens[k].form);
        CHECK(out.sentences[i].tokens[k].lemma == gold.sentences[i].tokens[k].lemma);
        CHECK(out.sentences[i].tokens[k].head == gold.sentences[i].tokens[k].head);
      }
    }
    auto broken = gold;
    broken.sentences[0].tokens[0].id = TokenId::single(7);
    CHECK_THROWS_AS(p.annotate(broken), DataError);
  }

  TEST_CASE("raw text needs the tokenize task") {
    TempDir dir;
    auto set = annopipe::testing::write_synth_models(dir, language(), "sl", 60);
    auto c = config_for(set, ProcessingType::standard);
    c.tasks = {Task::morph};
    CHECK_THROWS_AS(Pipeline(c).annotate(std::string_view("Nekaj.")), ConfigError);
  }
}
