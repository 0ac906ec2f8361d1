// Serial reference kernels vs their OpenMP counterparts. The second argument
// of each benchmark selects the execution mode (0 serial, 1 parallel).

#include <benchmark/benchmark.h>

#include <random>

#include "annopipe/dataprep.hpp"
#include "annopipe/depparse.hpp"
#include "annopipe/evaluator.hpp"
#include "annopipe/lemmatizer.hpp"
#include "annopipe/tagger.hpp"
#include "synth.hpp"

using namespace annopipe;
using annopipe::testing::CorpusOptions;
using annopipe::testing::SynthLanguage;

namespace {

struct Data {
  SynthLanguage lang{400, 5};
  Document train = lang.corpus(CorpusOptions{.sentences = 1000, .seed = 1});
  Document test = lang.corpus(CorpusOptions{.sentences = 4000, .seed = 2});
  Lexicon lexicon = lang.lexicon();
  TaggerModel tagger = train_tagger(train, Document{});
  LemmatizerModel lemmatizer = train_lemmatizer(train, &lexicon);
  ParserModel parser = train_parser(train, TreeSchema::ud(), {}, ParserTrainOptions{.epochs = 3});
  Document stripped = strip_annotations(test);
  Document perturbed;

  Data() {
    std::mt19937_64 rng(3);
    perturbed = annopipe::testing::perturb(test, rng, 0.2);
  }
};

const Data& data() {
  static const Data d;
  return d;
}

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_Tag(benchmark::State& state) {
  const auto& d = data();
  TagOptions opt{.lexicon = &d.lexicon, .constrain_to_lexicon = true, .closed_class_control = true,
                 .exec = mode(state)};
  for (auto _ : state) benchmark::DoNotOptimize(tag_document(d.stripped, d.tagger, opt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.test.word_count()));
}

void BM_Lemmatize(benchmark::State& state) {
  const auto& d = data();
  LemmatizeOptions opt{.exec = mode(state)};
  for (auto _ : state) benchmark::DoNotOptimize(lemmatize_document(d.test, d.lemmatizer, opt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.test.word_count()));
}

void BM_Parse(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) benchmark::DoNotOptimize(parse_dependency(d.test, d.parser, mode(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.test.word_count()));
}

void BM_Evaluate(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(micro_f1_counts(d.test, d.perturbed, EvalField::morph_pooled, mode(state)));
    benchmark::DoNotOptimize(las_counts(d.test, d.perturbed, mode(state)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.test.word_count()));
}

void BM_Recipe(benchmark::State& state) {
  const auto& d = data();
  auto recipe = Recipe::parse("language sl\na standard 1.0 0 1.0 -\nb nonstandard 4.7 1.5 1.0 -\n");
  std::map<std::string, Document> corpora{{"a", d.test}, {"b", d.train}};
  RecipeOptions opt{.exec = mode(state)};
  for (auto _ : state) benchmark::DoNotOptimize(build_recipe_dataset(recipe, corpora, opt));
}

}  // namespace

BENCHMARK(BM_Tag)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Lemmatize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parse)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Recipe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
