// annopipe: command-line front end for tokenization, tagging, lemmatization,
// parsing, evaluation and training-data preparation.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 model error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "annopipe/dataprep.hpp"
#include "annopipe/error.hpp"
#include "annopipe/evaluator.hpp"
#include "annopipe/pipeline.hpp"

namespace fs = std::filesystem;
using namespace annopipe;

namespace {

struct Common {
  std::string lang = "sl";
  std::string type = "standard";
  std::string tasks = "tokenize,morph,lemma,depparse";
  std::string model_dir = "models";
  std::string lexicon;
  std::string rules;
  std::string schema = "ud";
  std::string in = "-";
  std::string out = "-";
  std::string format = "conllu";
  int threads = 0;
  bool serial = false;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

Document read_conllu(const std::string& path) {
  return parse_document(read_input(path), ParseOptions{.lenient = true});
}

std::string default_rules(const Common& c) {
  if (!c.rules.empty()) return c.rules;
  auto p = fs::path(ANNOPIPE_DATA_DIR) / "rules" / (c.lang + ".rules");
  return fs::exists(p) ? p.string() : std::string();
}

Exec exec_of(const Common& c) { return c.serial ? Exec::serial : Exec::parallel; }

void check_format(const Common& c) {
  if (c.format != "conllu") throw ConfigError("unsupported format '" + c.format + "' (only conllu)");
}

PipelineConfig pipeline_config(const Common& c) {
  PipelineConfig cfg;
  cfg.language = language_from_string(c.lang);
  cfg.type = processing_type_from_string(c.type);
  cfg.tasks = parse_tasks(c.tasks);
  cfg.model_dir = c.model_dir;
  if (!c.lexicon.empty()) cfg.lexicon = c.lexicon;
  if (auto r = default_rules(c); !r.empty()) cfg.rules = r;
  cfg.schema.variant = schema_from_string(c.schema);
  cfg.exec = exec_of(c);
  return cfg;
}

int run_tokenize(const Common& c) {
  check_format(c);
  PipelineConfig cfg = pipeline_config(c);
  cfg.tasks = {Task::tokenize};
  Pipeline pipeline(cfg);
  write_output(c.out, serialize_document(pipeline.annotate(read_input(c.in))));
  return 0;
}

int run_annotate(const Common& c, bool pretokenized) {
  check_format(c);
  Pipeline pipeline(pipeline_config(c));
  Document doc = pretokenized ? pipeline.annotate(read_conllu(c.in)) : pipeline.annotate(read_input(c.in));
  write_output(c.out, serialize_document(doc));
  return 0;
}

struct TrainArgs {
  std::string stage;
  std::string train;
  std::string dev;
  std::string variety = "standard";
  std::string model_out;
  std::string dev_pred;
  int epochs = 10;
  std::uint64_t seed = 1;
};

Task stage_task(const std::string& s) {
  if (s == "tagger" || s == "morph") return Task::morph;
  if (s == "lemmatizer" || s == "lemma") return Task::lemma;
  if (s == "parser" || s == "depparse") return Task::depparse;
  throw ConfigError("unknown stage '" + s + "' (expected tagger, lemmatizer or parser)");
}

int run_train(const Common& c, const TrainArgs& a) {
  const Task stage = stage_task(a.stage);
  PipelineConfig cfg = pipeline_config(c);
  const Variety variety = a.variety == "nonstandard" ? Variety::nonstandard : Variety::standard;
  if (a.variety != "standard" && a.variety != "nonstandard")
    throw ConfigError("variety must be standard or nonstandard");
  if (task_availability(cfg.language, variety, stage) != Availability::available)
    throw ConfigError("matrix cell (" + c.lang + ", " + a.variety + ", " + std::string(to_string(stage)) +
                      ") is unsupported");
  cfg.type = variety == Variety::standard ? ProcessingType::standard : ProcessingType::nonstandard;

  Document train = read_conllu(a.train);
  Document dev = a.dev.empty() ? Document{} : read_conllu(a.dev);
  ModelInfo info{c.lang, a.variety, 0, 0.0};
  fs::path out = a.model_out.empty() ? model_path(cfg, stage) : fs::path(a.model_out);

  auto rules = TokenizerRules();
  if (auto r = default_rules(c); !r.empty()) rules = TokenizerRules::load(r);
  std::optional<Lexicon> lexicon;
  if (!c.lexicon.empty()) {
    auto prefixes = ClosedClassPrefixes::multext_east();
    if (auto it = rules.sections.find("CLOSED_CLASS_PREFIX"); it != rules.sections.end())
      prefixes = ClosedClassPrefixes::parse(it->second);
    lexicon = Lexicon::load_file(c.lexicon, std::move(prefixes));
  }

  // Dev predictions accumulate stage by stage in a stripped copy of the dev
  // split, so the next stage trains against realistic upstream input.
  std::optional<Document> dev_pred;
  if (!a.dev_pred.empty() && !dev.sentences.empty())
    dev_pred = fs::exists(a.dev_pred) ? read_conllu(a.dev_pred) : strip_annotations(dev);

  std::ostringstream summary;
  if (stage == Task::morph) {
    auto model = train_tagger(train, dev, info);
    model.save(out);
    summary << "tagger: " << model.triples().size() << " tag triples, " << model.info().train_tokens
            << " training tokens, dev accuracy " << model.info().dev_accuracy << '\n';
    if (dev_pred) {
      TagOptions opts;
      opts.lexicon = lexicon ? &*lexicon : nullptr;
      opts.constrain_to_lexicon = lexicon && c.lang == "sl" && variety == Variety::standard;
      opts.closed_class_control = opts.constrain_to_lexicon;
      opts.closed_table = &rules.closed;
      opts.exec = exec_of(c);
      *dev_pred = tag_document(*dev_pred, model, opts);
    }
  } else if (stage == Task::lemma) {
    auto model = train_lemmatizer(train, lexicon ? &*lexicon : nullptr, info);
    model.save(out);
    summary << "lemmatizer: " << model.lookup_size() << " lookup entries, " << model.rules().size()
            << " suffix rules, lexicon " << (model.lexicon() ? "embedded" : "none") << '\n';
    if (dev_pred) {
      LemmatizeOptions opts;
      opts.closed_table = &rules.closed;
      opts.exec = exec_of(c);
      *dev_pred = lemmatize_document(*dev_pred, model, opts);
    }
  } else {
    ParserTrainOptions opts;
    opts.epochs = a.epochs;
    opts.seed = a.seed;
    auto model = train_parser(train, cfg.schema, info, opts);
    model.save(out);
    summary << "parser (" << to_string(model.schema().variant) << "): " << model.train_stats().sentences
            << " sentences, " << model.train_stats().skipped_nonprojective << " non-projective skipped, "
            << model.feature_count() << " features\n";
    if (dev_pred) *dev_pred = parse_dependency(*dev_pred, model, exec_of(c));
  }
  summary << "model written to " << out.string() << '\n';

  if (dev_pred) {
    write_output(a.dev_pred, serialize_document(*dev_pred));
    EvalOptions eo;
    eo.tokens = false;
    eo.per_label = false;
    eo.morph = stage == Task::morph;
    eo.lemma = stage == Task::lemma;
    eo.las = stage == Task::depparse;
    auto report = evaluate(dev, *dev_pred, eo);
    summary << "dev predictions written to " << a.dev_pred << '\n' << report.table();
  }
  std::cerr << summary.str();
  return 0;
}

int run_evaluate(const Common& c, const std::string& gold, const std::string& pred, const std::string& report,
                 bool srl) {
  EvalOptions opts;
  opts.srl = srl;
  opts.exec = exec_of(c);
  auto r = evaluate(read_conllu(gold), read_conllu(pred), opts);
  if (report != "table" && report != "kv") throw ConfigError("report format must be table or kv");
  write_output(c.out, report == "table" ? r.table() : r.key_values());
  return 0;
}

std::map<std::string, Document> load_corpora(const std::vector<std::string>& specs, const std::string& dir,
                                             const Recipe& recipe) {
  std::map<std::string, Document> corpora;
  for (const auto& spec : specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("--corpus expects id=path, got '" + spec + "'");
    corpora[spec.substr(0, eq)] = read_conllu(spec.substr(eq + 1));
  }
  for (const auto& comp : recipe.components) {
    if (corpora.count(comp.corpus_id) || dir.empty()) continue;
    auto p = fs::path(dir) / (comp.corpus_id + ".conllu");
    if (fs::exists(p)) corpora[comp.corpus_id] = read_conllu(p.string());
  }
  return corpora;
}

int exit_code_for_cli(const CLI::Error& e) { return e.get_exit_code() == 0 ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annopipe: annotation pipeline for South Slavic languages"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--lang", c.lang, "Language: sl, hr, sr, bg, mk")->capture_default_str();
  app.add_option("--type", c.type, "Processing type: standard, nonstandard, web")->capture_default_str();
  app.add_option("--tasks", c.tasks, "Comma-separated tasks")->capture_default_str();
  app.add_option("--model-dir", c.model_dir, "Model directory")->capture_default_str();
  app.add_option("--lexicon", c.lexicon, "Inflectional lexicon (TSV, optionally gzip)");
  app.add_option("--rules", c.rules, "Tokenizer rule file (default: bundled rules for --lang)");
  app.add_option("--schema", c.schema, "Dependency schema: ud or jos")->capture_default_str();
  app.add_option("--in", c.in, "Input file, '-' for stdin")->capture_default_str();
  app.add_option("--out", c.out, "Output file, '-' for stdout")->capture_default_str();
  app.add_option("--format", c.format, "Data format")->capture_default_str();
  app.add_option("--threads", c.threads, "OpenMP threads (0: runtime default)");
  app.add_flag("--serial", c.serial, "Use the serial reference kernels");

  auto* tok = app.add_subcommand("tokenize", "Tokenize and segment raw text into CoNLL-U");

  bool pretokenized = false;
  auto* ann = app.add_subcommand("annotate", "Run the configured pipeline");
  ann->add_flag("--pretokenized", pretokenized, "Input is CoNLL-U; skip tokenization");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train a stage model");
  train->add_option("stage", ta.stage, "tagger, lemmatizer or parser")->required();
  train->add_option("--train", ta.train, "Training CoNLL-U")->required();
  train->add_option("--dev", ta.dev, "Development CoNLL-U");
  train->add_option("--variety", ta.variety, "standard or nonstandard")->capture_default_str();
  train->add_option("--model-out", ta.model_out, "Model file (default: <model-dir>/<lang>/<variety>/<stage>.model)");
  train->add_option("--dev-pred", ta.dev_pred, "Stripped dev file that accumulates stage predictions");
  train->add_option("--epochs", ta.epochs, "Parser epochs")->capture_default_str();
  train->add_option("--seed", ta.seed, "Parser shuffling seed")->capture_default_str();

  std::string gold, pred, report = "table";
  bool srl = false;
  auto* ev = app.add_subcommand("evaluate", "Score predictions against gold");
  ev->add_option("--gold", gold, "Gold CoNLL-U")->required();
  ev->add_option("--pred", pred, "Predicted CoNLL-U")->required();
  ev->add_option("--report", report, "table or kv")->capture_default_str();
  ev->add_flag("--srl", srl, "Also score the SRL misc field");

  auto* prep = app.add_subcommand("prep", "Training-data preparation");
  prep->require_subcommand(1);
  std::string recipe_path, corpus_dir, report_path;
  std::vector<std::string> corpus_specs;
  std::uint64_t shuffle_seed = 0;
  bool shuffle = false;
  auto* prep_recipe = prep->add_subcommand("recipe", "Build a dataset from a recipe");
  prep_recipe->add_option("recipe", recipe_path, "Recipe file")->required();
  prep_recipe->add_option("--corpus", corpus_specs, "Corpus as id=path (repeatable)");
  prep_recipe->add_option("--corpus-dir", corpus_dir, "Directory holding <id>.conllu files");
  prep_recipe->add_option("--report", report_path, "Write the report here (default: stderr)");
  prep_recipe->add_option("--shuffle-seed", shuffle_seed, "Sample fractional copies with this seed")
      ->each([&](const std::string&) { shuffle = true; });

  double dev_frac = 0.1, test_frac = 0.1;
  std::string prefix;
  auto* prep_split = prep->add_subcommand("split", "Split into train/dev/test");
  prep_split->add_option("--dev-fraction", dev_frac)->capture_default_str();
  prep_split->add_option("--test-fraction", test_frac)->capture_default_str();
  prep_split->add_option("--prefix", prefix, "Output prefix: <prefix>-{train,dev,test}.conllu")->required();
  prep_split->add_flag("--strip-eval", "Also write stripped dev/test copies (<prefix>-{dev,test}-empty.conllu)");

  auto* prep_strip = prep->add_subcommand("strip", "Remove all annotations except tokenization");
  std::uint64_t size_a = 0, size_b = 0;
  auto* prep_ratio = prep->add_subcommand("ratio", "Repetition ratio of two token counts");
  prep_ratio->add_option("size_a", size_a)->required();
  prep_ratio->add_option("size_b", size_b)->required();
  std::string map_path;
  auto* prep_dediac = prep->add_subcommand("dediacritize", "Remove diacritics from forms");
  prep_dediac->add_option("--map", map_path, "Character map (default: built-in map for --lang)");
  auto* prep_merge = prep->add_subcommand("merge", "Remove spaces inside forms (n:1)");
  auto* prep_flatten = prep->add_subcommand("flatten", "Drop multiword ranges (1:n)");
  std::string reps_text;
  auto* prep_over = prep->add_subcommand("oversample", "Repeat a dataset");
  prep_over->add_option("repetitions", reps_text)->required();

  std::string lex_file, query_form, query_xpos;
  auto* lex = app.add_subcommand("lexicon", "Inspect an inflectional lexicon");
  lex->require_subcommand(1);
  auto* lex_load = lex->add_subcommand("load", "Load and summarize a lexicon");
  lex_load->add_option("file", lex_file)->required();
  auto* lex_query = lex->add_subcommand("query", "Look up a form");
  lex_query->add_option("file", lex_file)->required();
  lex_query->add_option("form", query_form)->required();
  lex_query->add_option("--xpos", query_xpos, "Return the lemma for this tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code_for_cli(e);
  }

  try {
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
    if (*tok) return run_tokenize(c);
    if (*ann) return run_annotate(c, pretokenized);
    if (*train) return run_train(c, ta);
    if (*ev) return run_evaluate(c, gold, pred, report, srl);
    if (*prep_recipe) {
      auto recipe = Recipe::load(recipe_path);
      if (recipe.language.empty()) recipe.language = c.lang;
      RecipeOptions opts;
      if (shuffle) opts.oversample.shuffle_seed = shuffle_seed;
      opts.exec = exec_of(c);
      auto result = build_recipe_dataset(recipe, load_corpora(corpus_specs, corpus_dir, recipe), opts);
      write_output(c.out, serialize_document(result.dataset));
      if (report_path.empty())
        std::cerr << result.report.str();
      else
        write_output(report_path, result.report.str());
      return 0;
    }
    if (*prep_split) {
      auto split = split_document(read_conllu(c.in), dev_frac, test_frac);
      write_output(prefix + "-train.conllu", serialize_document(split.train));
      write_output(prefix + "-dev.conllu", serialize_document(split.dev));
      write_output(prefix + "-test.conllu", serialize_document(split.test));
      if (prep_split->count("--strip-eval")) {
        write_output(prefix + "-dev-empty.conllu", serialize_document(strip_annotations(split.dev)));
        write_output(prefix + "-test-empty.conllu", serialize_document(strip_annotations(split.test)));
      }
      std::cerr << "train " << split.train.sentences.size() << ", dev " << split.dev.sentences.size() << ", test "
                << split.test.sentences.size() << " sentences\n";
      return 0;
    }
    if (*prep_strip) {
      write_output(c.out, serialize_document(strip_annotations(read_conllu(c.in))));
      return 0;
    }
    if (*prep_ratio) {
      write_output(c.out, compute_repetition_ratio(size_a, size_b).str() + "\n");
      return 0;
    }
    if (*prep_dediac) {
      auto map = map_path.empty() ? DiacriticMap::builtin(c.lang) : DiacriticMap::load(map_path);
      write_output(c.out, serialize_document(dediacritize(read_conllu(c.in), map)));
      return 0;
    }
    if (*prep_merge) {
      write_output(c.out, serialize_document(merge_n_to_1(read_conllu(c.in))));
      return 0;
    }
    if (*prep_flatten) {
      write_output(c.out, serialize_document(flatten_1_to_n(read_conllu(c.in))));
      return 0;
    }
    if (*prep_over) {
      write_output(c.out, serialize_document(oversample_dataset(read_conllu(c.in), Decimal1::parse(reps_text))));
      return 0;
    }
    if (*lex_load || *lex_query) {
      auto lexicon = Lexicon::load_file(lex_file);
      std::ostringstream out;
      if (*lex_load) {
        out << "forms\t" << lexicon.form_count() << "\nentries\t" << lexicon.entry_count() << '\n';
        for (auto cls : {ClosedClass::pronoun, ClosedClass::determiner, ClosedClass::adposition, ClosedClass::particle,
                         ClosedClass::coordinating_conjunction, ClosedClass::subordinating_conjunction})
          out << "closed." << to_string(cls) << '\t' << lexicon.closed_class_forms(cls).size() << '\n';
      } else if (!query_xpos.empty()) {
        auto lemma = lexicon.lookup_lemma(query_form, query_xpos);
        if (!lemma) throw DataError("(" + query_form + ", " + query_xpos + ") is not in the lexicon");
        out << *lemma << '\n';
      } else {
        const auto tags = lexicon.allowed_tags(query_form);
        if (tags.empty()) throw DataError("'" + query_form + "' is not in the lexicon");
        for (const auto& t : tags) out << t << '\t' << lexicon.lookup_lemma(query_form, t).value_or("_") << '\n';
      }
      write_output(c.out, out.str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
