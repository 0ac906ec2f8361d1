#include "annopipe/pipeline.hpp"

#include <algorithm>

#include "annopipe/error.hpp"

namespace annopipe {

namespace {

template <typename Enum, std::size_t N>
Enum from_name(std::string_view s, const std::array<Enum, N>& values, std::string_view what) {
  for (auto v : values)
    if (to_string(v) == s) return v;
  std::string known;
  for (auto v : values) known += (known.empty() ? "" : ", ") + std::string(to_string(v));
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) + "' (expected one of " + known + ")");
}

std::string cell(Language l, Variety v, Task t) {
  return "(" + std::string(to_string(l)) + ", " + std::string(to_string(v)) + ", " + std::string(to_string(t)) + ")";
}

std::string stage_file(Task stage, const TreeSchema& schema) {
  switch (stage) {
    case Task::morph: return "tagger.model";
    case Task::lemma: return "lemmatizer.model";
    case Task::depparse: return schema.single_root() ? "parser.model" : "parser-jos.model";
    default: return {};
  }
}

void check_language(const ModelInfo& info, Language expected, const std::filesystem::path& path) {
  if (!info.language.empty() && info.language != to_string(expected))
    throw ModelError(path.string() + " was trained for language '" + info.language + "', not '" +
                     std::string(to_string(expected)) + "'");
}

}  // namespace

std::string_view to_string(Language l) {
  switch (l) {
    case Language::sl: return "sl";
    case Language::hr: return "hr";
    case Language::sr: return "sr";
    case Language::bg: return "bg";
    case Language::mk: return "mk";
  }
  return "?";
}

std::string_view to_string(Variety v) { return v == Variety::standard ? "standard" : "nonstandard"; }

std::string_view to_string(ProcessingType p) {
  switch (p) {
    case ProcessingType::standard: return "standard";
    case ProcessingType::nonstandard: return "nonstandard";
    case ProcessingType::web: return "web";
  }
  return "?";
}

std::string_view to_string(Task t) {
  switch (t) {
    case Task::tokenize: return "tokenize";
    case Task::morph: return "morph";
    case Task::lemma: return "lemma";
    case Task::depparse: return "depparse";
    case Task::ner: return "ner";
    case Task::srl: return "srl";
  }
  return "?";
}

Language language_from_string(std::string_view s) { return from_name(s, kLanguages, "language"); }

ProcessingType processing_type_from_string(std::string_view s) {
  return from_name(s, kProcessingTypes, "processing type");
}

Task task_from_string(std::string_view s) { return from_name(s, kTasks, "task"); }

std::vector<Task> parse_tasks(std::string_view s) {
  std::vector<Task> tasks;
  for (const auto& name : split_fields(s, ',')) {
    if (name.empty()) continue;
    auto t = task_from_string(name);
    if (std::find(tasks.begin(), tasks.end(), t) == tasks.end()) tasks.push_back(t);
  }
  std::sort(tasks.begin(), tasks.end());
  if (tasks.empty()) throw ConfigError("no tasks given");
  return tasks;
}

bool task_supported(Language l, Variety v, Task t) {
  // Rows: language x variety; columns: tok, morph, lemma, depparse, ner, srl.
  static constexpr bool kMatrix[5][2][6] = {
      /* sl */ {{true, true, true, true, true, true}, {true, true, true, false, true, false}},
      /* hr */ {{true, true, true, true, true, false}, {true, true, true, false, true, false}},
      /* sr */ {{true, true, true, true, true, false}, {true, true, true, false, true, false}},
      /* bg */ {{true, true, true, true, true, false}, {false, false, false, false, false, false}},
      /* mk */ {{true, true, true, false, false, false}, {false, false, false, false, false, false}},
  };
  return kMatrix[static_cast<int>(l)][static_cast<int>(v)][static_cast<int>(t)];
}

Availability task_availability(Language l, Variety v, Task t) {
  if (!task_supported(l, v, t)) return Availability::unavailable;
  if (t == Task::ner || t == Task::srl) return Availability::not_implemented;
  return Availability::available;
}

Variety Components::for_task(Task t) const {
  switch (t) {
    case Task::tokenize: return tokenizer;
    case Task::morph: return tagger;
    case Task::lemma: return lemmatizer;
    case Task::depparse: return parser;
    default: return Variety::standard;
  }
}

Components route(ProcessingType p) {
  switch (p) {
    case ProcessingType::standard: return {Variety::standard, Variety::standard, Variety::standard, Variety::standard};
    case ProcessingType::nonstandard:
      return {Variety::nonstandard, Variety::nonstandard, Variety::nonstandard, Variety::standard};
    case ProcessingType::web: return {Variety::standard, Variety::nonstandard, Variety::nonstandard, Variety::standard};
  }
  return {};
}

Components resolve_components(const PipelineConfig& config) {
  const auto lang = config.language;
  if (config.type != ProcessingType::standard) {
    bool any = std::any_of(kTasks.begin(), kTasks.end(),
                           [&](Task t) { return task_supported(lang, Variety::nonstandard, t); });
    if (!any)
      throw ConfigError("processing type '" + std::string(to_string(config.type)) + "' is not available for " +
                        std::string(to_string(lang)) + ": the availability matrix has no nonstandard tasks for it");
  }
  auto components = route(config.type);
  for (auto t : config.tasks) {
    auto v = components.for_task(t);
    switch (task_availability(lang, v, t)) {
      case Availability::available: break;
      case Availability::unavailable:
        throw ConfigError("task not available: matrix cell " + cell(lang, v, t) + " is unsupported (type '" +
                          std::string(to_string(config.type)) + "')");
      case Availability::not_implemented:
        throw ConfigError("task " + std::string(to_string(t)) + " is not implemented by this tool (matrix cell " +
                          cell(lang, v, t) + ")");
    }
  }
  return components;
}

std::filesystem::path model_path(const PipelineConfig& config, Task stage) {
  if (auto it = config.model_paths.find(stage); it != config.model_paths.end()) return it->second;
  auto v = route(config.type).for_task(stage);
  return config.model_dir / std::string(to_string(config.language)) / std::string(to_string(v)) /
         stage_file(stage, config.schema);
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  std::sort(config_.tasks.begin(), config_.tasks.end());
  config_.tasks.erase(std::unique(config_.tasks.begin(), config_.tasks.end()), config_.tasks.end());
  components_ = resolve_components(config_);

  auto rules_path = config_.rules;
  if (!rules_path) {
    auto candidate = config_.model_dir / std::string(to_string(config_.language)) / "tokenizer.rules";
    if (std::filesystem::exists(candidate)) rules_path = candidate;
  }
  if (rules_path) rules_ = TokenizerRules::load(*rules_path);

  if (config_.lexicon) {
    auto prefixes = ClosedClassPrefixes::multext_east();
    if (auto it = rules_.sections.find("CLOSED_CLASS_PREFIX"); it != rules_.sections.end())
      prefixes = ClosedClassPrefixes::parse(it->second);
    try {
      lexicon_ = Lexicon::load_file(*config_.lexicon, std::move(prefixes));
    } catch (const DataError& e) {
      throw ConfigError(std::string("lexicon: ") + e.what());
    }
  }

  auto load = [&](Task stage, auto loader) {
    auto path = model_path(config_, stage);
    if (!std::filesystem::exists(path))
      throw ModelError("missing " + std::string(to_string(stage)) + " model: " + path.string());
    auto model = loader(path);
    check_language(model.info(), config_.language, path);
    return model;
  };
  if (runs(Task::morph)) tagger_ = load(Task::morph, [](const auto& p) { return TaggerModel::load(p); });
  if (runs(Task::lemma)) lemmatizer_ = load(Task::lemma, [](const auto& p) { return LemmatizerModel::load(p); });
  if (runs(Task::depparse)) {
    parser_ = load(Task::depparse, [](const auto& p) { return ParserModel::load(p); });
    if (!(parser_->schema() == config_.schema))
      throw ModelError("parser model uses the " + std::string(to_string(parser_->schema().variant)) +
                       " schema, configuration asks for " + std::string(to_string(config_.schema.variant)));
  }

  const bool default_on =
      config_.language == Language::sl && components_.tagger == Variety::standard && lexicon_.has_value();
  constrain_ = lexicon_ && config_.constrain_to_lexicon.value_or(default_on);
  closed_control_ = lexicon_ && config_.closed_class_control.value_or(default_on);
}

bool Pipeline::runs(Task t) const {
  return std::find(config_.tasks.begin(), config_.tasks.end(), t) != config_.tasks.end();
}

Document Pipeline::annotate(std::string_view text) const {
  if (!runs(Task::tokenize)) throw ConfigError("raw text input needs the tokenize task");
  auto mode = components_.tokenizer == Variety::standard ? TokenizerMode::standard : TokenizerMode::nonstandard;
  return run_stages(tokenize(text, mode, rules_));
}

Document Pipeline::annotate(const Document& doc) const {
  auto violations = validate_document(doc);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw DataError("input sentence " + v.sentence + (v.token.empty() ? "" : " token " + v.token) + ": " + v.rule +
                    ": " + v.message);
  }
  return run_stages(doc);
}

Document Pipeline::run_stages(Document doc) const {
  if (tagger_) {
    TagOptions opts;
    opts.lexicon = lexicon_ ? &*lexicon_ : nullptr;
    opts.constrain_to_lexicon = constrain_;
    opts.closed_class_control = closed_control_;
    opts.closed_table = &rules_.closed;
    opts.expected_language = std::string(to_string(config_.language));
    opts.exec = config_.exec;
    doc = tag_document(doc, *tagger_, opts);
  }
  if (lemmatizer_) {
    LemmatizeOptions opts;
    opts.tier_key = config_.lemma_tier_key;
    opts.closed_table = &rules_.closed;
    opts.exec = config_.exec;
    doc = lemmatize_document(doc, *lemmatizer_, opts);
  }
  if (parser_) doc = parse_dependency(doc, *parser_, config_.exec);

  for (const auto& v : validate_document(doc))
    throw StageError("pipeline", "output sentence " + v.sentence + ": " + v.rule + ": " + v.message);
  if (parser_) {
    for (std::size_t i = 0; i < doc.sentences.size(); ++i)
      for (const auto& v : validate_tree(doc.sentences[i], parser_->schema(), i))
        throw StageError("depparse", "output sentence " + v.sentence + ": " + v.rule + ": " + v.message);
  }
  return doc;
}

}  // namespace annopipe
