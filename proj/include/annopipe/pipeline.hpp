#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annopipe/conllu.hpp"
#include "annopipe/depparse.hpp"
#include "annopipe/lemmatizer.hpp"
#include "annopipe/lexicon.hpp"
#include "annopipe/parallel.hpp"
#include "annopipe/tagger.hpp"
#include "annopipe/tokenizer.hpp"

namespace annopipe {

enum class Language { sl, hr, sr, bg, mk };
enum class Variety { standard, nonstandard };
enum class ProcessingType { standard, nonstandard, web };
// ner and srl are listed so the availability matrix is complete; this tool
// does not implement them.
enum class Task { tokenize, morph, lemma, depparse, ner, srl };

inline constexpr std::array kLanguages{Language::sl, Language::hr, Language::sr, Language::bg, Language::mk};
inline constexpr std::array kVarieties{Variety::standard, Variety::nonstandard};
inline constexpr std::array kProcessingTypes{ProcessingType::standard, ProcessingType::nonstandard,
                                             ProcessingType::web};
inline constexpr std::array kTasks{Task::tokenize, Task::morph, Task::lemma, Task::depparse, Task::ner, Task::srl};
inline constexpr std::array kStages{Task::tokenize, Task::morph, Task::lemma, Task::depparse};

std::string_view to_string(Language l);
std::string_view to_string(Variety v);
std::string_view to_string(ProcessingType p);
std::string_view to_string(Task t);
// Throw ConfigError on unknown names.
Language language_from_string(std::string_view s);
ProcessingType processing_type_from_string(std::string_view s);
Task task_from_string(std::string_view s);
// Comma-separated task list, returned in pipeline order without duplicates.
std::vector<Task> parse_tasks(std::string_view s);

enum class Availability { available, unavailable, not_implemented };

// Whether the original toolkit supports the task for a language variety.
bool task_supported(Language l, Variety v, Task t);
// task_supported, restricted to the stages this tool implements.
Availability task_availability(Language l, Variety v, Task t);

// Model variety used by each stage.
struct Components {
  Variety tokenizer = Variety::standard;
  Variety tagger = Variety::standard;
  Variety lemmatizer = Variety::standard;
  Variety parser = Variety::standard;

  Variety for_task(Task t) const;
  friend bool operator==(const Components&, const Components&) = default;
};

Components route(ProcessingType p);

struct PipelineConfig {
  Language language = Language::sl;
  ProcessingType type = ProcessingType::standard;
  std::vector<Task> tasks{Task::tokenize, Task::morph, Task::lemma, Task::depparse};
  std::filesystem::path model_dir = "models";
  // Per-stage model files overriding <model_dir>/<lang>/<variety>/<stage>.model.
  std::map<Task, std::filesystem::path> model_paths;
  std::optional<std::filesystem::path> lexicon;
  // Tokenizer rules; defaults to <model_dir>/<lang>/tokenizer.rules when
  // present, else an empty rule set.
  std::optional<std::filesystem::path> rules;
  TreeSchema schema = TreeSchema::ud();
  // Lexicon constraint and closed-class control. Default: on for Slovenian
  // with the standard tagger when a lexicon is given.
  std::optional<bool> constrain_to_lexicon;
  std::optional<bool> closed_class_control;
  // Misc key for the lemmatizer tier; empty disables it.
  std::string lemma_tier_key = "Lemmatizer";
  Exec exec = Exec::parallel;
};

// Checks every requested task against the availability matrix and returns
// the routed components. ConfigError names the offending matrix cell.
Components resolve_components(const PipelineConfig& config);

// Default model file for a stage.
std::filesystem::path model_path(const PipelineConfig& config, Task stage);

// Loaded, immutable pipeline. annotate() is safe to call concurrently.
class Pipeline {
 public:
  // Throws ConfigError (matrix) or ModelError (missing/incompatible models).
  explicit Pipeline(PipelineConfig config);

  const PipelineConfig& config() const { return config_; }
  const Components& components() const { return components_; }

  // Raw text; requires the tokenize task.
  Document annotate(std::string_view text) const;
  // Pretokenized input; tokenization is skipped and fields of stages that
  // do not run are kept.
  Document annotate(const Document& doc) const;

 private:
  bool runs(Task t) const;
  Document run_stages(Document doc) const;

  PipelineConfig config_;
  Components components_;
  TokenizerRules rules_;
  std::optional<Lexicon> lexicon_;
  std::optional<TaggerModel> tagger_;
  std::optional<LemmatizerModel> lemmatizer_;
  std::optional<ParserModel> parser_;
  bool constrain_ = false;
  bool closed_control_ = false;
};

}  // namespace annopipe
