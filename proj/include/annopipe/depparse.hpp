#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "annopipe/archive.hpp"
#include "annopipe/conllu.hpp"
#include "annopipe/parallel.hpp"

namespace annopipe {

// UD trees have exactly one word attached to the root; JOS trees may have
// several.
enum class SchemaVariant { ud, jos };

struct TreeSchema {
  SchemaVariant variant = SchemaVariant::ud;

  static TreeSchema ud() { return {SchemaVariant::ud}; }
  static TreeSchema jos() { return {SchemaVariant::jos}; }
  bool single_root() const { return variant == SchemaVariant::ud; }
  friend bool operator==(const TreeSchema&, const TreeSchema&) = default;
};

std::string_view to_string(SchemaVariant v);
SchemaVariant schema_from_string(std::string_view s);

// Rules: missing-head, head-range, self-loop, cycle, root-arity. Empty iff the
// heads form a tree rooted at 0 whose root arity fits the schema.
std::vector<Violation> validate_tree(const Sentence& sentence, const TreeSchema& schema,
                                     std::size_t index = 0);

// True when no arc crosses another (arcs from the artificial root included).
bool is_projective(const Sentence& sentence);

struct ParserTrainOptions {
  int epochs = 10;
  std::uint64_t seed = 1;
};

struct ParserTrainStats {
  std::size_t sentences = 0;
  std::size_t skipped_nonprojective = 0;
};

// Greedy arc-standard parser scored by an averaged perceptron.
class ParserModel {
 public:
  const TreeSchema& schema() const { return schema_; }
  const ModelInfo& info() const { return info_; }
  ModelInfo& info() { return info_; }
  const std::vector<std::string>& arc_labels() const { return arc_labels_; }
  const std::vector<std::string>& root_labels() const { return root_labels_; }
  std::size_t feature_count() const { return weights_.size(); }
  const ParserTrainStats& train_stats() const { return stats_; }

  // Heads and labels for the words of one sentence (1-based heads, 0 = root).
  void parse(Sentence& sentence) const;

  Archive to_archive() const;
  static ParserModel from_archive(const Archive& archive);
  void save(const std::filesystem::path& path) const { to_archive().save(path); }
  static ParserModel load(const std::filesystem::path& path) { return from_archive(Archive::load(path)); }

 private:
  friend class ParserTrainer;
  friend ParserModel train_parser(const Document&, const TreeSchema&, const ModelInfo&, const ParserTrainOptions&);

  std::size_t action_count() const { return 1 + 2 * arc_labels_.size() + root_labels_.size(); }

  TreeSchema schema_;
  ModelInfo info_;
  ParserTrainStats stats_;
  std::vector<std::string> arc_labels_;
  std::vector<std::string> root_labels_;
  std::unordered_map<std::uint64_t, std::vector<float>> weights_;
};

// Throws TrainingError naming the sentence when a gold tree is missing or
// invalid under the schema. Non-projective trees are skipped and counted.
ParserModel train_parser(const Document& train, const TreeSchema& schema, const ModelInfo& info = {},
                         const ParserTrainOptions& options = {});

// Fills head and deprel of every word. Throws StageError when a word lacks
// UPOS, XPOS or lemma.
Document parse_dependency(const Document& doc, const ParserModel& model, Exec exec = Exec::parallel);

}  // namespace annopipe
