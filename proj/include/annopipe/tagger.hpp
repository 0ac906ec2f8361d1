#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "annopipe/archive.hpp"
#include "annopipe/conllu.hpp"
#include "annopipe/lexicon.hpp"
#include "annopipe/parallel.hpp"
#include "annopipe/tokenizer.hpp"

namespace annopipe {

// UPOS, XPOS and FEATS predicted jointly. feats is the FEATS column text,
// "_" when empty.
struct TagTriple {
  std::string upos;
  std::string xpos;
  std::string feats;

  std::string key() const { return upos + '\t' + xpos + '\t' + feats; }
  friend bool operator==(const TagTriple&, const TagTriple&) = default;
};

// (triple index, probability); probabilities are positive and sum to 1.
using TagDistribution = std::vector<std::pair<std::size_t, double>>;

enum class TagSource { form, lowercase_form, suffix, prior };

// Frequency tagger with suffix backoff. Seen forms use their relative
// frequencies; unseen forms use add-one smoothed statistics of their longest
// known suffix (up to five characters), then the corpus prior.
class TaggerModel {
 public:
  static constexpr std::size_t kMaxSuffix = 5;

  const std::vector<TagTriple>& triples() const { return triples_; }
  std::uint64_t triple_count(std::size_t index) const { return triple_counts_[index]; }
  std::size_t default_triple() const { return default_triple_; }
  const ModelInfo& info() const { return info_; }
  ModelInfo& info() { return info_; }

  // Backoff chain for a form, most specific first. The last element is
  // always the prior.
  std::vector<std::pair<TagSource, TagDistribution>> backoff(std::string_view form) const;
  TagDistribution distribution(std::string_view form) const { return backoff(form).front().second; }

  // Unconstrained prediction.
  TagTriple predict(std::string_view form) const;

  // Most frequent training triple carrying this XPOS.
  std::optional<std::size_t> triple_for_xpos(std::string_view xpos) const;

  bool knows_form(std::string_view form) const { return form_stats_.count(std::string(form)) > 0; }

  Archive to_archive() const;
  static TaggerModel from_archive(const Archive& archive);
  void save(const std::filesystem::path& path) const { to_archive().save(path); }
  static TaggerModel load(const std::filesystem::path& path) { return from_archive(Archive::load(path)); }

 private:
  friend TaggerModel train_tagger(const Document&, const Document&, const ModelInfo&);
  using Counts = std::vector<std::pair<std::size_t, std::uint64_t>>;

  TagDistribution relative(const Counts& counts) const;
  TagDistribution smoothed(const Counts& counts) const;
  void finalize();

  std::vector<TagTriple> triples_;
  std::vector<std::uint64_t> triple_counts_;
  std::unordered_map<std::string, Counts> form_stats_;
  std::array<std::unordered_map<std::string, Counts>, kMaxSuffix> suffix_stats_;
  std::unordered_map<std::string, std::size_t> by_xpos_;
  std::size_t default_triple_ = 0;
  ModelInfo info_;
};

// Trains on words carrying gold UPOS and XPOS. The dev set is tagged with the
// new model and its triple accuracy is stored in info().dev_accuracy.
TaggerModel train_tagger(const Document& train, const Document& dev, const ModelInfo& info = {});

struct TagOptions {
  // Reference lexicon for the XPOS constraint and closed-class control.
  const Lexicon* lexicon = nullptr;
  // Restrict predictions to allowed_tags(form) when that set is non-empty.
  bool constrain_to_lexicon = false;
  // Forbid closed-class tags for forms the lexicon does not list in that class.
  bool closed_class_control = false;
  // PUNCT/SYM only for forms listed here.
  const ClosedClassTable* closed_table = nullptr;
  // Rejects a model trained for another language.
  std::optional<std::string> expected_language;
  Exec exec = Exec::parallel;
};

// Fills UPOS/XPOS/FEATS of every word. Tokens marked closed_fixed are left
// untouched.
Document tag_document(const Document& doc, const TaggerModel& model, const TagOptions& options = {});

// Picks the triple for one form under the given options.
TagTriple choose_tags(std::string_view form, const TaggerModel& model, const TagOptions& options);

// Coarse UPOS for a MULTEXT-East tag, used when the model never saw the tag.
std::string upos_for_xpos(std::string_view xpos);

}  // namespace annopipe
