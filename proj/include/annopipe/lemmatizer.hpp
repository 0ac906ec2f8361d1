#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "annopipe/archive.hpp"
#include "annopipe/conllu.hpp"
#include "annopipe/lexicon.hpp"
#include "annopipe/parallel.hpp"
#include "annopipe/tokenizer.hpp"

namespace annopipe {

// The tier that produced a lemma, in lookup order.
enum class LemmaTier { closed, train, lexicon, rule, identity };

std::string_view to_string(LemmaTier tier);

// Rewrites a form ending in `form_suffix` (with an XPOS starting with
// `xpos_prefix`) by replacing that ending with `replacement`.
struct SuffixRule {
  std::string form_suffix;
  std::string xpos_prefix;
  std::string replacement;
  std::uint64_t frequency = 0;

  friend bool operator==(const SuffixRule&, const SuffixRule&) = default;
};

struct LemmaResult {
  std::string lemma;
  LemmaTier tier = LemmaTier::identity;
};

class LemmatizerModel {
 public:
  const ModelInfo& info() const { return info_; }
  ModelInfo& info() { return info_; }
  const std::vector<SuffixRule>& rules() const { return rules_; }
  const Lexicon* lexicon() const { return lexicon_ ? &*lexicon_ : nullptr; }
  std::size_t lookup_size() const { return lookup_.size(); }
  std::optional<std::string> train_lemma(std::string_view form, std::string_view xpos) const;

  // Lemma for a word that is not closed-class fixed.
  LemmaResult lemmatize(std::string_view form, std::string_view xpos) const;

  Archive to_archive() const;
  static LemmatizerModel from_archive(const Archive& archive);
  void save(const std::filesystem::path& path) const { to_archive().save(path); }
  static LemmatizerModel load(const std::filesystem::path& path) { return from_archive(Archive::load(path)); }

 private:
  friend LemmatizerModel train_lemmatizer(const Document&, const Lexicon*, const ModelInfo&);
  void index_rules();

  ModelInfo info_;
  std::unordered_map<std::string, std::string> lookup_;  // "form\txpos" -> lemma
  std::optional<Lexicon> lexicon_;
  std::vector<SuffixRule> rules_;  // suffix length desc, then frequency desc
  // (xpos prefix + '\t' + suffix) -> position in rules_ of the best rule
  std::unordered_map<std::string, std::size_t> rule_index_;
  std::size_t longest_suffix_ = 0;
};

// Builds the lookup table, suffix rules and embeds the lexicon (if given).
// Training pairs whose (form, xpos) the lexicon lists are left to the lexicon
// so that in-lexicon words always get the lexicon lemma.
LemmatizerModel train_lemmatizer(const Document& train, const Lexicon* lexicon = nullptr,
                                 const ModelInfo& info = {});

// Longest-common-prefix edit turning form into lemma, as a rule.
SuffixRule extract_rule(std::string_view form, std::string_view lemma, std::string_view xpos);

struct LemmatizeOptions {
  // Misc key recording the firing tier; empty disables the annotation.
  std::string tier_key = "Lemmatizer";
  // Forms whose lemma the tokenizer fixes (used for pretokenized input where
  // the closed_fixed marker is absent).
  const ClosedClassTable* closed_table = nullptr;
  Exec exec = Exec::parallel;
};

// Lemmatizes every word. Throws StageError when a word lacks XPOS.
Document lemmatize_document(const Document& doc, const LemmatizerModel& model,
                            const LemmatizeOptions& options = {});

}  // namespace annopipe
