#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "annopipe/conllu.hpp"

namespace annopipe {

enum class TokenizerMode { standard, nonstandard };

std::string_view to_string(TokenizerMode mode);

enum class ClosedCategory { punctuation, symbol };

struct ClosedClassEntry {
  ClosedCategory category = ClosedCategory::punctuation;
  std::string upos;
  std::string xpos;
  std::string lemma;
};

// Forms the tokenizer owns: punctuation and symbols with fixed tags. Taggers
// may only assign PUNCT/SYM to forms listed here.
class ClosedClassTable {
 public:
  void add(std::string form, ClosedCategory category, std::string xpos);
  const ClosedClassEntry* find(std::string_view form) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, ClosedClassEntry>& entries() const { return entries_; }

 private:
  std::unordered_map<std::string, ClosedClassEntry> entries_;
};

// Sectioned plain-text rule file: "[NAME]" headers, one entry per line,
// "#"-comments ("#" alone or followed by a space).
using RuleSections = std::map<std::string, std::vector<std::string>, std::less<>>;
RuleSections parse_rule_sections(std::string_view text);

struct TokenizerRules {
  std::set<std::string> abbreviations;  // lowercased, with the final period
  std::vector<std::string> emoticons;   // longest first
  ClosedClassTable closed;
  RuleSections sections;                // raw sections, including ones other modules read

  static TokenizerRules parse(std::string_view text);
  static TokenizerRules load(const std::filesystem::path& path);
};

Document tokenize(std::string_view text, TokenizerMode mode, const TokenizerRules& rules);

// Assigns fixed tags/lemma to a form listed in the table and marks the token
// closed_fixed; other tokens are returned unchanged.
Token closed_class_assign(Token token, const ClosedClassTable& table);

}  // namespace annopipe
