#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annopipe/conllu.hpp"
#include "annopipe/parallel.hpp"

namespace annopipe {

// Non-negative decimal with one fractional digit, held as tenths so that
// repetition arithmetic is exact.
class Decimal1 {
 public:
  constexpr Decimal1() = default;
  static constexpr Decimal1 from_tenths(std::int64_t tenths) {
    Decimal1 d;
    d.tenths_ = tenths;
    return d;
  }
  // "4.7", "5", "0.5". Throws ConfigError on anything else.
  static Decimal1 parse(std::string_view s);

  std::int64_t tenths() const { return tenths_; }
  std::int64_t whole() const { return tenths_ / 10; }
  std::int64_t fraction_tenths() const { return tenths_ % 10; }
  double value() const { return static_cast<double>(tenths_) / 10.0; }
  std::string str() const;

  friend auto operator<=>(const Decimal1&, const Decimal1&) = default;

 private:
  std::int64_t tenths_ = 0;
};

// size_a / size_b rounded half-up to one decimal. Throws DataError when
// either size is zero.
Decimal1 compute_repetition_ratio(std::uint64_t size_a, std::uint64_t size_b);

// round(tenths/10 * n), half-up.
std::size_t scaled_count(Decimal1 d, std::size_t n);

struct OversampleOptions {
  // When set, the fractional copy takes a seeded random sample (kept in
  // corpus order) instead of a prefix.
  std::optional<std::uint64_t> shuffle_seed;
};

// floor(r) full copies followed by round(frac(r)*n) sentences of one more
// copy. sent_ids get a "-r<copy>" suffix.
Document oversample_dataset(const Document& doc, Decimal1 repetitions, const OversampleOptions& options = {});

// Character replacements applied to forms.
class DiacriticMap {
 public:
  // Built-in defaults: sl {č,š,ž}; hr and sr add {ć→c, đ→dj}. Throws
  // ConfigError for languages without a map.
  static DiacriticMap builtin(std::string_view language);
  // Lines "<char> <replacement>"; '#' starts a comment line.
  static DiacriticMap parse(std::string_view text);
  static DiacriticMap load(const std::filesystem::path& path);

  void add(char32_t from, std::string to);
  bool empty() const { return map_.empty(); }
  bool in_domain(char32_t c) const { return map_.count(c) > 0; }
  std::string apply(std::string_view s) const;
  const std::map<char32_t, std::string>& entries() const { return map_; }

 private:
  std::map<char32_t, std::string> map_;
};

// Applies the map to every form and to the text comment. Lemmas, tags and
// MISC are untouched.
Document dediacritize(const Document& doc, const DiacriticMap& map);
Sentence dediacritize(const Sentence& sentence, const DiacriticMap& map);

// Removes whitespace inside forms ("parla ment" -> "parlament"). The text
// comment is regenerated when a form changed.
Sentence merge_n_to_1(const Sentence& sentence);
Document merge_n_to_1(const Document& doc);

// Drops multiword range tokens and keeps their words. Covered words are glued
// with SpaceAfter=No, the last inheriting the range's spacing, so the text
// comment stays valid.
Sentence flatten_1_to_n(const Sentence& sentence);
Document flatten_1_to_n(const Document& doc);

struct Split {
  Document train;
  Document dev;
  Document test;
};

// Contiguous three-way split by sentence: dev and test get round(frac*n)
// sentences from the end, train the rest.
Split split_document(const Document& doc, double dev_fraction, double test_fraction);

enum class FilterMode { none, include, exclude };

struct SampleFilter {
  FilterMode mode = FilterMode::none;
  std::string key;    // sentence comment key, e.g. "source"
  std::string value;  // e.g. "SETimes"

  bool accepts(const Sentence& s) const;
  std::string str() const;
};

struct RecipeComponent {
  std::string corpus_id;
  std::string group;
  // Unset when the recipe says "auto": the repetition ratio of the other
  // groups' tokens to this component's tokens.
  std::optional<Decimal1> repetitions;
  Decimal1 dediacritize;
  double fraction = 1.0;
  SampleFilter filter;
};

struct TargetRatio {
  std::string group_a;
  std::string group_b;
  std::uint64_t a = 1;
  std::uint64_t b = 1;
};

struct Recipe {
  std::string name;
  std::string language;
  std::vector<RecipeComponent> components;
  std::optional<TargetRatio> target;

  // Grammar in docs/recipe-format.md. Throws ConfigError naming the line.
  static Recipe parse(std::string_view text);
  static Recipe load(const std::filesystem::path& path);
};

struct ComponentReport {
  std::string corpus_id;
  std::string group;
  Decimal1 repetitions;
  Decimal1 dediacritize;
  std::size_t source_sentences = 0;  // after filter and sampling
  std::uint64_t source_tokens = 0;
  std::size_t sentences = 0;  // emitted
  std::uint64_t tokens = 0;
  std::uint64_t dediacritized_tokens = 0;
};

struct RecipeReport {
  std::vector<ComponentReport> components;
  std::map<std::string, std::uint64_t> group_tokens;
  std::map<std::string, std::uint64_t> group_dediacritized;
  std::uint64_t total_tokens = 0;
  std::uint64_t dediacritized_tokens = 0;
  std::optional<TargetRatio> target;
  // tokens(group_a) / tokens(group_b) when a target is set
  std::optional<double> achieved_ratio;

  // Dediacritized share of all emitted tokens.
  double dediacritized_fraction_combined() const;
  // Dediacritized share of the groups containing dediacritized components.
  double dediacritized_fraction_portion() const;

  std::string str() const;
};

struct RecipeResult {
  Document dataset;
  RecipeReport report;
};

struct RecipeOptions {
  // Overrides the built-in map of the recipe language.
  std::optional<DiacriticMap> diacritics;
  OversampleOptions oversample;
  Exec exec = Exec::parallel;
};

// Copy 1 of a component is never dediacritized; copies 2.. are, up to the
// requested amount. Requests that would touch copy 1 are refused.
RecipeResult build_recipe_dataset(const Recipe& recipe, const std::map<std::string, Document>& corpora,
                                  const RecipeOptions& options = {});

}  // namespace annopipe
