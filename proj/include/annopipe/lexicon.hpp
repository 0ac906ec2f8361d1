#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace annopipe {

// Closed word classes controlled through the lexicon during tagging.
enum class ClosedClass {
  pronoun,
  determiner,
  adposition,
  particle,
  coordinating_conjunction,
  subordinating_conjunction,
};

std::string_view to_string(ClosedClass c);
std::optional<ClosedClass> closed_class_from_string(std::string_view s);

// Maps closed classes to XPOS prefixes. The longest matching prefix decides
// the class of a tag.
class ClosedClassPrefixes {
 public:
  // MULTEXT-East: P pronoun, S adposition, Q particle, Cc/Cs conjunctions.
  static ClosedClassPrefixes multext_east();
  // Lines of the form "<class> <prefix>"; throws ConfigError on bad lines.
  static ClosedClassPrefixes parse(const std::vector<std::string>& lines);

  void add(ClosedClass c, std::string prefix);
  std::optional<ClosedClass> classify(std::string_view xpos) const;
  const std::vector<std::pair<ClosedClass, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<ClosedClass, std::string>> entries_;
};

struct LexiconEntry {
  std::string xpos;
  std::string lemma;
  std::uint64_t frequency = 0;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Inflectional lexicon indexed by surface form. Immutable once loaded.
class Lexicon {
 public:
  explicit Lexicon(ClosedClassPrefixes prefixes = ClosedClassPrefixes::multext_east());

  // TSV rows form<TAB>lemma<TAB>xpos[<TAB>frequency]. Duplicate triples are
  // collapsed and their frequencies summed. Throws DataError naming the line.
  static Lexicon parse(std::string_view text,
                       ClosedClassPrefixes prefixes = ClosedClassPrefixes::multext_east());
  static Lexicon load(std::istream& in,
                      ClosedClassPrefixes prefixes = ClosedClassPrefixes::multext_east());
  // Plain or gzip-compressed file.
  static Lexicon load_file(const std::filesystem::path& path,
                           ClosedClassPrefixes prefixes = ClosedClassPrefixes::multext_east());

  void add(std::string_view form, std::string_view lemma, std::string_view xpos,
           std::uint64_t frequency = 0);

  // Most frequent lemma of (form, xpos); ties go to the lexicographically
  // smallest lemma. Falls back to the lowercased form.
  std::optional<std::string> lookup_lemma(std::string_view form, std::string_view xpos) const;

  // Tags listed for the form (or its lowercased variant). Empty means the
  // form is unknown and tagging is unconstrained.
  std::set<std::string> allowed_tags(std::string_view form) const;

  // Tag with the highest summed frequency, ties to the smallest tag.
  std::optional<std::string> most_frequent_tag(std::string_view form) const;

  bool in_closed_class(ClosedClass c, std::string_view form) const;
  const std::set<std::string>& closed_class_forms(ClosedClass c) const;

  const std::vector<LexiconEntry>* entries(std::string_view form) const;
  std::size_t form_count() const { return index_.size(); }
  std::size_t entry_count() const { return entry_count_; }
  const ClosedClassPrefixes& prefixes() const { return prefixes_; }

  // TSV dump in sorted order; parse(to_text()) reproduces the lexicon.
  std::string to_text() const;

 private:
  const std::vector<LexiconEntry>* resolve(std::string_view form) const;

  ClosedClassPrefixes prefixes_;
  std::unordered_map<std::string, std::vector<LexiconEntry>> index_;
  std::map<ClosedClass, std::set<std::string>> closed_index_;
  std::size_t entry_count_ = 0;
};

// Reads a whole file, transparently inflating gzip content.
std::string read_file_maybe_gzip(const std::filesystem::path& path);

}  // namespace annopipe
