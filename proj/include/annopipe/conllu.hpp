#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace annopipe {

// Token id: a single word index (start == end) or a multiword range a-b.
struct TokenId {
  int start = 0;
  int end = 0;

  static TokenId single(int id) { return {id, id}; }
  static TokenId range(int a, int b) { return {a, b}; }
  bool is_range() const { return end != start; }
  std::string str() const;
  friend bool operator==(const TokenId&, const TokenId&) = default;
};

using Feature = std::pair<std::string, std::string>;

// FEATS column. Keys keep the order they were read in so that documents
// round-trip byte-for-byte; canonical() gives the UD-sorted order.
class Feats {
 public:
  Feats() = default;
  explicit Feats(std::vector<Feature> items) : items_(std::move(items)) {}

  // Parses "A=b|C=d". Throws std::invalid_argument on an item without '='.
  static Feats parse(std::string_view s);

  const std::vector<Feature>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::string str() const;
  Feats canonical() const;
  bool is_canonical() const;
  bool has_duplicate_keys() const;
  std::optional<std::string> get(std::string_view key) const;

  friend bool operator==(const Feats&, const Feats&) = default;

 private:
  std::vector<Feature> items_;
};

// MISC column, kept as its raw '|'-separated items.
class Misc {
 public:
  Misc() = default;
  static Misc parse(std::string_view s);

  const std::vector<std::string>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::string str() const;

  std::optional<std::string> get(std::string_view key) const;
  void set(std::string_view key, std::string_view value);
  void erase(std::string_view key);
  // Drops every item except those whose key is listed.
  void retain_only(const std::vector<std::string_view>& keys);

  friend bool operator==(const Misc&, const Misc&) = default;

 private:
  std::vector<std::string> items_;
};

struct Token {
  TokenId id;
  std::string form;
  std::optional<std::string> lemma;
  std::optional<std::string> upos;
  std::optional<std::string> xpos;
  std::optional<Feats> feats;
  std::optional<int> head;
  std::optional<std::string> deprel;
  std::optional<std::string> deps;
  std::optional<Misc> misc;

  // Set by closed-class assignment in the tokenizer. Downstream stages must
  // not overwrite the tags or lemma of such tokens. Not part of the CoNLL-U
  // representation and therefore ignored by operator==.
  bool closed_fixed = false;

  bool is_range() const { return id.is_range(); }
  bool space_after() const;
  void set_space_after(bool value);
  std::optional<std::string> misc_value(std::string_view key) const;
  void set_misc(std::string_view key, std::string_view value);

  friend bool operator==(const Token& a, const Token& b);
};

struct Sentence {
  // Raw comment lines including the leading "#".
  std::vector<std::string> comments;
  std::vector<Token> tokens;

  // Value of a "# key = value" comment.
  std::optional<std::string> comment_value(std::string_view key) const;
  void set_comment(std::string_view key, std::string_view value);
  std::optional<std::string> sent_id() const { return comment_value("sent_id"); }
  std::optional<std::string> text() const { return comment_value("text"); }

  // Single (syntactic) tokens only; range tokens are skipped.
  std::vector<const Token*> words() const;
  std::vector<Token*> words();
  std::size_t word_count() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::vector<Sentence> sentences;

  std::size_t word_count() const;
  friend bool operator==(const Document&, const Document&) = default;
};

struct ParseOptions {
  // Accept CRLF line endings, runs of blank lines and a missing final blank
  // line. Such inputs are normalized, so serialization is no longer
  // byte-identical to the input.
  bool lenient = false;
};

Document parse_document(std::string_view text, ParseOptions options = {});
std::string serialize_document(const Document& doc);
std::string serialize_sentence(const Sentence& sentence);

// Surface text of a sentence: range forms replace the words they cover and
// tokens are joined with a space unless SpaceAfter=No.
std::string surface_text(const Sentence& sentence);

// Removes every annotation except tokenization, segmentation, comments and
// SpaceAfter.
Document strip_annotations(const Document& doc);

struct Violation {
  std::string sentence;  // sent_id, or "#<index>" when absent
  std::string token;     // token id, empty for sentence-level rules
  std::string rule;
  std::string message;
};

std::vector<Violation> validate_document(const Document& doc);
std::vector<Violation> validate_sentence(const Sentence& sentence, std::size_t index);

}  // namespace annopipe
