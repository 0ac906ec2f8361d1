#include "annopipe/conllu.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <stdexcept>

#include "annopipe/error.hpp"

namespace annopipe {

namespace {

constexpr std::string_view kUnset = "_";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Strict non-negative integer: digits only, no leading zeros.
std::optional<int> parse_index(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string_view key_of(std::string_view item) {
  auto eq = item.find('=');
  return eq == std::string_view::npos ? item : item.substr(0, eq);
}

std::optional<std::string> opt_field(std::string_view s) {
  if (s == kUnset) return std::nullopt;
  return std::string(s);
}

const std::string& or_unset(const std::optional<std::string>& v) {
  static const std::string unset(kUnset);
  return v ? *v : unset;
}

std::string sentence_label(const Sentence& s, std::size_t index) {
  if (auto id = s.sent_id()) return *id;
  return "#" + std::to_string(index + 1);
}

}  // namespace

std::string TokenId::str() const {
  if (is_range()) return std::to_string(start) + "-" + std::to_string(end);
  return std::to_string(start);
}

Feats Feats::parse(std::string_view s) {
  std::vector<Feature> items;
  for (auto item : split(s, '|')) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("feature without key=value: '" + std::string(item) + "'");
    items.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return Feats(std::move(items));
}

std::string Feats::str() const {
  if (items_.empty()) return std::string(kUnset);
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += '|';
    out += items_[i].first;
    out += '=';
    out += items_[i].second;
  }
  return out;
}

Feats Feats::canonical() const {
  auto items = items_;
  std::stable_sort(items.begin(), items.end(), [](const Feature& a, const Feature& b) {
    return ascii_lower(a.first) < ascii_lower(b.first);
  });
  return Feats(std::move(items));
}

bool Feats::is_canonical() const { return canonical().items_ == items_; }

bool Feats::has_duplicate_keys() const {
  std::set<std::string> seen;
  for (const auto& [k, v] : items_)
    if (!seen.insert(k).second) return true;
  return false;
}

std::optional<std::string> Feats::get(std::string_view key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return v;
  return std::nullopt;
}

Misc Misc::parse(std::string_view s) {
  Misc m;
  for (auto item : split(s, '|')) m.items_.emplace_back(item);
  return m;
}

std::string Misc::str() const {
  if (items_.empty()) return std::string(kUnset);
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += '|';
    out += items_[i];
  }
  return out;
}

std::optional<std::string> Misc::get(std::string_view key) const {
  for (const auto& item : items_) {
    if (key_of(item) == key && item.size() > key.size()) return item.substr(key.size() + 1);
  }
  return std::nullopt;
}

void Misc::set(std::string_view key, std::string_view value) {
  std::string item = std::string(key) + "=" + std::string(value);
  for (auto& existing : items_) {
    if (key_of(existing) == key) {
      existing = std::move(item);
      return;
    }
  }
  items_.push_back(std::move(item));
}

void Misc::erase(std::string_view key) {
  std::erase_if(items_, [&](const std::string& item) { return key_of(item) == key; });
}

void Misc::retain_only(const std::vector<std::string_view>& keys) {
  std::erase_if(items_, [&](const std::string& item) {
    return std::find(keys.begin(), keys.end(), key_of(item)) == keys.end();
  });
}

bool operator==(const Token& a, const Token& b) {
  return a.id == b.id && a.form == b.form && a.lemma == b.lemma && a.upos == b.upos &&
         a.xpos == b.xpos && a.feats == b.feats && a.head == b.head && a.deprel == b.deprel &&
         a.deps == b.deps && a.misc == b.misc;
}

bool Token::space_after() const {
  auto v = misc_value("SpaceAfter");
  return !(v && *v == "No");
}

void Token::set_space_after(bool value) {
  if (value) {
    if (misc) {
      misc->erase("SpaceAfter");
      if (misc->empty()) misc.reset();
    }
  } else {
    set_misc("SpaceAfter", "No");
  }
}

std::optional<std::string> Token::misc_value(std::string_view key) const {
  if (!misc) return std::nullopt;
  return misc->get(key);
}

void Token::set_misc(std::string_view key, std::string_view value) {
  if (!misc) misc.emplace();
  misc->set(key, value);
}

std::optional<std::string> Sentence::comment_value(std::string_view key) const {
  std::string prefix = "# " + std::string(key) + " = ";
  for (const auto& c : comments) {
    if (c.starts_with(prefix)) return c.substr(prefix.size());
    if (c == "# " + std::string(key) + " =") return std::string();
  }
  return std::nullopt;
}

void Sentence::set_comment(std::string_view key, std::string_view value) {
  std::string prefix = "# " + std::string(key) + " = ";
  std::string line = prefix + std::string(value);
  for (auto& c : comments) {
    if (c.starts_with(prefix) || c == "# " + std::string(key) + " =") {
      c = std::move(line);
      return;
    }
  }
  comments.push_back(std::move(line));
}

std::vector<const Token*> Sentence::words() const {
  std::vector<const Token*> out;
  for (const auto& t : tokens)
    if (!t.is_range()) out.push_back(&t);
  return out;
}

std::vector<Token*> Sentence::words() {
  std::vector<Token*> out;
  for (auto& t : tokens)
    if (!t.is_range()) out.push_back(&t);
  return out;
}

std::size_t Sentence::word_count() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return !t.is_range(); }));
}

std::size_t Document::word_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.word_count();
  return n;
}

namespace {

class Parser {
 public:
  explicit Parser(ParseOptions options) : options_(options) {}

  Document run(std::string_view text) {
    if (text.empty()) throw ParseError(1, "no sentences");
    auto lines = split(text, '\n');
    // A trailing '\n' yields a final empty element that is not a line.
    bool ends_with_newline = text.back() == '\n';
    if (ends_with_newline) lines.pop_back();

    for (std::size_t i = 0; i < lines.size(); ++i) {
      line_no_ = i + 1;
      std::string_view line = lines[i];
      if (!line.empty() && line.back() == '\r') {
        if (!options_.lenient) fail("CR line ending");
        line.remove_suffix(1);
      }
      if (line.empty()) {
        if (!open_) {
          if (!options_.lenient) fail("unexpected blank line");
          continue;
        }
        close_sentence();
        continue;
      }
      if (line.front() == '#') {
        if (!current_.tokens.empty()) fail("comment line after token lines");
        current_.comments.emplace_back(line);
        open_ = true;
        continue;
      }
      token_line(line);
      open_ = true;
    }
    if (open_) {
      if (!options_.lenient) fail("last sentence is not terminated by a blank line");
      close_sentence();
    }
    if (!ends_with_newline && !options_.lenient) fail("missing final newline");
    if (doc_.sentences.empty()) throw ParseError(1, "no sentences");
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_no_, what); }

  void token_line(std::string_view line) {
    auto cols = split(line, '\t');
    if (cols.size() != 10)
      fail("expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (cols[c].empty()) fail("empty field in column " + std::to_string(c + 1));

    Token t;
    auto id_col = cols[0];
    if (id_col.find('.') != std::string_view::npos) fail("empty nodes are not supported");
    auto dash = id_col.find('-');
    if (dash != std::string_view::npos) {
      auto a = parse_index(id_col.substr(0, dash));
      auto b = parse_index(id_col.substr(dash + 1));
      if (!a || !b || *a < 1 || *b <= *a) fail("malformed range id '" + std::string(id_col) + "'");
      if (*a != next_word_) fail("range " + std::string(id_col) + " does not precede word " +
                                 std::to_string(*a) + " (non-contiguous ids)");
      if (*a <= last_range_end_) fail("overlapping range " + std::string(id_col));
      t.id = TokenId::range(*a, *b);
      last_range_end_ = *b;
      for (std::size_t c = 2; c <= 8; ++c)
        if (cols[c] != kUnset) fail("range token carries annotations");
    } else {
      auto id = parse_index(id_col);
      if (!id || *id < 1) fail("malformed id '" + std::string(id_col) + "'");
      if (*id != next_word_)
        fail("non-contiguous id " + std::to_string(*id) + ", expected " + std::to_string(next_word_));
      t.id = TokenId::single(*id);
      ++next_word_;
    }

    t.form = std::string(cols[1]);
    t.lemma = opt_field(cols[2]);
    t.upos = opt_field(cols[3]);
    t.xpos = opt_field(cols[4]);
    if (cols[5] != kUnset) {
      try {
        t.feats = Feats::parse(cols[5]);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    if (cols[6] != kUnset) {
      auto h = parse_index(cols[6]);
      if (!h) fail("malformed head '" + std::string(cols[6]) + "'");
      t.head = *h;
      heads_.push_back({line_no_, *h});
    }
    t.deprel = opt_field(cols[7]);
    t.deps = opt_field(cols[8]);
    if (cols[9] != kUnset) t.misc = Misc::parse(cols[9]);
    current_.tokens.push_back(std::move(t));
  }

  void close_sentence() {
    if (current_.tokens.empty()) fail("sentence without token lines");
    int n = next_word_ - 1;
    if (last_range_end_ > n) fail("range ends past the last word");
    for (auto [line, head] : heads_) {
      if (head > n) throw ParseError(line, "head " + std::to_string(head) + " out of range");
    }
    doc_.sentences.push_back(std::move(current_));
    current_ = Sentence{};
    heads_.clear();
    next_word_ = 1;
    last_range_end_ = 0;
    open_ = false;
  }

  ParseOptions options_;
  Document doc_;
  Sentence current_;
  std::vector<std::pair<std::size_t, int>> heads_;
  std::size_t line_no_ = 0;
  int next_word_ = 1;
  int last_range_end_ = 0;
  bool open_ = false;
};

void append_token(std::string& out, const Token& t) {
  out += t.id.str();
  out += '\t';
  out += t.form;
  out += '\t';
  out += or_unset(t.lemma);
  out += '\t';
  out += or_unset(t.upos);
  out += '\t';
  out += or_unset(t.xpos);
  out += '\t';
  out += t.feats ? t.feats->str() : std::string(kUnset);
  out += '\t';
  out += t.head ? std::to_string(*t.head) : std::string(kUnset);
  out += '\t';
  out += or_unset(t.deprel);
  out += '\t';
  out += or_unset(t.deps);
  out += '\t';
  out += t.misc ? t.misc->str() : std::string(kUnset);
  out += '\n';
}

}  // namespace

Document parse_document(std::string_view text, ParseOptions options) {
  return Parser(options).run(text);
}

std::string serialize_sentence(const Sentence& sentence) {
  std::string out;
  for (const auto& c : sentence.comments) {
    out += c;
    out += '\n';
  }
  for (const auto& t : sentence.tokens) append_token(out, t);
  out += '\n';
  return out;
}

std::string serialize_document(const Document& doc) {
  std::string out;
  for (const auto& s : doc.sentences) out += serialize_sentence(s);
  return out;
}

std::string surface_text(const Sentence& sentence) {
  std::string out;
  int covered_until = 0;
  bool pending_space = false;
  for (const auto& t : sentence.tokens) {
    if (!t.is_range() && t.id.start <= covered_until) continue;
    if (pending_space) out += ' ';
    out += t.form;
    pending_space = t.space_after();
    if (t.is_range()) covered_until = t.id.end;
  }
  return out;
}

Document strip_annotations(const Document& doc) {
  Document out = doc;
  for (auto& s : out.sentences) {
    for (auto& t : s.tokens) {
      t.lemma.reset();
      t.upos.reset();
      t.xpos.reset();
      t.feats.reset();
      t.head.reset();
      t.deprel.reset();
      t.deps.reset();
      t.closed_fixed = false;
      if (t.misc) {
        t.misc->retain_only({"SpaceAfter"});
        if (t.misc->empty()) t.misc.reset();
      }
    }
  }
  return out;
}

std::vector<Violation> validate_sentence(const Sentence& s, std::size_t index) {
  std::vector<Violation> out;
  const std::string label = sentence_label(s, index);
  auto add = [&](const Token* t, std::string rule, std::string message) {
    out.push_back({label, t ? t->id.str() : std::string(), std::move(rule), std::move(message)});
  };

  if (s.tokens.empty()) {
    add(nullptr, "empty-sentence", "sentence has no tokens");
    return out;
  }

  std::set<int> word_ids;
  int expected = 1;
  for (const auto& t : s.tokens) {
    if (t.is_range()) continue;
    if (t.id.start != expected) {
      add(&t, "id-contiguity", "expected id " + std::to_string(expected));
    }
    word_ids.insert(t.id.start);
    expected = t.id.start + 1;
  }

  int last_range_end = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i];
    if (!t.is_range()) continue;
    if (t.id.end < t.id.start) add(&t, "range-order", "range end precedes its start");
    for (int w = t.id.start; w <= t.id.end; ++w) {
      if (!word_ids.count(w)) {
        add(&t, "range-coverage", "covered word " + std::to_string(w) + " does not exist");
        break;
      }
    }
    if (t.id.start <= last_range_end) add(&t, "range-overlap", "overlaps a preceding range");
    last_range_end = std::max(last_range_end, t.id.end);
    bool followed_by_first = i + 1 < s.tokens.size() && !s.tokens[i + 1].is_range() &&
                             s.tokens[i + 1].id.start == t.id.start;
    if (!followed_by_first && word_ids.count(t.id.start)) {
      add(&t, "range-position", "range line must directly precede its first word");
    }
    if (t.lemma || t.upos || t.xpos || t.feats || t.head || t.deprel || t.deps) {
      add(&t, "range-annotation", "range tokens carry only form and misc");
    }
  }

  for (const auto& t : s.tokens) {
    if (t.is_range()) continue;
    if (t.head && *t.head != 0 && !word_ids.count(*t.head)) {
      add(&t, "head-range", "head " + std::to_string(*t.head) + " is not a word of the sentence");
    }
    if (t.feats) {
      if (t.feats->has_duplicate_keys()) add(&t, "feats-duplicate", "duplicate feature key");
      if (!t.feats->is_canonical()) add(&t, "feats-order", "features are not in canonical order");
    }
  }

  if (auto text = s.text()) {
    if (surface_text(s) != *text) add(nullptr, "text-mismatch", "tokens do not reproduce the text comment");
  }
  return out;
}

std::vector<Violation> validate_document(const Document& doc) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    auto v = validate_sentence(doc.sentences[i], i);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace annopipe
