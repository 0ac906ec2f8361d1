#include "annopipe/tokenizer.hpp"

#include <algorithm>
#include <optional>
#include <fstream>
#include <sstream>

#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

using Cps = std::u32string;

bool is_terminal(char32_t c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

bool is_closer(char32_t c) {
  switch (c) {
    case 0x201D: case 0x201C: case '"': case '\'': case 0x2019: case 0xBB:
    case ')': case ']': case '}': case 0x203A:
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t c) {
  switch (c) {
    case 0x201E: case 0x201C: case '"': case '\'': case 0x2018: case 0xAB:
    case '(': case '[': case '{': case 0x2039: case 0x201A: case '<':
      return true;
    default:
      return false;
  }
}

bool is_word_char(char32_t c) {
  if (utf8::is_letter(c) || utf8::is_digit(c)) return true;
  if (c >= 0x300 && c <= 0x36F) return true;  // combining marks
  if (c < 0x250) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0x1F000) return false;
  return true;
}

std::string str(const Cps& cps) {
  std::string out;
  for (char32_t c : cps) out += utf8::encode(c);
  return out;
}

Cps cps_of(std::string_view s) {
  auto v = utf8::decode(s);
  return Cps(v.begin(), v.end());
}

bool starts_with(const Cps& s, const Cps& p) {
  return s.size() >= p.size() && std::equal(p.begin(), p.end(), s.begin());
}

bool ends_with(const Cps& s, const Cps& p) {
  return s.size() >= p.size() && std::equal(p.rbegin(), p.rend(), s.rbegin());
}

bool is_url(const Cps& s) {
  for (const char* prefix : {"http://", "https://", "www."}) {
    Cps p = cps_of(prefix);
    if (starts_with(s, p) && s.size() > p.size()) return true;
  }
  return false;
}

bool is_email(const Cps& s) {
  auto at = s.find(U'@');
  if (at == Cps::npos || at == 0 || s.find(U'@', at + 1) != Cps::npos) return false;
  auto dot = s.find(U'.', at);
  if (dot == Cps::npos || dot == at + 1 || dot + 1 >= s.size()) return false;
  for (char32_t c : s)
    if (!(is_word_char(c) || c == '@' || c == '.' || c == '-' || c == '_' || c == '+')) return false;
  return true;
}

bool is_handle(const Cps& s, char32_t sigil) {
  if (s.size() < 2 || s[0] != sigil) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char32_t c) { return is_word_char(c) || c == '_'; });
}

// One punctuation piece ending at (backward) or starting at (forward) `pos`:
// a run of terminal characters, a run of one repeated character, or a single
// character.
std::size_t run_length(const Cps& s, std::size_t pos, bool forward) {
  char32_t c = s[pos];
  std::size_t n = 1;
  auto same = [&](char32_t d) { return is_terminal(c) ? is_terminal(d) : d == c; };
  if (forward) {
    while (pos + n < s.size() && !is_word_char(s[pos + n]) && same(s[pos + n])) ++n;
  } else {
    while (n <= pos && !is_word_char(s[pos - n]) && same(s[pos - n])) ++n;
  }
  return n;
}

struct RawToken {
  std::string form;
  bool space_after = true;
  bool paragraph_after = false;
};

// Whitespace-delimited run; always followed by whitespace or the end of the
// text, which counts as a boundary.
struct Chunk {
  Cps text;
  bool paragraph_after = false;
};

class ChunkSplitter {
 public:
  ChunkSplitter(TokenizerMode mode, const TokenizerRules& rules) : mode_(mode), rules_(rules) {
    for (const auto& e : rules.emoticons) emoticons_.push_back(cps_of(e));
  }

  std::vector<Cps> split(const Cps& chunk, bool next_is_lower) const {
    if (mode_ == TokenizerMode::nonstandard) {
      if (auto special = split_nonstandard(chunk, next_is_lower)) return *special;
    }
    return split_generic(chunk, next_is_lower);
  }

 private:
  std::optional<std::vector<Cps>> split_nonstandard(const Cps& chunk, bool next_is_lower) const {
    for (const auto& e : emoticons_) {
      if (chunk == e) return std::vector<Cps>{chunk};
    }
    for (const auto& e : emoticons_) {
      if (chunk.size() > e.size() && ends_with(chunk, e)) {
        auto out = split(chunk.substr(0, chunk.size() - e.size()), false);
        out.push_back(e);
        return out;
      }
      if (chunk.size() > e.size() && starts_with(chunk, e)) {
        std::vector<Cps> out{e};
        auto rest = split(chunk.substr(e.size()), next_is_lower);
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
      }
    }

    std::size_t b = 0;
    std::size_t e = chunk.size();
    while (b < e && is_opener(chunk[b])) ++b;
    while (e > b && (is_terminal(chunk[e - 1]) || is_closer(chunk[e - 1]) || chunk[e - 1] == ',' ||
                     chunk[e - 1] == ';' || chunk[e - 1] == ':'))
      --e;
    Cps core = chunk.substr(b, e - b);
    if (core.empty()) return std::nullopt;
    if (!(is_url(core) || is_email(core) || is_handle(core, '@') || is_handle(core, '#')))
      return std::nullopt;

    std::vector<Cps> out;
    for (std::size_t i = 0; i < b;) {
      auto n = run_length(chunk, i, true);
      out.push_back(chunk.substr(i, n));
      i += n;
    }
    out.push_back(core);
    for (std::size_t i = e; i < chunk.size();) {
      auto n = run_length(chunk, i, true);
      out.push_back(chunk.substr(i, n));
      i += n;
    }
    return out;
  }

  std::vector<Cps> split_generic(const Cps& chunk, bool next_is_lower) const {
    std::vector<Cps> lead;
    std::vector<Cps> trail;  // nearest to the core last
    std::size_t b = 0;
    std::size_t e = chunk.size();
    while (b < e && !is_word_char(chunk[b])) {
      auto n = std::min(run_length(chunk, b, true), e - b);
      lead.push_back(chunk.substr(b, n));
      b += n;
    }
    while (e > b && !is_word_char(chunk[e - 1])) {
      auto n = std::min(run_length(chunk, e - 1, false), e - b);
      trail.push_back(chunk.substr(e - n, n));
      e -= n;
    }
    Cps core = chunk.substr(b, e - b);

    if (mode_ == TokenizerMode::standard && !core.empty() && !trail.empty() &&
        trail.back() == U".") {
      bool all_digits = std::all_of(core.begin(), core.end(), [](char32_t c) { return utf8::is_digit(c); });
      std::string candidate = utf8::to_lower(str(core) + ".");
      if (rules_.abbreviations.count(candidate) || (all_digits && next_is_lower)) {
        core.push_back('.');
        trail.pop_back();
      }
    }

    std::vector<Cps> out = std::move(lead);
    if (!core.empty()) out.push_back(std::move(core));
    out.insert(out.end(), trail.rbegin(), trail.rend());
    return out;
  }

  TokenizerMode mode_;
  const TokenizerRules& rules_;
  std::vector<Cps> emoticons_;
};

std::vector<Chunk> chunk_text(std::string_view text) {
  std::vector<Chunk> chunks;
  auto v = utf8::decode(text);
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t newlines = 0;
    while (i < v.size() && utf8::is_space(v[i])) {
      if (v[i] == '\n') ++newlines;
      ++i;
    }
    if (!chunks.empty() && newlines >= 2) chunks.back().paragraph_after = true;
    if (i >= v.size()) break;
    Chunk c;
    while (i < v.size() && !utf8::is_space(v[i])) c.text.push_back(v[i++]);
    chunks.push_back(std::move(c));
  }
  return chunks;
}

bool first_word_char_lower(const Cps& s) {
  for (char32_t c : s) {
    if (is_word_char(c)) return utf8::is_letter(c) && !utf8::is_upper(c);
  }
  return false;
}

bool is_terminal_token(const std::string& form) {
  auto cps = cps_of(form);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), is_terminal);
}

bool is_closer_token(const std::string& form) {
  auto cps = cps_of(form);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), is_closer);
}

// Whether the token at `k` (skipping up to two punctuation-only tokens)
// begins with an uppercase letter or a digit.
bool starts_sentence(const std::vector<RawToken>& toks, std::size_t k) {
  for (std::size_t j = k; j < toks.size() && j < k + 3; ++j) {
    for (char32_t c : cps_of(toks[j].form)) {
      if (is_word_char(c)) return utf8::is_digit(c) || utf8::is_upper(c);
    }
  }
  return false;
}

std::vector<std::vector<RawToken>> segment(const std::vector<RawToken>& toks, TokenizerMode mode) {
  std::vector<std::vector<RawToken>> sentences;
  std::vector<RawToken> cur;
  auto flush = [&] {
    if (!cur.empty()) sentences.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    cur.push_back(toks[i]);
    if (toks[i].paragraph_after) {
      flush();
      continue;
    }
    if (!is_terminal_token(toks[i].form)) continue;
    if (mode == TokenizerMode::nonstandard) {
      flush();
      continue;
    }
    std::size_t j = i;
    while (j + 1 < toks.size() && !toks[j].space_after && !toks[j].paragraph_after &&
           is_closer_token(toks[j + 1].form)) {
      ++j;
      cur.push_back(toks[j]);
    }
    i = j;
    if (toks[j].paragraph_after || j + 1 == toks.size() ||
        (toks[j].space_after && starts_sentence(toks, j + 1))) {
      flush();
    }
  }
  flush();
  return sentences;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view to_string(TokenizerMode mode) {
  return mode == TokenizerMode::standard ? "standard" : "nonstandard";
}

void ClosedClassTable::add(std::string form, ClosedCategory category, std::string xpos) {
  ClosedClassEntry e;
  e.category = category;
  e.upos = category == ClosedCategory::punctuation ? "PUNCT" : "SYM";
  e.xpos = std::move(xpos);
  e.lemma = form;
  entries_[std::move(form)] = std::move(e);
}

const ClosedClassEntry* ClosedClassTable::find(std::string_view form) const {
  auto it = entries_.find(std::string(form));
  return it == entries_.end() ? nullptr : &it->second;
}

RuleSections parse_rule_sections(std::string_view text) {
  RuleSections sections;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(raw);
    if (line.empty() || line == "#" || line.starts_with("# ")) continue;
    if (line.size() > 2 && line.front() == '[' && line.back() == ']') {
      current = line.substr(1, line.size() - 2);
      sections[current];
      continue;
    }
    sections[current].push_back(line);
  }
  return sections;
}

TokenizerRules TokenizerRules::parse(std::string_view text) {
  TokenizerRules rules;
  rules.sections = parse_rule_sections(text);
  auto section = [&](std::string_view name) -> const std::vector<std::string>& {
    static const std::vector<std::string> none;
    auto it = rules.sections.find(name);
    return it == rules.sections.end() ? none : it->second;
  };
  for (const auto& a : section("ABBREV")) {
    std::string entry = utf8::to_lower(a);
    if (!entry.ends_with('.')) entry += '.';
    rules.abbreviations.insert(entry);
  }
  rules.emoticons = section("EMOTICON");
  std::stable_sort(rules.emoticons.begin(), rules.emoticons.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  auto closed = [&](std::string_view name, ClosedCategory category) {
    for (const auto& line : section(name)) {
      std::istringstream fields(line);
      std::string form;
      std::string xpos;
      fields >> form >> xpos;
      if (xpos.empty()) xpos = "Z";
      rules.closed.add(form, category, xpos);
    }
  };
  closed("CLOSED_PUNCT", ClosedCategory::punctuation);
  closed("CLOSED_SYM", ClosedCategory::symbol);
  return rules;
}

TokenizerRules TokenizerRules::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tokenizer rule file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Token closed_class_assign(Token token, const ClosedClassTable& table) {
  if (token.is_range()) return token;
  if (const auto* e = table.find(token.form)) {
    token.upos = e->upos;
    token.xpos = e->xpos;
    token.lemma = e->lemma;
    token.closed_fixed = true;
  }
  return token;
}

Document tokenize(std::string_view text, TokenizerMode mode, const TokenizerRules& rules) {
  auto chunks = chunk_text(text);
  ChunkSplitter splitter(mode, rules);

  std::vector<RawToken> toks;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    bool next_is_lower = c + 1 < chunks.size() && first_word_char_lower(chunks[c + 1].text);
    auto pieces = splitter.split(chunks[c].text, next_is_lower);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      RawToken t;
      t.form = str(pieces[p]);
      bool last = p + 1 == pieces.size();
      t.space_after = last;
      t.paragraph_after = last && chunks[c].paragraph_after;
      toks.push_back(std::move(t));
    }
  }

  Document doc;
  for (auto& raw : segment(toks, mode)) {
    Sentence s;
    int id = 1;
    for (auto& r : raw) {
      Token t;
      t.id = TokenId::single(id++);
      t.form = std::move(r.form);
      if (!r.space_after) t.set_space_after(false);
      s.tokens.push_back(closed_class_assign(std::move(t), rules.closed));
    }
    s.set_comment("sent_id", std::to_string(doc.sentences.size() + 1));
    s.set_comment("text", surface_text(s));
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

}  // namespace annopipe
