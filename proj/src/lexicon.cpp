#include "annopipe/lexicon.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

constexpr std::pair<ClosedClass, std::string_view> kClassNames[] = {
    {ClosedClass::pronoun, "pronoun"},
    {ClosedClass::determiner, "determiner"},
    {ClosedClass::adposition, "adposition"},
    {ClosedClass::particle, "particle"},
    {ClosedClass::coordinating_conjunction, "cconj"},
    {ClosedClass::subordinating_conjunction, "sconj"},
};

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string inflate_gzip(std::string_view compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw DataError("zlib initialisation failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  std::string out;
  char buf[1 << 15];
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END) {
      inflateEnd(&zs);
      throw DataError("corrupt gzip stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (ret != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
  inflateEnd(&zs);
  if (ret != Z_STREAM_END) throw DataError("truncated gzip stream");
  return out;
}

}  // namespace

std::string_view to_string(ClosedClass c) {
  for (auto [cls, name] : kClassNames)
    if (cls == c) return name;
  return "?";
}

std::optional<ClosedClass> closed_class_from_string(std::string_view s) {
  for (auto [cls, name] : kClassNames)
    if (name == s) return cls;
  return std::nullopt;
}

ClosedClassPrefixes ClosedClassPrefixes::multext_east() {
  ClosedClassPrefixes p;
  p.add(ClosedClass::pronoun, "P");
  p.add(ClosedClass::adposition, "S");
  p.add(ClosedClass::particle, "Q");
  p.add(ClosedClass::coordinating_conjunction, "Cc");
  p.add(ClosedClass::subordinating_conjunction, "Cs");
  return p;
}

ClosedClassPrefixes ClosedClassPrefixes::parse(const std::vector<std::string>& lines) {
  ClosedClassPrefixes p;
  for (const auto& line : lines) {
    std::istringstream in(line);
    std::string name;
    std::string prefix;
    in >> name >> prefix;
    auto cls = closed_class_from_string(name);
    if (!cls || prefix.empty()) throw ConfigError("bad closed-class prefix line '" + line + "'");
    p.add(*cls, prefix);
  }
  return p;
}

void ClosedClassPrefixes::add(ClosedClass c, std::string prefix) {
  entries_.emplace_back(c, std::move(prefix));
}

std::optional<ClosedClass> ClosedClassPrefixes::classify(std::string_view xpos) const {
  std::optional<ClosedClass> best;
  std::size_t best_len = 0;
  for (const auto& [cls, prefix] : entries_) {
    if (xpos.starts_with(prefix) && prefix.size() > best_len) {
      best = cls;
      best_len = prefix.size();
    }
  }
  return best;
}

Lexicon::Lexicon(ClosedClassPrefixes prefixes) : prefixes_(std::move(prefixes)) {}

void Lexicon::add(std::string_view form, std::string_view lemma, std::string_view xpos,
                  std::uint64_t frequency) {
  auto& entries = index_[std::string(form)];
  auto it = std::find_if(entries.begin(), entries.end(), [&](const LexiconEntry& e) {
    return e.xpos == xpos && e.lemma == lemma;
  });
  if (it != entries.end()) {
    it->frequency += frequency;
    return;
  }
  LexiconEntry e{std::string(xpos), std::string(lemma), frequency};
  auto pos = std::lower_bound(entries.begin(), entries.end(), e, [](const auto& a, const auto& b) {
    return std::tie(a.xpos, a.lemma) < std::tie(b.xpos, b.lemma);
  });
  entries.insert(pos, std::move(e));
  ++entry_count_;
  if (auto cls = prefixes_.classify(xpos)) closed_index_[*cls].insert(std::string(form));
}

Lexicon Lexicon::parse(std::string_view text, ClosedClassPrefixes prefixes) {
  Lexicon lex(std::move(prefixes));
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() < 3)
      throw DataError("lexicon line " + std::to_string(line_no) + ": expected at least 3 columns, found " +
                      std::to_string(cols.size()));
    std::uint64_t freq = 0;
    if (cols.size() >= 4 && !cols[3].empty()) {
      auto [ptr, ec] = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), freq);
      if (ec != std::errc() || ptr != cols[3].data() + cols[3].size())
        throw DataError("lexicon line " + std::to_string(line_no) + ": bad frequency '" +
                        std::string(cols[3]) + "'");
    }
    if (cols[0].empty() || cols[1].empty() || cols[2].empty())
      throw DataError("lexicon line " + std::to_string(line_no) + ": empty column");
    lex.add(cols[0], cols[1], cols[2], freq);
  }
  return lex;
}

Lexicon Lexicon::load(std::istream& in, ClosedClassPrefixes prefixes) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), std::move(prefixes));
}

Lexicon Lexicon::load_file(const std::filesystem::path& path, ClosedClassPrefixes prefixes) {
  return parse(read_file_maybe_gzip(path), std::move(prefixes));
}

const std::vector<LexiconEntry>* Lexicon::entries(std::string_view form) const {
  auto it = index_.find(std::string(form));
  return it == index_.end() ? nullptr : &it->second;
}

const std::vector<LexiconEntry>* Lexicon::resolve(std::string_view form) const {
  if (const auto* e = entries(form)) return e;
  auto lower = utf8::to_lower(form);
  if (lower != form) return entries(lower);
  return nullptr;
}

std::optional<std::string> Lexicon::lookup_lemma(std::string_view form, std::string_view xpos) const {
  auto best_in = [&](const std::vector<LexiconEntry>* entries) -> std::optional<std::string> {
    if (!entries) return std::nullopt;
    const LexiconEntry* best = nullptr;
    for (const auto& e : *entries) {
      if (e.xpos != xpos) continue;
      if (!best || e.frequency > best->frequency ||
          (e.frequency == best->frequency && e.lemma < best->lemma))
        best = &e;
    }
    if (!best) return std::nullopt;
    return best->lemma;
  };
  if (auto lemma = best_in(entries(form))) return lemma;
  auto lower = utf8::to_lower(form);
  if (lower != form) return best_in(entries(lower));
  return std::nullopt;
}

std::set<std::string> Lexicon::allowed_tags(std::string_view form) const {
  std::set<std::string> tags;
  if (const auto* entries = resolve(form))
    for (const auto& e : *entries) tags.insert(e.xpos);
  return tags;
}

std::optional<std::string> Lexicon::most_frequent_tag(std::string_view form) const {
  const auto* entries = resolve(form);
  if (!entries) return std::nullopt;
  std::map<std::string, std::uint64_t> totals;
  for (const auto& e : *entries) totals[e.xpos] += e.frequency;
  // std::map iterates tags in ascending order, so strict '>' keeps the
  // smallest tag on ties.
  const std::pair<const std::string, std::uint64_t>* best = nullptr;
  for (const auto& kv : totals)
    if (!best || kv.second > best->second) best = &kv;
  return best->first;
}

bool Lexicon::in_closed_class(ClosedClass c, std::string_view form) const {
  auto it = closed_index_.find(c);
  if (it == closed_index_.end()) return false;
  if (it->second.count(std::string(form))) return true;
  return it->second.count(utf8::to_lower(form)) > 0;
}

const std::set<std::string>& Lexicon::closed_class_forms(ClosedClass c) const {
  static const std::set<std::string> none;
  auto it = closed_index_.find(c);
  return it == closed_index_.end() ? none : it->second;
}

std::string Lexicon::to_text() const {
  std::vector<const std::string*> forms;
  forms.reserve(index_.size());
  for (const auto& kv : index_) forms.push_back(&kv.first);
  std::sort(forms.begin(), forms.end(), [](const auto* a, const auto* b) { return *a < *b; });
  std::string out;
  for (const auto* form : forms) {
    for (const auto& e : index_.at(*form)) {
      out += *form;
      out += '\t';
      out += e.lemma;
      out += '\t';
      out += e.xpos;
      out += '\t';
      out += std::to_string(e.frequency);
      out += '\n';
    }
  }
  return out;
}

std::string read_file_maybe_gzip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1F &&
      static_cast<unsigned char>(bytes[1]) == 0x8B)
    return inflate_gzip(bytes);
  return bytes;
}

}  // namespace annopipe
