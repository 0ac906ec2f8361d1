#include "annopipe/dataprep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "annopipe/archive.hpp"
#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

std::vector<std::string> words_of(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

std::uint64_t count_tokens(const std::vector<Sentence>& sentences, std::size_t begin, std::size_t end) {
  std::uint64_t n = 0;
  for (std::size_t i = begin; i < end && i < sentences.size(); ++i) n += sentences[i].word_count();
  return n;
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

Decimal1 Decimal1::parse(std::string_view s) {
  auto bad = [&] { return ConfigError("'" + std::string(s) + "' is not a decimal with at most one fractional digit"); };
  if (s.empty()) throw bad();
  std::int64_t whole = 0;
  std::size_t i = 0;
  for (; i < s.size() && s[i] != '.'; ++i) {
    if (s[i] < '0' || s[i] > '9' || whole > 1'000'000'000) throw bad();
    whole = whole * 10 + (s[i] - '0');
  }
  if (i == 0) throw bad();
  std::int64_t frac = 0;
  if (i < s.size()) {
    if (s.size() != i + 2 || s[i + 1] < '0' || s[i + 1] > '9') throw bad();
    frac = s[i + 1] - '0';
  }
  return from_tenths(whole * 10 + frac);
}

std::string Decimal1::str() const { return std::to_string(whole()) + "." + std::to_string(fraction_tenths()); }

Decimal1 compute_repetition_ratio(std::uint64_t size_a, std::uint64_t size_b) {
  if (size_a == 0 || size_b == 0) throw DataError("repetition ratio needs two non-zero token counts");
  // round(10a/b) half-up == floor((20a + b) / 2b)
  return Decimal1::from_tenths(static_cast<std::int64_t>((20 * size_a + size_b) / (2 * size_b)));
}

std::size_t scaled_count(Decimal1 d, std::size_t n) {
  return static_cast<std::size_t>((static_cast<std::uint64_t>(d.tenths()) * n + 5) / 10);
}

Document oversample_dataset(const Document& doc, Decimal1 repetitions, const OversampleOptions& options) {
  if (doc.sentences.empty()) throw DataError("cannot oversample an empty document");
  if (repetitions < Decimal1::from_tenths(1)) throw ConfigError("repetitions must be at least 0.1");
  const auto n = doc.sentences.size();

  auto copy_of = [&](std::size_t i, std::int64_t copy) {
    Sentence s = doc.sentences[i];
    auto base = s.sent_id().value_or(std::to_string(i + 1));
    s.set_comment("sent_id", base + "-r" + std::to_string(copy));
    return s;
  };

  Document out;
  out.sentences.reserve(static_cast<std::size_t>(repetitions.whole()) * n + n);
  for (std::int64_t copy = 1; copy <= repetitions.whole(); ++copy)
    for (std::size_t i = 0; i < n; ++i) out.sentences.push_back(copy_of(i, copy));

  const auto m = scaled_count(Decimal1::from_tenths(repetitions.fraction_tenths()), n);
  std::vector<std::size_t> picked(n);
  std::iota(picked.begin(), picked.end(), 0);
  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(picked.begin(), picked.end(), rng);
    picked.resize(m);
    std::sort(picked.begin(), picked.end());
  } else {
    picked.resize(m);
  }
  for (auto i : picked) out.sentences.push_back(copy_of(i, repetitions.whole() + 1));
  return out;
}

DiacriticMap DiacriticMap::builtin(std::string_view language) {
  DiacriticMap m;
  if (language != "sl" && language != "hr" && language != "sr")
    throw ConfigError("no dediacritization map for language '" + std::string(language) + "'");
  m.add(U'č', "c");
  m.add(U'Č', "C");
  m.add(U'š', "s");
  m.add(U'Š', "S");
  m.add(U'ž', "z");
  m.add(U'Ž', "Z");
  if (language != "sl") {
    m.add(U'ć', "c");
    m.add(U'Ć', "C");
    m.add(U'đ', "dj");
    m.add(U'Đ', "Dj");
  }
  return m;
}

DiacriticMap DiacriticMap::parse(std::string_view text) {
  DiacriticMap m;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = words_of(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    auto cps = utf8::decode(fields[0]);
    if (fields.size() != 2 || cps.size() != 1)
      throw ConfigError("diacritic map line " + std::to_string(line_no) + ": expected '<char> <replacement>'");
    m.add(cps[0], fields[1]);
  }
  return m;
}

DiacriticMap DiacriticMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open diacritic map " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void DiacriticMap::add(char32_t from, std::string to) { map_[from] = std::move(to); }

std::string DiacriticMap::apply(std::string_view s) const {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : utf8::decode(s)) {
    auto it = map_.find(c);
    out += it == map_.end() ? utf8::encode(c) : it->second;
  }
  return out;
}

Sentence dediacritize(const Sentence& sentence, const DiacriticMap& map) {
  Sentence out = sentence;
  for (auto& t : out.tokens) t.form = map.apply(t.form);
  if (auto text = out.text()) out.set_comment("text", map.apply(*text));
  return out;
}

Document dediacritize(const Document& doc, const DiacriticMap& map) {
  Document out;
  out.sentences.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) out.sentences.push_back(dediacritize(s, map));
  return out;
}

Sentence merge_n_to_1(const Sentence& sentence) {
  Sentence out = sentence;
  bool changed = false;
  for (auto& t : out.tokens) {
    std::vector<char32_t> kept;
    for (char32_t c : utf8::decode(t.form))
      if (!utf8::is_space(c)) kept.push_back(c);
    auto merged = utf8::encode(kept);
    if (merged != t.form) {
      t.form = std::move(merged);
      changed = true;
    }
  }
  if (changed) out.set_comment("text", surface_text(out));
  return out;
}

Document merge_n_to_1(const Document& doc) {
  Document out;
  for (const auto& s : doc.sentences) out.sentences.push_back(merge_n_to_1(s));
  return out;
}

Sentence flatten_1_to_n(const Sentence& sentence) {
  Sentence out;
  out.comments = sentence.comments;
  std::vector<std::pair<int, int>> renumber;  // old id -> new id
  int range_end = 0;
  bool range_space = true;
  for (const auto& t : sentence.tokens) {
    if (t.is_range()) {
      range_end = t.id.end;
      range_space = t.space_after();
      continue;
    }
    Token w = t;
    if (w.id.start <= range_end) w.set_space_after(w.id.start == range_end ? range_space : false);
    int new_id = static_cast<int>(renumber.size()) + 1;
    renumber.emplace_back(w.id.start, new_id);
    w.id = TokenId::single(new_id);
    out.tokens.push_back(std::move(w));
  }
  for (auto& t : out.tokens) {
    if (!t.head || *t.head == 0) continue;
    auto it = std::find_if(renumber.begin(), renumber.end(), [&](const auto& p) { return p.first == *t.head; });
    if (it != renumber.end()) t.head = it->second;
  }
  return out;
}

Document flatten_1_to_n(const Document& doc) {
  Document out;
  for (const auto& s : doc.sentences) out.sentences.push_back(flatten_1_to_n(s));
  return out;
}

Split split_document(const Document& doc, double dev_fraction, double test_fraction) {
  if (dev_fraction < 0 || test_fraction < 0 || dev_fraction + test_fraction >= 1.0)
    throw ConfigError("split fractions must be non-negative and sum to less than 1");
  const auto n = doc.sentences.size();
  const auto n_test = std::min(n, round_half_up(test_fraction * static_cast<double>(n)));
  const auto n_dev = std::min(n - n_test, round_half_up(dev_fraction * static_cast<double>(n)));
  const auto n_train = n - n_dev - n_test;
  Split split;
  auto begin = doc.sentences.begin();
  split.train.sentences.assign(begin, begin + static_cast<long>(n_train));
  split.dev.sentences.assign(begin + static_cast<long>(n_train), begin + static_cast<long>(n_train + n_dev));
  split.test.sentences.assign(begin + static_cast<long>(n_train + n_dev), doc.sentences.end());
  return split;
}

bool SampleFilter::accepts(const Sentence& s) const {
  if (mode == FilterMode::none) return true;
  bool match = s.comment_value(key) == value;
  return mode == FilterMode::include ? match : !match;
}

std::string SampleFilter::str() const {
  if (mode == FilterMode::none) return "-";
  return (mode == FilterMode::include ? "+" : "-") + key + "=" + value;
}

Recipe Recipe::parse(std::string_view text) {
  Recipe r;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [&](const std::string& what) {
    return ConfigError("recipe line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto f = words_of(line);
    if (f.empty() || f[0][0] == '#') continue;
    try {
      if (f[0] == "name" || f[0] == "language") {
        if (f.size() != 2) throw fail("expected '" + f[0] + " <value>'");
        (f[0] == "name" ? r.name : r.language) = f[1];
        continue;
      }
      if (f[0] == "target") {
        auto groups = split_fields(f.size() == 3 ? f[1] : "", ':');
        auto ratio = split_fields(f.size() == 3 ? f[2] : "", ':');
        if (f.size() != 3 || groups.size() != 2 || ratio.size() != 2)
          throw fail("expected 'target <groupA>:<groupB> <a>:<b>'");
        r.target = TargetRatio{groups[0], groups[1], std::stoull(ratio[0]), std::stoull(ratio[1])};
        if (r.target->a == 0 || r.target->b == 0) throw fail("target ratio terms must be positive");
        continue;
      }
      if (f.size() != 5 && f.size() != 6)
        throw fail("expected '<corpus-id> <group> <repetitions> <dediacritize> <fraction> [<filter>]'");
      RecipeComponent c;
      c.corpus_id = f[0];
      c.group = f[1];
      if (f[2] != "auto") c.repetitions = Decimal1::parse(f[2]);
      c.dediacritize = Decimal1::parse(f[3]);
      std::size_t used = 0;
      c.fraction = std::stod(f[4], &used);
      if (used != f[4].size() || !(c.fraction > 0.0 && c.fraction <= 1.0))
        throw fail("sample fraction must be in (0, 1]");
      if (c.repetitions && c.dediacritize > *c.repetitions)
        throw fail("dediacritized repetitions exceed repetitions");
      if (f.size() == 6 && f[5] != "-") {
        auto& flt = f[5];
        auto eq = flt.find('=');
        if ((flt[0] != '+' && flt[0] != '-') || eq == std::string::npos || eq < 2)
          throw fail("filter must be '-', '+key=value' or '-key=value'");
        c.filter.mode = flt[0] == '+' ? FilterMode::include : FilterMode::exclude;
        c.filter.key = flt.substr(1, eq - 1);
        c.filter.value = flt.substr(eq + 1);
      }
      r.components.push_back(std::move(c));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw fail("malformed number in '" + line + "'");
    }
  }
  if (r.components.empty()) throw ConfigError("recipe has no components");
  if (std::count_if(r.components.begin(), r.components.end(), [](const auto& c) { return !c.repetitions; }) > 1)
    throw ConfigError("recipe may contain at most one 'auto' component");
  return r;
}

Recipe Recipe::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open recipe " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto r = parse(buf.str());
  if (r.name.empty()) r.name = path.stem().string();
  return r;
}

double RecipeReport::dediacritized_fraction_combined() const {
  return total_tokens ? static_cast<double>(dediacritized_tokens) / static_cast<double>(total_tokens) : 0.0;
}

double RecipeReport::dediacritized_fraction_portion() const {
  std::uint64_t dediac = 0;
  std::uint64_t base = 0;
  for (const auto& [group, count] : group_dediacritized) {
    if (count == 0) continue;
    dediac += count;
    base += group_tokens.at(group);
  }
  return base ? static_cast<double>(dediac) / static_cast<double>(base) : 0.0;
}

std::string RecipeReport::str() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "component" << std::setw(14) << "group" << std::right << std::setw(6) << "reps"
      << std::setw(8) << "dediac" << std::setw(11) << "src_sents" << std::setw(12) << "src_tokens" << std::setw(11)
      << "sentences" << std::setw(12) << "tokens" << std::setw(14) << "dediac_tokens" << '\n';
  for (const auto& c : components) {
    out << std::left << std::setw(16) << c.corpus_id << std::setw(14) << c.group << std::right << std::setw(6)
        << c.repetitions.str() << std::setw(8) << c.dediacritize.str() << std::setw(11) << c.source_sentences
        << std::setw(12) << c.source_tokens << std::setw(11) << c.sentences << std::setw(12) << c.tokens
        << std::setw(14) << c.dediacritized_tokens << '\n';
  }
  out << "total tokens: " << total_tokens << '\n';
  for (const auto& [group, count] : group_tokens) out << "group " << group << ": " << count << " tokens\n";
  if (target) {
    out << "target " << target->group_a << ':' << target->group_b << ' ' << target->a << ':' << target->b;
    if (achieved_ratio) {
      double expected = static_cast<double>(target->a) / static_cast<double>(target->b);
      out << ", achieved " << fixed(*achieved_ratio, 3) << " (1:" << fixed(1.0 / *achieved_ratio, 3)
          << "), deviation " << fixed(100.0 * (*achieved_ratio / expected - 1.0), 1) << "%";
    }
    out << '\n';
  }
  out << "dediacritized fraction of combined set: " << fixed(dediacritized_fraction_combined(), 3) << '\n';
  out << "dediacritized fraction of dediacritized groups: " << fixed(dediacritized_fraction_portion(), 3) << '\n';
  return out.str();
}

RecipeResult build_recipe_dataset(const Recipe& recipe, const std::map<std::string, Document>& corpora,
                                  const RecipeOptions& options) {
  const auto count = recipe.components.size();
  std::vector<Document> sources(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = recipe.components[i];
    auto it = corpora.find(c.corpus_id);
    if (it == corpora.end()) throw ConfigError("recipe refers to unknown corpus '" + c.corpus_id + "'");
    Document filtered;
    for (const auto& s : it->second.sentences)
      if (c.filter.accepts(s)) filtered.sentences.push_back(s);
    auto keep = std::min(filtered.sentences.size(),
                         round_half_up(c.fraction * static_cast<double>(filtered.sentences.size())));
    filtered.sentences.resize(keep);
    if (filtered.sentences.empty())
      throw DataError("recipe component '" + c.corpus_id + "' selects no sentences");
    sources[i] = std::move(filtered);
  }

  std::vector<Decimal1> reps(count);
  for (std::size_t i = 0; i < count; ++i)
    if (recipe.components[i].repetitions) reps[i] = *recipe.components[i].repetitions;
  for (std::size_t i = 0; i < count; ++i) {
    if (recipe.components[i].repetitions) continue;
    std::uint64_t others = 0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i || recipe.components[j].group == recipe.components[i].group) continue;
      others += scaled_count(reps[j], sources[j].word_count());
    }
    reps[i] = compute_repetition_ratio(others, sources[i].word_count());
  }

  std::optional<DiacriticMap> map = options.diacritics;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = recipe.components[i];
    if (c.dediacritize == Decimal1{}) continue;
    if (c.dediacritize.tenths() > reps[i].tenths() - 10)
      throw ConfigError("recipe component '" + c.corpus_id + "': dediacritizing " + c.dediacritize.str() + " of " +
                        reps[i].str() +
                        " repetitions would leave no diacritic-preserving copy and so lose original data; at most "
                        "repetitions - 1 may be dediacritized");
    if (!map) map = DiacriticMap::builtin(recipe.language);
  }

  std::vector<Document> outputs(count);
  std::vector<ComponentReport> reports(count);
  for_each_index(options.exec, count, [&](std::size_t i) {
    const auto& c = recipe.components[i];
    const auto n = sources[i].sentences.size();
    auto out = oversample_dataset(sources[i], reps[i], options.oversample);
    auto& rep = reports[i];
    rep.corpus_id = c.corpus_id;
    rep.group = c.group;
    rep.repetitions = reps[i];
    rep.dediacritize = c.dediacritize;
    rep.source_sentences = n;
    rep.source_tokens = sources[i].word_count();
    if (c.dediacritize > Decimal1{}) {
      // Copies 2 .. 1+floor(d) entirely, then a prefix of the next copy.
      const auto begin = n;
      const auto end = std::min(out.sentences.size(),
                                n * static_cast<std::size_t>(1 + c.dediacritize.whole()) +
                                    scaled_count(Decimal1::from_tenths(c.dediacritize.fraction_tenths()), n));
      for (auto k = begin; k < end; ++k) out.sentences[k] = dediacritize(out.sentences[k], *map);
      rep.dediacritized_tokens = count_tokens(out.sentences, begin, end);
    }
    rep.sentences = out.sentences.size();
    rep.tokens = out.word_count();
    outputs[i] = std::move(out);
  });

  RecipeResult result;
  auto& report = result.report;
  report.target = recipe.target;
  for (std::size_t i = 0; i < count; ++i) {
    auto& sentences = result.dataset.sentences;
    sentences.insert(sentences.end(), std::make_move_iterator(outputs[i].sentences.begin()),
                     std::make_move_iterator(outputs[i].sentences.end()));
    const auto& rep = reports[i];
    report.group_tokens[rep.group] += rep.tokens;
    report.group_dediacritized[rep.group] += rep.dediacritized_tokens;
    report.total_tokens += rep.tokens;
    report.dediacritized_tokens += rep.dediacritized_tokens;
    report.components.push_back(rep);
  }
  if (recipe.target) {
    auto a = report.group_tokens.find(recipe.target->group_a);
    auto b = report.group_tokens.find(recipe.target->group_b);
    if (a != report.group_tokens.end() && b != report.group_tokens.end() && b->second > 0)
      report.achieved_ratio = static_cast<double>(a->second) / static_cast<double>(b->second);
  }
  return result;
}

}  // namespace annopipe
