#include "annopipe/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

std::string sentence_label(const Sentence& s, std::size_t index) {
  return s.sent_id().value_or("#" + std::to_string(index + 1));
}

void require_alignment(const Document& gold, const Document& pred) {
  if (gold.sentences.size() != pred.sentences.size())
    throw DataError("tokenization differs: gold has " + std::to_string(gold.sentences.size()) +
                    " sentences, prediction " + std::to_string(pred.sentences.size()) +
                    "; use span F1 to score tokenization");
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    auto g = gold.sentences[i].words();
    auto p = pred.sentences[i].words();
    if (g.size() != p.size())
      throw DataError("tokenization differs in sentence " + sentence_label(gold.sentences[i], i) + ": " +
                      std::to_string(g.size()) + " vs " + std::to_string(p.size()) +
                      " words; use span F1 to score tokenization");
    for (std::size_t k = 0; k < g.size(); ++k)
      if (g[k]->form != p[k]->form)
        throw DataError("tokenization differs in sentence " + sentence_label(gold.sentences[i], i) + " at word " +
                        g[k]->id.str() + " ('" + g[k]->form + "' vs '" + p[k]->form +
                        "'); use span F1 to score tokenization");
  }
}

bool aligned(const Document& gold, const Document& pred) {
  try {
    require_alignment(gold, pred);
    return true;
  } catch (const DataError&) {
    return false;
  }
}

std::string value_of(const Token& t, EvalField f) {
  switch (f) {
    case EvalField::lemma: return t.lemma.value_or("_");
    case EvalField::upos: return t.upos.value_or("_");
    case EvalField::xpos: return t.xpos.value_or("_");
    case EvalField::feats: return t.feats && !t.feats->empty() ? t.feats->canonical().str() : "_";
    case EvalField::srl: return t.misc_value("SRL").value_or("_");
    default: return {};
  }
}

// Sums per-sentence tallies in sentence order so both paths agree exactly.
template <typename Fn>
Tally reduce_sentences(std::size_t n, Exec exec, Fn&& per_sentence) {
  std::vector<Tally> parts(n);
  for_each_index(exec, n, [&](std::size_t i) { parts[i] = per_sentence(i); });
  Tally total;
  for (const auto& t : parts) total += t;
  return total;
}

struct Spans {
  std::u32string chars;
  std::vector<std::pair<std::size_t, std::size_t>> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> sentences;
};

Spans spans_of(const Document& doc) {
  Spans out;
  for (const auto& s : doc.sentences) {
    const auto sentence_start = out.chars.size();
    bool any = false;
    int covered_until = 0;
    for (const auto& t : s.tokens) {
      if (!t.is_range() && t.id.start <= covered_until) continue;
      if (t.is_range()) covered_until = t.id.end;
      const auto start = out.chars.size();
      for (char32_t c : utf8::decode(t.form))
        if (!utf8::is_space(c)) out.chars.push_back(c);
      out.tokens.emplace_back(start, out.chars.size());
      any = true;
    }
    if (any) out.sentences.emplace_back(sentence_start, out.chars.size());
  }
  return out;
}

std::string format_score(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string_view to_string(EvalField f) {
  switch (f) {
    case EvalField::lemma: return "lemma";
    case EvalField::upos: return "upos";
    case EvalField::xpos: return "xpos";
    case EvalField::feats: return "feats";
    case EvalField::morph_pooled: return "morph-pooled";
    case EvalField::morph_strict: return "morph-strict";
    case EvalField::srl: return "srl";
  }
  return "?";
}

EvalField eval_field_from_string(std::string_view s) {
  for (auto f : {EvalField::lemma, EvalField::upos, EvalField::xpos, EvalField::feats, EvalField::morph_pooled,
                 EvalField::morph_strict, EvalField::srl})
    if (to_string(f) == s) return f;
  throw ConfigError("unknown evaluation field '" + std::string(s) + "'");
}

double Tally::f1() const {
  if (gold + pred == 0) return 1.0;
  return 2.0 * static_cast<double>(correct) / static_cast<double>(gold + pred);
}

double Tally::accuracy() const {
  if (gold == 0) return 1.0;
  return static_cast<double>(correct) / static_cast<double>(gold);
}

Tally micro_f1_counts(const Document& gold, const Document& pred, EvalField field, Exec exec) {
  require_alignment(gold, pred);
  return reduce_sentences(gold.sentences.size(), exec, [&](std::size_t i) {
    Tally t;
    auto g = gold.sentences[i].words();
    auto p = pred.sentences[i].words();
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (field == EvalField::morph_pooled || field == EvalField::morph_strict) {
        int hits = 0;
        for (auto f : {EvalField::upos, EvalField::xpos, EvalField::feats})
          if (value_of(*g[k], f) == value_of(*p[k], f)) ++hits;
        if (field == EvalField::morph_pooled) {
          t.gold += 3;
          t.pred += 3;
          t.correct += static_cast<std::uint64_t>(hits);
        } else {
          ++t.gold;
          ++t.pred;
          if (hits == 3) ++t.correct;
        }
      } else {
        ++t.gold;
        ++t.pred;
        if (value_of(*g[k], field) == value_of(*p[k], field)) ++t.correct;
      }
    }
    return t;
  });
}

double micro_f1(const Document& gold, const Document& pred, EvalField field, Exec exec) {
  return micro_f1_counts(gold, pred, field, exec).f1();
}

Tally span_counts(const Document& gold, const Document& pred, SpanUnit unit) {
  auto g = spans_of(gold);
  auto p = spans_of(pred);
  auto& gs = unit == SpanUnit::token ? g.tokens : g.sentences;
  auto& ps = unit == SpanUnit::token ? p.tokens : p.sentences;
  Tally t{gs.size(), ps.size(), 0};
  if (ps.empty() || gs.empty()) return t;
  if (g.chars != p.chars) throw DataError("gold and predicted documents do not share the same underlying text");
  std::sort(gs.begin(), gs.end());
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<std::size_t, std::size_t>> common;
  std::set_intersection(gs.begin(), gs.end(), ps.begin(), ps.end(), std::back_inserter(common));
  t.correct = common.size();
  return t;
}

double span_f1(const Document& gold, const Document& pred, SpanUnit unit) {
  return span_counts(gold, pred, unit).f1();
}

Tally las_counts(const Document& gold, const Document& pred, Exec exec) {
  require_alignment(gold, pred);
  return reduce_sentences(gold.sentences.size(), exec, [&](std::size_t i) {
    Tally t;
    auto g = gold.sentences[i].words();
    auto p = pred.sentences[i].words();
    for (std::size_t k = 0; k < g.size(); ++k) {
      for (auto [tok, side] : {std::pair{g[k], "gold"}, std::pair{p[k], "predicted"}}) {
        if (!tok->head || !tok->deprel)
          throw DataError(std::string(side) + " word " + tok->id.str() + " ('" + tok->form + "') in sentence " +
                          sentence_label(gold.sentences[i], i) + " lacks head or deprel");
      }
      ++t.gold;
      ++t.pred;
      if (*g[k]->head == *p[k]->head && *g[k]->deprel == *p[k]->deprel) ++t.correct;
    }
    return t;
  });
}

double las_score(const Document& gold, const Document& pred, Exec exec) {
  return las_counts(gold, pred, exec).f1();
}

std::map<std::string, std::optional<double>> per_label_accuracy(const Document& gold, const Document& pred,
                                                                LabelField field) {
  require_alignment(gold, pred);
  auto label = [&](const Token& t) {
    return field == LabelField::upos ? t.upos.value_or("_") : t.deprel.value_or("_");
  };
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;  // gold count, correct
  std::set<std::string> predicted;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    auto g = gold.sentences[i].words();
    auto p = pred.sentences[i].words();
    for (std::size_t k = 0; k < g.size(); ++k) {
      auto gl = label(*g[k]);
      auto pl = label(*p[k]);
      auto& c = counts[gl];
      ++c.first;
      if (gl == pl) ++c.second;
      predicted.insert(pl);
    }
  }
  std::map<std::string, std::optional<double>> out;
  for (const auto& [l, c] : counts) out[l] = static_cast<double>(c.second) / static_cast<double>(c.first);
  for (const auto& l : predicted)
    if (!counts.count(l)) out[l] = std::nullopt;
  return out;
}

double relative_error_reduction(double old_score, double new_score) {
  if (old_score >= 1.0) throw std::domain_error("relative error reduction is undefined for a perfect baseline");
  return (new_score - old_score) / (1.0 - old_score);
}

std::string EvalReport::table() const {
  std::ostringstream out;
  out << std::left << std::setw(14) << "metric" << std::right << std::setw(10) << "gold" << std::setw(10) << "pred"
      << std::setw(10) << "correct" << std::setw(10) << "score" << '\n';
  for (const auto& [name, score] : scores) {
    out << std::left << std::setw(14) << name << std::right;
    if (auto it = counts.find(name); it != counts.end())
      out << std::setw(10) << it->second.gold << std::setw(10) << it->second.pred << std::setw(10)
          << it->second.correct;
    else
      out << std::setw(30) << "";
    out << std::setw(10) << format_score(score, 4) << '\n';
  }
  for (const auto& [field, labels] : per_label) {
    out << "\nper-label accuracy (" << field << ")\n";
    for (const auto& [label, acc] : labels)
      out << "  " << std::left << std::setw(12) << label << std::right << std::setw(10)
          << (acc ? format_score(*acc, 4) : std::string("n/a")) << '\n';
  }
  return out.str();
}

std::string EvalReport::key_values() const {
  std::string out;
  for (const auto& [name, score] : scores) {
    out += "score." + name + "=" + format_score(score, 6) + "\n";
    if (auto it = counts.find(name); it != counts.end()) {
      out += "gold." + name + "=" + std::to_string(it->second.gold) + "\n";
      out += "pred." + name + "=" + std::to_string(it->second.pred) + "\n";
      out += "correct." + name + "=" + std::to_string(it->second.correct) + "\n";
    }
  }
  for (const auto& [field, labels] : per_label)
    for (const auto& [label, acc] : labels)
      out += "label." + field + "." + label + "=" + (acc ? format_score(*acc, 6) : std::string("n/a")) + "\n";
  return out;
}

EvalReport evaluate(const Document& gold, const Document& pred, const EvalOptions& options) {
  EvalReport r;
  auto record = [&](const std::string& name, const Tally& t) {
    r.counts[name] = t;
    r.scores[name] = t.f1();
  };
  if (options.tokens) {
    record("tokens", span_counts(gold, pred, SpanUnit::token));
    record("sentences", span_counts(gold, pred, SpanUnit::sentence));
  }
  if (!aligned(gold, pred)) return r;
  if (options.morph) {
    for (auto f : {EvalField::upos, EvalField::xpos, EvalField::feats, EvalField::morph_pooled,
                   EvalField::morph_strict})
      record(std::string(to_string(f)), micro_f1_counts(gold, pred, f, options.exec));
    if (options.per_label) r.per_label["upos"] = per_label_accuracy(gold, pred, LabelField::upos);
  }
  if (options.lemma) record("lemma", micro_f1_counts(gold, pred, EvalField::lemma, options.exec));
  if (options.srl) record("srl", micro_f1_counts(gold, pred, EvalField::srl, options.exec));
  if (options.las) {
    auto has_tree = [](const Document& d) {
      for (const auto& s : d.sentences)
        for (const auto* t : s.words())
          if (!t->head || !t->deprel) return false;
      return d.word_count() > 0;
    };
    if (has_tree(gold) && has_tree(pred)) {
      record("las", las_counts(gold, pred, options.exec));
      if (options.per_label) r.per_label["deprel"] = per_label_accuracy(gold, pred, LabelField::deprel);
    }
  }
  return r;
}

}  // namespace annopipe
