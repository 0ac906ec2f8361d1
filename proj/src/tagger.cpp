#include "annopipe/tagger.hpp"

#include <algorithm>
#include <map>

#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

std::string feats_text(const Token& t) { return t.feats ? t.feats->str() : "_"; }

void apply(Token& t, const TagTriple& triple) {
  t.upos = triple.upos;
  t.xpos = triple.xpos;
  if (triple.feats == "_" || triple.feats.empty())
    t.feats.reset();
  else
    t.feats = Feats::parse(triple.feats);
}

}  // namespace

std::string upos_for_xpos(std::string_view xpos) {
  if (xpos.empty()) return "X";
  switch (xpos[0]) {
    case 'N': return xpos.size() > 1 && xpos[1] == 'p' ? "PROPN" : "NOUN";
    case 'V': return "VERB";
    case 'A': return "ADJ";
    case 'R': return "ADV";
    case 'P': return "PRON";
    case 'S': return "ADP";
    case 'C': return xpos.size() > 1 && xpos[1] == 's' ? "SCONJ" : "CCONJ";
    case 'M': return "NUM";
    case 'Q': return "PART";
    case 'I': return "INTJ";
    case 'Z': return "PUNCT";
    default: return "X";
  }
}

TagDistribution TaggerModel::relative(const Counts& counts) const {
  std::uint64_t total = 0;
  for (auto [idx, c] : counts) total += c;
  TagDistribution d;
  d.reserve(counts.size());
  for (auto [idx, c] : counts) d.emplace_back(idx, static_cast<double>(c) / static_cast<double>(total));
  return d;
}

TagDistribution TaggerModel::smoothed(const Counts& counts) const {
  std::uint64_t total = 0;
  for (auto [idx, c] : counts) total += c;
  const double denom = static_cast<double>(total + triples_.size());
  std::vector<std::uint64_t> dense(triples_.size(), 0);
  for (auto [idx, c] : counts) dense[idx] = c;
  TagDistribution d;
  d.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i)
    d.emplace_back(i, static_cast<double>(dense[i] + 1) / denom);
  return d;
}

std::vector<std::pair<TagSource, TagDistribution>> TaggerModel::backoff(std::string_view form) const {
  std::vector<std::pair<TagSource, TagDistribution>> chain;
  if (auto it = form_stats_.find(std::string(form)); it != form_stats_.end()) {
    chain.emplace_back(TagSource::form, relative(it->second));
  } else {
    auto lower = utf8::to_lower(form);
    if (auto lt = form_stats_.find(lower); lt != form_stats_.end())
      chain.emplace_back(TagSource::lowercase_form, relative(lt->second));
  }
  auto lower = utf8::to_lower(form);
  auto len = utf8::length(lower);
  for (std::size_t k = std::min(len, kMaxSuffix); k >= 1; --k) {
    auto it = suffix_stats_[k - 1].find(utf8::suffix(lower, k));
    if (it != suffix_stats_[k - 1].end()) {
      chain.emplace_back(TagSource::suffix, smoothed(it->second));
      break;
    }
  }
  Counts prior;
  for (std::size_t i = 0; i < triples_.size(); ++i) prior.emplace_back(i, triple_counts_[i]);
  chain.emplace_back(TagSource::prior, relative(prior));
  return chain;
}

TagTriple TaggerModel::predict(std::string_view form) const { return choose_tags(form, *this, {}); }

std::optional<std::size_t> TaggerModel::triple_for_xpos(std::string_view xpos) const {
  auto it = by_xpos_.find(std::string(xpos));
  if (it == by_xpos_.end()) return std::nullopt;
  return it->second;
}

void TaggerModel::finalize() {
  by_xpos_.clear();
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    auto [it, inserted] = by_xpos_.emplace(triples_[i].xpos, i);
    if (!inserted && triple_counts_[i] > triple_counts_[it->second]) it->second = i;
  }
  default_triple_ = 0;
  for (std::size_t i = 1; i < triples_.size(); ++i)
    if (triple_counts_[i] > triple_counts_[default_triple_]) default_triple_ = i;
}

TaggerModel train_tagger(const Document& train, const Document& dev, const ModelInfo& info) {
  // Triples are numbered in sorted key order so that the model does not
  // depend on corpus order.
  std::map<std::string, std::pair<TagTriple, std::uint64_t>> triple_counts;
  std::uint64_t tokens = 0;
  for (const auto& s : train.sentences) {
    for (const auto* t : s.words()) {
      if (!t->upos || !t->xpos) continue;
      TagTriple triple{*t->upos, *t->xpos, feats_text(*t)};
      auto& slot = triple_counts[triple.key()];
      slot.first = triple;
      ++slot.second;
      ++tokens;
    }
  }
  if (tokens == 0) throw TrainingError("tagger: training set has no tokens with UPOS and XPOS");

  TaggerModel model;
  std::unordered_map<std::string, std::size_t> index;
  for (auto& [key, entry] : triple_counts) {
    index[key] = model.triples_.size();
    model.triples_.push_back(entry.first);
    model.triple_counts_.push_back(entry.second);
  }

  std::unordered_map<std::string, std::map<std::size_t, std::uint64_t>> forms;
  std::array<std::unordered_map<std::string, std::map<std::size_t, std::uint64_t>>, TaggerModel::kMaxSuffix>
      suffixes;
  for (const auto& s : train.sentences) {
    for (const auto* t : s.words()) {
      if (!t->upos || !t->xpos) continue;
      std::size_t idx = index.at(TagTriple{*t->upos, *t->xpos, feats_text(*t)}.key());
      ++forms[t->form][idx];
      auto lower = utf8::to_lower(t->form);
      auto len = utf8::length(lower);
      for (std::size_t k = 1; k <= std::min(len, TaggerModel::kMaxSuffix); ++k)
        ++suffixes[k - 1][utf8::suffix(lower, k)][idx];
    }
  }
  auto to_counts = [](const std::map<std::size_t, std::uint64_t>& m) {
    return TaggerModel::Counts(m.begin(), m.end());
  };
  for (auto& [form, m] : forms) model.form_stats_[form] = to_counts(m);
  for (std::size_t k = 0; k < TaggerModel::kMaxSuffix; ++k)
    for (auto& [suf, m] : suffixes[k]) model.suffix_stats_[k][suf] = to_counts(m);

  model.finalize();
  model.info_ = info;
  model.info_.train_tokens = tokens;

  std::uint64_t dev_total = 0;
  std::uint64_t dev_correct = 0;
  for (const auto& s : dev.sentences) {
    for (const auto* t : s.words()) {
      if (!t->upos || !t->xpos) continue;
      ++dev_total;
      if (model.predict(t->form) == TagTriple{*t->upos, *t->xpos, feats_text(*t)}) ++dev_correct;
    }
  }
  model.info_.dev_accuracy =
      dev_total ? static_cast<double>(dev_correct) / static_cast<double>(dev_total) : 0.0;
  return model;
}

namespace {

class TagChooser {
 public:
  TagChooser(std::string_view form, const TaggerModel& model, const TagOptions& options)
      : form_(form), model_(model), options_(options) {}

  bool legal(const TagTriple& t) const {
    if (options_.closed_table && (t.upos == "PUNCT" || t.upos == "SYM") && !options_.closed_table->find(form_))
      return false;
    if (options_.closed_class_control && options_.lexicon) {
      if (auto cls = options_.lexicon->prefixes().classify(t.xpos))
        if (!options_.lexicon->in_closed_class(*cls, form_)) return false;
    }
    return true;
  }

  // Highest-probability legal triple whose XPOS passes `accept`; ties go to
  // the globally more frequent triple, then the lower index.
  template <typename Accept>
  std::optional<std::size_t> best(const TagDistribution& d, Accept&& accept) const {
    std::optional<std::size_t> best_idx;
    double best_p = -1.0;
    for (auto [idx, p] : d) {
      const auto& triple = model_.triples()[idx];
      if (!accept(triple) || !legal(triple)) continue;
      bool better = !best_idx || p > best_p ||
                    (p == best_p && (model_.triple_count(idx) > model_.triple_count(*best_idx) ||
                                     (model_.triple_count(idx) == model_.triple_count(*best_idx) &&
                                      idx < *best_idx)));
      if (better) {
        best_idx = idx;
        best_p = p;
      }
    }
    return best_idx;
  }

  TagTriple triple_for(const std::string& xpos) const {
    if (auto idx = model_.triple_for_xpos(xpos)) return model_.triples()[*idx];
    return TagTriple{upos_for_xpos(xpos), xpos, "_"};
  }

  TagTriple choose() const {
    if (options_.closed_table) {
      if (const auto* e = options_.closed_table->find(form_)) return TagTriple{e->upos, e->xpos, "_"};
    }
    auto chain = model_.backoff(form_);

    if (options_.constrain_to_lexicon && options_.lexicon) {
      auto allowed = options_.lexicon->allowed_tags(form_);
      if (!allowed.empty()) {
        auto in_set = [&](const TagTriple& t) { return allowed.count(t.xpos) > 0; };
        if (auto idx = best(chain.front().second, in_set)) return model_.triples()[*idx];
        // No model mass on the allowed set: take the lexicon's tags by
        // frequency.
        for (const auto& xpos : lexicon_ranked(allowed)) {
          auto t = triple_for(xpos);
          if (legal(t)) return t;
        }
      }
    }

    auto any = [](const TagTriple&) { return true; };
    for (const auto& [source, dist] : chain) {
      if (auto idx = best(dist, any)) return model_.triples()[*idx];
    }
    return TagTriple{"X", "X", "_"};
  }

 private:
  std::vector<std::string> lexicon_ranked(const std::set<std::string>& allowed) const {
    std::vector<std::string> ranked;
    if (auto top = options_.lexicon->most_frequent_tag(form_)) ranked.push_back(*top);
    for (const auto& x : allowed)
      if (ranked.empty() || x != ranked.front()) ranked.push_back(x);
    return ranked;
  }

  std::string_view form_;
  const TaggerModel& model_;
  const TagOptions& options_;
};

}  // namespace

TagTriple choose_tags(std::string_view form, const TaggerModel& model, const TagOptions& options) {
  return TagChooser(form, model, options).choose();
}

Document tag_document(const Document& doc, const TaggerModel& model, const TagOptions& options) {
  if (options.expected_language && !model.info().language.empty() &&
      *options.expected_language != model.info().language) {
    throw StageError("morph", "tagger model is for language '" + model.info().language + "', pipeline expects '" +
                                  *options.expected_language + "'");
  }
  Document out = doc;
  for_each_index(options.exec, out.sentences.size(), [&](std::size_t i) {
    for (auto& t : out.sentences[i].tokens) {
      if (t.is_range() || t.closed_fixed) continue;
      apply(t, choose_tags(t.form, model, options));
    }
  });
  return out;
}

Archive TaggerModel::to_archive() const {
  Archive a;
  a.put("meta", write_meta("tagger", info_));
  std::string triples;
  for (std::size_t i = 0; i < triples_.size(); ++i)
    triples += triples_[i].key() + '\t' + std::to_string(triple_counts_[i]) + '\n';
  a.put("triples", std::move(triples));

  auto dump = [](const Counts& counts) {
    std::string s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(counts[i].first) + ':' + std::to_string(counts[i].second);
    }
    return s;
  };
  auto sorted_keys = [](const auto& map) {
    std::vector<std::string> keys;
    for (const auto& kv : map) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  std::string forms;
  for (const auto& f : sorted_keys(form_stats_)) forms += f + '\t' + dump(form_stats_.at(f)) + '\n';
  a.put("forms", std::move(forms));
  std::string sufs;
  for (std::size_t k = 0; k < kMaxSuffix; ++k)
    for (const auto& s : sorted_keys(suffix_stats_[k]))
      sufs += std::to_string(k + 1) + '\t' + s + '\t' + dump(suffix_stats_[k].at(s)) + '\n';
  a.put("suffixes", std::move(sufs));
  return a;
}

TaggerModel TaggerModel::from_archive(const Archive& archive) {
  TaggerModel m;
  read_meta(archive, "tagger", m.info_);

  for (const auto& line : payload_lines(archive.get("triples"))) {
    auto cols = split_fields(line, '\t');
    if (cols.size() != 4) throw ModelError("malformed triple line in tagger model");
    m.triples_.push_back({cols[0], cols[1], cols[2]});
    m.triple_counts_.push_back(parse_count(cols[3]));
  }
  if (m.triples_.empty()) throw ModelError("tagger model has no tag triples");

  auto read_counts = [&](const std::string& s) {
    Counts c;
    for (const auto& item : split_fields(s, ' ')) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw ModelError("malformed count in tagger model");
      auto idx = parse_count(item.substr(0, colon));
      if (idx >= m.triples_.size()) throw ModelError("triple index out of range in tagger model");
      c.emplace_back(idx, parse_count(item.substr(colon + 1)));
    }
    return c;
  };
  for (const auto& line : payload_lines(archive.get("forms"))) {
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ModelError("malformed form line in tagger model");
    m.form_stats_[line.substr(0, tab)] = read_counts(line.substr(tab + 1));
  }
  for (const auto& line : payload_lines(archive.get("suffixes"))) {
    auto cols = split_fields(line, '\t');
    if (cols.size() != 3) throw ModelError("malformed suffix line in tagger model");
    auto k = parse_count(cols[0]);
    if (k < 1 || k > kMaxSuffix) throw ModelError("suffix length out of range in tagger model");
    m.suffix_stats_[k - 1][cols[1]] = read_counts(cols[2]);
  }
  m.finalize();
  return m;
}

}  // namespace annopipe
