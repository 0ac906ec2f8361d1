#include "annopipe/lemmatizer.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

// Extra shared-prefix characters kept as rule context. The bare edit is
// always emitted; longer contexts let specific endings win over generic ones.
constexpr std::size_t kRuleContext = 2;

std::string lookup_key(std::string_view form, std::string_view xpos) {
  std::string key(form);
  key += '\t';
  key += xpos;
  return key;
}

std::string rule_key(std::string_view xpos_prefix, std::string_view suffix) {
  std::string key(xpos_prefix);
  key += '\t';
  key += suffix;
  return key;
}

std::string coarse(std::string_view xpos) {
  if (xpos.empty()) return {};
  return utf8::encode(utf8::decode(xpos).front());
}

}  // namespace

std::string_view to_string(LemmaTier tier) {
  switch (tier) {
    case LemmaTier::closed: return "closed";
    case LemmaTier::train: return "train";
    case LemmaTier::lexicon: return "lexicon";
    case LemmaTier::rule: return "rule";
    case LemmaTier::identity: return "identity";
  }
  return "identity";
}

SuffixRule extract_rule(std::string_view form, std::string_view lemma, std::string_view xpos) {
  auto cp = utf8::common_prefix(form, lemma);
  return SuffixRule{std::string(form.substr(cp.bytes)), coarse(xpos), std::string(lemma.substr(cp.bytes)), 1};
}

std::optional<std::string> LemmatizerModel::train_lemma(std::string_view form, std::string_view xpos) const {
  auto it = lookup_.find(lookup_key(form, xpos));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

LemmaResult LemmatizerModel::lemmatize(std::string_view form, std::string_view xpos) const {
  if (auto lemma = train_lemma(form, xpos)) return {*lemma, LemmaTier::train};
  if (lexicon_) {
    if (auto lemma = lexicon_->lookup_lemma(form, xpos)) return {*lemma, LemmaTier::lexicon};
  }
  auto prefix = coarse(xpos);
  auto len = utf8::length(form);
  for (std::size_t k = std::min(len, longest_suffix_) + 1; k-- > 0;) {
    auto suffix = utf8::suffix(form, k);
    auto it = rule_index_.find(rule_key(prefix, suffix));
    if (it == rule_index_.end()) continue;
    const auto& rule = rules_[it->second];
    std::string lemma(form.substr(0, form.size() - suffix.size()));
    lemma += rule.replacement;
    if (lemma.empty()) continue;
    return {lemma, LemmaTier::rule};
  }
  return {std::string(form), LemmaTier::identity};
}

void LemmatizerModel::index_rules() {
  std::stable_sort(rules_.begin(), rules_.end(), [](const SuffixRule& a, const SuffixRule& b) {
    auto la = utf8::length(a.form_suffix);
    auto lb = utf8::length(b.form_suffix);
    if (la != lb) return la > lb;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return std::tie(a.xpos_prefix, a.form_suffix, a.replacement) <
           std::tie(b.xpos_prefix, b.form_suffix, b.replacement);
  });
  rule_index_.clear();
  longest_suffix_ = 0;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    rule_index_.emplace(rule_key(rules_[i].xpos_prefix, rules_[i].form_suffix), i);
    longest_suffix_ = std::max(longest_suffix_, utf8::length(rules_[i].form_suffix));
  }
}

LemmatizerModel train_lemmatizer(const Document& train, const Lexicon* lexicon, const ModelInfo& info) {
  std::map<std::string, std::map<std::string, std::uint64_t>> pair_counts;
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> rule_counts;
  std::uint64_t tokens = 0;
  for (const auto& s : train.sentences) {
    for (const auto* t : s.words()) {
      if (!t->lemma || !t->xpos) continue;
      ++tokens;
      ++pair_counts[lookup_key(t->form, *t->xpos)][*t->lemma];
      auto base = extract_rule(t->form, *t->lemma, *t->xpos);
      auto shared = utf8::decode(std::string_view(t->form).substr(0, t->form.size() - base.form_suffix.size()));
      for (std::size_t extra = 0; extra <= std::min(kRuleContext, shared.size()); ++extra) {
        std::string context = utf8::encode(std::vector<char32_t>(shared.end() - static_cast<long>(extra), shared.end()));
        ++rule_counts[{base.xpos_prefix, context + base.form_suffix, context + base.replacement}];
      }
    }
  }
  if (tokens == 0) throw TrainingError("lemmatizer: training set has no tokens with lemma and XPOS");

  LemmatizerModel model;
  model.info_ = info;
  model.info_.train_tokens = tokens;
  if (lexicon) model.lexicon_ = *lexicon;

  for (const auto& [key, lemmas] : pair_counts) {
    auto tab = key.find('\t');
    if (lexicon && lexicon->lookup_lemma(std::string_view(key).substr(0, tab), std::string_view(key).substr(tab + 1)))
      continue;
    // std::map order plus strict '>' keeps the smallest lemma on ties.
    const std::pair<const std::string, std::uint64_t>* best = nullptr;
    for (const auto& kv : lemmas)
      if (!best || kv.second > best->second) best = &kv;
    model.lookup_[key] = best->first;
  }
  for (const auto& [key, count] : rule_counts) {
    const auto& [prefix, suffix, replacement] = key;
    model.rules_.push_back({suffix, prefix, replacement, count});
  }
  model.index_rules();
  return model;
}

Archive LemmatizerModel::to_archive() const {
  Archive a;
  a.put("meta", write_meta("lemmatizer", info_, {{"has_lexicon", lexicon_ ? "1" : "0"}}));

  std::vector<std::pair<std::string, std::string>> lookup(lookup_.begin(), lookup_.end());
  std::sort(lookup.begin(), lookup.end());
  std::string text;
  for (const auto& [key, lemma] : lookup) text += key + '\t' + lemma + '\n';
  a.put("lookup", std::move(text));

  std::string rules;
  for (const auto& r : rules_)
    rules += r.xpos_prefix + '\t' + r.form_suffix + '\t' + r.replacement + '\t' + std::to_string(r.frequency) + '\n';
  a.put("rules", std::move(rules));

  if (lexicon_) {
    a.put("lexicon", lexicon_->to_text());
    std::string prefixes;
    for (const auto& [cls, prefix] : lexicon_->prefixes().entries())
      prefixes += std::string(to_string(cls)) + ' ' + prefix + '\n';
    a.put("lexicon_prefixes", std::move(prefixes));
  }
  return a;
}

LemmatizerModel LemmatizerModel::from_archive(const Archive& archive) {
  LemmatizerModel m;
  auto meta = read_meta(archive, "lemmatizer", m.info_);
  for (const auto& line : payload_lines(archive.get("lookup"))) {
    auto cols = split_fields(line, '\t');
    if (cols.size() != 3) throw ModelError("malformed lookup line in lemmatizer model");
    m.lookup_[lookup_key(cols[0], cols[1])] = cols[2];
  }
  for (const auto& line : payload_lines(archive.get("rules"))) {
    auto cols = split_fields(line, '\t');
    if (cols.size() != 4) throw ModelError("malformed rule line in lemmatizer model");
    m.rules_.push_back({cols[1], cols[0], cols[2], parse_count(cols[3])});
  }
  m.index_rules();
  if (meta["has_lexicon"] == "1") {
    try {
      auto prefixes = ClosedClassPrefixes::parse(payload_lines(archive.get("lexicon_prefixes")));
      m.lexicon_ = Lexicon::parse(archive.get("lexicon"), std::move(prefixes));
    } catch (const ConfigError& e) {
      throw ModelError(std::string("embedded lexicon: ") + e.what());
    } catch (const DataError& e) {
      throw ModelError(std::string("embedded lexicon: ") + e.what());
    }
  }
  return m;
}

Document lemmatize_document(const Document& doc, const LemmatizerModel& model, const LemmatizeOptions& options) {
  Document out = doc;
  for_each_index(options.exec, out.sentences.size(), [&](std::size_t i) {
    auto& sentence = out.sentences[i];
    for (auto& t : sentence.tokens) {
      if (t.is_range()) continue;
      LemmaResult result;
      const ClosedClassEntry* closed = options.closed_table ? options.closed_table->find(t.form) : nullptr;
      if (t.closed_fixed && t.lemma) {
        result = {*t.lemma, LemmaTier::closed};
      } else if (closed) {
        result = {closed->lemma, LemmaTier::closed};
      } else {
        if (!t.xpos) {
          auto sid = sentence.sent_id().value_or("#" + std::to_string(i + 1));
          throw StageError("lemma", "token " + t.id.str() + " ('" + t.form + "') in sentence " + sid +
                                        " has no XPOS");
        }
        result = model.lemmatize(t.form, *t.xpos);
      }
      t.lemma = result.lemma;
      if (!options.tier_key.empty()) t.set_misc(options.tier_key, to_string(result.tier));
    }
  });
  return out;
}

}  // namespace annopipe
