#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "annopipe/conllu.hpp"
#include "annopipe/parallel.hpp"

namespace annopipe {

// morph_pooled counts UPOS, XPOS and FEATS as three instances per word;
// morph_strict counts a word correct only when all three match.
enum class EvalField { lemma, upos, xpos, feats, morph_pooled, morph_strict, srl };

std::string_view to_string(EvalField f);
EvalField eval_field_from_string(std::string_view s);

struct Tally {
  std::uint64_t gold = 0;
  std::uint64_t pred = 0;
  std::uint64_t correct = 0;

  // 2c / (g + p); 1.0 when both sides are empty.
  double f1() const;
  // c / g; 1.0 when gold is empty.
  double accuracy() const;

  Tally& operator+=(const Tally& o) {
    gold += o.gold;
    pred += o.pred;
    correct += o.correct;
    return *this;
  }
  friend bool operator==(const Tally&, const Tally&) = default;
};

// Word-level counts. Both documents must share the same words and sentence
// boundaries; otherwise DataError (use span scores for differing
// tokenization). Range tokens are ignored.
Tally micro_f1_counts(const Document& gold, const Document& pred, EvalField field, Exec exec = Exec::parallel);
double micro_f1(const Document& gold, const Document& pred, EvalField field, Exec exec = Exec::parallel);

enum class SpanUnit { token, sentence };

// Surface tokens (or sentences) as spans over the non-whitespace characters
// of the text; a span counts when both ends match exactly. DataError when the
// two documents do not cover the same characters.
Tally span_counts(const Document& gold, const Document& pred, SpanUnit unit);
double span_f1(const Document& gold, const Document& pred, SpanUnit unit);

// Words whose head and deprel both match. DataError names the first word
// lacking either annotation.
Tally las_counts(const Document& gold, const Document& pred, Exec exec = Exec::parallel);
double las_score(const Document& gold, const Document& pred, Exec exec = Exec::parallel);

enum class LabelField { upos, deprel };

// Accuracy per gold label; labels seen only in predictions map to nullopt.
std::map<std::string, std::optional<double>> per_label_accuracy(const Document& gold, const Document& pred,
                                                                LabelField field);

// (new - old) / (1 - old). Throws std::domain_error when old >= 1.
double relative_error_reduction(double old_score, double new_score);

struct EvalReport {
  std::map<std::string, double> scores;
  std::map<std::string, Tally> counts;
  std::map<std::string, std::map<std::string, std::optional<double>>> per_label;

  // Aligned plain-text table.
  std::string table() const;
  // "metric.field=value" lines.
  std::string key_values() const;
};

struct EvalOptions {
  bool tokens = true;      // token and sentence span F1
  bool morph = true;       // upos, xpos, feats, morph-pooled, morph-strict
  bool lemma = true;
  bool las = true;         // only when both sides carry heads
  bool srl = false;
  bool per_label = true;
  Exec exec = Exec::parallel;
};

// Runs every applicable metric. Word-level metrics are skipped when the
// tokenization differs.
EvalReport evaluate(const Document& gold, const Document& pred, const EvalOptions& options = {});

}  // namespace annopipe
