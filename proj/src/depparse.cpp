#include "annopipe/depparse.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "annopipe/error.hpp"
#include "annopipe/utf8.hpp"

namespace annopipe {

namespace {

std::string sentence_label(const Sentence& s, std::size_t index) {
  return s.sent_id().value_or("#" + std::to_string(index + 1));
}

// FNV-1a, so feature keys are stable across builds and platforms.
class FeatureHash {
 public:
  explicit FeatureHash(std::uint8_t template_id) { byte(template_id); }
  FeatureHash& add(std::string_view part) {
    for (char c : part) byte(static_cast<std::uint8_t>(c));
    byte(0x1F);
    return *this;
  }
  std::uint64_t value() const { return h_; }

 private:
  void byte(std::uint8_t b) {
    h_ ^= b;
    h_ *= 0x100000001B3ULL;
  }
  std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

struct Word {
  std::string form;
  std::string lower;
  std::string suffix;
  std::string upos;
  std::string xpos;
  std::string lemma;
};

std::vector<Word> sentence_words(const Sentence& s) {
  std::vector<Word> words;
  words.push_back({"<ROOT>", "<ROOT>", "<ROOT>", "<ROOT>", "<ROOT>", "<ROOT>"});
  for (const auto* t : s.words()) {
    Word w;
    w.form = t->form;
    w.lower = utf8::to_lower(t->form);
    w.suffix = utf8::suffix(w.lower, 3);
    w.upos = t->upos.value_or("_");
    w.xpos = t->xpos.value_or("_");
    w.lemma = t->lemma.value_or("_");
    words.push_back(std::move(w));
  }
  return words;
}

// Arc-standard configuration over word positions 0..n (0 is the root).
struct State {
  explicit State(std::size_t n)
      : heads(n + 1, -1), labels(n + 1, -1), leftmost(n + 1, -1), rightmost(n + 1, -1),
        left_count(n + 1, 0), right_count(n + 1, 0), n(n) {
    stack.push_back(0);
  }

  bool terminal() const { return buffer > n && stack.size() == 1; }
  int s(std::size_t i) const { return i < stack.size() ? stack[stack.size() - 1 - i] : -1; }
  int b(std::size_t i) const {
    auto pos = buffer + i;
    return pos <= n ? static_cast<int>(pos) : -1;
  }

  void attach(int head, int dep, int label) {
    heads[dep] = head;
    labels[dep] = label;
    if (dep < head) {
      if (leftmost[head] < 0 || dep < leftmost[head]) leftmost[head] = dep;
      ++left_count[head];
    } else {
      if (rightmost[head] < 0 || dep > rightmost[head]) rightmost[head] = dep;
      ++right_count[head];
    }
  }

  std::vector<int> stack;
  std::size_t buffer = 1;
  std::vector<int> heads;
  std::vector<int> labels;
  std::vector<int> leftmost;
  std::vector<int> rightmost;
  std::vector<int> left_count;
  std::vector<int> right_count;
  std::size_t n;
};

enum class Move { shift, left, right, root };

struct Action {
  Move move;
  int label;
};

class ActionSpace {
 public:
  ActionSpace(std::size_t arc_labels, std::size_t root_labels) : arc_(arc_labels), root_(root_labels) {}

  std::size_t size() const { return 1 + 2 * arc_ + root_; }

  Action decode(std::size_t a) const {
    if (a == 0) return {Move::shift, -1};
    a -= 1;
    if (a < arc_) return {Move::left, static_cast<int>(a)};
    a -= arc_;
    if (a < arc_) return {Move::right, static_cast<int>(a)};
    a -= arc_;
    return {Move::root, static_cast<int>(a)};
  }

  std::size_t encode(Action act) const {
    switch (act.move) {
      case Move::shift: return 0;
      case Move::left: return 1 + static_cast<std::size_t>(act.label);
      case Move::right: return 1 + arc_ + static_cast<std::size_t>(act.label);
      case Move::root: return 1 + 2 * arc_ + static_cast<std::size_t>(act.label);
    }
    return 0;
  }

  bool legal(Move m, const State& st, bool single_root) const {
    switch (m) {
      case Move::shift: return st.buffer <= st.n;
      case Move::left:
      case Move::right: return st.stack.size() >= 2 && st.s(1) != 0;
      case Move::root: return st.stack.size() == 2 && (!single_root || st.buffer > st.n);
    }
    return false;
  }

 private:
  std::size_t arc_;
  std::size_t root_;
};

void apply(State& st, Action act) {
  switch (act.move) {
    case Move::shift:
      st.stack.push_back(static_cast<int>(st.buffer));
      ++st.buffer;
      break;
    case Move::left: {
      int s0 = st.s(0);
      int s1 = st.s(1);
      st.attach(s0, s1, act.label);
      st.stack.erase(st.stack.end() - 2);
      break;
    }
    case Move::right:
    case Move::root: {
      int s0 = st.s(0);
      int s1 = st.s(1);
      st.attach(s1, s0, act.label);
      st.stack.pop_back();
      break;
    }
  }
}

std::string distance_bucket(int d) {
  if (d <= 4) return std::to_string(d);
  if (d < 10) return "5-9";
  return "10+";
}

std::vector<std::uint64_t> extract_features(const State& st, const std::vector<Word>& w,
                                            const std::vector<std::string>& arc_labels,
                                            const std::vector<std::string>& root_labels) {
  static const Word none{"<NONE>", "<NONE>", "<NONE>", "<NONE>", "<NONE>", "<NONE>"};
  auto at = [&](int i) -> const Word& { return i < 0 ? none : w[static_cast<std::size_t>(i)]; };
  auto label_of = [&](int i) -> std::string_view {
    if (i < 0) return "<NONE>";
    int l = st.labels[static_cast<std::size_t>(i)];
    if (l < 0) return "<NONE>";
    return st.heads[static_cast<std::size_t>(i)] == 0 ? root_labels[static_cast<std::size_t>(l)]
                                                        : arc_labels[static_cast<std::size_t>(l)];
  };
  auto child = [&](int i, bool left) {
    if (i < 0) return -1;
    return left ? st.leftmost[static_cast<std::size_t>(i)] : st.rightmost[static_cast<std::size_t>(i)];
  };

  const int s0i = st.s(0), s1i = st.s(1), s2i = st.s(2), b0i = st.b(0), b1i = st.b(1), b2i = st.b(2);
  const Word &s0 = at(s0i), &s1 = at(s1i), &s2 = at(s2i), &b0 = at(b0i), &b1 = at(b1i), &b2 = at(b2i);

  std::vector<std::uint64_t> f;
  f.reserve(48);
  std::uint8_t t = 0;
  auto emit = [&](std::initializer_list<std::string_view> parts) {
    FeatureHash h(t++);
    for (auto p : parts) h.add(p);
    f.push_back(h.value());
  };

  emit({});
  for (const Word* x : {&s0, &s1, &b0}) {
    emit({x->lower});
    emit({x->upos});
    emit({x->xpos});
    emit({x->lemma});
    emit({x->suffix});
  }
  emit({s2.upos});
  emit({b1.lower});
  emit({b1.upos});
  emit({b2.upos});
  emit({s0.lower, s0.upos});
  emit({s1.lower, s1.upos});
  emit({s0.upos, s1.upos});
  emit({s0.lower, s1.lower});
  emit({s0.lower, s1.upos});
  emit({s0.upos, s1.lower});
  emit({s0.xpos, s1.xpos});
  emit({s0.upos, b0.upos});
  emit({s1.upos, s0.upos, b0.upos});
  emit({s0.upos, b0.upos, b1.upos});
  emit({s2.upos, s1.upos, s0.upos});
  emit({s0.lemma, s1.lemma});

  std::string dist = s0i > 0 && s1i >= 0 ? distance_bucket(s0i - s1i) : "<NONE>";
  std::string root_flag = s1i == 0 ? "root" : "word";
  std::string buffer_flag = b0i < 0 ? "empty" : "more";
  emit({dist});
  emit({s0.upos, s1.upos, dist});
  emit({root_flag, buffer_flag});
  emit({s0.upos, root_flag, buffer_flag});

  auto count = [&](int i, bool left) {
    if (i < 0) return std::string("-");
    return std::to_string(left ? st.left_count[static_cast<std::size_t>(i)]
                               : st.right_count[static_cast<std::size_t>(i)]);
  };
  emit({s0.upos, count(s0i, true)});
  emit({s1.upos, count(s1i, false)});
  emit({s0.upos, label_of(child(s0i, true))});
  emit({s1.upos, label_of(child(s1i, true))});
  emit({s1.upos, label_of(child(s1i, false))});
  emit({s0.upos, at(child(s0i, true)).upos});
  emit({s1.upos, at(child(s1i, false)).upos});
  emit({s0.upos, s1.upos, label_of(child(s1i, false))});
  return f;
}

struct WeightCell {
  double w = 0.0;
  double u = 0.0;  // sum of c * update, for averaging
};

// Static arc-standard oracle over a projective gold tree.
Action oracle(const State& st, const std::vector<int>& gold_heads, const std::vector<int>& gold_labels,
              const std::vector<int>& gold_children) {
  if (st.stack.size() >= 2) {
    int s0 = st.s(0);
    int s1 = st.s(1);
    if (s1 != 0 && gold_heads[static_cast<std::size_t>(s1)] == s0)
      return {Move::left, gold_labels[static_cast<std::size_t>(s1)]};
    if (gold_heads[static_cast<std::size_t>(s0)] == s1) {
      int attached = st.left_count[static_cast<std::size_t>(s0)] + st.right_count[static_cast<std::size_t>(s0)];
      if (attached == gold_children[static_cast<std::size_t>(s0)])
        return {s1 == 0 ? Move::root : Move::right, gold_labels[static_cast<std::size_t>(s0)]};
    }
  }
  return {Move::shift, -1};
}

}  // namespace

std::string_view to_string(SchemaVariant v) { return v == SchemaVariant::ud ? "ud" : "jos"; }

SchemaVariant schema_from_string(std::string_view s) {
  if (s == "ud" || s == "UD") return SchemaVariant::ud;
  if (s == "jos" || s == "JOS") return SchemaVariant::jos;
  throw ConfigError("unknown tree schema '" + std::string(s) + "' (expected ud or jos)");
}

std::vector<Violation> validate_tree(const Sentence& sentence, const TreeSchema& schema, std::size_t index) {
  std::vector<Violation> out;
  const auto label = sentence_label(sentence, index);
  auto words = sentence.words();
  const int n = static_cast<int>(words.size());
  if (n == 0) return out;

  // heads by word id; -1 marks a word excluded from structural checks
  std::vector<int> heads(static_cast<std::size_t>(n) + 1, -1);
  bool structural = true;
  for (const auto* t : words) {
    const auto id = t->id.str();
    if (!t->head || !t->deprel) {
      out.push_back({label, id, "missing-head", "word has no head or deprel"});
      structural = false;
      continue;
    }
    if (t->id.start < 1 || t->id.start > n) {
      out.push_back({label, id, "head-range", "word id outside 1.." + std::to_string(n)});
      structural = false;
      continue;
    }
    if (*t->head < 0 || *t->head > n) {
      out.push_back({label, id, "head-range", "head " + std::to_string(*t->head) + " outside 0.." + std::to_string(n)});
      structural = false;
      continue;
    }
    if (*t->head == t->id.start) {
      out.push_back({label, id, "self-loop", "word is its own head"});
      structural = false;
      continue;
    }
    heads[static_cast<std::size_t>(t->id.start)] = *t->head;
  }

  int roots = 0;
  for (int i = 1; i <= n; ++i)
    if (heads[static_cast<std::size_t>(i)] == 0) ++roots;

  if (structural) {
    // 0 = unvisited, 1 = on the current path, 2 = reaches the root
    std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);
    state[0] = 2;
    for (int start = 1; start <= n; ++start) {
      std::vector<int> path;
      int cur = start;
      while (state[static_cast<std::size_t>(cur)] == 0) {
        state[static_cast<std::size_t>(cur)] = 1;
        path.push_back(cur);
        cur = heads[static_cast<std::size_t>(cur)];
      }
      if (state[static_cast<std::size_t>(cur)] == 1) {
        auto begin = std::find(path.begin(), path.end(), cur);
        std::string members;
        for (auto it = begin; it != path.end(); ++it) members += (members.empty() ? "" : "->") + std::to_string(*it);
        out.push_back({label, std::to_string(*std::min_element(begin, path.end())), "cycle",
                       "heads form a cycle " + members + "->" + std::to_string(cur)});
      }
      for (int p : path) state[static_cast<std::size_t>(p)] = 2;
    }
  }

  if (schema.single_root() ? roots != 1 : roots < 1) {
    out.push_back({label, "", "root-arity",
                   std::to_string(roots) + " words attached to the root; " + std::string(to_string(schema.variant)) +
                       (schema.single_root() ? " requires exactly one" : " requires at least one")});
  }
  return out;
}

bool is_projective(const Sentence& sentence) {
  auto words = sentence.words();
  const int n = static_cast<int>(words.size());
  std::vector<int> heads(static_cast<std::size_t>(n) + 1, 0);
  for (const auto* t : words) heads[static_cast<std::size_t>(t->id.start)] = t->head.value_or(0);
  auto dominated = [&](int anc, int k) {
    if (anc == 0) return true;
    for (int steps = 0; k != 0 && steps <= n; ++steps) {
      if (k == anc) return true;
      k = heads[static_cast<std::size_t>(k)];
    }
    return false;
  };
  for (int d = 1; d <= n; ++d) {
    int h = heads[static_cast<std::size_t>(d)];
    for (int k = std::min(h, d) + 1; k < std::max(h, d); ++k)
      if (!dominated(h, k)) return false;
  }
  return true;
}

class ParserTrainer {
 public:
  explicit ParserTrainer(ParserModel& model) : model_(model), space_(model.arc_labels_.size(), model.root_labels_.size()) {}

  struct GoldSentence {
    std::vector<Word> words;
    std::vector<int> heads;
    std::vector<int> labels;
    std::vector<int> children;
  };

  void train(const std::vector<GoldSentence>& gold, const ParserTrainOptions& options) {
    std::vector<std::size_t> order(gold.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.seed);
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (auto idx : order) step_sentence(gold[idx]);
    }
    finish();
  }

 private:
  void step_sentence(const GoldSentence& g) {
    State st(g.words.size() - 1);
    std::vector<double> scores(space_.size());
    while (!st.terminal()) {
      auto feats = extract_features(st, g.words, model_.arc_labels_, model_.root_labels_);
      Action gold_act = oracle(st, g.heads, g.labels, g.children);
      std::size_t gold_idx = space_.encode(gold_act);

      std::fill(scores.begin(), scores.end(), 0.0);
      for (auto f : feats) {
        auto it = cells_.find(f);
        if (it == cells_.end()) continue;
        for (const auto& [a, cell] : it->second) scores[a] += cell.w;
      }
      std::size_t best = space_.size();
      for (std::size_t a = 0; a < space_.size(); ++a) {
        if (!space_.legal(space_.decode(a).move, st, model_.schema_.single_root())) continue;
        if (best == space_.size() || scores[a] > scores[best]) best = a;
      }
      ++c_;
      if (best != gold_idx) {
        for (auto f : feats) {
          update(f, gold_idx, 1.0);
          update(f, best, -1.0);
        }
      }
      apply(st, gold_act);
    }
  }

  void update(std::uint64_t f, std::size_t action, double delta) {
    auto& cells = cells_[f];
    auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& p) { return p.first == action; });
    if (it == cells.end()) {
      cells.emplace_back(action, WeightCell{});
      it = cells.end() - 1;
    }
    it->second.w += delta;
    it->second.u += static_cast<double>(c_) * delta;
  }

  void finish() {
    model_.weights_.clear();
    const double c = static_cast<double>(std::max<std::uint64_t>(c_, 1));
    for (const auto& [f, cells] : cells_) {
      std::vector<float> dense;
      for (const auto& [a, cell] : cells) {
        double avg = cell.w - cell.u / c;
        if (avg == 0.0) continue;
        if (dense.empty()) dense.assign(space_.size(), 0.0f);
        dense[a] = static_cast<float>(avg);
      }
      if (!dense.empty()) model_.weights_.emplace(f, std::move(dense));
    }
  }

  ParserModel& model_;
  ActionSpace space_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::size_t, WeightCell>>> cells_;
  std::uint64_t c_ = 1;
};

ParserModel train_parser(const Document& train, const TreeSchema& schema, const ModelInfo& info,
                         const ParserTrainOptions& options) {
  ParserModel model;
  model.schema_ = schema;
  model.info_ = info;

  std::set<std::string> arc_labels;
  std::set<std::string> root_labels;
  std::vector<const Sentence*> usable;
  std::uint64_t tokens = 0;
  for (std::size_t i = 0; i < train.sentences.size(); ++i) {
    const auto& s = train.sentences[i];
    if (s.word_count() == 0) continue;
    auto violations = validate_tree(s, schema, i);
    if (!violations.empty()) {
      const auto& v = violations.front();
      throw TrainingError("parser: invalid gold tree in sentence " + v.sentence + ": " + v.rule + ": " + v.message);
    }
    ++model.stats_.sentences;
    if (!is_projective(s)) {
      ++model.stats_.skipped_nonprojective;
      continue;
    }
    for (const auto* t : s.words()) (*t->head == 0 ? root_labels : arc_labels).insert(*t->deprel);
    tokens += s.word_count();
    usable.push_back(&s);
  }
  if (usable.empty()) throw TrainingError("parser: no usable (projective, annotated) training sentences");
  if (arc_labels.empty()) arc_labels.insert("dep");
  model.arc_labels_.assign(arc_labels.begin(), arc_labels.end());
  model.root_labels_.assign(root_labels.begin(), root_labels.end());
  model.info_.train_tokens = tokens;

  auto index_of = [](const std::vector<std::string>& v, const std::string& x) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  std::vector<ParserTrainer::GoldSentence> gold;
  gold.reserve(usable.size());
  for (const auto* s : usable) {
    ParserTrainer::GoldSentence g;
    g.words = sentence_words(*s);
    auto n = g.words.size();
    g.heads.assign(n, -1);
    g.labels.assign(n, -1);
    g.children.assign(n, 0);
    for (const auto* t : s->words()) {
      auto d = static_cast<std::size_t>(t->id.start);
      g.heads[d] = *t->head;
      g.labels[d] = *t->head == 0 ? index_of(model.root_labels_, *t->deprel) : index_of(model.arc_labels_, *t->deprel);
      ++g.children[static_cast<std::size_t>(*t->head)];
    }
    gold.push_back(std::move(g));
  }
  ParserTrainer(model).train(gold, options);
  return model;
}

void ParserModel::parse(Sentence& sentence) const {
  auto words = sentence_words(sentence);
  auto targets = sentence.words();
  if (targets.empty()) return;
  ActionSpace space(arc_labels_.size(), root_labels_.size());
  State st(targets.size());
  std::vector<double> scores(space.size());
  while (!st.terminal()) {
    auto feats = extract_features(st, words, arc_labels_, root_labels_);
    std::fill(scores.begin(), scores.end(), 0.0);
    for (auto f : feats) {
      auto it = weights_.find(f);
      if (it == weights_.end()) continue;
      for (std::size_t a = 0; a < space.size(); ++a) scores[a] += it->second[a];
    }
    std::size_t best = space.size();
    for (std::size_t a = 0; a < space.size(); ++a) {
      if (!space.legal(space.decode(a).move, st, schema_.single_root())) continue;
      if (best == space.size() || scores[a] > scores[best]) best = a;
    }
    apply(st, space.decode(best));
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    int h = st.heads[i + 1];
    int l = st.labels[i + 1];
    targets[i]->head = h == 0 ? 0 : targets[static_cast<std::size_t>(h) - 1]->id.start;
    targets[i]->deprel = h == 0 ? root_labels_[static_cast<std::size_t>(l)] : arc_labels_[static_cast<std::size_t>(l)];
  }
}

Document parse_dependency(const Document& doc, const ParserModel& model, Exec exec) {
  Document out = doc;
  for_each_index(exec, out.sentences.size(), [&](std::size_t i) {
    auto& s = out.sentences[i];
    for (const auto* t : s.words()) {
      const char* missing = !t->upos ? "UPOS" : !t->xpos ? "XPOS" : !t->lemma ? "lemma" : nullptr;
      if (missing)
        throw StageError("depparse", "token " + t->id.str() + " ('" + t->form + "') in sentence " +
                                         sentence_label(s, i) + " has no " + missing);
    }
    model.parse(s);
  });
  return out;
}

Archive ParserModel::to_archive() const {
  Archive a;
  a.put("meta", write_meta("parser", info_,
                           {{"schema", std::string(to_string(schema_.variant))},
                            {"sentences", std::to_string(stats_.sentences)},
                            {"skipped_nonprojective", std::to_string(stats_.skipped_nonprojective)}}));
  std::string arcs;
  for (const auto& l : arc_labels_) arcs += l + '\n';
  a.put("arc_labels", std::move(arcs));
  std::string roots;
  for (const auto& l : root_labels_) roots += l + '\n';
  a.put("root_labels", std::move(roots));

  std::vector<std::uint64_t> keys;
  keys.reserve(weights_.size());
  for (const auto& kv : weights_) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  std::string w;
  char buf[64];
  for (auto k : keys) {
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, k);
    w += buf;
    const auto& row = weights_.at(k);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0.0f) continue;
      std::snprintf(buf, sizeof(buf), "\t%zu:%.9g", i, static_cast<double>(row[i]));
      w += buf;
    }
    w += '\n';
  }
  a.put("weights", std::move(w));
  return a;
}

ParserModel ParserModel::from_archive(const Archive& archive) {
  ParserModel m;
  auto meta = read_meta(archive, "parser", m.info_);
  try {
    m.schema_.variant = schema_from_string(meta["schema"]);
  } catch (const ConfigError& e) {
    throw ModelError(e.what());
  }
  m.stats_.sentences = parse_count(meta["sentences"]);
  m.stats_.skipped_nonprojective = parse_count(meta["skipped_nonprojective"]);
  m.arc_labels_ = payload_lines(archive.get("arc_labels"));
  m.root_labels_ = payload_lines(archive.get("root_labels"));
  if (m.arc_labels_.empty() || m.root_labels_.empty()) throw ModelError("parser model has an empty label set");
  const auto actions = m.action_count();
  for (const auto& line : payload_lines(archive.get("weights"))) {
    auto cols = split_fields(line, '\t');
    std::uint64_t key = 0;
    if (cols[0].size() != 16 || std::sscanf(cols[0].c_str(), "%" SCNx64, &key) != 1)
      throw ModelError("malformed feature key in parser model");
    std::vector<float> row(actions, 0.0f);
    for (std::size_t i = 1; i < cols.size(); ++i) {
      auto colon = cols[i].find(':');
      if (colon == std::string::npos) throw ModelError("malformed weight in parser model");
      auto a = parse_count(std::string_view(cols[i]).substr(0, colon));
      if (a >= actions) throw ModelError("action index out of range in parser model");
      row[a] = static_cast<float>(parse_real(std::string_view(cols[i]).substr(colon + 1)));
    }
    m.weights_.emplace(key, std::move(row));
  }
  return m;
}

}  // namespace annopipe
