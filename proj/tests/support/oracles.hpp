#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Brute-force reference metrics. They read serialized CoNLL-U text with plain
// string splitting and share no code with the library.
namespace annopipe::testing::oracle {

struct Counts {
  std::uint64_t gold = 0;
  std::uint64_t pred = 0;
  std::uint64_t correct = 0;
};

struct Row {
  std::string id;
  std::vector<std::string> cols;  // all ten columns
};

using Sentences = std::vector<std::vector<Row>>;

Sentences read(const std::string& conllu);

// Word rows only (no ranges, no empty nodes).
std::vector<std::vector<Row>> words(const Sentences& s);

// False when sentence counts or word forms differ.
bool aligned(const std::string& gold, const std::string& pred);

// field: lemma, upos, xpos, feats, morph-pooled, morph-strict, srl.
Counts micro(const std::string& gold, const std::string& pred, const std::string& field);
Counts las(const std::string& gold, const std::string& pred);
// unit: "token" or "sentence".
Counts spans(const std::string& gold, const std::string& pred, const std::string& unit);
// column: 3 (UPOS) or 7 (DEPREL).
std::map<std::string, std::optional<double>> per_label(const std::string& gold, const std::string& pred, int column);

double f1(const Counts& c);

}  // namespace annopipe::testing::oracle
