#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace annopipe {

// Single-file model container: named, length-prefixed sections. The byte
// layout is described in docs/model-format.md.
class Archive {
 public:
  static constexpr std::uint32_t kVersion = 1;

  void put(std::string name, std::string payload);
  bool has(std::string_view name) const;
  // Throws ModelError when the section is missing.
  const std::string& get(std::string_view name) const;
  const std::map<std::string, std::string, std::less<>>& sections() const { return sections_; }

  std::string to_bytes() const;
  static Archive from_bytes(std::string_view bytes);

  void save(const std::filesystem::path& path) const;
  static Archive load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string, std::less<>> sections_;
};

// Metadata common to every stage model.
struct ModelInfo {
  std::string language;
  std::string variety;
  std::uint64_t train_tokens = 0;
  double dev_accuracy = 0.0;
};

// "key=value" lines, used for the metadata section of every model.
std::map<std::string, std::string> parse_key_values(std::string_view text);
std::string format_key_values(const std::map<std::string, std::string>& kv);

// Metadata section shared by all models: kind plus the ModelInfo fields.
// read_meta throws ModelError when the archive holds another kind of model.
std::string write_meta(std::string_view kind, const ModelInfo& info,
                       std::map<std::string, std::string> extra = {});
std::map<std::string, std::string> read_meta(const Archive& archive, std::string_view kind, ModelInfo& info);

// Helpers for the text payloads inside sections.
std::vector<std::string> payload_lines(std::string_view payload);
// Splits on `sep`, keeping empty fields (including trailing ones).
std::vector<std::string> split_fields(std::string_view line, char sep);
std::uint64_t parse_count(std::string_view s);
double parse_real(std::string_view s);
std::string format_real(double v);

}  // namespace annopipe
