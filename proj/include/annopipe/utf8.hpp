#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers. Case mapping covers Latin-1, Latin Extended-A and
// basic Cyrillic, which is what the supported languages need.
namespace annopipe::utf8 {

std::vector<char32_t> decode(std::string_view s);
std::string encode(char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

char32_t to_lower(char32_t cp);
bool is_upper(char32_t cp);
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);

std::string to_lower(std::string_view s);

// Number of code points.
std::size_t length(std::string_view s);

// Last `n` code points of `s` (the whole string if shorter).
std::string suffix(std::string_view s, std::size_t n);

// Number of leading code points shared by `a` and `b`, and the byte offsets
// in each at which they diverge.
struct CommonPrefix {
  std::size_t code_points = 0;
  std::size_t bytes = 0;
};
CommonPrefix common_prefix(std::string_view a, std::string_view b);

}  // namespace annopipe::utf8
