#include "annopipe/archive.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "annopipe/error.hpp"

namespace annopipe {

namespace {

constexpr std::string_view kMagic = "ANPM";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += width;
    return v;
  }

  std::string_view take(std::uint64_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (bytes_.size() - pos_ < n) throw ModelError("model archive is truncated");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void Archive::put(std::string name, std::string payload) {
  sections_[std::move(name)] = std::move(payload);
}

bool Archive::has(std::string_view name) const { return sections_.find(name) != sections_.end(); }

const std::string& Archive::get(std::string_view name) const {
  auto it = sections_.find(name);
  if (it == sections_.end()) throw ModelError("model archive lacks section '" + std::string(name) + "'");
  return it->second;
}

std::string Archive::to_bytes() const {
  std::string out(kMagic);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(sections_.size()));
  for (const auto& [name, payload] : sections_) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u64(out, payload.size());
    out += payload;
  }
  return out;
}

Archive Archive::from_bytes(std::string_view bytes) {
  Reader r(bytes);
  if (r.take(kMagic.size()) != kMagic) throw ModelError("not a model archive (bad magic)");
  auto version = r.uint(4);
  if (version != kVersion)
    throw ModelError("unsupported model archive version " + std::to_string(version));
  auto count = r.uint(4);
  Archive a;
  for (std::uint64_t i = 0; i < count; ++i) {
    auto name_len = r.uint(4);
    std::string name(r.take(name_len));
    auto payload_len = r.uint(8);
    a.put(std::move(name), std::string(r.take(payload_len)));
  }
  if (!r.done()) throw ModelError("trailing bytes after the last section");
  return a;
}

void Archive::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write model file " + path.string());
  auto bytes = to_bytes();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ModelError("failed writing model file " + path.string());
}

Archive Archive::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_bytes(buf.str());
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string format_key_values(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string write_meta(std::string_view kind, const ModelInfo& info, std::map<std::string, std::string> extra) {
  extra["kind"] = std::string(kind);
  extra["language"] = info.language;
  extra["variety"] = info.variety;
  extra["train_tokens"] = std::to_string(info.train_tokens);
  extra["dev_accuracy"] = format_real(info.dev_accuracy);
  return format_key_values(extra);
}

std::map<std::string, std::string> read_meta(const Archive& archive, std::string_view kind, ModelInfo& info) {
  auto meta = parse_key_values(archive.get("meta"));
  if (meta["kind"] != kind)
    throw ModelError("expected a " + std::string(kind) + " model, found '" + meta["kind"] + "'");
  info.language = meta["language"];
  info.variety = meta["variety"];
  info.train_tokens = parse_count(meta["train_tokens"]);
  info.dev_accuracy = parse_real(meta["dev_accuracy"]);
  return meta;
}

std::vector<std::string> payload_lines(std::string_view payload) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < payload.size()) {
    auto end = payload.find('\n', start);
    if (end == std::string_view::npos) end = payload.size();
    lines.emplace_back(payload.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t parse_count(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ModelError("bad number '" + std::string(s) + "' in model");
  return v;
}

double parse_real(std::string_view s) {
  std::string copy(s);
  char* end = nullptr;
  double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size())
    throw ModelError("bad number '" + copy + "' in model");
  return v;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace annopipe
