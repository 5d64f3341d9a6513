#include "shapfoil/manifest.hpp"

#include <sstream>
#include <stdexcept>

#include "shapfoil/dataset.hpp"
#include "shapfoil/strings.hpp"

namespace shapfoil {

void RunManifest::set(const std::string& key, double value) {
  entries_[key] = format_double_roundtrip(value);
}
void RunManifest::set(const std::string& key, std::int64_t value) {
  entries_[key] = std::to_string(value);
}
void RunManifest::set(const std::string& key, std::uint64_t value) {
  entries_[key] = std::to_string(value);
}

std::string RunManifest::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::out_of_range("manifest: missing key '" + key + "'");
  return it->second;
}

std::string RunManifest::to_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  return out.str();
}

RunManifest RunManifest::from_text(const std::string& text) {
  RunManifest m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("manifest: malformed line '" + line + "'");
    m.entries_[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

void RunManifest::save(const std::string& path) const { write_file(path, to_text()); }

RunManifest RunManifest::load(const std::string& path) {
  return from_text(read_file(path));
}

std::string content_hash(const std::string& content) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::string& path) { return content_hash(read_file(path)); }

}  // namespace shapfoil
