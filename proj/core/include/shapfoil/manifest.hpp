#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace shapfoil {

/// Line-oriented key=value record of every parameter that influenced a run;
/// identical manifests must reproduce byte-identical outputs. Keys render in
/// sorted order.
class RunManifest {
public:
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, std::uint64_t value);

  std::string get(const std::string& key) const;
  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string to_text() const;
  static RunManifest from_text(const std::string& text);

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);

private:
  std::map<std::string, std::string> entries_;
};

/// FNV-1a over the file bytes, rendered as 16 hex digits. Used to pin the
/// schema a run was made with.
std::string file_hash(const std::string& path);
std::string content_hash(const std::string& content);

}  // namespace shapfoil
