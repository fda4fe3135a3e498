#pragma once

#include <map>
#include <string>
#include <vector>

#include "robustdp/common.hpp"

namespace robustdp {

// Flat structured-text reports: one `key = value` line per entry, keys sorted,
// floats printed with 17 significant digits. Deterministic byte-for-byte.
class ReportBuilder {
 public:
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set(const std::string& key, double value) { kv_[key] = fmt_g17(value); }
  void set(const std::string& key, long long value) { kv_[key] = std::to_string(value); }
  void set(const std::string& key, int value) { kv_[key] = std::to_string(value); }
  void set(const std::string& key, bool value) { kv_[key] = value ? "true" : "false"; }
  void set_vector(const std::string& key, const std::vector<double>& v);

  std::string text() const;

 private:
  std::map<std::string, std::string> kv_;
};

// Parses a report back into a key -> value map (for oracle cross-checks).
std::map<std::string, std::string> parse_report(const std::string& text);

// FNV-1a 64-bit content hash, hex-encoded.
std::string content_digest(const std::string& bytes);

}  // namespace robustdp
