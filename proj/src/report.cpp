#include "robustdp/report.hpp"

#include <cstdio>
#include <sstream>

namespace robustdp {

void ReportBuilder::set_vector(const std::string& key, const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += fmt_g17(v[i]);
  }
  kv_[key] = std::move(s);
}

std::string ReportBuilder::text() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto sep = line.find(" = ");
    if (sep == std::string::npos) continue;
    kv[line.substr(0, sep)] = line.substr(sep + 3);
  }
  return kv;
}

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace robustdp
