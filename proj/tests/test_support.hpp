#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "robustdp/scenario.hpp"

namespace robustdp::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(ROBUSTDP_FIXTURES_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Config load_fixture(const std::string& name) {
  return load_config(read_fixture(name));
}

}  // namespace robustdp::test
