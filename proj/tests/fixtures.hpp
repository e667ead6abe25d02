#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fixture {

  inline std::string read_text(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

}  // namespace fixture
