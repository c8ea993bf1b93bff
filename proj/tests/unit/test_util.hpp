#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace omltest {

// Hexagon of 3-atom blocks with a chord through a fresh atom joining the
// middle atoms of two opposite edges; 13 atoms, 7 blocks, loops of order 5+.
inline constexpr const char* k13_7 = "123,345,567,789,9AB,BC1,AD4.";

inline std::string fixture_dir() {
  const char* env = std::getenv("OMLATTICE_FIXTURE_DIR");
  if (!env) throw std::runtime_error("OMLATTICE_FIXTURE_DIR not set");
  return env;
}

inline std::string load_fixture(const std::string& name) {
  std::string path = fixture_dir() + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace omltest
