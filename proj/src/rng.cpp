#include "dlalloc/rng.hpp"

#include <sstream>

namespace dlalloc {

std::string Rng::serialize() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void Rng::deserialize(const std::string& text) {
  std::istringstream in(text);
  in >> engine_;
}

}  // namespace dlalloc
