#include "mitofreq/variant.hpp"

namespace mitofreq {

std::string Variant::to_string() const {
  std::string out = std::to_string(position);
  switch (kind) {
    case VariantKind::substitution:
      out += base;
      break;
    case VariantKind::insertion:
      out += '.';
      out += std::to_string(insertion_index);
      out += base;
      break;
    case VariantKind::deletion:
      out += "del";
      break;
  }
  return out;
}

}  // namespace mitofreq
