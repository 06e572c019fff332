#include "mitofreq/reference.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mitofreq/error.hpp"
#include "mitofreq/variant.hpp"

namespace mitofreq {

namespace {

constexpr int kPlaceholderPosition = 3107;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace

RcrsReference RcrsReference::parse(std::string_view text) {
  auto newline = text.find('\n');
  if (newline == std::string_view::npos) {
    throw ConfigError("rCRS file: missing checksum line");
  }
  auto seq = trim(text.substr(0, newline));
  auto rest = text.substr(newline + 1);
  auto checksum_line = trim(rest.substr(0, rest.find('\n')));

  if (seq.size() != static_cast<std::size_t>(kMitogenomeLength)) {
    throw ConfigError("rCRS file: expected " + std::to_string(kMitogenomeLength) +
                      " bases, found " + std::to_string(seq.size()));
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char c = seq[i];
    bool placeholder = (c == 'N' && static_cast<int>(i) + 1 == kPlaceholderPosition);
    if (!is_nucleotide(c) && !placeholder) {
      throw ConfigError("rCRS file: invalid base '" + std::string(1, c) +
                        "' at position " + std::to_string(i + 1));
    }
  }

  constexpr std::string_view prefix = "crc32 ";
  if (checksum_line.substr(0, prefix.size()) != prefix) {
    throw ConfigError("rCRS file: checksum line must read 'crc32 <hex>'");
  }
  auto hex = std::string(checksum_line.substr(prefix.size()));
  char* end = nullptr;
  unsigned long expected = std::strtoul(hex.c_str(), &end, 16);
  if (hex.empty() || *end != '\0') {
    throw ConfigError("rCRS file: malformed checksum '" + hex + "'");
  }
  auto actual = crc32(0L, reinterpret_cast<const Bytef*>(seq.data()),
                      static_cast<uInt>(seq.size()));
  if (actual != expected) {
    throw ConfigError("rCRS file: checksum mismatch");
  }
  return RcrsReference(std::string(seq));
}

RcrsReference RcrsReference::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open rCRS file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const RcrsReference& RcrsReference::bundled() {
  static const RcrsReference ref = load(data_directory() / "rcrs.txt");
  return ref;
}

char RcrsReference::base_at(int position) const {
  if (position < 1 || position > kMitogenomeLength) {
    throw DomainError("position out of range: " + std::to_string(position));
  }
  return bases_[static_cast<std::size_t>(position - 1)];
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("MITOFREQ_DATA_DIR"); env && *env) {
    return env;
  }
  return MITOFREQ_DATA_DIR;
}

}  // namespace mitofreq
