#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mitofreq/error.hpp"
#include "mitofreq/freqdb.hpp"

// Layout (little-endian):
//   magic[8] "MFQDB\0\0\0" | u32 schema | u32 source crc | u32 payload crc |
//   u64 payload length | payload
// payload: str name | u32 n_sizes {str tlhg, i64 n} | u32 n_records
//          {i32 pos, u8 ref, u8 alt, str tlhg, i64 count, u8 homoplasmic}
// str = u32 length + bytes.

namespace mitofreq {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'F', 'Q', 'D', 'B', '\0', '\0', '\0'};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_ += s;
  }
  std::string& bytes() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::string str() {
    auto n = u32();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw ConfigError("database cache is truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

std::uint32_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return crc_of(buf.str());
}

void save_cache(const SnvFrequencyDb& db, const std::filesystem::path& path,
                std::uint32_t source_checksum) {
  Writer payload;
  payload.str(db.source_name());
  payload.u32(static_cast<std::uint32_t>(db.tlhg_sizes().size()));
  for (const auto& [tlhg, n] : db.tlhg_sizes()) {
    payload.str(tlhg);
    payload.u64(static_cast<std::uint64_t>(n));
  }
  payload.u32(static_cast<std::uint32_t>(db.records().size()));
  for (const auto& r : db.records()) {
    payload.u32(static_cast<std::uint32_t>(r.position));
    payload.u8(static_cast<std::uint8_t>(r.ref_base));
    payload.u8(static_cast<std::uint8_t>(r.alt_base));
    payload.str(r.tlhg);
    payload.u64(static_cast<std::uint64_t>(r.count));
    payload.u8(r.homoplasmic ? 1 : 0);
  }

  Writer header;
  header.bytes().append(kMagic.data(), kMagic.size());
  header.u32(kCacheSchemaVersion);
  header.u32(source_checksum);
  header.u32(crc_of(payload.bytes()));
  header.u64(payload.bytes().size());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write database cache: " + path.string());
  out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
  out.write(payload.bytes().data(), static_cast<std::streamsize>(payload.bytes().size()));
  if (!out) throw ConfigError("failed writing database cache: " + path.string());
}

CachedDb load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open database cache: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();

  if (data.size() < kMagic.size() || std::memcmp(data.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ConfigError(path.string() + " is not a database cache");
  }
  Reader head(std::string_view(data).substr(kMagic.size()));
  auto schema = head.u32();
  if (schema != kCacheSchemaVersion) {
    throw ConfigError("database cache schema " + std::to_string(schema) + " is not supported");
  }
  auto source_crc = head.u32();
  auto payload_crc = head.u32();
  auto length = head.u64();
  constexpr std::size_t kHeaderSize = 8 + 4 + 4 + 4 + 8;
  if (data.size() - kHeaderSize != length) throw ConfigError("database cache is truncated");
  auto payload = std::string_view(data).substr(kHeaderSize);
  if (crc_of(payload) != payload_crc) throw ConfigError("database cache checksum mismatch");

  Reader r(payload);
  auto name = r.str();
  std::map<std::string, std::int64_t> sizes;
  for (auto n = r.u32(); n > 0; --n) {
    auto tlhg = r.str();
    sizes[tlhg] = static_cast<std::int64_t>(r.u64());
  }
  std::vector<SnvRecord> records;
  for (auto n = r.u32(); n > 0; --n) {
    SnvRecord rec;
    rec.position = static_cast<int>(r.u32());
    rec.ref_base = static_cast<char>(r.u8());
    rec.alt_base = static_cast<char>(r.u8());
    rec.tlhg = r.str();
    rec.count = static_cast<std::int64_t>(r.u64());
    rec.homoplasmic = r.u8() != 0;
    records.push_back(std::move(rec));
  }
  if (!r.done()) throw ConfigError("database cache has trailing bytes");
  try {
    return {SnvFrequencyDb::create(std::move(name), std::move(records), std::move(sizes)),
            source_crc};
  } catch (const DomainError& e) {
    throw ConfigError(std::string("database cache: ") + e.what());
  }
}

std::uint32_t source_checksum(const std::filesystem::path& snv_tsv,
                              const std::filesystem::path& sizes_tsv, IngestOptions options) {
  uLong crc = crc32(0L, Z_NULL, 0);
  for (const auto& path : {snv_tsv, sizes_tsv}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  }
  const char flag = options.exclude_poly_stretches ? '1' : '0';
  crc = crc32(crc, reinterpret_cast<const Bytef*>(&flag), 1);
  return static_cast<std::uint32_t>(crc);
}

SnvFrequencyDb load_or_ingest(const std::filesystem::path& snv_tsv,
                              const std::filesystem::path& sizes_tsv, std::string source_name,
                              const std::filesystem::path& cache, IngestOptions options) {
  const auto checksum = source_checksum(snv_tsv, sizes_tsv, options);
  if (std::filesystem::exists(cache)) {
    try {
      auto cached = load_cache(cache);
      if (cached.source_checksum == checksum && cached.db.source_name() == source_name) {
        return std::move(cached.db);
      }
    } catch (const ConfigError&) {
      // A stale or damaged cache is rebuilt below.
    }
  }
  auto result = ingest_files(snv_tsv, sizes_tsv, std::move(source_name), options);
  save_cache(result.db, cache, checksum);
  return std::move(result.db);
}

}  // namespace mitofreq
