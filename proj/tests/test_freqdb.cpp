#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "mitofreq/error.hpp"
#include "mitofreq/freqdb.hpp"
#include "support.hpp"

using namespace mitofreq;
using testsupport::fixture;

namespace {

IngestResult ingest_text(const std::string& snv, const std::string& sizes, IngestOptions opts = {}) {
  std::istringstream a(snv), b(sizes);
  return ingest(a, b, "t", opts);
}

const std::string kHeader = "position\tref\talt\ttlhg\tcount\thomoplasmic\n";

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "mitofreq_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("ingest applies each filter") {
  auto r = ingest_files(fixture("ingest_snv.tsv"), fixture("ingest_sizes.tsv"), "t");
  CHECK(r.report.rows_read == 10);
  CHECK(r.report.indel == 1);
  CHECK(r.report.multi_base == 1);
  CHECK(r.report.heteroplasmic == 1);
  CHECK(r.report.zero_count == 1);
  CHECK(r.report.retained == 5);
  CHECK(r.report.dropped == 5);
  // 263 A>G kept; 2000 seen once globally is gone; 4000 seen once in each of
  // two TLHGs is kept (the threshold is global).
  CHECK(r.db.count(263, 'G', "H") == 5000);
  CHECK_FALSE(r.db.count(2000, 'T', "H"));
  CHECK(r.db.count(4000, 'T', "H") == 1);
  CHECK(r.db.count(4000, 'T', "L0") == 1);
  CHECK(r.db.count(3000, 'G', "L0") == 3);
  CHECK_FALSE(r.db.count(3000, 'G', "H"));
  CHECK(r.db.count(310, 'C', "H") == 30);  // poly-stretch kept by default
  CHECK(r.db.total_n() == 10500);

  auto strict = ingest_files(fixture("ingest_snv.tsv"), fixture("ingest_sizes.tsv"), "t", {true});
  CHECK(strict.report.poly_stretch == 2);  // 310 and the 315 insertion
  CHECK_FALSE(strict.db.count(310, 'C', "H"));
  for (const auto& rec : strict.db.records()) CHECK_FALSE(in_poly_stretch(rec.position));
}

TEST_CASE("ingested records satisfy the database invariants") {
  auto r = ingest_files(fixture("ingest_snv.tsv"), fixture("ingest_sizes.tsv"), "t");
  std::map<std::pair<int, char>, std::int64_t> global;
  for (const auto& rec : r.db.records()) {
    CHECK(rec.ref_base != rec.alt_base);
    CHECK(rec.homoplasmic);
    CHECK(rec.count <= r.db.tlhg_size(rec.tlhg));
    global[{rec.position, rec.alt_base}] += rec.count;
  }
  for (const auto& [k, c] : global) CHECK(c >= 2);
  std::int64_t total = 0;
  for (const auto& [t, n] : r.db.tlhg_sizes()) total += n;
  CHECK(total == r.db.total_n());
}

TEST_CASE("schema errors name row and column") {
  auto msg = [](const std::string& snv, const std::string& sizes) -> std::string {
    try {
      ingest_text(snv, sizes);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  const std::string sizes = "tlhg\tn\nH\t100\n";
  CHECK(msg("pos\tref\n", sizes).find("header") != std::string::npos);
  auto m = msg(kHeader + "263\tA\tG\tH\tlots\ttrue\n", sizes);
  CHECK(m.find("row 2") != std::string::npos);
  CHECK(m.find("count") != std::string::npos);
  m = msg(kHeader + "263\tA\tG\tH\t5\ttrue\n99999\tA\tG\tH\t5\ttrue\n", sizes);
  CHECK(m.find("row 3") != std::string::npos);
  CHECK(m.find("position") != std::string::npos);
  CHECK(msg(kHeader + "263\tA\tG\tH\t500\ttrue\n", sizes).find("exceeds") != std::string::npos);
  CHECK(msg(kHeader + "263\tA\tG\tZ\t5\ttrue\n", sizes).find("tlhg") != std::string::npos);
  CHECK(msg(kHeader + "263\tA\tG\tH\t5\tmaybe\n", sizes).find("homoplasmic") != std::string::npos);
  CHECK(msg(kHeader + "263\tA\tG\tH\t5\n", sizes).find("6 columns") != std::string::npos);
  CHECK(msg(kHeader, "H\t0\n").find("positive") != std::string::npos);
  CHECK_THROWS_AS(ingest_files("/nonexistent", fixture("ingest_sizes.tsv"), "t"), ConfigError);
}

TEST_CASE("property: ingestion filters commute") {
  // Random raw tables; the retained set must not depend on filter order or
  // on row order.
  std::mt19937_64 rng(5);
  const char bases[] = {'A', 'C', 'G', 'T'};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RawSnvRow> rows;
    for (int i = 0; i < 40; ++i) {
      RawSnvRow r;
      r.position = 300 + static_cast<int>(rng() % 30);
      r.ref = std::string(1, bases[rng() % 4]);
      r.alt = std::string(1, bases[rng() % 4]);
      if (rng() % 10 == 0) r.alt = "ins:C";
      if (rng() % 10 == 0) {
        r.ref += 'A';
        r.alt += 'C';
      }
      r.tlhg = rng() % 2 ? "H" : "L0";
      r.count = static_cast<std::int64_t>(rng() % 3);
      r.homoplasmic = rng() % 8 != 0;
      rows.push_back(r);
    }
    IngestOptions opts{trial % 2 == 0};
    auto filters = ingestion_filters(rows, opts);
    auto retained = [&](const std::vector<IngestFilter>& fs, std::vector<RawSnvRow> rs) {
      std::set<std::tuple<int, std::string, std::string, std::string, std::int64_t, bool>> kept;
      for (const auto& f : fs) {
        std::erase_if(rs, [&](const RawSnvRow& r) { return f.drops(r); });
      }
      for (const auto& r : rs) kept.insert({r.position, r.ref, r.alt, r.tlhg, r.count, r.homoplasmic});
      return kept;
    };
    auto baseline = retained(filters, rows);
    for (int perm = 0; perm < 5; ++perm) {
      auto fs = filters;
      std::shuffle(fs.begin(), fs.end(), rng);
      auto rs = rows;
      std::shuffle(rs.begin(), rs.end(), rng);
      // Filters built from a shuffled table see the same statistics.
      auto rebuilt = ingestion_filters(rs, opts);
      std::shuffle(rebuilt.begin(), rebuilt.end(), rng);
      REQUIRE(retained(fs, rs) == baseline);
      REQUIRE(retained(rebuilt, rs) == baseline);
    }
  }
}

TEST_CASE("snv_frequency") {
  auto coarse = testsupport::split_coarse();
  auto fine = testsupport::split_fine();
  CHECK(*snv_frequency(fine, 5000, 'G', "A1") == 0.2);
  CHECK(*snv_frequency(coarse, 5000, 'G', "A") == 0.0625);
  CHECK_FALSE(snv_frequency(coarse, 5000, 'T', "A"));
  CHECK_FALSE(snv_frequency(coarse, 5000, 'G', "B"));
  CHECK_THROWS_AS(snv_frequency(coarse, 5000, 'G', "Q"), DomainError);
}

TEST_CASE("pooled_frequency") {
  auto a = SnvFrequencyDb::create("a", {{100, 'T', 'C', "H", 3, true}}, {{"H", 1000}});
  auto b = SnvFrequencyDb::create("b", {{100, 'T', 'C', "H", 1, true}}, {{"H", 500}});
  std::vector<DbRef> both{a, b};
  CHECK(*pooled_frequency(both, 100, 'C', "H") == 4.0 / 1500.0);
  std::vector<DbRef> one{a};
  CHECK(*pooled_frequency(one, 100, 'C', "H") == *snv_frequency(a, 100, 'C', "H"));

  // The source without the SNV still contributes its TLHG size.
  auto c = SnvFrequencyDb::create("c", {{100, 'T', 'C', "H", 2, true}}, {{"H", 100}});
  auto d = SnvFrequencyDb::create("d", {{200, 'T', 'C', "H", 7, true}}, {{"H", 100}});
  std::vector<DbRef> cd{c, d};
  CHECK(*pooled_frequency(cd, 100, 'C', "H") == 0.01);
  // Brute-force union: concatenate the two samples and count.
  std::int64_t x = 0, n = 0;
  for (const SnvFrequencyDb& db : cd) {
    n += db.tlhg_size("H");
    for (const auto& r : db.records()) {
      if (r.position == 100 && r.alt_base == 'C' && r.tlhg == "H") x += r.count;
    }
  }
  CHECK(*pooled_frequency(cd, 100, 'C', "H") == static_cast<double>(x) / static_cast<double>(n));

  CHECK_FALSE(pooled_frequency(cd, 300, 'C', "H"));
  CHECK_THROWS_AS(pooled_frequency(cd, 100, 'C', "L0"), DomainError);
  CHECK_THROWS_AS(pooled_frequency(std::span<const DbRef>{}, 100, 'C', "H"), DomainError);

  // A source that lacks the TLHG is ignored.
  auto e = SnvFrequencyDb::create("e", {}, {{"L0", 50}});
  std::vector<DbRef> ce{c, e};
  CHECK(*pooled_frequency(ce, 100, 'C', "H") == 0.02);
}

TEST_CASE("property: pooled frequency is size-weighted") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::int64_t n1 = 1 + static_cast<std::int64_t>(rng() % 200000);
    std::int64_t n2 = 1 + static_cast<std::int64_t>(rng() % 60000);
    std::int64_t x1 = static_cast<std::int64_t>(rng() % (n1 + 1));
    std::int64_t x2 = static_cast<std::int64_t>(rng() % (n2 + 1));
    std::vector<SnvRecord> r1, r2;
    if (x1) r1.push_back({100, 'T', 'C', "H", x1, true});
    if (x2) r2.push_back({100, 'T', 'C', "H", x2, true});
    auto a = SnvFrequencyDb::create("a", r1, {{"H", n1}});
    auto b = SnvFrequencyDb::create("b", r2, {{"H", n2}});
    std::vector<DbRef> both{a, b};
    auto pooled = pooled_frequency(both, 100, 'C', "H");
    if (x1 + x2 == 0) {
      CHECK_FALSE(pooled);
      continue;
    }
    REQUIRE(pooled);
    CHECK(*pooled == static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2));
    double f1 = static_cast<double>(x1) / static_cast<double>(n1);
    double f2 = static_cast<double>(x2) / static_cast<double>(n2);
    CHECK(*pooled >= std::min(f1, f2));
    CHECK(*pooled <= std::max(f1, f2));
    CHECK(*pooled > 0.0);
    CHECK(*pooled <= 1.0);
  }
  // Equal per-source frequencies pool to the same value.
  auto a = SnvFrequencyDb::create("a", {{100, 'T', 'C', "H", 5, true}}, {{"H", 100}});
  auto b = SnvFrequencyDb::create("b", {{100, 'T', 'C', "H", 20, true}}, {{"H", 400}});
  std::vector<DbRef> both{a, b};
  CHECK(*pooled_frequency(both, 100, 'C', "H") == 0.05);
}

TEST_CASE("tlhg_distribution") {
  auto d = tlhg_distribution(testsupport::split_coarse());
  CHECK(d.prob("A") == 0.8);
  CHECK(d.prob("B") == 0.2);
  CHECK(d.prob("Z") == 0.0);
  auto single = SnvFrequencyDb::create("s", {}, {{"H", 7}});
  CHECK(tlhg_distribution(single).prob("H") == 1.0);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, std::int64_t> sizes;
    for (int i = 0, k = 1 + static_cast<int>(rng() % 30); i < k; ++i) {
      sizes["T" + std::to_string(i)] = 1 + static_cast<std::int64_t>(rng() % 100000);
    }
    auto dist = tlhg_distribution(SnvFrequencyDb::create("r", {}, sizes));
    double total = 0;
    for (const auto& [t, p] : dist.probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      total += p;
    }
    CHECK(std::fabs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("custom TLHG weights") {
  auto d = normalize_weights({{"A", 4}, {"B", 1}}, "custom");
  CHECK(d.prob("A") == doctest::Approx(0.8));
  CHECK(d.prob("B") == doctest::Approx(0.2));
  CHECK_THROWS_AS(normalize_weights({{"A", 4}, {"B", -1}}, "x"), DomainError);
  CHECK_THROWS_AS(normalize_weights({{"A", 0}, {"B", 0}}, "x"), DomainError);
  CHECK_THROWS_AS(normalize_weights({}, "x"), DomainError);

  std::ifstream ok(fixture("weights_ab.tsv"));
  CHECK(read_tlhg_weights(ok, "ab").prob("A") == doctest::Approx(0.8));
  std::ifstream bad(fixture("weights_negative.tsv"));
  CHECK_THROWS_AS(read_tlhg_weights(bad, "neg"), DomainError);
}

TEST_CASE("compare_databases") {
  auto h = ingest_files(fixture("helix_like_snv.tsv"), fixture("helix_like_sizes.tsv"), "h").db;
  auto g = ingest_files(fixture("gnomad_like_snv.tsv"), fixture("gnomad_like_sizes.tsv"), "g").db;
  auto self = compare_databases(h, h);
  CHECK(self.shared_snv_count == h.records().size());
  CHECK(self.pearson_log10 == doctest::Approx(1.0).epsilon(1e-14));

  auto r = compare_databases(h, g);
  CHECK(r.shared_snv_count == 5);
  std::vector<double> x, y;
  for (const auto& p : r.pairs) {
    x.push_back(p.freq1);
    y.push_back(p.freq2);
  }
  // Hand-logged values from the fixture files.
  std::vector<double> hx{12.0 / 1000, 3.0 / 1000, 150.0 / 1000, 40.0 / 500, 9.0 / 500};
  std::vector<double> gy{10.0 / 800, 4.0 / 800, 100.0 / 800, 30.0 / 300, 6.0 / 300};
  CHECK(std::fabs(r.pearson_log10 - testsupport::pearson_textbook(hx, gy)) < 1e-12);
  CHECK(std::fabs(r.pearson_log10 - testsupport::pearson_textbook(x, y)) < 1e-12);

  auto disjoint = ingest_files(fixture("disjoint_snv.tsv"), fixture("disjoint_sizes.tsv"), "d").db;
  CHECK_THROWS_AS(compare_databases(h, disjoint), DomainError);
  auto one = SnvFrequencyDb::create("one", {{1000, 'T', 'C', "H", 12, true}}, {{"H", 1000}});
  CHECK_THROWS_AS(compare_databases(h, one), DomainError);
}

TEST_CASE("binary cache round-trips and detects damage") {
  auto r = ingest_files(fixture("ingest_snv.tsv"), fixture("ingest_sizes.tsv"), "cached");
  auto path = temp_path("roundtrip.mfq");
  save_cache(r.db, path, 1234);
  auto back = load_cache(path);
  CHECK(back.db == r.db);
  CHECK(back.source_checksum == 1234);

  auto bytes = testsupport::slurp(path);
  auto write = [&](const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << data;
  };
  auto flipped = bytes;
  flipped.back() = static_cast<char>(flipped.back() ^ 0x5a);
  write(flipped);
  CHECK_THROWS_AS(load_cache(path), ConfigError);
  write(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_cache(path), ConfigError);
  auto schema = bytes;
  schema[8] = 99;
  write(schema);
  CHECK_THROWS_AS(load_cache(path), ConfigError);
  write("not a cache at all");
  CHECK_THROWS_AS(load_cache(path), ConfigError);
}

TEST_CASE("load_or_ingest rebuilds stale caches") {
  auto path = temp_path("auto.mfq");
  std::filesystem::remove(path);
  auto snv = fixture("ingest_snv.tsv");
  auto sizes = fixture("ingest_sizes.tsv");
  auto cold = ingest_files(snv, sizes, "auto").db;

  auto first = load_or_ingest(snv, sizes, "auto", path);
  CHECK(first == cold);
  CHECK(std::filesystem::exists(path));
  CHECK(load_cache(path).source_checksum == source_checksum(snv, sizes, {}));
  CHECK(load_or_ingest(snv, sizes, "auto", path) == cold);

  // Other options change the checksum, so the cache is rebuilt.
  auto strict = load_or_ingest(snv, sizes, "auto", path, {true});
  CHECK(strict == ingest_files(snv, sizes, "auto", {true}).db);
  CHECK(load_cache(path).source_checksum == source_checksum(snv, sizes, {true}));

  std::ofstream(path, std::ios::trunc) << "garbage";
  CHECK(load_or_ingest(snv, sizes, "auto", path) == cold);
}

TEST_CASE("database construction rejects inconsistent data") {
  CHECK_THROWS_AS(SnvFrequencyDb::create("x", {{1, 'A', 'A', "H", 1, true}}, {{"H", 10}}), DomainError);
  CHECK_THROWS_AS(SnvFrequencyDb::create("x", {{1, 'A', 'G', "H", 11, true}}, {{"H", 10}}), DomainError);
  CHECK_THROWS_AS(SnvFrequencyDb::create("x", {{1, 'A', 'G', "Q", 1, true}}, {{"H", 10}}), DomainError);
  CHECK_THROWS_AS(SnvFrequencyDb::create("x",
                                         {{1, 'A', 'G', "H", 1, true}, {1, 'A', 'G', "H", 2, true}},
                                         {{"H", 10}}),
                  DomainError);
  CHECK_THROWS_AS(testsupport::split_coarse().tlhg_size("Q"), DomainError);
}
