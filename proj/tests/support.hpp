#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's own numerics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mitofreq/freqdb.hpp"
#include "mitofreq/haplogroup.hpp"
#include "mitofreq/lr_engine.hpp"
#include "mitofreq/profile.hpp"
#include "mitofreq/reference.hpp"

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(MITOFREQ_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& p,
                                                      bool skip_header = true) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

struct ExampleRow {
  std::string label;
  std::string haplogroup;
  std::string tlhg;
  std::string haplotype;
};

inline std::vector<ExampleRow> example_haplotypes() {
  std::vector<ExampleRow> out;
  for (const auto& r : read_tsv(fixture("example_haplotypes.tsv"))) {
    out.push_back({r.at(0) + " / " + r.at(1), r.at(2), r.at(3), r.at(5)});
  }
  return out;
}

// The subdivided sample behind the worked example: n = 100, TLHG A of 80
// splits into A1 (20) and A2 (60); B has 20. Five carry the SNV, four of
// them in A1.
inline mitofreq::SnvFrequencyDb split_coarse() {
  return mitofreq::SnvFrequencyDb::create(
      "coarse", {{5000, 'A', 'G', "A", 5, true}, {6000, 'C', 'T', "A", 40, true}},
      {{"A", 80}, {"B", 20}});
}

inline mitofreq::SnvFrequencyDb split_fine() {
  return mitofreq::SnvFrequencyDb::create("fine",
                                          {{5000, 'A', 'G', "A1", 4, true},
                                           {5000, 'A', 'G', "A2", 1, true},
                                           {6000, 'C', 'T', "A1", 10, true},
                                           {6000, 'C', 'T', "A2", 30, true}},
                                          {{"A1", 20}, {"A2", 60}, {"B", 20}});
}

inline std::vector<mitofreq::SampleMember> split_sample() {
  std::vector<mitofreq::SampleMember> s;
  for (int i = 0; i < 20; ++i) s.push_back({"A1", i < 4});
  for (int i = 0; i < 60; ++i) s.push_back({"A2", i < 1});
  for (int i = 0; i < 20; ++i) s.push_back({"B", false});
  return s;
}

inline mitofreq::SubdivisionDag split_dag() {
  return mitofreq::SubdivisionDag({"A", "A1", "A2", "B"}, {{"A1", "A"}, {"A2", "A"}});
}

// Oracles ---------------------------------------------------------------------

/// Single-pass textbook Pearson in long double on log10 values.
inline double pearson_textbook(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double a = std::log10(static_cast<long double>(x[i]));
    long double b = std::log10(static_cast<long double>(y[i]));
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  long double num = n * sxy - sx * sy;
  long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

/// P(Bin(n, p) <= k) by direct summation in log space.
inline long double binomial_cdf(std::int64_t k, std::int64_t n, long double p) {
  long double total = 0;
  for (std::int64_t i = 0; i <= k; ++i) {
    long double log_term = std::lgamma(static_cast<long double>(n) + 1) -
                           std::lgamma(static_cast<long double>(i) + 1) -
                           std::lgamma(static_cast<long double>(n - i) + 1) +
                           static_cast<long double>(i) * std::log(p) +
                           static_cast<long double>(n - i) * std::log1p(-p);
    total += std::exp(log_term);
  }
  return total;
}

/// Upper limit: the p with P(Bin(n, p) <= k) = 1 - confidence.
inline double clopper_pearson_tail_oracle(std::int64_t k, std::int64_t n, double confidence) {
  long double lo = 0, hi = 1;
  const long double target = 1.0L - confidence;
  for (int it = 0; it < 200; ++it) {
    long double mid = (lo + hi) / 2;
    if (binomial_cdf(k, n, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>((lo + hi) / 2);
}

// Random refinement DAGs -----------------------------------------------------

struct RandomDag {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::pair<std::string, std::string>> edges;
};

/// Nodes only take parents with smaller indices, so the graph is acyclic.
inline RandomDag random_dag(std::mt19937_64& rng, std::size_t max_nodes) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_nodes);
  RandomDag d;
  const auto n = size_dist(rng);
  d.parents.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.labels.push_back("n" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> k_dist(0, 2);
    std::uniform_int_distribution<std::size_t> p_dist(0, i - 1);
    std::set<std::size_t> ps;
    for (int k = k_dist(rng); k > 0; --k) ps.insert(p_dist(rng));
    for (auto p : ps) {
      d.parents[i].push_back(p);
      d.edges.emplace_back(d.labels[i], d.labels[p]);
    }
  }
  return d;
}

/// Brute-force ancestor test by walking parent lists.
inline bool reaches(const RandomDag& d, std::size_t from, std::size_t to) {
  std::vector<char> seen(d.labels.size(), 0);
  std::deque<std::size_t> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    if (v == to) return true;
    for (auto p : d.parents[v]) {
      if (!seen[p]) {
        seen[p] = 1;
        q.push_back(p);
      }
    }
  }
  return false;
}

struct CountOracle {
  std::int64_t n = 0, n_g = 0, m_g = 0, n_h = 0, m_h = 0;
};

inline CountOracle brute_force_counts(const RandomDag& d,
                                      const std::vector<std::size_t>& member_nodes,
                                      const std::vector<char>& has_snv, std::size_t g,
                                      std::size_t h) {
  CountOracle c;
  c.n = static_cast<std::int64_t>(member_nodes.size());
  for (std::size_t i = 0; i < member_nodes.size(); ++i) {
    if (reaches(d, member_nodes[i], g)) {
      ++c.n_g;
      c.m_g += has_snv[i];
    }
    if (reaches(d, member_nodes[i], h)) {
      ++c.n_h;
      c.m_h += has_snv[i];
    }
  }
  return c;
}

}  // namespace testsupport
