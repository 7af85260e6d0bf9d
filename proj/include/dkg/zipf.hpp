#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dkg {

struct TermCount {
  std::string term;
  std::uint64_t count = 0;
};

// Terms ranked by count (descending, ties lexicographic) with their
// proportions of the total. Rank k is the 1-based position.
class RankedProportions {
 public:
  RankedProportions() = default;
  static RankedProportions from_counts(std::vector<TermCount> items);
  static RankedProportions from_counts(const std::map<std::string, std::uint64_t>& counts);

  const std::vector<TermCount>& items() const { return items_; }
  const std::vector<double>& proportions() const { return proportions_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<TermCount> items_;
  std::vector<double> proportions_;
};

// Sum of k^-s for k = 1..n, accumulated smallest terms first with
// compensated summation.
double harmonic_number(std::uint64_t n, double s);

// k^-s / H(n, s). Throws RankOutOfRange unless 1 <= k <= n.
double zipf_pmf(std::uint64_t k, double s, std::uint64_t n);

struct ZipfFit {
  double s = 0.0;
  double error = 0.0;  // root-mean-square residual on linear proportions
  std::uint64_t n = 0;
};

inline constexpr double kFitLowerExponent = 0.01;
inline constexpr double kFitUpperExponent = 10.0;

// Least-squares fit of the Zipf PMF to rank-ordered proportions over
// s in [0.01, 10]. Throws DegenerateData for fewer than two ranks.
ZipfFit fit_zipf(std::span<const double> proportions);
ZipfFit fit_zipf(const RankedProportions& data);

inline constexpr std::array<double, 9> kCdfEdges = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.8, 1.0};

struct CdfBucket {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t unique_count = 0;
  std::vector<std::string> top_terms;
};

struct CdfBuckets {
  std::vector<CdfBucket> buckets;
};

// Each term lands in the first window whose upper edge is >= the cumulative
// proportion after adding that term.
CdfBuckets bucket_cdf(const RankedProportions& data, std::size_t top_k);

}  // namespace dkg
