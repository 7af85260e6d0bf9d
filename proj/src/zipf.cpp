#include "dkg/zipf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "dkg/error.hpp"

namespace dkg {

RankedProportions RankedProportions::from_counts(std::vector<TermCount> items) {
  std::erase_if(items, [](const TermCount& item) { return item.count == 0; });
  std::sort(items.begin(), items.end(), [](const TermCount& a, const TermCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.term < b.term;
  });
  std::uint64_t total = 0;
  for (const auto& item : items) total += item.count;
  RankedProportions ranked;
  ranked.proportions_.reserve(items.size());
  for (const auto& item : items) {
    ranked.proportions_.push_back(static_cast<double>(item.count) / static_cast<double>(total));
  }
  ranked.items_ = std::move(items);
  return ranked;
}

RankedProportions RankedProportions::from_counts(const std::map<std::string, std::uint64_t>& counts) {
  std::vector<TermCount> items;
  items.reserve(counts.size());
  for (const auto& [term, count] : counts) items.push_back({term, count});
  return from_counts(std::move(items));
}

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Squared-error objective with log(k) cached across evaluations.
class ZipfObjective {
 public:
  explicit ZipfObjective(std::span<const double> proportions)
      : proportions_(proportions), log_rank_(proportions.size()), weights_(proportions.size()) {
    for (std::size_t i = 0; i < log_rank_.size(); ++i) log_rank_[i] = std::log(static_cast<double>(i + 1));
  }

  double operator()(double s) {
    CompensatedSum harmonic;
    for (std::size_t i = weights_.size(); i-- > 0;) {
      weights_[i] = std::exp(-s * log_rank_[i]);
      harmonic.add(weights_[i]);
    }
    const double h = harmonic.value();
    CompensatedSum sse;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      double r = proportions_[i] - weights_[i] / h;
      sse.add(r * r);
    }
    return sse.value();
  }

 private:
  std::span<const double> proportions_;
  std::vector<double> log_rank_;
  std::vector<double> weights_;
};

}  // namespace

double harmonic_number(std::uint64_t n, double s) {
  if (n == 0) throw InvalidArgument("harmonic_number requires n >= 1");
  CompensatedSum sum;
  for (std::uint64_t k = n; k >= 1; --k) sum.add(std::pow(static_cast<double>(k), -s));
  return sum.value();
}

double zipf_pmf(std::uint64_t k, double s, std::uint64_t n) {
  if (k < 1 || k > n) {
    throw RankOutOfRange("rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  return std::pow(static_cast<double>(k), -s) / harmonic_number(n, s);
}

ZipfFit fit_zipf(std::span<const double> proportions) {
  if (proportions.size() < 2) throw DegenerateData("Zipf fit needs at least two ranks");
  ZipfObjective objective(proportions);

  // Coarse scan to pick the basin, then Brent inside the neighbouring cells.
  constexpr int kGrid = 100;
  const double step = (kFitUpperExponent - kFitLowerExponent) / kGrid;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    double value = objective(kFitLowerExponent + step * i);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  const double lo = kFitLowerExponent + step * std::max(best - 1, 0);
  const double hi = kFitLowerExponent + step * std::min(best + 1, kGrid);
  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  auto [s, sse] = boost::math::tools::brent_find_minima(objective, lo, hi, kBits);
  if (best_value < sse) {
    s = kFitLowerExponent + step * best;
    sse = best_value;
  }
  ZipfFit fit;
  fit.s = s;
  fit.error = std::sqrt(sse / static_cast<double>(proportions.size()));
  fit.n = proportions.size();
  return fit;
}

ZipfFit fit_zipf(const RankedProportions& data) { return fit_zipf(data.proportions()); }

CdfBuckets bucket_cdf(const RankedProportions& data, std::size_t top_k) {
  CdfBuckets result;
  for (std::size_t b = 0; b + 1 < kCdfEdges.size(); ++b) {
    result.buckets.push_back({kCdfEdges[b], kCdfEdges[b + 1], 0, {}});
  }
  std::uint64_t total = 0;
  for (const auto& item : data.items()) total += item.count;
  // Cumulative share is computed from integer counts so that exact edges such
  // as 0.5 are not lost to rounding.
  constexpr double kEdgeSlack = 1e-12;
  std::uint64_t running = 0;
  std::size_t bucket = 0;
  for (const auto& item : data.items()) {
    running += item.count;
    const double cumulative = static_cast<double>(running) / static_cast<double>(total);
    while (bucket + 1 < result.buckets.size() && cumulative > result.buckets[bucket].hi + kEdgeSlack) {
      ++bucket;
    }
    CdfBucket& target = result.buckets[bucket];
    ++target.unique_count;
    // Items arrive in rank order, so the first k seen are the top k by count.
    if (target.top_terms.size() < top_k) target.top_terms.push_back(item.term);
  }
  return result;
}

}  // namespace dkg
