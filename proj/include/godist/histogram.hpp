#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "godist/board.hpp"
#include "godist/corpus.hpp"
#include "godist/sgf.hpp"

namespace godist {

class MergeError : public std::runtime_error {
 public:
  explicit MergeError(const std::string& msg) : std::runtime_error(msg) {}
};

class EmptyDistributionError : public std::runtime_error {
 public:
  explicit EmptyDistributionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Exact integer counts of consecutive-placement squared distances for one
// cohort. The mergeable core aggregate of the whole pipeline: any sharding of
// a corpus, accumulated independently and merged, reproduces the single-pass
// result bit for bit.
struct DistanceHistogram {
  GroupKey group;
  uint64_t game_count = 0;
  uint64_t total_pairs = 0;
  // Zero-distance pairs cannot occur in legal Go; corrupt records that produce
  // one land here instead of the bin axis.
  uint64_t quarantined_pairs = 0;
  std::array<uint64_t, kMaxSquaredDistance + 1> counts{};  // indexed by d^2

  bool empty() const { return total_pairs == 0; }

  friend bool operator==(const DistanceHistogram&, const DistanceHistogram&) = default;
};

struct DistributionPoint {
  int d2 = 0;
  double distance = 0.0;
  double pdf = 0.0;
  double cdf = 0.0;
  double ccdf = 0.0;  // inclusive convention P(D >= d), so the first point is 1
};

struct EmpiricalDistribution {
  GroupKey group;
  uint64_t total_pairs = 0;
  std::vector<DistributionPoint> points;  // occupied bins only, ascending distance
};

// Squared distances of adjacent placement pairs, regardless of stone color.
// A pass at either side of an adjacency contributes no pair.
inline std::vector<SquaredDistance> consecutive_pairs(std::span<const Move> moves) {
  std::vector<SquaredDistance> out;
  if (moves.size() >= 2) out.reserve(moves.size() - 1);
  for (size_t i = 0; i + 1 < moves.size(); ++i) {
    if (moves[i].point && moves[i + 1].point)
      out.push_back(squared_distance(*moves[i].point, *moves[i + 1].point));
  }
  return out;
}

inline void accumulate(DistanceHistogram& hist, const GameRecord& game) {
  for (size_t i = 0; i + 1 < game.moves.size(); ++i) {
    const Move& a = game.moves[i];
    const Move& b = game.moves[i + 1];
    if (!a.point || !b.point) continue;
    const int d2 = squared_distance(*a.point, *b.point).value;
    if (d2 == 0) {
      ++hist.quarantined_pairs;
      continue;
    }
    ++hist.counts[d2];
    ++hist.total_pairs;
  }
  ++hist.game_count;
}

inline void merge_into(DistanceHistogram& a, const DistanceHistogram& b) {
  if (a.group != b.group)
    throw MergeError("cannot merge histograms of groups \"" + a.group.label + "\" and \"" +
                     b.group.label + "\"");
  for (int d2 = 1; d2 <= kMaxSquaredDistance; ++d2) a.counts[d2] += b.counts[d2];
  a.total_pairs += b.total_pairs;
  a.game_count += b.game_count;
  a.quarantined_pairs += b.quarantined_pairs;
}

inline DistanceHistogram merge(const DistanceHistogram& a, const DistanceHistogram& b) {
  DistanceHistogram out = a;
  merge_into(out, b);
  return out;
}

// Normalizes to pdf/cdf/ccdf over the occupied bins, ascending. Each pdf value
// is one division of exact integer counts; cdf is the running pdf sum and
// ccdf(d) = 1 - cdf(previous bin) = P(D >= d).
inline EmpiricalDistribution to_distribution(const DistanceHistogram& hist) {
  if (hist.empty())
    throw EmptyDistributionError("histogram for group \"" + hist.group.label + "\" has no pairs");
  EmpiricalDistribution dist;
  dist.group = hist.group;
  dist.total_pairs = hist.total_pairs;
  const double total = static_cast<double>(hist.total_pairs);
  double cdf = 0.0;
  for (int d2 : detail::distance_axis().values) {
    const uint64_t count = hist.counts[d2];
    if (count == 0) continue;
    DistributionPoint pt;
    pt.d2 = d2;
    pt.distance = distance(SquaredDistance{d2});
    pt.pdf = static_cast<double>(count) / total;
    pt.ccdf = 1.0 - cdf;
    cdf += pt.pdf;
    pt.cdf = cdf;
    dist.points.push_back(pt);
  }
  return dist;
}

// Step-function evaluation between occupied bins.
inline double cdf_at(const EmpiricalDistribution& dist, int d2) {
  // P(D <= d): cdf of the last occupied bin at or below d2.
  double cdf = 0.0;
  for (const DistributionPoint& pt : dist.points) {
    if (pt.d2 > d2) break;
    cdf = pt.cdf;
  }
  return cdf;
}

inline double ccdf_at(const EmpiricalDistribution& dist, int d2) {
  // P(D >= d): all mass strictly below d2 removed.
  double below = 0.0;
  for (const DistributionPoint& pt : dist.points) {
    if (pt.d2 >= d2) break;
    below = pt.cdf;
  }
  return 1.0 - below;
}

}  // namespace godist
