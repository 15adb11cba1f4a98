#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "godist/histogram.hpp"
#include "godist/rng.hpp"

namespace godist {

class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResamplePlan {
  uint64_t sample_games = 55;  // k
  uint64_t iterations = 10000; // B
  uint64_t seed = 0;
  bool replacement = false;
};

struct BootstrapBand {
  int d2 = 0;
  double mean_ccdf = 0.0;
  double var_ccdf = 0.0;
  double mean_cdf = 0.0;
  double var_cdf = 0.0;
  double mean_pdf = 0.0;
  double var_pdf = 0.0;
};

struct BootstrapBands {
  ResamplePlan plan;
  GroupKey group;
  std::vector<BootstrapBand> bands;  // union bin axis of the parent corpus, ascending d2
  uint64_t empty_sample_iterations = 0;
};

// Streaming per-bin moments over a window of bootstrap iterations. Windows
// merge exactly (Chan's update), so a run may be split across workers or
// machines and pooled afterwards.
struct BootstrapMoments {
  std::vector<int> axis_d2;
  uint64_t iterations = 0;
  uint64_t empty_samples = 0;
  std::vector<double> mean_pdf, m2_pdf;
  std::vector<double> mean_cdf, m2_cdf;
  std::vector<double> mean_ccdf, m2_ccdf;

  explicit BootstrapMoments(std::vector<int> axis = {})
      : axis_d2(std::move(axis)),
        mean_pdf(axis_d2.size()), m2_pdf(axis_d2.size()),
        mean_cdf(axis_d2.size()), m2_cdf(axis_d2.size()),
        mean_ccdf(axis_d2.size()), m2_ccdf(axis_d2.size()) {}
};

// Uniform sample of k indices from [0, n). Without replacement this is a
// partial Fisher-Yates pass over the identity permutation.
inline std::vector<uint32_t> sample_indices(uint64_t n, uint64_t k, SplitMix64& rng,
                                            bool replacement = false) {
  std::vector<uint32_t> out;
  out.reserve(k);
  if (replacement) {
    for (uint64_t i = 0; i < k; ++i) out.push_back(static_cast<uint32_t>(rng.next_below(n)));
    return out;
  }
  if (k > n)
    throw SamplingError("cannot sample " + std::to_string(k) + " games without replacement from " +
                        std::to_string(n));
  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (uint64_t i = 0; i < k; ++i) {
    const uint64_t j = i + rng.next_below(n - i);
    std::swap(perm[i], perm[j]);
    out.push_back(perm[i]);
  }
  return out;
}

inline std::vector<GameRecord> sample_games(std::span<const GameRecord> corpus, uint64_t k,
                                            SplitMix64& rng, bool replacement = false) {
  std::vector<GameRecord> out;
  out.reserve(k);
  for (uint32_t idx : sample_indices(corpus.size(), k, rng, replacement)) out.push_back(corpus[idx]);
  return out;
}

namespace detail {

// Per-game sparse histograms on the parent corpus' union bin axis.
struct PreparedCorpus {
  std::vector<int> axis_d2;
  std::vector<std::vector<std::pair<uint16_t, uint32_t>>> games;  // (axis position, count)
};

inline PreparedCorpus prepare_corpus(std::span<const GameRecord> corpus) {
  PreparedCorpus prep;
  DistanceHistogram full;
  for (const GameRecord& g : corpus) accumulate(full, g);
  std::array<int16_t, kMaxSquaredDistance + 1> pos;
  pos.fill(-1);
  for (int d2 : distance_axis().values) {
    if (full.counts[d2] == 0) continue;
    pos[d2] = static_cast<int16_t>(prep.axis_d2.size());
    prep.axis_d2.push_back(d2);
  }
  prep.games.reserve(corpus.size());
  std::array<uint32_t, kMaxSquaredDistance + 1> scratch{};
  std::vector<int> touched;
  for (const GameRecord& g : corpus) {
    touched.clear();
    for (size_t i = 0; i + 1 < g.moves.size(); ++i) {
      if (!g.moves[i].point || !g.moves[i + 1].point) continue;
      const int d2 = squared_distance(*g.moves[i].point, *g.moves[i + 1].point).value;
      if (d2 == 0) continue;  // quarantined upstream as well
      if (scratch[d2]++ == 0) touched.push_back(d2);
    }
    std::sort(touched.begin(), touched.end());
    std::vector<std::pair<uint16_t, uint32_t>> bins;
    bins.reserve(touched.size());
    for (int d2 : touched) {
      bins.emplace_back(static_cast<uint16_t>(pos[d2]), scratch[d2]);
      scratch[d2] = 0;
    }
    prep.games.push_back(std::move(bins));
  }
  return prep;
}

inline void welford_update(double x, double& mean, double& m2, uint64_t n_after) {
  const double delta = x - mean;
  mean += delta / static_cast<double>(n_after);
  m2 += delta * (x - mean);
}

inline BootstrapMoments run_window(const PreparedCorpus& prep, const ResamplePlan& plan, uint64_t n,
                                   uint64_t iter_begin, uint64_t iter_end) {
  BootstrapMoments mom(prep.axis_d2);
  const size_t bins = prep.axis_d2.size();
  const uint64_t k = plan.sample_games;
  std::vector<uint64_t> counts(bins);
  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<uint64_t> swap_targets(plan.replacement ? 0 : k);

  for (uint64_t iter = iter_begin; iter < iter_end; ++iter) {
    SplitMix64 rng = derive_stream(plan.seed, iter);
    std::fill(counts.begin(), counts.end(), 0);
    uint64_t total = 0;
    if (plan.replacement) {
      for (uint64_t i = 0; i < k; ++i) {
        for (const auto& [bin, c] : prep.games[rng.next_below(n)]) {
          counts[bin] += c;
          total += c;
        }
      }
    } else {
      for (uint64_t i = 0; i < k; ++i) {
        const uint64_t j = i + rng.next_below(n - i);
        std::swap(perm[i], perm[j]);
        swap_targets[i] = j;
        for (const auto& [bin, c] : prep.games[perm[i]]) {
          counts[bin] += c;
          total += c;
        }
      }
      // restore the identity permutation
      for (uint64_t i = k; i-- > 0;) std::swap(perm[i], perm[swap_targets[i]]);
    }

    ++mom.iterations;
    const uint64_t n_after = mom.iterations;
    if (total == 0) {
      // All-pass sample: no mass anywhere, ccdf pinned to 1 at the first bin.
      ++mom.empty_samples;
      for (size_t b = 0; b < bins; ++b) {
        welford_update(0.0, mom.mean_pdf[b], mom.m2_pdf[b], n_after);
        welford_update(0.0, mom.mean_cdf[b], mom.m2_cdf[b], n_after);
        welford_update(b == 0 ? 1.0 : 0.0, mom.mean_ccdf[b], mom.m2_ccdf[b], n_after);
      }
      continue;
    }
    const double denom = static_cast<double>(total);
    double cdf = 0.0;
    for (size_t b = 0; b < bins; ++b) {
      const double pdf = static_cast<double>(counts[b]) / denom;
      const double ccdf = 1.0 - cdf;
      cdf += pdf;
      welford_update(pdf, mom.mean_pdf[b], mom.m2_pdf[b], n_after);
      welford_update(cdf, mom.mean_cdf[b], mom.m2_cdf[b], n_after);
      welford_update(ccdf, mom.mean_ccdf[b], mom.m2_ccdf[b], n_after);
    }
  }
  return mom;
}

inline void validate_plan(const ResamplePlan& plan, uint64_t corpus_size) {
  if (plan.sample_games < 1) throw SamplingError("sample size k must be at least 1");
  if (plan.iterations < 1) throw SamplingError("iteration count must be at least 1");
  if (corpus_size == 0) throw SamplingError("cannot resample an empty corpus");
  if (!plan.replacement && plan.sample_games > corpus_size)
    throw SamplingError("k=" + std::to_string(plan.sample_games) +
                        " exceeds corpus size " + std::to_string(corpus_size) +
                        " (sampling without replacement)");
}

}  // namespace detail

inline void merge_moments(BootstrapMoments& a, const BootstrapMoments& b) {
  if (a.axis_d2 != b.axis_d2) throw MergeError("bootstrap moments have different bin axes");
  if (b.iterations == 0) return;
  if (a.iterations == 0) {
    a = b;
    return;
  }
  const double na = static_cast<double>(a.iterations);
  const double nb = static_cast<double>(b.iterations);
  const double n = na + nb;
  const auto combine = [&](std::vector<double>& mean_a, std::vector<double>& m2_a,
                           const std::vector<double>& mean_b, const std::vector<double>& m2_b) {
    for (size_t i = 0; i < mean_a.size(); ++i) {
      const double delta = mean_b[i] - mean_a[i];
      mean_a[i] += delta * nb / n;
      m2_a[i] += m2_b[i] + delta * delta * na * nb / n;
    }
  };
  combine(a.mean_pdf, a.m2_pdf, b.mean_pdf, b.m2_pdf);
  combine(a.mean_cdf, a.m2_cdf, b.mean_cdf, b.m2_cdf);
  combine(a.mean_ccdf, a.m2_ccdf, b.mean_ccdf, b.m2_ccdf);
  a.iterations += b.iterations;
  a.empty_samples += b.empty_samples;
}

// Moments for the iteration window [iter_begin, iter_end) of the plan.
// bootstrap() below is merge_moments over consecutive windows; the split is
// public so long runs can be distributed and pooled.
inline BootstrapMoments bootstrap_window(std::span<const GameRecord> corpus, const ResamplePlan& plan,
                                         uint64_t iter_begin, uint64_t iter_end) {
  detail::validate_plan(plan, corpus.size());
  const detail::PreparedCorpus prep = detail::prepare_corpus(corpus);
  return detail::run_window(prep, plan, corpus.size(), iter_begin, iter_end);
}

inline BootstrapBands finalize_moments(const BootstrapMoments& mom, const ResamplePlan& plan,
                                       const GroupKey& group) {
  BootstrapBands bands;
  bands.plan = plan;
  bands.group = group;
  bands.empty_sample_iterations = mom.empty_samples;
  const double n = static_cast<double>(mom.iterations);
  bands.bands.reserve(mom.axis_d2.size());
  for (size_t b = 0; b < mom.axis_d2.size(); ++b) {
    BootstrapBand band;
    band.d2 = mom.axis_d2[b];
    band.mean_ccdf = mom.mean_ccdf[b];
    band.var_ccdf = mom.m2_ccdf[b] / n;  // population variance over iterations
    band.mean_cdf = mom.mean_cdf[b];
    band.var_cdf = mom.m2_cdf[b] / n;
    band.mean_pdf = mom.mean_pdf[b];
    band.var_pdf = mom.m2_pdf[b] / n;
    bands.bands.push_back(band);
  }
  return bands;
}

// Repeated fixed-size game samples; per-bin mean and variance of the sampled
// cumulative distributions. Iterations run in fixed chunks merged in index
// order, so the result is bit-identical for any thread count.
inline BootstrapBands bootstrap(std::span<const GameRecord> corpus, const ResamplePlan& plan,
                                const GroupKey& group = GroupKey{}, unsigned threads = 1) {
  detail::validate_plan(plan, corpus.size());
  const detail::PreparedCorpus prep = detail::prepare_corpus(corpus);
  constexpr uint64_t kChunkIterations = 512;
  const uint64_t n_chunks = (plan.iterations + kChunkIterations - 1) / kChunkIterations;
  std::vector<BootstrapMoments> states(n_chunks);

  const auto run_chunk = [&](uint64_t c) {
    const uint64_t begin = c * kChunkIterations;
    const uint64_t end = std::min(plan.iterations, begin + kChunkIterations);
    states[c] = detail::run_window(prep, plan, corpus.size(), begin, end);
  };

  if (threads <= 1 || n_chunks <= 1) {
    for (uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = std::min<uint64_t>(threads, n_chunks);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    for (std::thread& t : pool) t.join();
  }

  BootstrapMoments acc = std::move(states[0]);
  for (uint64_t c = 1; c < n_chunks; ++c) merge_moments(acc, states[c]);
  return finalize_moments(acc, plan, group);
}

}  // namespace godist
