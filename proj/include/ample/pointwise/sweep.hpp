#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "ample/errors.hpp"
#include "ample/pointwise/curvature.hpp"
#include "ample/pointwise/lemma.hpp"
#include "ample/seed.hpp"

namespace ample::pointwise {

/// Monte Carlo verification of the pointwise bound over a grid of ranks
/// and epsilons.
struct LemmaSweepConfig {
  std::vector<int> ranks{2, 3};
  std::vector<double> epsilons{0.0, 0.1};
  std::int64_t samples = 1000;
  int vectors = 10;   // random unit vectors per sampled curvature
  int restarts = 5;   // adversarial search restarts; 0 disables the search
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int worst_rows = 5;
  int histogram_bins = 0;  // 0: no histogram
  double gap_threshold = -1e-9;
  SamplerMode mode = SamplerMode::random;
  unsigned threads = 0;  // 0: hardware concurrency
};

enum class GapSource { random_vector, adversarial };

inline const char* to_string(GapSource s) {
  return s == GapSource::random_vector ? "random" : "adversarial";
}

struct WorstRow {
  std::int64_t sample = 0;
  std::uint64_t seed = 0;
  GapSource source = GapSource::random_vector;
  LemmaGapResult result;
};

struct HistogramBin {
  double lo = 0;
  double hi = 0;
  std::int64_t count = 0;
};

struct LemmaConfigResult {
  int rank = 0;
  double epsilon = 0;
  std::uint64_t config_seed = 0;
  std::int64_t samples = 0;
  double min_gap_random = std::numeric_limits<double>::infinity();
  double min_gap_adversarial = std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  std::int64_t violations = 0;  // samples whose worst gap < threshold
  std::int64_t unconverged = 0;
  double max_residual = 0;
  std::vector<WorstRow> worst;
  std::vector<HistogramBin> histogram;
};

struct LemmaSweepResult {
  std::vector<LemmaConfigResult> configs;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_residual = 0;
  bool holds = true;
};

/// Seed of one (rank, epsilon) cell. Derived from the values, not the list
/// position, so reordering the grid does not change any sample.
inline std::uint64_t lemma_config_seed(std::uint64_t base, int rank, double epsilon) {
  return sub_seed(sub_seed(base, static_cast<std::uint64_t>(rank)), std::bit_cast<std::uint64_t>(epsilon));
}

inline std::uint64_t lemma_sample_seed(std::uint64_t config_seed, std::int64_t sample) {
  return sub_seed(config_seed, static_cast<std::uint64_t>(sample));
}

namespace detail {

struct SampleOutcome {
  double gap_random = std::numeric_limits<double>::infinity();
  double gap_adversarial = std::numeric_limits<double>::infinity();
  double residual = 0;
  bool converged = true;

  double worst() const { return std::min(gap_random, gap_adversarial); }
};

/// Everything about one sample, including the minimizing vectors; the
/// sweep keeps only SampleOutcome and replays this for the worst rows.
struct SampleReplay {
  SampleOutcome outcome;
  LemmaGapResult best_random;
  LemmaGapResult best_adversarial;
};

inline SampleReplay run_sample(const LemmaSweepConfig& cfg, int r, double eps, std::uint64_t seed) {
  SampleReplay rep;
  const PointCurvature pc = sample_curvature(r, eps, seed, cfg.mode);
  rep.outcome.residual = residuals(pc).max();
  const LemmaFixed fixed = lemma_fixed(pc);
  Rng vrng(sub_seed(seed, 1));
  for (int k = 0; k < cfg.vectors; ++k) {
    LemmaGapResult g = finish_gap(fixed, pc, random_unit_vector(r, vrng));
    if (g.gap < rep.outcome.gap_random) {
      rep.outcome.gap_random = g.gap;
      rep.best_random = std::move(g);
    }
  }
  if (cfg.restarts > 0) {
    MinGapResult m = min_gap_over_v(pc, cfg.restarts, cfg.tol);
    rep.outcome.gap_adversarial = m.at_min.gap;
    rep.outcome.converged = m.converged;
    rep.best_adversarial = std::move(m.at_min);
  }
  return rep;
}

}  // namespace detail

inline LemmaConfigResult run_lemma_config(const LemmaSweepConfig& cfg, int r, double eps) {
  if (r < 2) throw InvalidInput("sweep ranks must be >= 2");
  if (!(eps >= 0)) throw InvalidInput("sweep epsilons must be >= 0");
  if (cfg.samples < 1) throw InvalidInput("sweep needs at least one sample");
  LemmaConfigResult out;
  out.rank = r;
  out.epsilon = eps;
  out.samples = cfg.samples;
  out.config_seed = lemma_config_seed(cfg.seed, r, eps);

  std::vector<detail::SampleOutcome> outcomes(static_cast<std::size_t>(cfg.samples));
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, cfg.samples));
  auto work = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t k = begin; k < end; ++k)
      outcomes[static_cast<std::size_t>(k)] =
          detail::run_sample(cfg, r, eps, lemma_sample_seed(out.config_seed, k)).outcome;
  };
  if (threads <= 1) {
    work(0, cfg.samples);
  } else {
    std::vector<std::jthread> pool;
    const std::int64_t chunk = (cfg.samples + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::int64_t begin = std::min<std::int64_t>(cfg.samples, t * chunk);
      const std::int64_t end = std::min<std::int64_t>(cfg.samples, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }

  // Reduction in sample order: independent of scheduling.
  std::vector<std::int64_t> order;
  for (std::int64_t k = 0; k < cfg.samples; ++k) {
    const auto& o = outcomes[static_cast<std::size_t>(k)];
    out.min_gap_random = std::min(out.min_gap_random, o.gap_random);
    out.min_gap_adversarial = std::min(out.min_gap_adversarial, o.gap_adversarial);
    out.max_residual = std::max(out.max_residual, o.residual);
    if (o.worst() < cfg.gap_threshold) ++out.violations;
    if (!o.converged) ++out.unconverged;
    order.push_back(k);
  }
  out.min_gap = std::min(out.min_gap_random, out.min_gap_adversarial);

  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.worst_rows, 0)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::int64_t a, std::int64_t b) {
                      const double ga = outcomes[static_cast<std::size_t>(a)].worst();
                      const double gb = outcomes[static_cast<std::size_t>(b)].worst();
                      return ga != gb ? ga < gb : a < b;
                    });
  for (std::size_t i = 0; i < keep; ++i) {
    const std::int64_t k = order[i];
    const std::uint64_t s = lemma_sample_seed(out.config_seed, k);
    detail::SampleReplay rep = detail::run_sample(cfg, r, eps, s);
    const bool adversarial = rep.outcome.gap_adversarial < rep.outcome.gap_random;
    out.worst.push_back({k, s, adversarial ? GapSource::adversarial : GapSource::random_vector,
                         adversarial ? rep.best_adversarial : rep.best_random});
  }

  if (cfg.histogram_bins > 0) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& o : outcomes) {
      lo = std::min(lo, o.worst());
      hi = std::max(hi, o.worst());
    }
    if (hi <= lo) hi = lo + 1.0;
    const int bins = cfg.histogram_bins;
    const double width = (hi - lo) / bins;
    out.histogram.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) out.histogram[static_cast<std::size_t>(b)] = {lo + b * width, lo + (b + 1) * width, 0};
    for (const auto& o : outcomes) {
      int b = static_cast<int>((o.worst() - lo) / width);
      b = std::clamp(b, 0, bins - 1);
      ++out.histogram[static_cast<std::size_t>(b)].count;
    }
  }
  return out;
}

inline LemmaSweepResult run_lemma_sweep(const LemmaSweepConfig& cfg) {
  LemmaSweepResult res;
  for (int r : cfg.ranks) {
    for (double eps : cfg.epsilons) {
      res.configs.push_back(run_lemma_config(cfg, r, eps));
      res.min_gap = std::min(res.min_gap, res.configs.back().min_gap);
      res.max_residual = std::max(res.max_residual, res.configs.back().max_residual);
    }
  }
  res.holds = res.min_gap >= cfg.gap_threshold;
  return res;
}

}  // namespace ample::pointwise
