#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fibersampler/table.hpp"

namespace fibersampler {

struct ChainConfig {
  std::size_t n_samples = 10000;  // recording ticks after burn-in
  std::size_t burn_in = 0;        // raw steps
  std::size_t thin = 25;          // raw steps per recording tick
  RelaxDepth floor{1};
  std::optional<RelaxDepth> burn_in_floor;  // defaults to floor
  double rho = 0.1;               // weight per negative cell
  std::uint64_t seed = 0;

  RelaxDepth effective_burn_in_floor() const { return burn_in_floor.value_or(floor); }
};

// Burn-in expressed as a fraction of the sampling run, fraction * N * thin.
std::size_t burn_in_from_fraction(double fraction, std::size_t n_samples, std::size_t thin);

struct ChainResult {
  std::vector<double> chi_sq_samples;  // one per recording tick on a non-negative state
  double observed_chi_sq = 0.0;
  std::int64_t df = 0;
  std::size_t exceed_count = 0;        // samples with chi2 >= observed
  double p_value_estimate = 0.0;       // exceed_count / samples
  double p_value_corrected = 0.0;      // (exceed_count + 1) / (samples + 1)
  double acceptance_rate = 0.0;        // sampling phase
  double burn_in_acceptance_rate = 0.0;
  double negative_state_fraction = 0.0;  // sampling-phase steps spent below zero
  std::size_t wasted_ticks = 0;        // recording ticks on a negative state
  std::size_t requested_samples = 0;
  std::size_t burn_in_steps = 0;
  std::size_t sampling_steps = 0;
  std::uint64_t seed = 0;
};

struct ChainEvent {
  std::size_t step;         // 0-based raw step, burn-in included
  bool burn_in;
  bool accepted;
  bool recorded;            // a chi-square sample was taken at this step
  std::span<const Count> state;
};

using ChainObserver = std::function<void(const ChainEvent&)>;

// Metropolis-Hastings over the relaxed fiber of `observed` with basic moves.
//
// Each raw step draws r = bounded(2 * |moves|); move r / 2 is proposed with
// sign + for even r and - for odd r. Proposals below the floor are rejected.
// Otherwise the move is accepted with probability min(1, w(v) / w(u)), where
// w(u) = rho^(#negative cells) * prod over non-negative cells of 1 / u!;
// a uniform is drawn only when that ratio is below one.
//
// Throws kNoSamplesRecorded if every recording tick lands on a negative
// state, plus input validation errors and IPFP failures.
ChainResult run_chain(const Table3D& observed, const ChainConfig& config,
                      const ChainObserver& observer = {});

struct PooledResult {
  ChainResult pooled;               // samples concatenated, p-values averaged
  std::vector<ChainResult> chains;  // per-chain diagnostics
};

// `chains` independent chains seeded by stream_seed(config.seed, c), run on
// up to `workers` threads. Output does not depend on the worker count.
PooledResult run_chains(const Table3D& observed, const ChainConfig& config,
                        std::size_t chains, std::size_t workers = 1);

struct Histogram {
  std::vector<double> edges;    // bins + 1 edges over [0, max sample]
  std::vector<std::size_t> counts;
  std::vector<double> asymptotic_density;  // chi-square(df) pdf at bin midpoints
};

// Throws kEmptyResult when there are no samples.
Histogram estimate_histogram(const ChainResult& result, std::size_t bins);

}  // namespace fibersampler
