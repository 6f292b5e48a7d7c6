#include "fibersampler/sampler.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <sstream>
#include <thread>

#include "fibersampler/fitted.hpp"
#include "fibersampler/log_factorial.hpp"
#include "fibersampler/model.hpp"
#include "fibersampler/moves.hpp"
#include "fibersampler/rng.hpp"

namespace fibersampler {

std::size_t burn_in_from_fraction(double fraction, std::size_t n_samples, std::size_t thin) {
  if (!(fraction >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "burn-in fraction must be >= 0");
  return static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n_samples) * static_cast<double>(thin)));
}

namespace {

void validate(const Table3D& observed, const ChainConfig& c) {
  if (!observed.is_nonnegative()) {
    throw Error(ErrorCode::kNegativeCount, "observed table must be non-negative");
  }
  if (c.n_samples == 0) throw Error(ErrorCode::kInvalidArgument, "n_samples must be >= 1");
  if (c.thin == 0) throw Error(ErrorCode::kInvalidArgument, "thin must be >= 1");
  if (!(c.rho > 0.0 && c.rho <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1]");
  }
  if (c.floor.t < 0 || c.effective_burn_in_floor().t < 0) {
    throw Error(ErrorCode::kInvalidArgument, "relaxation depth must be >= 0");
  }
  if (c.effective_burn_in_floor().t > c.floor.t) {
    throw Error(ErrorCode::kInvalidArgument,
                "burn-in floor may not be deeper than the sampling floor");
  }
}

class Chain {
 public:
  Chain(const Table3D& observed, const ChainConfig& config)
      : dims_(observed.dims()),
        state_(observed.cells().begin(), observed.cells().end()),
        log_fact_(max_cell_bound(observed, config)),
        log_rho_(std::log(config.rho)),
        rng_(config.seed) {
    const MoveSet moves = enumerate_basic_moves(dims_);
    touched_.reserve(moves.size());
    for (const auto& m : moves.moves) touched_.push_back(m.flat_indices(dims_));
#ifndef NDEBUG
    margins_ = compute_margins(dims_, state_);
#endif
  }

  bool step(Count lowest) {
    const std::uint64_t r = rng_.bounded(2 * touched_.size());
    const auto& idx = touched_[r >> 1];
    const int sign = (r & 1) ? -1 : 1;

    std::array<Count, 8> next{};
    double log_ratio = 0.0;
    for (std::size_t c = 0; c < 8; ++c) {
      const Count before = state_[idx[c]];
      next[c] = before + sign * BasicMove::kSigns[c];
      if (next[c] < lowest) return false;
      log_ratio += term(next[c]) - term(before);
    }
    if (log_ratio < 0.0 && !(rng_.uniform01() < std::exp(log_ratio))) return false;

    for (std::size_t c = 0; c < 8; ++c) {
      const Count before = state_[idx[c]];
      negatives_ += static_cast<int>(next[c] < 0) - static_cast<int>(before < 0);
      state_[idx[c]] = next[c];
    }
#ifndef NDEBUG
    for (std::size_t c = 0; c < 8; ++c) assert(state_[idx[c]] >= lowest);
    assert(compute_margins(dims_, state_) == margins_);
#endif
    return true;
  }

  bool nonnegative() const { return negatives_ == 0; }
  std::span<const Count> state() const { return state_; }

 private:
  static std::size_t max_cell_bound(const Table3D& observed, const ChainConfig& config) {
    // A cell never exceeds its smallest line sum plus the relaxation depth
    // borrowed by the other cells of that line.
    const MarginSet m = compute_margins(observed);
    Count top = 0;
    for (Count x : m.ij) top = std::max(top, x);
    const Count depth = std::max(config.floor.t, config.effective_burn_in_floor().t);
    return static_cast<std::size_t>(top + depth * static_cast<Count>(observed.dims().K) + 1);
  }

  double term(Count x) const { return x >= 0 ? -log_fact_(x) : log_rho_; }

  Dims dims_;
  std::vector<Count> state_;
  std::vector<std::array<std::size_t, 8>> touched_;
  LogFactorial log_fact_;
  double log_rho_;
  Rng rng_;
  int negatives_ = 0;
#ifndef NDEBUG
  MarginSet margins_;
#endif
};

}  // namespace

ChainResult run_chain(const Table3D& observed, const ChainConfig& config,
                      const ChainObserver& observer) {
  validate(observed, config);
  const FittedTable fitted = ipfp_fit(observed);

  ChainResult result;
  result.observed_chi_sq = chi_square(observed, fitted);
  result.df = degrees_of_freedom(observed.dims());
  result.requested_samples = config.n_samples;
  result.burn_in_steps = config.burn_in;
  result.sampling_steps = config.n_samples * config.thin;
  result.seed = config.seed;
  result.chi_sq_samples.reserve(config.n_samples);

  Chain chain(observed, config);
  std::size_t raw = 0;

  const Count burn_floor = config.effective_burn_in_floor().floor_value();
  std::size_t burn_accepted = 0;
  for (std::size_t s = 0; s < config.burn_in; ++s, ++raw) {
    const bool accepted = chain.step(burn_floor);
    burn_accepted += accepted;
    if (observer) observer(ChainEvent{raw, true, accepted, false, chain.state()});
  }

  const Count floor = config.floor.floor_value();
  std::size_t accepted_steps = 0;
  std::size_t negative_steps = 0;
  for (std::size_t s = 1; s <= result.sampling_steps; ++s, ++raw) {
    const bool accepted = chain.step(floor);
    accepted_steps += accepted;
    negative_steps += !chain.nonnegative();
    bool recorded = false;
    if (s % config.thin == 0) {
      if (chain.nonnegative()) {
        const double x = chi_square(chain.state(), fitted.cells());
        result.chi_sq_samples.push_back(x);
        result.exceed_count += chi_square_at_least(x, result.observed_chi_sq);
        recorded = true;
      } else {
        ++result.wasted_ticks;
      }
    }
    if (observer) observer(ChainEvent{raw, false, accepted, recorded, chain.state()});
  }

  if (result.chi_sq_samples.empty()) {
    throw Error(ErrorCode::kNoSamplesRecorded,
                "every recording tick landed on a state with negative cells");
  }
  const double n = static_cast<double>(result.chi_sq_samples.size());
  result.p_value_estimate = static_cast<double>(result.exceed_count) / n;
  result.p_value_corrected = static_cast<double>(result.exceed_count + 1) / (n + 1.0);
  result.acceptance_rate =
      static_cast<double>(accepted_steps) / static_cast<double>(result.sampling_steps);
  result.burn_in_acceptance_rate =
      config.burn_in == 0 ? 0.0
                          : static_cast<double>(burn_accepted) / static_cast<double>(config.burn_in);
  result.negative_state_fraction =
      static_cast<double>(negative_steps) / static_cast<double>(result.sampling_steps);
  return result;
}

PooledResult run_chains(const Table3D& observed, const ChainConfig& config,
                        std::size_t chains, std::size_t workers) {
  if (chains == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one chain");
  workers = std::clamp<std::size_t>(workers, 1, chains);

  PooledResult out;
  out.chains.resize(chains);
  std::vector<std::exception_ptr> failures(chains);
  auto work = [&](std::size_t first) {
    for (std::size_t c = first; c < chains; c += workers) {
      ChainConfig sub = config;
      sub.seed = stream_seed(config.seed, c);
      try {
        out.chains[c] = run_chain(observed, sub);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ChainResult& p = out.pooled;
  const auto& first = out.chains.front();
  p.observed_chi_sq = first.observed_chi_sq;
  p.df = first.df;
  p.seed = config.seed;
  const double count = static_cast<double>(chains);
  for (const auto& c : out.chains) {
    p.chi_sq_samples.insert(p.chi_sq_samples.end(), c.chi_sq_samples.begin(),
                            c.chi_sq_samples.end());
    p.exceed_count += c.exceed_count;
    p.p_value_estimate += c.p_value_estimate / count;
    p.p_value_corrected += c.p_value_corrected / count;
    p.acceptance_rate += c.acceptance_rate / count;
    p.burn_in_acceptance_rate += c.burn_in_acceptance_rate / count;
    p.negative_state_fraction += c.negative_state_fraction / count;
    p.wasted_ticks += c.wasted_ticks;
    p.requested_samples += c.requested_samples;
    p.burn_in_steps += c.burn_in_steps;
    p.sampling_steps += c.sampling_steps;
  }
  return out;
}

Histogram estimate_histogram(const ChainResult& result, std::size_t bins) {
  if (result.chi_sq_samples.empty()) {
    throw Error(ErrorCode::kEmptyResult, "no chi-square samples to bin");
  }
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "bins must be >= 1");
  double top = *std::max_element(result.chi_sq_samples.begin(), result.chi_sq_samples.end());
  if (!(top > 0.0)) top = 1.0;
  const double width = top / static_cast<double>(bins);

  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = width * static_cast<double>(b);
  h.edges.back() = top;
  h.counts.assign(bins, 0);
  for (double x : result.chi_sq_samples) {
    auto b = static_cast<std::size_t>(x / width);
    h.counts[std::min(b, bins - 1)] += 1;
  }
  h.asymptotic_density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
    h.asymptotic_density[b] = result.df >= 1 ? chi_square_density(mid, result.df) : 0.0;
  }
  return h;
}

}  // namespace fibersampler
