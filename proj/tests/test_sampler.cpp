#include "catch_amalgamated.hpp"

#include <cmath>
#include <map>

#include "fibersampler/fiber.hpp"
#include "fibersampler/model.hpp"
#include "fibersampler/rng.hpp"
#include "fibersampler/sampler.hpp"

using namespace fibersampler;

namespace {

ChainConfig small_config(std::uint64_t seed) {
  ChainConfig c;
  c.n_samples = 2000;
  c.burn_in = 500;
  c.thin = 5;
  c.seed = seed;
  return c;
}

const Table3D kTwoByTwo({2, 2, 2}, {3, 1, 1, 3, 1, 3, 3, 1});

}  // namespace

TEST_CASE("rng is reproducible and bounded") {
  Rng a(42), b(42);
  for (int n = 0; n < 100; ++n) CHECK(a.next() == b.next());
  Rng r(1);
  std::vector<int> hist(7, 0);
  for (int n = 0; n < 70000; ++n) ++hist[r.bounded(7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int n = 0; n < 1000; ++n) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  // First SplitMix64 outputs from state 0.
  CHECK(stream_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(stream_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("burn-in fraction") {
  CHECK(burn_in_from_fraction(0.25, 10000, 25) == 62500);
  CHECK(burn_in_from_fraction(0.0, 10000, 25) == 0);
}

TEST_CASE("a single-table fiber gives p = 1") {
  const Table3D u({2, 2, 2}, {1, 0, 0, 0, 0, 0, 0, 0});
  const ChainResult r = run_chain(u, small_config(3));
  REQUIRE_FALSE(r.chi_sq_samples.empty());
  for (double x : r.chi_sq_samples) CHECK(x == r.observed_chi_sq);
  CHECK(r.p_value_estimate == 1.0);
  CHECK(r.p_value_corrected == 1.0);
  CHECK(r.chi_sq_samples.size() + r.wasted_ticks == r.requested_samples);
}

TEST_CASE("chains are deterministic for a seed") {
  const ChainResult a = run_chain(kTwoByTwo, small_config(9));
  const ChainResult b = run_chain(kTwoByTwo, small_config(9));
  const ChainResult c = run_chain(kTwoByTwo, small_config(10));
  CHECK(a.chi_sq_samples == b.chi_sq_samples);
  CHECK(a.acceptance_rate == b.acceptance_rate);
  CHECK(a.chi_sq_samples != c.chi_sq_samples);
}

TEST_CASE("pooled chains do not depend on worker count") {
  const PooledResult one = run_chains(kTwoByTwo, small_config(4), 3, 1);
  const PooledResult three = run_chains(kTwoByTwo, small_config(4), 3, 3);
  CHECK(one.pooled.chi_sq_samples == three.pooled.chi_sq_samples);
  CHECK(one.pooled.p_value_estimate == three.pooled.p_value_estimate);
  REQUIRE(one.chains.size() == 3);
  CHECK(one.chains[0].seed == stream_seed(4, 0));
  CHECK(one.chains[0].chi_sq_samples != one.chains[1].chi_sq_samples);
}

TEST_CASE("every state keeps the margins and respects the floor") {
  const Table3D u({2, 3, 3}, {1, 0, 2, 0, 1, 1, 2, 1, 0, 0, 2, 1, 1, 1, 0, 1, 0, 2});
  const MarginSet margins = compute_margins(u);
  ChainConfig cfg = small_config(5);
  cfg.burn_in_floor = RelaxDepth{0};
  std::size_t events = 0, recorded = 0;
  bool margins_ok = true, floor_ok = true;
  const ChainResult r = run_chain(u, cfg, [&](const ChainEvent& e) {
    ++events;
    recorded += e.recorded ? 1 : 0;
    margins_ok = margins_ok && compute_margins(u.dims(), e.state) == margins;
    const Count floor = e.burn_in ? 0 : -1;
    for (Count c : e.state) floor_ok = floor_ok && c >= floor;
  });
  CHECK(margins_ok);
  CHECK(floor_ok);
  CHECK(events == cfg.burn_in + cfg.n_samples * cfg.thin);
  CHECK(recorded == r.chi_sq_samples.size());
}

TEST_CASE("invalid chain settings") {
  ChainConfig cfg = small_config(1);
  cfg.rho = 0.0;
  CHECK_THROWS_AS(run_chain(kTwoByTwo, cfg), Error);
  cfg = small_config(1);
  cfg.thin = 0;
  CHECK_THROWS_AS(run_chain(kTwoByTwo, cfg), Error);
  cfg = small_config(1);
  cfg.burn_in_floor = RelaxDepth{2};
  CHECK_THROWS_AS(run_chain(kTwoByTwo, cfg), Error);
  CHECK_THROWS_AS(run_chain(Table3D({1, 2, 2}, {1, 1, 1, 1}), small_config(1)), Error);
}

TEST_CASE("chain visits the whole fiber in proportion to the exact law") {
  const Table3D u({2, 2, 3}, {1, 0, 2, 1, 1, 0, 0, 2, 1, 1, 0, 1});
  const Fiber fiber = enumerate_fiber(compute_margins(u), RelaxDepth{0});
  const ExactDistribution exact = exact_conditional_distribution(fiber, u);

  ChainConfig cfg;
  cfg.n_samples = 200000;
  cfg.thin = 1;
  cfg.burn_in = 1000;
  cfg.seed = 77;
  std::map<std::size_t, double> freq;
  std::size_t hits = 0;
  run_chain(u, cfg, [&](const ChainEvent& e) {
    if (!e.recorded) return;
    std::vector<std::int32_t> s(e.state.begin(), e.state.end());
    const auto idx = fiber.find(s);
    REQUIRE(idx.has_value());
    freq[*idx] += 1;
    ++hits;
  });
  CHECK(freq.size() == exact.members.size());
  double tv = 0.0;
  for (std::size_t n = 0; n < exact.members.size(); ++n) {
    tv += std::abs(freq[exact.members[n]] / static_cast<double>(hits) - exact.probability[n]);
  }
  CHECK(0.5 * tv < 0.05);
}

TEST_CASE("histogram conserves samples") {
  const ChainResult r = run_chain(kTwoByTwo, small_config(12));
  for (std::size_t bins : {1, 7, 50}) {
    const Histogram h = estimate_histogram(r, bins);
    CHECK(h.counts.size() == bins);
    CHECK(h.edges.size() == bins + 1);
    CHECK(h.asymptotic_density.size() == bins);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == r.chi_sq_samples.size());
  }
  ChainResult empty;
  CHECK_THROWS_AS(estimate_histogram(empty, 10), Error);
}
