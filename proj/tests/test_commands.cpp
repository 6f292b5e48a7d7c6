#include "catch_amalgamated.hpp"

#include <cstdlib>

#include "fibersampler/commands.hpp"
#include "fibersampler/datasets.hpp"

using namespace fibersampler;
namespace cmd = fibersampler::commands;

namespace {

cmd::SampleOptions quick(std::uint64_t seed) {
  cmd::SampleOptions o;
  o.chain.n_samples = 500;
  o.chain.thin = 5;
  o.chain.burn_in = 1000;
  o.chain.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cmd::exit_code_for(ErrorCode::kParseError) == 2);
  CHECK(cmd::exit_code_for(ErrorCode::kDimensionMismatch) == 2);
  CHECK(cmd::exit_code_for(ErrorCode::kNegativeCount) == 2);
  CHECK(cmd::exit_code_for(ErrorCode::kZeroFittedCell) == 3);
  CHECK(cmd::exit_code_for(ErrorCode::kNoConvergence) == 3);
  CHECK(cmd::exit_code_for(ErrorCode::kNoSamplesRecorded) == 3);
  CHECK(cmd::exit_code_for(ErrorCode::kFiberTooLarge) == 4);
}

TEST_CASE("fiber cap from the environment") {
  ::unsetenv("FIBERSAMPLER_CAP");
  CHECK(cmd::fiber_cap_from_env() == kDefaultFiberCap);
  ::setenv("FIBERSAMPLER_CAP", "1234", 1);
  CHECK(cmd::fiber_cap_from_env() == 1234);
  ::setenv("FIBERSAMPLER_CAP", "junk", 1);
  CHECK_THROWS_AS(cmd::fiber_cap_from_env(), Error);
  ::unsetenv("FIBERSAMPLER_CAP");
}

TEST_CASE("fit report on the officer table") {
  const auto doc = cmd::cmd_fit(datasets::navy_officer(), {});
  CHECK(doc.at("df") == 45);
  CHECK(doc.at("chi_square").get<double>() == Catch::Approx(90.2296).margin(1e-3));
  CHECK(doc.at("asymptotic_p_value").get<double>() == Catch::Approx(7.317e-5).epsilon(1e-3));
  CHECK(doc.at("max_margin_discrepancy").get<double>() < 1e-8);
  CHECK(doc.at("fitted").size() == 120);
}

TEST_CASE("test and sample reports are reproducible") {
  const auto navy = datasets::navy_officer();
  const std::string a = cmd::cmd_test(navy, quick(5)).dump();
  const std::string b = cmd::cmd_test(navy, quick(5)).dump();
  const std::string c = cmd::cmd_test(navy, quick(6)).dump();
  CHECK(a == b);
  CHECK(a != c);

  auto o = quick(8);
  o.chains = 2;
  o.workers = 1;
  const std::string serial = cmd::cmd_sample(navy, o).dump();
  o.workers = 2;
  CHECK(cmd::cmd_sample(navy, o).dump() == serial);
}

TEST_CASE("enumerate, connectivity and moves reports") {
  const auto iso = datasets::isolated_3x3x3();
  const auto e = cmd::cmd_enumerate(iso, RelaxDepth{0}, {}, false);
  CHECK(e.at("fiber_size") == 847);
  CHECK(e.at("nonneg_size") == 847);

  CHECK(cmd::cmd_connectivity(iso, RelaxDepth{0}, {}).at("nonneg_connected") == false);
  CHECK(cmd::cmd_connectivity(iso, RelaxDepth{1}, {}).at("nonneg_connected") == true);

  const auto m = cmd::cmd_moves({3, 4, 6}, false);
  CHECK(m.at("count") == 270);
  CHECK(m.at("moves").at(0).at("move") == "(1,2;1,2;1,2)");
}

TEST_CASE("verify-decomposition reports failure without throwing") {
  const auto ok = cmd::cmd_verify_decomposition(fixtures::b1_decomposition());
  CHECK(ok.at("success") == true);
  CHECK(ok.at("min_cell") == -1);
  const auto bad = cmd::cmd_verify_decomposition(fixtures::b1_decomposition(RelaxDepth{0}));
  CHECK(bad.at("success") == false);
  CHECK(bad.at("failed_step") == 0);
}

TEST_CASE("conjecture probe on 2x3x3") {
  cmd::ProbeOptions o;
  o.dims = {2, 3, 3};
  o.trials = 20;
  o.seed = 1;
  const auto doc = cmd::cmd_conjecture_probe(o);
  CHECK(doc.at("tables_probed") == 20);
  CHECK(doc.at("disconnected") == 0);
  CHECK(doc.at("connected").get<int>() + doc.at("skipped").get<int>() == 20);
}

TEST_CASE("conjecture probe flags the isolated table at depth 0") {
  cmd::ProbeOptions o;
  o.dims = {3, 3, 3};
  o.trials = 0;
  o.depth = RelaxDepth{0};
  o.extra_tables.push_back(fixtures::isolated_3x3x3());
  const auto doc = cmd::cmd_conjecture_probe(o);
  CHECK(doc.at("disconnected") == 1);
  CHECK(doc.at("counterexamples").size() == 1);
}

TEST_CASE("histogram CSV") {
  ChainResult r;
  r.df = 2;
  r.chi_sq_samples = {0.5, 1.0, 2.0, 4.0};
  const std::string csv = cmd::histogram_to_csv(estimate_histogram(r, 2));
  CHECK(csv.rfind("bin_left,bin_right,count,asymptotic_density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("default protocol on the officer table rejects") {
  cmd::SampleOptions o;
  o.chain.n_samples = 10000;
  o.chain.thin = 25;
  o.chain.burn_in = burn_in_from_fraction(0.25, 10000, 25);
  o.chain.seed = 3;
  const auto doc = cmd::cmd_test(datasets::navy_officer(), o);
  CHECK(doc.at("observed_chi_sq").get<double>() == Catch::Approx(90.23).margin(0.01));
  CHECK(doc.at("df") == 45);
  CHECK(doc.at("reject") == true);
  CHECK(cmd::cmd_fit(datasets::navy_full(), {}).at("chi_square").get<double>() ==
        Catch::Approx(2775.15).margin(0.5));
}

TEST_CASE("test report on a product-form table is well formed") {
  // u_ijk = a_ij * b_ik * c_jk has no three-way interaction.
  const Dims d{3, 2, 3};
  std::vector<Count> cells(d.cells());
  for (std::size_t i = 0; i < d.I; ++i)
    for (std::size_t j = 0; j < d.J; ++j)
      for (std::size_t k = 0; k < d.K; ++k)
        cells[d.index(i, j, k)] = static_cast<Count>((i + 1) * (j + 2) * (k % 2 + 1));
  Dataset data;
  data.name = "product";
  data.table = Table3D(d, cells);
  const auto doc = cmd::cmd_test(data, quick(2));
  const double p = doc.at("mcmc").at("p_value_estimate");
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  CHECK(doc.at("observed_chi_sq").get<double>() < 1e-6);
}

TEST_CASE("conjecture probe on 3x3x3 and 4x4x4") {
  cmd::ProbeOptions o;
  o.dims = {3, 3, 3};
  o.trials = 0;
  o.extra_tables.push_back(fixtures::isolated_3x3x3());
  CHECK(cmd::cmd_conjecture_probe(o).at("connected") == 1);

  cmd::ProbeOptions big;
  big.dims = {4, 4, 4};
  big.trials = 2;
  big.max_cell = 1;
  big.enumerate.cap = 200000;
  CHECK(cmd::cmd_conjecture_probe(big).at("tables_probed") == 2);
}

TEST_CASE("reports round-trip through text") {
  const auto doc = cmd::cmd_test(datasets::navy_officer(), quick(1));
  const std::string text = doc.dump(2);
  CHECK(nlohmann::json::parse(text).dump(2) == text);
}
