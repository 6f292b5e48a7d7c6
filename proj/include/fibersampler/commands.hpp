#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fibersampler/fiber.hpp"
#include "fibersampler/io.hpp"
#include "fibersampler/model.hpp"
#include "fibersampler/sampler.hpp"

// Report builders behind each CLI subcommand. Every function returns the JSON
// document the CLI prints and is deterministic for fixed inputs and seed.
namespace fibersampler::commands {

// 0 success, 2 input error, 3 numerical failure, 4 fiber cap exceeded.
int exit_code_for(ErrorCode code);

// FIBERSAMPLER_CAP when set to a positive integer, else the fallback.
std::size_t fiber_cap_from_env(std::size_t fallback = kDefaultFiberCap);

nlohmann::json chain_result_to_json(const ChainResult& result);
nlohmann::json margins_to_json(const MarginSet& margins);
std::string histogram_to_csv(const Histogram& histogram);

nlohmann::json cmd_fit(const Dataset& data, IpfpOptions options,
                       const std::optional<std::filesystem::path>& fitted_out = {});

struct SampleOptions {
  ChainConfig chain;
  std::size_t chains = 1;
  std::size_t workers = 1;
  std::size_t hist_bins = 50;
  std::optional<std::filesystem::path> hist_out;
};

nlohmann::json cmd_sample(const Dataset& data, const SampleOptions& options);

// Fit, asymptotic test, and MCMC test of no three-way interaction.
nlohmann::json cmd_test(const Dataset& data, const SampleOptions& options,
                        double alpha = 0.01);

nlohmann::json cmd_enumerate(const Dataset& data, RelaxDepth floor, EnumerateOptions options,
                             bool list_tables);

nlohmann::json cmd_connectivity(const Dataset& data, RelaxDepth floor,
                                EnumerateOptions options);

nlohmann::json connectivity_to_json(const ConnectivityReport& report);

nlohmann::json cmd_verify_decomposition(const Decomposition& decomposition);

nlohmann::json cmd_moves(const Dims& dims, bool dense);

struct ProbeOptions {
  Dims dims{3, 3, 3};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  Count max_cell = 2;              // random cells drawn uniformly from [0, max_cell]
  RelaxDepth depth{1};
  EnumerateOptions enumerate;
  std::vector<Table3D> extra_tables;  // probed before the random trials
};

nlohmann::json cmd_conjecture_probe(const ProbeOptions& options);

}  // namespace fibersampler::commands
