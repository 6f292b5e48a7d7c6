#include "fibersampler/commands.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "fibersampler/rng.hpp"

namespace fibersampler::commands {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroFittedCell:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNoSamplesRecorded:
      return 3;
    case ErrorCode::kFiberTooLarge:
      return 4;
    default:
      return 2;
  }
}

std::size_t fiber_cap_from_env(std::size_t fallback) {
  const char* raw = std::getenv("FIBERSAMPLER_CAP");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) {
    throw Error(ErrorCode::kInvalidArgument, "FIBERSAMPLER_CAP must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

namespace {

nlohmann::json dims_json(const Dims& d) { return nlohmann::json::array({d.I, d.J, d.K}); }

nlohmann::json cells_json(const Table3D& t) {
  return std::vector<Count>(t.cells().begin(), t.cells().end());
}

}  // namespace

nlohmann::json margins_to_json(const MarginSet& m) {
  return {{"dims", dims_json(m.dims)}, {"jk", m.jk}, {"ik", m.ik}, {"ij", m.ij}};
}

nlohmann::json chain_result_to_json(const ChainResult& r) {
  return {
      {"chi_sq_samples", r.chi_sq_samples},
      {"observed_chi_sq", r.observed_chi_sq},
      {"df", r.df},
      {"samples_recorded", r.chi_sq_samples.size()},
      {"samples_requested", r.requested_samples},
      {"exceed_count", r.exceed_count},
      {"p_value_estimate", r.p_value_estimate},
      {"p_value_corrected", r.p_value_corrected},
      {"acceptance_rate", r.acceptance_rate},
      {"burn_in_acceptance_rate", r.burn_in_acceptance_rate},
      {"negative_state_fraction", r.negative_state_fraction},
      {"wasted_ticks", r.wasted_ticks},
      {"burn_in_steps", r.burn_in_steps},
      {"sampling_steps", r.sampling_steps},
      {"seed", r.seed},
  };
}

std::string histogram_to_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin_left,bin_right,count,asymptotic_density\n" << std::setprecision(17);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << ','
        << h.asymptotic_density[b] << '\n';
  }
  return out.str();
}

nlohmann::json cmd_fit(const Dataset& data, IpfpOptions options,
                       const std::optional<std::filesystem::path>& fitted_out) {
  const FittedTable fitted = ipfp_fit(data.table, options);
  const double chi2 = chi_square(data.table, fitted);
  const std::int64_t df = degrees_of_freedom(data.table.dims());
  nlohmann::json doc{
      {"dataset", data.name},
      {"dims", dims_json(data.table.dims())},
      {"chi_square", chi2},
      {"df", df},
      {"asymptotic_p_value", chi_square_survival(chi2, df)},
      {"max_margin_discrepancy",
       max_margin_discrepancy(fitted, compute_margins(data.table))},
      {"fitted", std::vector<double>(fitted.cells().begin(), fitted.cells().end())},
  };
  if (fitted_out) {
    write_file(*fitted_out, fitted_to_csv(fitted));
    doc["fitted_csv"] = fitted_out->string();
  }
  return doc;
}

namespace {

PooledResult sample(const Dataset& data, const SampleOptions& options) {
  return run_chains(data.table, options.chain, options.chains, options.workers);
}

nlohmann::json config_json(const SampleOptions& o) {
  return {{"n_samples", o.chain.n_samples},
          {"burn_in", o.chain.burn_in},
          {"thin", o.chain.thin},
          {"floor", o.chain.floor.t},
          {"burn_in_floor", o.chain.effective_burn_in_floor().t},
          {"rho", o.chain.rho},
          {"seed", o.chain.seed},
          {"chains", o.chains}};
}

}  // namespace

nlohmann::json cmd_sample(const Dataset& data, const SampleOptions& options) {
  const PooledResult pooled = sample(data, options);
  nlohmann::json doc = chain_result_to_json(pooled.pooled);
  doc["dataset"] = data.name;
  doc["config"] = config_json(options);
  if (options.chains > 1) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& c : pooled.chains) {
      nlohmann::json entry = chain_result_to_json(c);
      entry.erase("chi_sq_samples");
      per.push_back(std::move(entry));
    }
    doc["chains"] = std::move(per);
  }
  if (options.hist_out) {
    write_file(*options.hist_out,
               histogram_to_csv(estimate_histogram(pooled.pooled, options.hist_bins)));
    doc["histogram_csv"] = options.hist_out->string();
  }
  return doc;
}

nlohmann::json cmd_test(const Dataset& data, const SampleOptions& options, double alpha) {
  const FittedTable fitted = ipfp_fit(data.table);
  const double chi2 = chi_square(data.table, fitted);
  const std::int64_t df = degrees_of_freedom(data.table.dims());
  const double asymptotic = chi_square_survival(chi2, df);
  const PooledResult pooled = sample(data, options);
  const ChainResult& r = pooled.pooled;

  double mean = 0.0;
  for (double x : r.chi_sq_samples) mean += x;
  mean /= static_cast<double>(r.chi_sq_samples.size());

  nlohmann::json doc{
      {"dataset", data.name},
      {"dims", dims_json(data.table.dims())},
      {"hypothesis", "no three-way interaction"},
      {"observed_chi_sq", chi2},
      {"df", df},
      {"asymptotic_p_value", asymptotic},
      {"mcmc",
       {{"p_value_estimate", r.p_value_estimate},
        {"p_value_corrected", r.p_value_corrected},
        {"exceed_count", r.exceed_count},
        {"samples_recorded", r.chi_sq_samples.size()},
        {"sample_mean_chi_sq", mean},
        {"acceptance_rate", r.acceptance_rate},
        {"burn_in_acceptance_rate", r.burn_in_acceptance_rate},
        {"negative_state_fraction", r.negative_state_fraction},
        {"wasted_ticks", r.wasted_ticks}}},
      {"alpha", alpha},
      {"reject", r.p_value_estimate < alpha},
      {"config", config_json(options)},
  };
  return doc;
}

nlohmann::json cmd_enumerate(const Dataset& data, RelaxDepth floor, EnumerateOptions options,
                             bool list_tables) {
  const MarginSet margins = compute_margins(data.table);
  const Fiber fiber = enumerate_fiber(margins, floor, options);
  std::size_t nonneg = 0;
  nlohmann::json tables = nlohmann::json::array();
  for (std::size_t u = 0; u < fiber.size(); ++u) {
    nonneg += fiber.is_nonnegative(u);
    if (list_tables) {
      const auto c = fiber.cells(u);
      tables.push_back(std::vector<Count>(c.begin(), c.end()));
    }
  }
  nlohmann::json doc{{"dataset", data.name},
                     {"dims", dims_json(fiber.dims())},
                     {"floor", floor.t},
                     {"fiber_size", fiber.size()},
                     {"nonneg_size", nonneg},
                     {"margins", margins_to_json(margins)}};
  if (list_tables) doc["tables"] = std::move(tables);
  return doc;
}

nlohmann::json connectivity_to_json(const ConnectivityReport& report) {
  nlohmann::json doc{{"fiber_size", report.fiber_size},
                     {"relaxed_fiber_size", report.relaxed_fiber_size},
                     {"components", report.components},
                     {"nonneg_components", report.nonneg_components},
                     {"nonneg_connected", report.nonneg_connected}};
  if (report.witness) {
    doc["witness"] = {cells_json(report.witness->first), cells_json(report.witness->second)};
  } else {
    doc["witness"] = nullptr;
  }
  return doc;
}

nlohmann::json cmd_connectivity(const Dataset& data, RelaxDepth floor,
                                EnumerateOptions options) {
  const MarginSet margins = compute_margins(data.table);
  const MoveSet moves = enumerate_basic_moves(data.table.dims());
  nlohmann::json doc = connectivity_to_json(
      verify_relaxed_connectivity(margins, moves, floor, options));
  doc["dataset"] = data.name;
  doc["dims"] = dims_json(data.table.dims());
  doc["floor"] = floor.t;
  doc["moves"] = moves.size();
  return doc;
}

nlohmann::json cmd_verify_decomposition(const Decomposition& d) {
  nlohmann::json doc{{"floor", d.floor.t}, {"steps", d.steps.size()}};
  try {
    const ReplayReport r = replay_decomposition(d);
    doc["success"] = true;
    doc["min_cell"] = r.min_cell;
    doc["negative_cells"] = r.negative_cells;
    doc["step_minima"] = r.step_minima;
  } catch (const FloorViolation& e) {
    doc["success"] = false;
    doc["error"] = error_code_name(e.code());
    doc["failed_step"] = e.step();
    doc["message"] = e.what();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEndMismatch) throw;
    doc["success"] = false;
    doc["error"] = error_code_name(e.code());
    doc["message"] = e.what();
  }
  return doc;
}

nlohmann::json cmd_moves(const Dims& dims, bool dense) {
  const MoveSet set = enumerate_basic_moves(dims);
  nlohmann::json moves = nlohmann::json::array();
  for (const auto& m : set.moves) {
    nlohmann::json entry{{"move", m.to_string()}};
    if (dense) entry["dense"] = cells_json(m.dense(dims));
    moves.push_back(std::move(entry));
  }
  return {{"dims", dims_json(dims)}, {"count", set.size()}, {"moves", std::move(moves)}};
}

nlohmann::json cmd_conjecture_probe(const ProbeOptions& o) {
  if (o.max_cell < 0) throw Error(ErrorCode::kInvalidArgument, "max_cell must be >= 0");
  const MoveSet moves = enumerate_basic_moves(o.dims);
  Rng rng(o.seed);

  std::vector<Table3D> tables = o.extra_tables;
  for (std::size_t t = 0; t < o.trials; ++t) {
    std::vector<Count> cells(o.dims.cells());
    for (auto& c : cells) c = static_cast<Count>(rng.bounded(static_cast<std::uint64_t>(o.max_cell) + 1));
    tables.emplace_back(o.dims, std::move(cells));
  }

  nlohmann::json trials = nlohmann::json::array();
  nlohmann::json counterexamples = nlohmann::json::array();
  std::size_t connected = 0, disconnected = 0, skipped = 0;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const Table3D& table = tables[t];
    if (!(table.dims() == o.dims)) {
      throw Error(ErrorCode::kDimensionMismatch, "probe table dims differ from --dims");
    }
    const MarginSet margins = compute_margins(table);
    nlohmann::json entry{{"trial", t}, {"table", cells_json(table)}, {"total", table.total()}};
    try {
      const ConnectivityReport r = verify_relaxed_connectivity(margins, moves, o.depth, o.enumerate);
      entry.update(connectivity_to_json(r));
      entry["skipped"] = false;
      if (r.nonneg_connected) {
        ++connected;
      } else {
        ++disconnected;
        counterexamples.push_back({{"trial", t},
                                   {"margins", margins_to_json(margins)},
                                   {"witness", entry["witness"]}});
      }
    } catch (const FiberTooLarge& e) {
      ++skipped;
      entry["skipped"] = true;
      entry["note"] = e.what();
      entry["partial_count"] = e.partial_count();
    }
    trials.push_back(std::move(entry));
  }
  return {{"dims", dims_json(o.dims)},
          {"depth", o.depth.t},
          {"seed", o.seed},
          {"max_cell", o.max_cell},
          {"trials_requested", o.trials},
          {"tables_probed", tables.size()},
          {"connected", connected},
          {"disconnected", disconnected},
          {"skipped", skipped},
          {"counterexamples", std::move(counterexamples)},
          {"trials", std::move(trials)}};
}

}  // namespace fibersampler::commands
