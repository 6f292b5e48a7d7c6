// Command-line front end: every subcommand prints one JSON document to stdout.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fibersampler/commands.hpp"
#include "fibersampler/datasets.hpp"
#include "fibersampler/io.hpp"

namespace fs = fibersampler;
namespace cmd = fibersampler::commands;

namespace {

struct TableInput {
  std::string path;
  std::string format;
  std::string dataset;

  void attach(CLI::App* app) {
    auto* table = app->add_option("--table", path, "Table file (.json or .csv)");
    auto* ds = app->add_option("--dataset", dataset, "Bundled dataset name")
                   ->check(CLI::IsMember(fs::datasets::names()));
    table->excludes(ds);
    app->add_option("--format", format, "Force table format")
        ->check(CLI::IsMember({"json", "csv"}));
  }

  fs::Dataset load() const {
    if (!dataset.empty()) return *fs::datasets::find(dataset);
    if (path.empty()) {
      throw fs::Error(fs::ErrorCode::kInvalidArgument, "need --table or --dataset");
    }
    std::optional<fs::TableFormat> f;
    if (format == "json") f = fs::TableFormat::kJson;
    if (format == "csv") f = fs::TableFormat::kCsv;
    return fs::load_table(path, f);
  }
};

struct ChainFlags {
  std::size_t n = 10000;
  std::string burnin = "25%";
  std::size_t thin = 25;
  long long floor = 1;
  long long burnin_floor = -1;
  double rho = 0.1;
  std::uint64_t seed = 0;
  std::size_t chains = 1;
  std::size_t workers = 1;
  std::size_t hist_bins = 50;
  std::string hist_out;

  void attach(CLI::App* app, bool with_histogram) {
    app->add_option("--n", n, "Recorded-sample target N")->check(CLI::PositiveNumber);
    app->add_option("--burnin", burnin,
                    "Burn-in raw steps, or a percentage of N*thin such as 25%");
    app->add_option("--thin", thin, "Raw steps between recordings")->check(CLI::PositiveNumber);
    app->add_option("--floor", floor, "Relaxation depth t (cells >= -t)")->check(CLI::NonNegativeNumber);
    app->add_option("--burnin-floor", burnin_floor, "Relaxation depth during burn-in");
    app->add_option("--rho", rho, "Weight per negative cell, in (0,1]");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--chains", chains, "Independent chains to pool")->check(CLI::PositiveNumber);
    app->add_option("--workers", workers, "Threads for pooled chains")->check(CLI::PositiveNumber);
    if (with_histogram) {
      app->add_option("--hist-bins", hist_bins, "Histogram bins")->check(CLI::PositiveNumber);
      app->add_option("--hist-out", hist_out, "Histogram CSV path");
    }
  }

  cmd::SampleOptions options() const {
    cmd::SampleOptions o;
    o.chain.n_samples = n;
    o.chain.thin = thin;
    o.chain.floor = fs::RelaxDepth{floor};
    if (burnin_floor >= 0) o.chain.burn_in_floor = fs::RelaxDepth{burnin_floor};
    o.chain.rho = rho;
    o.chain.seed = seed;
    if (!burnin.empty() && burnin.back() == '%') {
      const double pct = std::stod(burnin.substr(0, burnin.size() - 1));
      o.chain.burn_in = fs::burn_in_from_fraction(pct / 100.0, n, thin);
    } else {
      o.chain.burn_in = static_cast<std::size_t>(std::stoull(burnin));
    }
    o.chains = chains;
    o.workers = workers;
    o.hist_bins = hist_bins;
    if (!hist_out.empty()) o.hist_out = hist_out;
    return o;
  }
};

fs::Dims parse_dims(const std::vector<std::size_t>& v) {
  if (v.size() != 3) throw fs::Error(fs::ErrorCode::kInvalidArgument, "--dims takes I J K");
  return fs::Dims{v[0], v[1], v[2]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conditional tests for three-way tables under no three-way interaction"};
  app.require_subcommand(1);

  TableInput fit_in, sample_in, test_in, enum_in, conn_in;
  ChainFlags sample_flags, test_flags;
  double tol = 1e-8;
  int max_iter = 10000;
  std::string fit_out;
  long long enum_floor = 0, conn_floor = 1;
  bool enum_list = false;
  std::string fixture, decomposition_file;
  long long decomposition_floor = -1;
  std::vector<std::size_t> moves_dims, probe_dims;
  bool moves_dense = false;
  fs::commands::ProbeOptions probe;
  std::size_t cap = 0;
  double alpha = 0.01;

  auto* fit = app.add_subcommand("fit", "IPFP fit, chi-square and asymptotic p-value");
  fit_in.attach(fit);
  fit->add_option("--tol", tol, "Max margin discrepancy");
  fit->add_option("--max-iter", max_iter, "Maximum IPFP cycles");
  fit->add_option("--out", fit_out, "Fitted table CSV path");

  auto* sample = app.add_subcommand("sample", "Run the relaxed-fiber chain");
  sample_in.attach(sample);
  sample_flags.attach(sample, true);

  auto* test = app.add_subcommand("test", "Asymptotic and MCMC goodness-of-fit test");
  test_in.attach(test);
  test_flags.attach(test, false);
  test->add_option("--alpha", alpha, "Significance level");

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate the fiber of a table's margins");
  enum_in.attach(enumerate);
  enumerate->add_option("--floor", enum_floor, "Relaxation depth t")->check(CLI::NonNegativeNumber);
  enumerate->add_flag("--list", enum_list, "Include every table");
  enumerate->add_option("--cap", cap, "Fiber size cap (default FIBERSAMPLER_CAP or 5e6)");

  auto* connectivity = app.add_subcommand("connectivity", "Fiber graph connectivity under basic moves");
  conn_in.attach(connectivity);
  connectivity->add_option("--floor", conn_floor, "Relaxation depth t")->check(CLI::NonNegativeNumber);
  connectivity->add_option("--cap", cap, "Fiber size cap (default FIBERSAMPLER_CAP or 5e6)");

  auto* verify = app.add_subcommand("verify-decomposition", "Replay a basic-move path");
  auto* fixture_opt = verify->add_option("--fixture", fixture, "Built-in path")
                          ->check(CLI::IsMember({"b1", "b2"}));
  verify->add_option("--file", decomposition_file, "Decomposition JSON")->excludes(fixture_opt);
  verify->add_option("--floor", decomposition_floor, "Override the relaxation depth");

  auto* moves = app.add_subcommand("moves", "Basic-move catalog");
  moves->add_option("--dims", moves_dims, "I J K")->expected(3)->required();
  moves->add_flag("--dense", moves_dense, "Print dense expansions");

  auto* conjecture = app.add_subcommand("conjecture-probe",
                                        "Random connectivity trials at depth 1");
  conjecture->add_option("--dims", probe_dims, "I J K")->expected(3)->required();
  conjecture->add_option("--trials", probe.trials, "Random tables");
  conjecture->add_option("--seed", probe.seed, "RNG seed");
  conjecture->add_option("--max-cell", probe.max_cell, "Largest random cell count");
  conjecture->add_option("--cap", cap, "Fiber size cap per trial");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::EnumerateOptions enum_opts;
    enum_opts.cap = cap > 0 ? cap : cmd::fiber_cap_from_env();
    nlohmann::json out;
    if (*fit) {
      fs::IpfpOptions o;
      o.tol = tol;
      o.max_iter = max_iter;
      std::optional<std::filesystem::path> path;
      if (!fit_out.empty()) path = fit_out;
      out = cmd::cmd_fit(fit_in.load(), o, path);
    } else if (*sample) {
      out = cmd::cmd_sample(sample_in.load(), sample_flags.options());
    } else if (*test) {
      out = cmd::cmd_test(test_in.load(), test_flags.options(), alpha);
    } else if (*enumerate) {
      out = cmd::cmd_enumerate(enum_in.load(), fs::RelaxDepth{enum_floor}, enum_opts, enum_list);
    } else if (*connectivity) {
      out = cmd::cmd_connectivity(conn_in.load(), fs::RelaxDepth{conn_floor}, enum_opts);
    } else if (*verify) {
      fs::Decomposition d = !decomposition_file.empty() ? fs::load_decomposition(decomposition_file)
                            : fixture == "b2"          ? fs::fixtures::b2_decomposition()
                                                       : fs::fixtures::b1_decomposition();
      if (decomposition_floor >= 0) d.floor = fs::RelaxDepth{decomposition_floor};
      out = cmd::cmd_verify_decomposition(d);
    } else if (*moves) {
      out = cmd::cmd_moves(parse_dims(moves_dims), moves_dense);
    } else if (*conjecture) {
      probe.dims = parse_dims(probe_dims);
      probe.enumerate = enum_opts;
      if (probe.dims == fs::Dims{3, 3, 3}) {
        probe.extra_tables.push_back(fs::fixtures::isolated_3x3x3());
      }
      out = cmd::cmd_conjecture_probe(probe);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  } catch (const fs::Error& e) {
    std::cerr << "error: " << fs::error_code_name(e.code()) << ": " << e.what() << '\n';
    return cmd::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
