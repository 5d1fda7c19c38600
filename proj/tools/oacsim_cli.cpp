// oacsim: run Monte Carlo sweeps, reproduce the built-in figure sweeps, or
// run the acceptance suite.

#include "acceptance/acceptance_suite.hpp"
#include "oacsim/oacsim.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;

fs::path default_output(const std::string& stem) {
  const char* dir = std::getenv("OACSIM_OUTPUT_DIR");
  return fs::path(dir && *dir ? dir : ".") / (stem + ".csv");
}

void write_outputs(const oacsim::ExperimentSpec& spec, const std::vector<oacsim::ResultRow>& rows,
                   const fs::path& out) {
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream csv(out);
  if (!csv) throw std::runtime_error("cannot write '" + out.string() + "'");
  oacsim::write_csv(csv, rows);
  if (!csv) throw std::runtime_error("write failed for '" + out.string() + "'");
  const fs::path meta = out.string() + ".meta";
  std::ofstream m(meta);
  if (!m) throw std::runtime_error("cannot write '" + meta.string() + "'");
  oacsim::write_metadata(m, spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"over-the-air computation estimator lab"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  unsigned threads = 1;
  app.add_option("--seed", seed, "master seed (overrides the spec file)");
  app.add_option("--trials", trials, "Monte Carlo trials (overrides the spec file)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "run a sweep described by a spec file");
  std::string spec_path;
  std::string run_out;
  run->add_option("--spec", spec_path, "key = value spec file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "CSV path (default: $OACSIM_OUTPUT_DIR/<spec name>.csv)");

  auto* figure = app.add_subcommand("figure", "run a built-in figure sweep");
  std::string fig_name;
  std::string fig_out;
  figure->add_option("--name", fig_name, "fig4, fig6, fig7, fig8, fig9 or fig10")
      ->required()
      ->check(CLI::IsMember({"fig4", "fig6", "fig7", "fig8", "fig9", "fig10"}));
  figure->add_option("--out", fig_out, "CSV path (default: $OACSIM_OUTPUT_DIR/<name>.csv)");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::vector<int> only;
  verify->add_option("--only", only, "criterion numbers to run (default: all)")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      oacsim::acceptance::Options opt;
      opt.threads = threads;
      if (seed) opt.seed = *seed;
      opt.only.insert(only.begin(), only.end());
      return oacsim::acceptance::run_all(opt, std::cout) ? 0 : 1;
    }

    oacsim::ExperimentSpec spec;
    fs::path out;
    if (run->parsed()) {
      spec = oacsim::load_spec(spec_path);
      out = run_out.empty() ? default_output(fs::path(spec_path).stem().string()) : fs::path(run_out);
    } else {
      spec = oacsim::figure_spec(fig_name);
      out = fig_out.empty() ? default_output(fig_name) : fs::path(fig_out);
    }
    if (seed) spec.seed = *seed;
    if (trials) spec.trials = *trials;
    const auto rows = oacsim::run_sweep(spec, threads);
    write_outputs(spec, rows, out);
    std::cout << "wrote " << rows.size() << " rows to " << out.string() << '\n';
  } catch (const std::exception& ex) {
    std::cerr << "oacsim: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
