#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "flans/error.hpp"
#include "flans/io.hpp"

namespace {

int exit_code_for(const flans::Error& e) {
  using flans::ErrorCode;
  switch (e.code()) {
    case ErrorCode::Diverged:
      return flans::cli::kDiverged;
    case ErrorCode::MissingKey:
    case ErrorCode::BadValue:
    case ErrorCode::RegimeViolation:
    case ErrorCode::WrongRegime:
    case ErrorCode::BadMagic:
    case ErrorCode::VersionMismatch:
    case ErrorCode::CorruptPayload:
    case ErrorCode::BadParams:
    case ErrorCode::BadDim:
    case ErrorCode::OddN:
    case ErrorCode::TooSmallN:
    case ErrorCode::EmptyWindow:
    case ErrorCode::GridMismatch:
    case ErrorCode::Io:
      return flans::cli::kUsage;
    default:
      return flans::cli::kCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional LANS-alpha pseudo-spectral solver", "flans"};
  app.set_version_flag("--version", flans::version_string());
  app.require_subcommand(1);

  flans::cli::CommonOptions opts;
  double r = 0.0, T = 0.1, beta = 0.25;
  double tol = 0.0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* cfg = sub->add_option("config", opts.config, "configuration file")->check(CLI::ExistingFile);
    if (config_required) cfg->required();
    sub->add_option("--out-dir", opts.out_dir, "output directory (overrides out_dir)");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--tol", tol, "pass threshold");
  };

  auto* sim = app.add_subcommand("simulate", "run and write snapshots, diagnostics and a manifest");
  add_common(sim, true);
  auto* energy = app.add_subcommand("verify-energy", "check the energy balance identity");
  add_common(energy, true);
  auto* smooth = app.add_subcommand("smoothing", "fit the early-time growth of a high norm");
  add_common(smooth, true);
  smooth->add_option("--r", r, "extra regularity index")->required()->check(CLI::NonNegativeNumber);
  auto* oracle = app.add_subcommand("oracle-compare", "compare the stepper against Picard iteration");
  add_common(oracle, true);
  oracle->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
  auto* hold = app.add_subcommand("holder", "critical-case Hoelder class quotients");
  add_common(hold, true);
  hold->add_option("--beta", beta, "Hoelder exponent in (0, 1/2)")->check(CLI::Range(0.0, 0.5));
  auto* ops = app.add_subcommand("ops-test", "operator self-test battery");
  add_common(ops, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return flans::cli::kUsage;
  }

  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--tol")) opts.tol = tol;
  }

  try {
    if (*sim) return flans::cli::simulate(opts);
    if (*energy) return flans::cli::verify_energy(opts);
    if (*smooth) return flans::cli::smoothing(opts, r);
    if (*oracle) return flans::cli::oracle_compare(opts, T);
    if (*hold) return flans::cli::holder(opts, beta);
    if (*ops) return flans::cli::ops_test(opts);
  } catch (const flans::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return flans::cli::kCheckFailed;
  }
  return flans::cli::kUsage;
}
