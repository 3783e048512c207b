#pragma once

#include <filesystem>
#include <cstdint>
#include <optional>
#include <string>

namespace flans::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kDiverged = 3 };

struct CommonOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

int simulate(const CommonOptions& opts);
int verify_energy(const CommonOptions& opts);
int smoothing(const CommonOptions& opts, double r);
int oracle_compare(const CommonOptions& opts, double T);
int holder(const CommonOptions& opts, double beta);
int ops_test(const CommonOptions& opts);

}  // namespace flans::cli
