#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nullwave/experiments.hpp"

namespace nullwave {

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; `path` names the offending field (e.g.
/// "grid.n_ubar").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  std::string path;
};

enum class ConvergeStudy { All, Linear, Nonlinear, U0 };

struct RunConfig {
  GridSpec grid{};
  PulseProfile profile{};
  std::optional<double> E0 = 1.0;
  NullFormCoeffs q = basis_form(BasisKind::Q0);
  SolverConfig solver{};
  SweepPlan sweep{};
  U0Plan u0{};
  GridConvergencePlan convergence{};
  ConvergeStudy converge_study = ConvergeStudy::All;
  std::string output_dir = "nullwave_out";
  int worker_count = 1;
  std::uint64_t rng_seed = 1;
};

/// Parses and cross-validates. Unknown keys, wrong types and inconsistent
/// settings throw ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Effective configuration with every default filled in.
nlohmann::json to_json(const RunConfig& c);

/// Throws ConfigError on cross-field inconsistencies (admissibility,
/// resolution, cap versus angular mode).
void validate(const RunConfig& c);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Hash of the physics-relevant configuration (output_dir and worker_count
/// excluded, so it does not depend on where or how parallel a run is).
std::string config_hash(const RunConfig& c);

}  // namespace nullwave
