#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nullwave/solver.hpp"

namespace nullwave {

namespace fs = std::filesystem;

/// Resolves output_dir against NULLWAVE_OUTPUT_ROOT when that variable is
/// set: relative paths are joined to it, absolute paths keep only their
/// last component.
fs::path resolve_output_dir(const std::string& output_dir);

/// Creates the directory if needed. A non-empty existing directory is
/// refused unless force is set (throws ConfigError on "output_dir").
void prepare_output_dir(const fs::path& dir, bool force);

struct SnapshotHeader {
  std::array<int, 3> dims{};
  double u0 = 0.0, u1 = -1.0, delta = 0.0;
  std::string mode;
  std::string field = "psi";
  std::string config_hash;
};

/// Writes <stem>.bin (little-endian float64, u-major, ubar, theta) and
/// <stem>.json. Returns the .bin path.
fs::path write_snapshot(const fs::path& dir, const std::string& stem, const Field3& f,
                        const DoubleNullGrid& g, const std::string& field_name,
                        const std::string& config_hash);

/// Reads a snapshot written by write_snapshot.
Field3 read_snapshot(const fs::path& bin, SnapshotHeader* header = nullptr);

/// CSV with a leading "# config_hash=<hash>" line. Numbers use %.17g so
/// identical inputs give identical files.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& config_hash,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::size_t columns_;
  std::ofstream out_;
};

std::string format_number(double v);

void write_json(const fs::path& path, const nlohmann::json& j);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

/// Log-log line plot as a standalone SVG document.
void write_loglog_svg(const fs::path& path, const std::string& title,
                      const std::vector<PlotSeries>& series);

}  // namespace nullwave
