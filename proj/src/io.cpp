#include "nullwave/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nullwave/config.hpp"

namespace nullwave {

using nlohmann::json;

fs::path resolve_output_dir(const std::string& output_dir) {
  const fs::path p(output_dir);
  const char* root = std::getenv("NULLWAVE_OUTPUT_ROOT");
  if (!root || !*root) return p;
  if (p.is_absolute()) return fs::path(root) / p.filename();
  return fs::path(root) / p;
}

void prepare_output_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw ConfigError("output_dir", dir.string() + " is not a directory");
    if (!fs::is_empty(dir, ec) && !force)
      throw ConfigError("output_dir", dir.string() + " is not empty (use --force)");
    return;
  }
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create " + dir.string() + ": " + ec.message());
}

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

}  // namespace

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

fs::path write_snapshot(const fs::path& dir, const std::string& stem, const Field3& f,
                        const DoubleNullGrid& g, const std::string& field_name,
                        const std::string& config_hash) {
  const fs::path bin = dir / (stem + ".bin");
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin.string());
  for (double v : f.data()) {
    const std::uint64_t w = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&w), sizeof w);
  }
  json h;
  h["dims"] = {f.nu(), f.nub(), f.nth()};
  h["order"] = "u-major, ubar, theta";
  h["dtype"] = "float64-le";
  h["coordinates"] = {{"u", {g.u0(), g.u1()}},
                      {"ubar", {0.0, g.delta()}},
                      {"theta", {0.0, g.mode() == AngularMode::Axisym ? std::numbers::pi : 0.0}}};
  h["delta"] = g.delta();
  h["u0"] = g.u0();
  h["mode"] = std::string(mode_name(g.mode()));
  h["field"] = field_name;
  h["config_hash"] = config_hash;
  write_json(dir / (stem + ".json"), h);
  return bin;
}

Field3 read_snapshot(const fs::path& bin, SnapshotHeader* header) {
  fs::path hp = bin;
  hp.replace_extension(".json");
  std::ifstream hin(hp);
  if (!hin) throw std::runtime_error("missing snapshot header " + hp.string());
  const json h = json::parse(hin);
  const auto dims = h.at("dims").get<std::array<int, 3>>();
  Field3 f(dims[0], dims[1], dims[2]);
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + bin.string());
  for (double& v : f.data()) {
    std::uint64_t w = 0;
    if (!in.read(reinterpret_cast<char*>(&w), sizeof w))
      throw std::runtime_error("snapshot truncated: " + bin.string());
    v = std::bit_cast<double>(to_little(w));
  }
  if (header) {
    header->dims = dims;
    header->u0 = h.at("u0").get<double>();
    header->delta = h.at("delta").get<double>();
    header->mode = h.at("mode").get<std::string>();
    header->field = h.at("field").get<std::string>();
    header->config_hash = h.at("config_hash").get<std::string>();
  }
  return f;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::string& config_hash,
                     const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()), out_(path) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << "# config_hash=" << config_hash << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out_ << (c ? "," : "") << columns[c];
  out_ << '\n' << std::flush;
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CSV row has the wrong width");
  for (std::size_t c = 0; c < cells.size(); ++c) out_ << (c ? "," : "") << cells[c];
  out_ << '\n' << std::flush;
}

void write_loglog_svg(const fs::path& path, const std::string& title,
                      const std::vector<PlotSeries>& series) {
  constexpr double W = 520, H = 360, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t m = 0; m < s.x.size(); ++m) {
      if (!(s.x[m] > 0.0 && s.y[m] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[m]));
      x1 = std::max(x1, std::log10(s.x[m]));
      y0 = std::min(y0, std::log10(s.y[m]));
      y1 = std::max(y1, std::log10(s.y[m]));
    }
  if (!(x1 >= x0)) x0 = 0, x1 = 1;
  if (!(y1 >= y0)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return L + (std::log10(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - y0) / (y1 - y0) * (H - T - B); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">log10 delta ["
     << format_number(x0) << ", " << format_number(x1) << "]</text>\n";
  os << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
     << ")\" text-anchor=\"middle\">log10 value [" << format_number(y0) << ", "
     << format_number(y1) << "]</text>\n";
  for (std::size_t n = 0; n < series.size(); ++n) {
    const auto& s = series[n];
    const char* c = colors[n % 7];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
    for (std::size_t m = 0; m < s.x.size(); ++m)
      if (s.x[m] > 0.0 && s.y[m] > 0.0) os << px(s.x[m]) << ',' << py(s.y[m]) << ' ';
    os << "\"/>\n";
    for (std::size_t m = 0; m < s.x.size(); ++m)
      if (s.x[m] > 0.0 && s.y[m] > 0.0)
        os << "<circle cx=\"" << px(s.x[m]) << "\" cy=\"" << py(s.y[m]) << "\" r=\"3\" fill=\""
           << c << "\"/>\n";
    os << "<text x=\"" << L + 8 << "\" y=\"" << T + 16 + 14 * n << "\" fill=\"" << c << "\">"
       << s.label << "</text>\n";
  }
  os << "</svg>\n";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << os.str();
}

}  // namespace nullwave
