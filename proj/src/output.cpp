#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "spqg/experiment.hpp"
#include "spqg/scaling_fit.hpp"

namespace spqg {

namespace {

constexpr const char* kHeader = "experiment,delta,norm_name,value,exponent,residual,grid_n,box_l,seed";

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Names of series in first-appearance order.
std::vector<std::string> series_names(const std::vector<SweepRecord>& records) {
  std::vector<std::string> names;
  for (const auto& r : records)
    if (std::find(names.begin(), names.end(), r.norm_name) == names.end()) names.push_back(r.norm_name);
  return names;
}

}  // namespace

void fit_series(std::vector<SweepRecord>& records) {
  for (const std::string& name : series_names(records)) {
    std::vector<std::pair<double, double>> pts;
    bool usable = true;
    for (const auto& r : records) {
      if (r.norm_name != name) continue;
      if (!(r.value > 0.0) || !std::isfinite(r.value)) usable = false;
      pts.emplace_back(r.delta, r.value);
    }
    double exponent = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (usable && pts.size() >= 3) {
      const ScalingFit fit = fit_scaling(pts);
      exponent = fit.exponent;
      residual = fit.residual;
    }
    for (auto& r : records)
      if (r.norm_name == name) {
        r.exponent = exponent;
        r.residual = residual;
      }
  }
}

std::vector<SweepRecord> series(const std::vector<SweepRecord>& records, const std::string& norm_name) {
  std::vector<SweepRecord> out;
  for (const auto& r : records)
    if (r.norm_name == norm_name) out.push_back(r);
  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.delta > b.delta; });
  return out;
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : records) {
    out += r.experiment + ',' + num(r.delta) + ',' + r.norm_name + ',' + num(r.value) + ',' + num(r.exponent) + ',' +
           num(r.residual) + ',' + std::to_string(r.grid_n) + ',' + num(r.box_l) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::vector<SweepRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_records_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw Error("read_records_csv: bad header in " + path.string());
  std::vector<SweepRecord> out;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw Error(path.string() + ":" + std::to_string(number) + ": expected 9 columns");
    try {
      SweepRecord r;
      r.experiment = f[0];
      r.delta = std::stod(f[1]);
      r.norm_name = f[2];
      r.value = std::stod(f[3]);
      r.exponent = std::stod(f[4]);
      r.residual = std::stod(f[5]);
      r.grid_n = std::stoi(f[6]);
      r.box_l = std::stod(f[7]);
      r.seed = std::stoull(f[8]);
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(number) + ": malformed row");
    }
  }
  return out;
}

std::filesystem::path emit_outputs(const std::vector<SweepRecord>& records, const ExperimentConfig& config) {
  const std::filesystem::path dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw Error("emit_outputs: cannot create output directory " + dir.string());
  const std::string name = config.name.empty() ? to_string(config.kind) : config.name;

  const std::filesystem::path csv = dir / (name + ".csv");
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw Error("emit_outputs: cannot write " + csv.string());
    out << records_to_csv(records);
    if (!out) throw Error("emit_outputs: write failed for " + csv.string());
  }

  for (const std::string& norm : series_names(records)) {
    const auto rows = series(records, norm);
    if (rows.size() < 2) continue;
    const std::filesystem::path dat = dir / (name + "_" + norm + ".dat");
    std::ofstream out(dat, std::ios::binary);
    if (!out) throw Error("emit_outputs: cannot write " + dat.string());
    out << "# delta " << norm << "  exponent " << num(rows.front().exponent) << '\n';
    for (const auto& r : rows) out << num(r.delta) << ' ' << num(r.value) << '\n';
  }
  return csv;
}

}  // namespace spqg
