#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "cosarc/csv.hpp"
#include "cosarc/experiment.hpp"

namespace cosarc {

using nlohmann::json;

namespace {

const char* const kHeader =
    "grid,rep,method,status,coverage,cov_low,cov_mid,cov_upp,normalized_lpb,mean_lpb,dr_active_frac,runtime_ms";

std::string field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("results file: bad number '" + s + "'");
  }
}

json aggregate(const std::vector<double>& values) {
  if (values.empty()) return nullptr;
  const MeanSE m = mean_se(values);
  return {{"mean", m.mean}, {"two_se", 2.0 * m.se}};
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    const bool ok = r.ok();
    out << format_double(r.grid) << ',' << r.rep << ',' << to_string(r.method) << ',' << sanitize(r.status) << ','
        << field(r.coverage) << ',';
    if (ok) {
      out << format_double(r.bounds.low) << ',' << format_double(r.bounds.mid) << ',' << format_double(r.bounds.upp)
          << ',' << field(r.normalized_lpb) << ',' << format_double(r.mean_lpb) << ',' << field(r.dr_active_frac)
          << ',' << format_double(r.runtime_ms);
    } else {
      out << ",,,,,,";
    }
    out << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("results file: unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw std::invalid_argument("results file: expected 12 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.grid = std::stod(f[0]);
    r.rep = std::stoul(f[1]);
    r.method = parse_method(f[2]);
    r.status = f[3];
    r.coverage = parse_optional(f[4]);
    if (r.ok()) {
      r.bounds = {std::stod(f[5]), std::stod(f[6]), std::stod(f[7])};
      r.normalized_lpb = parse_optional(f[8]);
      r.mean_lpb = std::stod(f[9]);
      r.dr_active_frac = parse_optional(f[10]);
      r.runtime_ms = std::stod(f[11]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

json summarize(const std::vector<ResultRow>& rows) {
  struct Group {
    double grid;
    Method method;
    std::size_t ok = 0, failed = 0;
    std::map<std::string, std::vector<double>> metrics;
  };
  std::vector<Group> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.grid == r.grid && g.method == r.method; });
    if (it == groups.end()) {
      groups.push_back({r.grid, r.method, 0, 0, {}});
      it = groups.end() - 1;
    }
    if (!r.ok()) {
      ++it->failed;
      continue;
    }
    ++it->ok;
    auto add = [&](const char* name, const std::optional<double>& v) {
      if (v) it->metrics[name].push_back(*v);
    };
    add("coverage", r.coverage);
    add("cov_low", r.bounds.low);
    add("cov_mid", r.bounds.mid);
    add("cov_upp", r.bounds.upp);
    add("normalized_lpb", r.normalized_lpb);
    add("mean_lpb", r.mean_lpb);
    add("dr_active_frac", r.dr_active_frac);
    add("runtime_ms", r.runtime_ms);
  }
  json out = json::array();
  for (const auto& g : groups) {
    json entry{{"grid", g.grid}, {"method", std::string(to_string(g.method))}, {"reps_ok", g.ok}, {"reps_failed", g.failed}};
    for (const char* name : {"coverage", "cov_low", "cov_mid", "cov_upp", "normalized_lpb", "mean_lpb",
                             "dr_active_frac", "runtime_ms"}) {
      const auto it = g.metrics.find(name);
      entry[name] = it == g.metrics.end() ? json(nullptr) : aggregate(it->second);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

json summary_json(const ExperimentReport& report) {
  return {{"version", std::string(kVersion)},
          {"config", config_to_json(report.config)},
          {"failed_reps", report.failed_reps},
          {"total_reps", report.total_reps},
          {"aggregates", summarize(report.rows)}};
}

void write_report(const std::filesystem::path& directory, const ExperimentReport& report) {
  std::filesystem::create_directories(directory);
  std::ofstream csv(directory / "results.csv");
  if (!csv) throw std::runtime_error("cannot write " + (directory / "results.csv").string());
  write_results_csv(csv, report.rows);
  std::ofstream js(directory / "summary.json");
  if (!js) throw std::runtime_error("cannot write " + (directory / "summary.json").string());
  js << summary_json(report).dump(2) << '\n';
}

}  // namespace cosarc
