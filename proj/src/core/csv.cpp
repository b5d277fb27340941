#include "cosarc/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace cosarc {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t line_no, const std::string& column) {
  const std::string s = trim(cell);
  double value = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": column '" + column +
                             "' has non-numeric or missing value '" + s + "'");
  }
  return value;
}

std::optional<std::size_t> covariate_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return std::nullopt;
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
  if (ec != std::errc() || ptr != name.data() + name.size() || k == 0) return std::nullopt;
  return k;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset CSV is empty");
  const auto header = split_csv_line(line);

  std::map<std::size_t, std::size_t> covariate_cols;  // x-index -> column
  std::optional<std::size_t> time_col, event_col;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string name = trim(header[j]);
    if (name == "time") {
      time_col = j;
    } else if (name == "event") {
      event_col = j;
    } else if (auto k = covariate_index(name)) {
      if (!covariate_cols.emplace(*k, j).second) throw std::runtime_error("duplicate column " + name);
    } else {
      throw std::runtime_error("unexpected column '" + name + "'");
    }
  }
  if (!time_col || !event_col) throw std::runtime_error("dataset CSV needs 'time' and 'event' columns");
  const std::size_t p = covariate_cols.size();
  if (p > 0 && covariate_cols.rbegin()->first != p) {
    throw std::runtime_error("covariate columns must be x1..xp without gaps");
  }

  struct Row {
    Covariates x;
    double time;
    bool event;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells");
    }
    Row row;
    row.x.reserve(p);
    for (const auto& [k, col] : covariate_cols) row.x.push_back(parse_cell(cells[col], line_no, "x" + std::to_string(k)));
    row.time = parse_cell(cells[*time_col], line_no, "time");
    if (row.time < 0.0) throw std::runtime_error("line " + std::to_string(line_no) + ": negative time");
    const double ev = parse_cell(cells[*event_col], line_no, "event");
    if (ev != 0.0 && ev != 1.0) throw std::runtime_error("line " + std::to_string(line_no) + ": event must be 0 or 1");
    row.event = ev == 1.0;
    rows.push_back(std::move(row));
  }

  double smallest_positive = kInfinity;
  for (const auto& r : rows) {
    if (r.time > 0.0) smallest_positive = std::min(smallest_positive, r.time);
  }
  Dataset data(p);
  for (auto& r : rows) {
    if (r.time == 0.0) {
      if (!std::isfinite(smallest_positive)) throw std::runtime_error("all observed times are zero");
      r.time = 0.5 * smallest_positive;
    }
    data.add({std::move(r.x), r.time, r.event});
  }
  return data;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_dataset_csv(in);
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {
void write_covariate_header(std::ostream& out, std::size_t p) {
  for (std::size_t j = 1; j <= p; ++j) out << 'x' << j << ',';
}
}  // namespace

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  write_covariate_header(out, data.p());
  out << "time,event\n";
  for (const auto& r : data) {
    for (double v : r.x) out << format_double(v) << ',';
    out << format_double(r.t_tilde) << ',' << (r.event ? 1 : 0) << '\n';
  }
}

void write_latent_csv(std::ostream& out, std::span<const LatentRecord> latent) {
  const std::size_t p = latent.empty() ? 0 : latent.front().x.size();
  write_covariate_header(out, p);
  out << "t,c,time,event\n";
  for (const auto& r : latent) {
    const auto obs = r.observe();
    for (double v : r.x) out << format_double(v) << ',';
    out << format_double(r.t) << ',' << format_double(r.c) << ',' << format_double(obs.t_tilde) << ','
        << (obs.event ? 1 : 0) << '\n';
  }
}

}  // namespace cosarc
