#include "bforest/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bforest/errors.hpp"

namespace bforest {

namespace {

std::vector<std::string> split_row_impl(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw IoError(source + ":" + std::to_string(line) + ": cannot parse number '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) { return split_row_impl(line); }

std::vector<double> TimeSeriesTable::channel(std::size_t k) const {
  std::vector<double> values;
  values.reserve(frames.size());
  for (const auto& f : frames) values.push_back(f.y.at(k));
  return values;
}

TimeSeriesTable read_timeseries(std::istream& in, const std::string& source) {
  TimeSeriesTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split_row_impl(line);
    if (!have_header) {
      if (cells.size() < 2) throw IoError(source + ": header needs a timestamp and at least one channel");
      table.channel_names.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != table.channel_names.size() + 1) {
      throw FrameError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.channel_names.size() + 1) + " columns, got " +
                       std::to_string(cells.size()));
    }
    SampleFrame frame;
    frame.t = parse_number(cells[0], source, line_no);
    frame.y.reserve(cells.size() - 1);
    for (std::size_t k = 1; k < cells.size(); ++k) frame.y.push_back(parse_number(cells[k], source, line_no));
    table.frames.push_back(std::move(frame));
  }
  if (!have_header) throw IoError(source + ": missing header row");
  return table;
}

TimeSeriesTable read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_timeseries(in, path.string());
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_timeseries(std::ostream& out, const std::vector<std::string>& channel_names,
                      const std::vector<SampleFrame>& frames) {
  out << "t";
  for (const auto& name : channel_names) out << ',' << name;
  out << '\n';
  for (const auto& frame : frames) {
    out << format_number(frame.t);
    for (double v : frame.y) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_timeseries(const std::filesystem::path& path, const std::vector<std::string>& channel_names,
                      const std::vector<SampleFrame>& frames) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_timeseries(out, channel_names, frames);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace bforest
