#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bforest/types.hpp"

namespace bforest {

// Delimited text with a header row; first column is the timestamp, the rest
// are channels.
struct TimeSeriesTable {
  std::vector<std::string> channel_names;
  std::vector<SampleFrame> frames;

  std::size_t dims() const { return channel_names.size(); }
  std::vector<double> channel(std::size_t k) const;
};

TimeSeriesTable read_timeseries(std::istream& in, const std::string& source = "<stream>");
TimeSeriesTable read_timeseries(const std::filesystem::path& path);

void write_timeseries(std::ostream& out, const std::vector<std::string>& channel_names,
                      const std::vector<SampleFrame>& frames);
void write_timeseries(const std::filesystem::path& path,
                      const std::vector<std::string>& channel_names,
                      const std::vector<SampleFrame>& frames);

// Splits one comma-delimited line, trimming blanks around cells.
std::vector<std::string> split_csv_line(const std::string& line);

// Shortest round-trippable decimal representation.
std::string format_number(double value);

}  // namespace bforest
