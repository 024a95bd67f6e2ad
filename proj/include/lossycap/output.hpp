#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lossycap::output {

/// A rectangular numeric dataset with provenance comments.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Emitted before the header as '# ' lines.
  std::vector<std::string> comments;
  /// Emitted after the last row as '# ' lines.
  std::vector<std::string> footer;
};

/// Formats with 9 significant digits, '.' decimal point, locale independent.
std::string format_number(double value);

/// Comma-separated, '#' comment lines, 9 significant digits.
void write_csv(std::ostream& out, const Table& table);

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Column used for the x axis; every other column becomes a series.
  std::size_t x_column = 0;
  /// Optional '<!-- generated ... -->' line; empty for byte-stable output.
  std::string timestamp;
};

/// Static polyline chart with axes, ticks and a legend.
void write_svg(std::ostream& out, const Table& table, const PlotSpec& spec);

}  // namespace lossycap::output
