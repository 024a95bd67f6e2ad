#include "lossycap/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace lossycap::output {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#7f7f7f"};

// "--" may not appear inside an XML comment.
std::string comment_safe(std::string text) {
  for (auto pos = text.find("--"); pos != std::string::npos; pos = text.find("--", pos)) text[pos + 1] = ' ';
  return text;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string coord(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

// 1, 2 or 5 times a power of ten, giving about five ticks over [lo, hi].
double tick_step(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * magnitude >= raw) return m * magnitude;
  }
  return 10.0 * magnitude;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& line : table.comments) out << "# " << line << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  for (const auto& line : table.footer) out << "# " << line << '\n';
}

void write_svg(std::ostream& out, const Table& table, const PlotSpec& spec) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) continue;
      if (c == spec.x_column) {
        x_lo = std::min(x_lo, row[c]);
        x_hi = std::max(x_hi, row[c]);
      } else {
        y_lo = std::min(y_lo, row[c]);
        y_hi = std::max(y_hi, row[c]);
      }
    }
  }
  if (!(x_lo < x_hi)) {
    x_lo = std::isfinite(x_lo) ? x_lo - 1.0 : 0.0;
    x_hi = x_lo + 2.0;
  }
  if (!(y_lo < y_hi)) {
    y_lo = std::isfinite(y_lo) ? y_lo - 1.0 : 0.0;
    y_hi = y_lo + 2.0;
  }
  const double y_step = tick_step(y_lo, y_hi);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;
  const double x_step = tick_step(x_lo, x_hi);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!table.comments.empty()) {
    out << "<!--\n";
    for (const auto& line : table.comments) out << "  " << comment_safe(line) << '\n';
    out << "-->\n";
  }
  if (!spec.timestamp.empty()) out << "<!-- generated " << escape_xml(spec.timestamp) << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape_xml(spec.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\"" << coord(kLeft + plot_w)
      << "\" y2=\"" << coord(kTop + plot_h) << "\"/>\n";
  out << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop) << "\" x2=\"" << coord(kLeft)
      << "\" y2=\"" << coord(kTop + plot_h) << "\"/>\n";
  out << "</g>\n<g font-size=\"11\">\n";
  for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + 1e-9 * x_step; x += x_step) {
    out << "<line x1=\"" << coord(px(x)) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\"" << coord(px(x))
        << "\" y2=\"" << coord(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(px(x)) << "\" y=\"" << coord(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << format_number(std::abs(x) < 1e-12 * x_step ? 0.0 : x) << "</text>\n";
  }
  for (double y = y_lo; y <= y_hi + 1e-9 * y_step; y += y_step) {
    out << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(py(y)) << "\" x2=\"" << coord(kLeft)
        << "\" y2=\"" << coord(py(y)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(py(y) + 4) << "\" text-anchor=\"end\">"
        << format_number(std::abs(y) < 1e-12 * y_step ? 0.0 : y) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape_xml(spec.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << coord(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(spec.y_label) << "</text>\n";

  // Series and legend.
  std::size_t series = 0;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c == spec.x_column) continue;
    const char* colour = kPalette[series % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : table.rows) {
      if (c >= row.size() || !std::isfinite(row[c]) || !std::isfinite(row[spec.x_column])) continue;
      out << (first ? "" : " ") << coord(px(row[spec.x_column])) << ',' << coord(py(row[c]));
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(series);
    out << "<line x1=\"" << coord(kWidth - kRight + 15) << "\" y1=\"" << coord(ly) << "\" x2=\""
        << coord(kWidth - kRight + 40) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << coord(kWidth - kRight + 45) << "\" y=\"" << coord(ly + 4) << "\">"
        << escape_xml(table.columns[c]) << "</text>\n";
    ++series;
  }
  out << "</svg>\n";
}

}  // namespace lossycap::output
