#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrb::cli {

/// Output file could not be produced.
class output_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header plus rows of numbers, written with 12 significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string label_column;         // optional leading text column
  std::vector<std::string> labels;  // one per row when label_column is set

  Table() = default;
  explicit Table(std::vector<std::string> cols, std::string label = {})
      : columns(std::move(cols)), label_column(std::move(label)) {}

  void add(std::vector<double> row) {
    if (row.size() != columns.size()) throw output_error("table row has the wrong number of columns");
    rows.push_back(std::move(row));
  }
};

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string to_csv(const Table& t) {
  const bool lab = !t.label_column.empty();
  if (lab && t.labels.size() != t.rows.size()) throw output_error("table labels do not match rows");
  std::string s = lab ? t.label_column : "";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i || lab ? "," : "") + t.columns[i];
  s += '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (lab) s += t.labels[r];
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
      if (i || lab) s += ',';
      s += format_number(t.rows[r][i]);
    }
    s += '\n';
  }
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw output_error("cannot write " + path);
  out << content;
  if (!out) throw output_error("write failed for " + path);
}

inline void emit_csv(const Table& t, const std::string& path) {
  if (t.rows.empty()) throw output_error("no results to write to " + path);
  write_file(path, to_csv(t));
}

/// Reads back a file produced by emit_csv.
inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return t;
  std::stringstream hs(line);
  for (std::string c; std::getline(hs, c, ',');) t.columns.push_back(c);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) row.push_back(std::stod(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool envelope = false;  // drawn dashed
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<Series> series;
};

/// Static SVG with a logarithmic y axis; one polyline per series.
/// Points with y <= 0 cannot be placed on the log axis and are skipped.
inline std::string to_svg(const Plot& p) {
  const double W = 800, H = 500, ml = 80, mr = 160, mt = 40, mb = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]); x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, std::log10(s.y[i])); y1 = std::max(y1, std::log10(s.y[i]));
    }
  if (!(x1 >= x0)) { x0 = 0; x1 = 1; y0 = -1; y1 = 0; }
  if (x1 == x0) x1 = x0 + 1;
  y0 = std::floor(y0); y1 = std::ceil(y1);
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double ly) { return H - mb - (ly - y0) / (y1 - y0) * (H - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << p.title << "</text>\n";
  o << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  const int decades = static_cast<int>(y1 - y0);
  const int stride = std::max(1, decades / 8);
  for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += stride)
    o << "<text x=\"" << ml - 8 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = x0 + (x1 - x0) * k / 4;
    o << "<text x=\"" << px(x) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << format_number(x) << "</text>\n";
  }
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">" << p.xlabel << "</text>\n";
  o << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << H / 2 << ")\">"
    << p.ylabel << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* col = colors[k % 8];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\""
      << (s.envelope ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      o << (first ? "" : " ") << format_number(px(s.x[i])) << "," << format_number(py(std::log10(s.y[i])));
      first = false;
    }
    o << "\"/>\n";
    o << "<text x=\"" << W - mr + 10 << "\" y=\"" << mt + 16 * (k + 1) << "\" font-size=\"11\" fill=\"" << col << "\">"
      << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline void emit_svg(const Plot& p, const std::string& path) {
  if (p.series.empty()) throw output_error("no series to plot into " + path);
  write_file(path, to_svg(p));
}

}  // namespace lrb::cli
