#include "rlab/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rlab {

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : int(it - header.begin());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    out += quote(row[i]);
  }
  out += "\r\n";
}

bool parse_double(const std::string& s, double& v) {
  if (s == "nan") {
    v = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  if (s == "inf" || s == "-inf") {
    v = s[0] == '-' ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    return true;
  }
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  return !s.empty() && res.ec == std::errc() && res.ptr == end;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) append_row(out, row);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  std::size_t i = 0;
  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        cell += ch;
      }
      ++i;
      continue;
    }
    if (ch == '"') {
      if (cell_started) throw std::runtime_error("csv: quote inside an unquoted field");
      quoted = true;
      cell_started = true;
    } else if (ch == ',') {
      end_cell();
    } else if (ch == '\r' || ch == '\n') {
      end_cell();
      records.push_back(std::move(row));
      row.clear();
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      cell += ch;
      cell_started = true;
    }
    ++i;
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (cell_started || !row.empty()) {
    end_cell();
    records.push_back(std::move(row));
  }
  CsvTable t;
  if (records.empty()) return t;
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size()) {
      throw std::runtime_error(fmt::format("csv: record {} has {} fields, header has {}", r + 1, records[r].size(),
                                           t.header.size()));
    }
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      kWidth, kHeight);
  if (!title.empty()) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                     "font-size=\"18\">{}</text>\n",
                     kWidth / 2.0, escape(title));
  }
  return s;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) return {lo - 0.5, hi + 0.5};
  return {lo, hi};
}

std::string tick_label(double v) { return escape(fmt::format("{:.4g}", v)); }

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  double ylo = xlo;
  double yhi = -xlo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  const Range xr = padded(xlo, xhi);
  const Range yr = padded(ylo, yhi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string s = header(title);
  s += fmt::format("<g stroke=\"black\" stroke-width=\"1\">\n<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" "
                   "y2=\"{1:.2f}\"/>\n<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{3:.2f}\"/>\n",
                   kLeft, kTop + ph, kLeft + pw, kTop);
  constexpr int kTicks = 5;
  for (int k = 0; k < kTicks; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / (kTicks - 1);
    const double fy = yr.lo + (yr.hi - yr.lo) * k / (kTicks - 1);
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n", px(fx), kTop + ph,
                     kTop + ph + 5.0);
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n", kLeft - 5.0, py(fy),
                     kLeft);
  }
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int k = 0; k < kTicks; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / (kTicks - 1);
    const double fy = yr.lo + (yr.hi - yr.lo) * k / (kTicks - 1);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", px(fx), kTop + ph + 20.0,
                     tick_label(fx));
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 8.0, py(fy) + 4.0,
                     tick_label(fy));
  }
  if (!x_label.empty()) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2.0,
                     kHeight - 15.0, escape(x_label));
  }
  if (!y_label.empty()) {
    s += fmt::format("<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}"
                     "</text>\n",
                     kTop + ph / 2.0, escape(y_label));
  }
  s += "</g>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < std::min(sr.x.size(), sr.y.size()); ++i) {
      if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(sr.x[i]), py(sr.y[i]));
    }
    if (!pts.empty()) {
      s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
    }
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}"
                     "</text>\n",
                     kLeft + pw - 150.0, kTop + 15.0 + 15.0 * double(k), color, escape(sr.name));
  }
  s += "</svg>\n";
  return s;
}

std::string svg_heatmap(int rows, int cols, const std::vector<double>& values, const std::string& title) {
  if (rows < 0 || cols < 0 || values.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("heatmap: value count does not match rows x cols");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  std::string s = header(title);
  s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
                   "stroke=\"black\"/>\n",
                   kLeft, kTop, pw, ph);
  if (rows > 0 && cols > 0) {
    const double cw = pw / cols;
    const double ch = ph / rows;
    s += "<g shape-rendering=\"crispEdges\">\n";
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double v = values[static_cast<std::size_t>(i) * cols + j];
        int level = 0;
        if (std::isfinite(v) && hi > lo) level = int(std::lround(255.0 * (v - lo) / (hi - lo)));
        // Row i is drawn bottom-up so that the second index grows upward.
        s += fmt::format("<rect x=\"{0:.2f}\" y=\"{1:.2f}\" width=\"{2:.2f}\" height=\"{3:.2f}\" "
                         "fill=\"rgb({4},{4},{4})\"/>\n",
                         kLeft + i * cw, kTop + ph - (j + 1) * ch, cw, ch, level);
      }
    }
    s += "</g>\n";
  }
  s += fmt::format("<g font-family=\"sans-serif\" font-size=\"12\">\n<text x=\"{:.2f}\" y=\"{:.2f}\">min {}</text>\n"
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">max {}</text>\n</g>\n",
                   kLeft, kHeight - 20.0, tick_label(std::isfinite(lo) ? lo : 0.0), kLeft + pw, kHeight - 20.0,
                   tick_label(std::isfinite(hi) ? hi : 0.0));
  s += "</svg>\n";
  return s;
}

std::string plot_csv(const CsvTable& table, PlotKind kind, const std::string& title) {
  std::vector<std::vector<double>> numeric(table.header.size());
  std::vector<bool> is_numeric(table.header.size(), true);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    for (const auto& row : table.rows) {
      double v = 0.0;
      if (!parse_double(row[c], v)) {
        is_numeric[c] = false;
        break;
      }
      numeric[c].push_back(v);
    }
  }
  if (kind == PlotKind::line) {
    const auto xc = std::find(is_numeric.begin(), is_numeric.end(), true);
    if (xc == is_numeric.end()) throw std::runtime_error("plot: no numeric column");
    const std::size_t x = std::size_t(xc - is_numeric.begin());
    std::vector<Series> series;
    for (std::size_t c = x + 1; c < table.header.size(); ++c) {
      if (is_numeric[c]) series.push_back({table.header[c], numeric[x], numeric[c]});
    }
    return svg_line_plot(series, title, table.header[x], "");
  }
  const int ci = table.column("i");
  const int cj = table.column("j");
  const int cv = table.column("value");
  if (ci < 0 || cj < 0 || cv < 0 || !is_numeric[ci] || !is_numeric[cj] || !is_numeric[cv]) {
    throw std::runtime_error("plot: heatmap needs numeric columns i, j, value");
  }
  int rows = 0;
  int cols = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double i = numeric[ci][r];
    const double j = numeric[cj][r];
    if (i < 0 || j < 0 || i != std::floor(i) || j != std::floor(j)) {
      throw std::runtime_error("plot: heatmap indices must be non-negative integers");
    }
    rows = std::max(rows, int(i) + 1);
    cols = std::max(cols, int(j) + 1);
  }
  std::vector<double> values(static_cast<std::size_t>(rows) * cols, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    values[static_cast<std::size_t>(numeric[ci][r]) * cols + static_cast<std::size_t>(numeric[cj][r])] =
        numeric[cv][r];
  }
  return svg_heatmap(rows, cols, values, title);
}

}  // namespace rlab
