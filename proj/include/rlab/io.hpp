#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rlab {

/// A table of text cells; the first row written is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column, or -1.
  int column(const std::string& name) const;
};

/// Shortest round-trip decimal for a double ("nan", "inf" and "-inf" for non-finite values).
std::string format_number(double v);

/// RFC-4180: CRLF line ends; fields containing a comma, quote or line break
/// are quoted with embedded quotes doubled.
std::string to_csv(const CsvTable& table);
/// Inverse of to_csv; also accepts bare LF line ends. Throws std::runtime_error on malformed quoting.
CsvTable parse_csv(const std::string& text);

/// Both throw std::runtime_error naming the path on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// 800 x 600 line plot with axes and ticks; one polyline per series. Output bytes
/// depend only on the input.
std::string svg_line_plot(const std::vector<Series>& series, const std::string& title = "",
                          const std::string& x_label = "", const std::string& y_label = "");

/// rows x cols grid of cells, row-major values, grayscale linear in value (black = min).
std::string svg_heatmap(int rows, int cols, const std::vector<double>& values, const std::string& title = "");

enum class PlotKind { line, heatmap };

/// Renders a CSV table. line: the first all-numeric column is x, every other
/// all-numeric column is a series. heatmap: columns i, j, value.
/// Throws std::runtime_error when the table does not fit the kind.
std::string plot_csv(const CsvTable& table, PlotKind kind, const std::string& title = "");

}  // namespace rlab
