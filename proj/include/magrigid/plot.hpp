// Static SVG renderings of the CSV tables written by the roundtrip command.
// The renderers only read the tables; they compute nothing else.
#ifndef MAGRIGID_PLOT_HPP_
#define MAGRIGID_PLOT_HPP_

#include <string>
#include <vector>

namespace magrigid::plot {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty cells read as NaN

  std::size_t column(const std::string& name) const;
};

/// Comma-separated, one header line. Throws FormatError on ragged rows or
/// non-numeric cells.
Table parse_csv(const std::string& text);

/// Columns u, v, B_true, B_rec on a regular grid: two panels, shared color scale.
std::string heatmap_svg(const Table& table);
/// Column y plus one column per direction.
std::string sprime_svg(const Table& table);
/// Columns K, B_rel_linf, V_rel_linf on log axes.
std::string sweep_svg(const Table& table);

}  // namespace magrigid::plot

#endif  // MAGRIGID_PLOT_HPP_
