#include "magrigid/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "magrigid/errors.hpp"

namespace magrigid::plot {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Blue (low) through white to red (high), t in [0, 1].
std::string diverging(double t) {
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;
    r = static_cast<int>(std::lround(33 + s * (255 - 33)));
    g = static_cast<int>(std::lround(102 + s * (255 - 102)));
    b = static_cast<int>(std::lround(172 + s * (255 - 172)));
  } else {
    const double s = (t - 0.5) / 0.5;
    r = static_cast<int>(std::lround(255 - s * (255 - 178)));
    g = static_cast<int>(std::lround(255 - s * (255 - 24)));
    b = static_cast<int>(std::lround(255 - s * (255 - 43)));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string open_svg(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" "
         "fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + s +
         "</text>\n";
}

struct Frame {
  double left, top, width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel,
                 const std::vector<std::pair<double, std::string>>& xticks,
                 const std::vector<std::pair<double, std::string>>& yticks) {
  std::string s = "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) +
                  "\" height=\"" + num(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& [x, t] : xticks) {
    s += "<line x1=\"" + num(f.px(x)) + "\" y1=\"" + num(f.top + f.height) + "\" x2=\"" + num(f.px(x)) +
         "\" y2=\"" + num(f.top + f.height + 5) + "\" stroke=\"black\"/>\n";
    s += text(f.px(x), f.top + f.height + 18, t);
  }
  for (const auto& [y, t] : yticks) {
    s += "<line x1=\"" + num(f.left - 5) + "\" y1=\"" + num(f.py(y)) + "\" x2=\"" + num(f.left) +
         "\" y2=\"" + num(f.py(y)) + "\" stroke=\"black\"/>\n";
    s += text(f.left - 8, f.py(y) + 4, t, "end");
  }
  s += text(f.left + f.width / 2, f.top + f.height + 36, xlabel);
  s += "<text x=\"" + num(f.left - 50) + "\" y=\"" + num(f.top + f.height / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(f.left - 50) + " " +
       num(f.top + f.height / 2) + ")\">" + ylabel + "</text>\n";
  return s;
}

std::vector<std::pair<double, std::string>> linear_ticks(double lo, double hi, int count) {
  std::vector<std::pair<double, std::string>> out;
  for (int i = 0; i <= count; ++i) {
    const double v = lo + (hi - lo) * i / count;
    out.emplace_back(v, label(v));
  }
  return out;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw FormatError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

Table parse_csv(const std::string& text_in) {
  std::istringstream is(text_in);
  std::string line;
  Table t;
  if (!std::getline(is, line)) throw FormatError("empty table");
  t.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw FormatError("table line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(t.header.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c.empty()) {
        row.push_back(kNaN);
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw FormatError("table line " + std::to_string(lineno) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string heatmap_svg(const Table& table) {
  const std::size_t cu = table.column("u"), cv = table.column("v");
  const std::size_t ct = table.column("B_true"), cr = table.column("B_rec");
  const auto n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(table.rows.size()))));
  if (n == 0 || n * n != table.rows.size()) throw FormatError("heatmap table is not a square grid");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : table.rows) {
    lo = std::min({lo, r[ct], r[cr]});
    hi = std::max({hi, r[ct], r[cr]});
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double panel = 300.0, cell = panel / static_cast<double>(n);
  std::string s = open_svg(2 * panel + 200, panel + 90);
  const char* titles[] = {"B (true)", "B (reconstructed)"};
  for (int p = 0; p < 2; ++p) {
    const double left = 40 + p * (panel + 40);
    s += text(left + panel / 2, 25, titles[p]);
    for (const auto& r : table.rows) {
      const double x = left + r[cu] * panel;
      const double y = 40 + panel - (r[cv] * panel + cell);
      s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell + 0.3) + "\" height=\"" +
           num(cell + 0.3) + "\" fill=\"" + diverging((r[p == 0 ? ct : cr] - lo) / (hi - lo)) + "\"/>\n";
    }
    s += text(left + panel / 2, 40 + panel + 20, "lattice coordinates (u, v) in [0,1)^2");
  }
  const double bar = 2 * panel + 100;
  for (int i = 0; i < 50; ++i) {
    s += "<rect x=\"" + num(bar) + "\" y=\"" + num(40 + panel - (i + 1) * panel / 50) + "\" width=\"20\" height=\"" +
         num(panel / 50 + 0.3) + "\" fill=\"" + diverging((i + 0.5) / 50) + "\"/>\n";
  }
  s += text(bar + 26, 40 + panel, label(lo), "start");
  s += text(bar + 26, 48, label(hi), "start");
  s += "</svg>\n";
  return s;
}

std::string sprime_svg(const Table& table) {
  const std::size_t cy = table.column("y");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == cy || std::isnan(r[c])) continue;
      lo = std::min(lo, r[c]);
      hi = std::max(hi, r[c]);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const Frame f{80, 30, 520, 320, 0.0, 1.0, lo, hi};
  std::string s = open_svg(800, 410);
  s += text(f.left + f.width / 2, 20, "s'(y) per direction");
  s += axes(f, "y", "s'(y)", linear_ticks(0.0, 1.0, 4), linear_ticks(lo, hi, 4));
  std::size_t series = 0;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == cy) continue;
    const char* color = kPalette[series % std::size(kPalette)];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\" points=\"";
    for (const auto& r : table.rows) s += num(f.px(r[cy])) + "," + num(f.py(r[c])) + " ";
    s += "\"/>\n";
    if (series < 20) {
      const double ly = 40 + 16.0 * static_cast<double>(series);
      s += "<line x1=\"620\" y1=\"" + num(ly) + "\" x2=\"640\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
      s += text(646, ly + 4, table.header[c], "start");
    }
    ++series;
  }
  s += "</svg>\n";
  return s;
}

std::string sweep_svg(const Table& table) {
  const std::size_t ck = table.column("K");
  const std::size_t cols[] = {table.column("B_rel_linf"), table.column("V_rel_linf")};
  const char* names[] = {"B relative Linf error", "V relative Linf error"};
  constexpr double kFloor = 1e-17;
  double kmin = INFINITY, kmax = -INFINITY, emin = INFINITY, emax = -INFINITY;
  for (const auto& r : table.rows) {
    kmin = std::min(kmin, r[ck]);
    kmax = std::max(kmax, r[ck]);
    for (const auto c : cols) {
      if (std::isnan(r[c])) continue;
      const double e = std::log10(std::max(r[c], kFloor));
      emin = std::min(emin, e);
      emax = std::max(emax, e);
    }
  }
  if (table.rows.empty() || !(kmax > 0)) throw FormatError("sweep table is empty");
  const double x0 = std::log2(kmin) - 0.25, x1 = std::log2(kmax) + 0.25;
  emin = std::floor(emin);
  emax = std::ceil(emax);
  if (!(emax > emin)) emax = emin + 1;
  const Frame f{80, 30, 520, 320, x0, x1, emin, emax};
  std::vector<std::pair<double, std::string>> xt, yt;
  for (const auto& r : table.rows) xt.emplace_back(std::log2(r[ck]), label(r[ck]));
  for (double e = emin; e <= emax; e += std::max(1.0, std::ceil((emax - emin) / 8))) {
    yt.emplace_back(e, "1e" + label(e));
  }
  std::string s = open_svg(820, 410);
  s += text(f.left + f.width / 2, 20, "reconstruction error vs K");
  s += axes(f, "K (harmonics used)", "log10 error", xt, yt);
  for (int i = 0; i < 2; ++i) {
    const char* color = kPalette[i];
    std::string pts;
    for (const auto& r : table.rows) {
      if (std::isnan(r[cols[i]])) continue;
      const double x = f.px(std::log2(r[ck])), y = f.py(std::log10(std::max(r[cols[i]], kFloor)));
      pts += num(x) + "," + num(y) + " ";
      s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"" + pts + "\"/>\n";
    const double ly = 40 + 16.0 * i;
    s += "<line x1=\"620\" y1=\"" + num(ly) + "\" x2=\"640\" y2=\"" + num(ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += text(646, ly + 4, names[i], "start");
  }
  s += "</svg>\n";
  return s;
}

}  // namespace magrigid::plot
