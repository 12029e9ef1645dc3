#pragma once

// CSV tables and SVG line plots, rendered locally.

#include "blattice/json_io.hpp"

namespace blattice::report {

inline std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void add(std::initializer_list<double> values) {
    std::vector<std::string> row;
    for (double v : values) row.push_back(fmt12(v));
    rows.push_back(std::move(row));
  }
};

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.headers.size(); ++i) out += (i ? "," : "") + csv_cell(t.headers[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline Table kcurve_table(const KCurve& c) {
  Table t{{"t", "K"}, {}};
  for (std::size_t i = 0; i < c.t.size(); ++i) t.add({c.t[i], c.values[i]});
  return t;
}

/// Growth table with log-log columns and the fitted slope repeated per row.
inline Table growth_table(const std::vector<CurvePoint>& curve, double slope) {
  Table t{{"n", "constant", "log_n", "log_constant", "slope"}, {}};
  for (const auto& p : curve) {
    const double n = static_cast<double>(p.n);
    t.add({n, p.value, std::log(n), std::log(p.value), slope});
  }
  return t;
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = true;
  bool log_y = true;
  int width = 640;
  int height = 420;
};

namespace detail {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string svg_plot(const std::vector<Series>& series, const PlotOptions& opt = {}) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opt.log_x || x > 0.0) && (!opt.log_y || y > 0.0);
  };
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x1 >= x0)) x0 = 0.0, x1 = 1.0;
  if (!(y1 >= y0)) y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double L = 70, R = 20, T = 40, B = 50;
  const double W = opt.width - L - R, H = opt.height - T - B;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * W; };
  auto py = [&](double v) { return T + H - (ty(v) - y0) / (y1 - y0) * H; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
                    "\" height=\"" + std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + detail::coord(opt.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         detail::escape(opt.title) + "</text>\n";
  out += "<rect x=\"" + detail::coord(L) + "\" y=\"" + detail::coord(T) + "\" width=\"" + detail::coord(W) +
         "\" height=\"" + detail::coord(H) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double gx = L + W * i / 4.0, gy = T + H - H * i / 4.0;
    out += "<text x=\"" + detail::coord(gx) + "\" y=\"" + detail::coord(T + H + 16) + "\" text-anchor=\"middle\">" +
           fmt12(opt.log_x ? std::pow(10.0, fx) : fx).substr(0, 8) + "</text>\n";
    out += "<text x=\"" + detail::coord(L - 6) + "\" y=\"" + detail::coord(gy + 4) + "\" text-anchor=\"end\">" +
           fmt12(opt.log_y ? std::pow(10.0, fy) : fy).substr(0, 8) + "</text>\n";
  }
  out += "<text x=\"" + detail::coord(L + W / 2) + "\" y=\"" + detail::coord(opt.height - 12.0) +
         "\" text-anchor=\"middle\">" + detail::escape(opt.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + detail::coord(T + H / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         detail::coord(T + H / 2) + ")\">" + detail::escape(opt.y_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      pts += detail::coord(px(s.x[i])) + "," + detail::coord(py(s.y[i])) + " ";
    }
    if (!pts.empty()) pts.pop_back();
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
    out += "<text x=\"" + detail::coord(L + 8) + "\" y=\"" + detail::coord(T + 16 + 14.0 * k) + "\" fill=\"" + color +
           "\">" + detail::escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::string kcurve_svg(const KCurve& c, const std::string& title) {
  return svg_plot({{"K(t)", c.t, c.values}}, {title, "t", "K(t)"});
}

inline std::string growth_svg(const std::vector<CurvePoint>& curve, const std::string& title) {
  Series s{"empirical constant", {}, {}};
  for (const auto& p : curve) {
    s.x.push_back(static_cast<double>(p.n));
    s.y.push_back(p.value);
  }
  return svg_plot({s}, {title, "n", "constant"});
}

}  // namespace blattice::report
