#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "emptyspot/graph.hpp"

namespace emptyspot::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool step = false;  // step line instead of markers
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Minimal static SVG: frame, ticks at both ends of each axis, legend, and
// per series either circle markers or a step line.
inline void render_svg(std::ostream& os, const Figure& fig) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#7f7f7f", "#9467bd"};

  auto tx = [&](double v) { return fig.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return fig.log_y ? std::log10(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : fig.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((fig.log_x && s.x[i] <= 0) || (fig.log_y && s.y[i] <= 0)) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x0 == x1) x1 = x0 + 1;
  if (y0 == y1) y1 = y0 + 1;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + ph - (ty(v) - y0) / (y1 - y0) * ph; };
  auto untx = [&](double t) { return fig.log_x ? std::pow(10.0, t) : t; };
  auto unty = [&](double t) { return fig.log_y ? std::pow(10.0, t) : t; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << detail::escape(fig.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
     << detail::num(untx(x0)) << "</text>\n";
  os << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
     << detail::num(untx(x1)) << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">"
     << detail::num(unty(y0)) << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
     << detail::num(unty(y1)) << "</text>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">"
     << detail::escape(fig.x_label) << (fig.log_x ? " (log)" : "") << "</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << kTop + ph / 2 << ")\">" << detail::escape(fig.y_label) << (fig.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < fig.series.size(); ++k) {
    const auto& s = fig.series[k];
    const char* color = kColors[k % 5];
    if (s.step) {
      os << "<path fill=\"none\" stroke=\"" << color << "\" d=\"";
      bool first = true;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if ((fig.log_x && s.x[i] <= 0) || (fig.log_y && s.y[i] <= 0)) continue;
        if (first) {
          os << 'M' << detail::num(px(s.x[i])) << ',' << detail::num(py(s.y[i]));
          first = false;
        } else {
          os << " H" << detail::num(px(s.x[i])) << " V" << detail::num(py(s.y[i]));
        }
      }
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if ((fig.log_x && s.x[i] <= 0) || (fig.log_y && s.y[i] <= 0)) continue;
        os << "<circle cx=\"" << detail::num(px(s.x[i])) << "\" cy=\"" << detail::num(py(s.y[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    os << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << kTop + 16 + 16 * static_cast<double>(k)
       << "\" text-anchor=\"end\" fill=\"" << color << "\">" << detail::escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

// Occurrence probability P(d) against normalized degree d / mu(d).
inline Series degree_distribution_series(const DegreeSummary& s, std::size_t node_count,
                                         const std::string& label) {
  Series out{label, {}, {}, false};
  for (auto [d, count] : s.histogram) {
    if (d == 0) continue;
    out.x.push_back(static_cast<double>(d) / s.mean);
    out.y.push_back(static_cast<double>(count) / static_cast<double>(node_count));
  }
  return out;
}

inline void save_degree_csv(std::ostream& os, const DegreeSummary& s, std::size_t node_count) {
  os << "degree,count,probability,normalized_degree\n";
  for (auto [d, count] : s.histogram) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g\n", d, count,
                  static_cast<double>(count) / static_cast<double>(node_count),
                  static_cast<double>(d) / s.mean);
    os << buf;
  }
}

}  // namespace emptyspot::plot
