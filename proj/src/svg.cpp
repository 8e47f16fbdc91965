#include "qca/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qca {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    const double x = log ? std::log10(v) : v;
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    return pix_lo + (x - a) / (b - a) * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e_lo = static_cast<int>(std::floor(std::log10(lo)));
      const int e_hi = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e_lo; e <= e_hi; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) out.push_back(v);
      }
      if (out.size() < 2) {
        out = {lo, hi};
      }
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
      if (mag * m >= raw) {
        step = mag * m;
        break;
      }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-12 * span; v += step) out.push_back(v);
    return out;
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  const double ml = 62, mr = 16, mt = 34, mb = 46;
  const double px0 = ml, px1 = spec.width - mr;
  const double py0 = spec.height - mb, py1 = mt;  // y grows downward in SVG

  Axis xa, ya;
  xa.log = spec.log_x;
  ya.log = spec.log_y;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (spec.log_x && x <= 0) continue;
      if (spec.log_y && y <= 0) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (!(x_lo < x_hi)) {
    x_hi = x_lo + 1;
    x_lo -= 1;
  }
  if (!(y_lo < y_hi)) {
    y_hi = y_lo + (spec.log_y ? y_lo : 1);
    y_lo = spec.log_y ? y_lo / 2 : y_lo - 1;
  }
  if (!spec.log_y) {
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
  }
  xa.lo = x_lo;
  xa.hi = x_hi;
  ya.lo = y_lo;
  ya.hi = y_hi;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << spec.title << "</text>\n";

  // axes frame
  out << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << (px1 - px0)
      << "\" height=\"" << (py0 - py1) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (double tx : xa.ticks()) {
    const double px = xa.map(tx, px0, px1);
    out << "<line x1=\"" << px << "\" y1=\"" << py0 << "\" x2=\"" << px << "\" y2=\"" << py0 + 4
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << py0 + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(tx)
        << "</text>\n";
  }
  for (double ty : ya.ticks()) {
    const double py = ya.map(ty, py0, py1);
    out << "<line x1=\"" << px0 - 4 << "\" y1=\"" << py << "\" x2=\"" << px0 << "\" y2=\"" << py
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << px0 - 7 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(ty)
        << "</text>\n";
  }
  out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << spec.height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << spec.x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (py0 + py1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << (py0 + py1) / 2 << ")\">" << spec.y_label << "</text>\n";

  int color = 0;
  double legend_y = py1 + 14;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 10];
    std::ostringstream pts;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (spec.log_x && x <= 0) continue;
      if (spec.log_y && y <= 0) continue;
      pts << xa.map(x, px0, px1) << ',' << ya.map(y, py0, py1) << ' ';
    }
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    if (!s.label.empty()) {
      out << "<line x1=\"" << px1 - 130 << "\" y1=\"" << legend_y << "\" x2=\"" << px1 - 110
          << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << px1 - 104 << "\" y=\"" << legend_y + 4
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
      legend_y += 16;
    }
    ++color;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qca
