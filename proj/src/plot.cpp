#include "rminmax/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rminmax {

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kNumColors = 8;

double axis_value(const TraceRow& r, RateAxis axis) {
  switch (axis) {
    case RateAxis::Iter:
      return static_cast<double>(r.iter);
    case RateAxis::GradCalls:
      return static_cast<double>(r.grad_calls);
    case RateAxis::ProjCalls:
      return static_cast<double>(r.proj_calls);
  }
  return 0.0;
}

double y_value(const TraceRow& r, RateValue value) {
  switch (value) {
    case RateValue::Value:
      return r.value;
    case RateValue::GapUpper:
      return r.gap_upper;
    case RateValue::DistSq:
      return r.dist_sq;
  }
  return 0.0;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_convergence_svg(const std::vector<PlotSeries>& series,
                                   const PlotOptions& opt) {
  struct Pt {
    double x, y;
  };
  std::vector<std::vector<Pt>> lines;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    std::vector<Pt> pts;
    if (s.trace) {
      for (const TraceRow& r : s.trace->rows) {
        double x = axis_value(r, s.axis);
        double y = y_value(r, s.value);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if (opt.log_y && !(y > 0.0)) continue;
        double yy = opt.log_y ? std::log10(y) : y;
        pts.push_back({x, yy});
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, yy);
        ymax = std::max(ymax, yy);
      }
    }
    lines.push_back(std::move(pts));
  }
  bool have_data = std::isfinite(xmin) && std::isfinite(ymin);
  if (!have_data) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

  const double ml = 64, mr = 16, mt = 32, mb = 44;
  const double W = opt.width, H = opt.height;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width
      << " " << opt.height << "\">\n";
  out << "<rect width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">"
      << escape_xml(opt.title) << "</text>\n";

  // Frame and gridlines with tick labels.
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#404040\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    double fx = xmin + (xmax - xmin) * i / nticks;
    double fy = ymin + (ymax - ymin) * i / nticks;
    double px = sx(fx), py = sy(fy);
    out << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px
        << "\" y2=\"" << mt + ph << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << py << "\" x2=\"" << ml + pw
        << "\" y2=\"" << py << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"10\">" << fmt(fx) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py + 3
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"10\">"
        << (opt.log_y ? "1e" + fmt(fy) : fmt(fy)) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << escape_xml(opt.x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\" transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">"
      << escape_xml(opt.y_label) << "</text>\n";

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const char* color = kColors[i % kNumColors];
    if (!lines[i].empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.6\" points=\"";
      for (const Pt& p : lines[i]) {
        out << fmt(sx(p.x)) << "," << fmt(sy(p.y)) << " ";
      }
      out << "\"/>\n";
    }
    double ly = mt + 14 + 16 * static_cast<double>(i);
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.6\"/>\n";
    out << "<text x=\"" << ml + pw - 120 << "\" y=\"" << ly + 3
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape_xml(series[i].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_convergence_svg(const std::vector<PlotSeries>& series,
                           const PlotOptions& opt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot write '" + path + "'");
  out << render_convergence_svg(series, opt);
}

}  // namespace rminmax
