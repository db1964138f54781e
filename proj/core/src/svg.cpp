#include "rotcic/svg.hpp"

#include "rotcic/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace rotcic {
namespace {

constexpr double kPanel = 320.0;
constexpr double kMargin = 40.0;

std::string escape(const std::string& s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterPanel>& panels, const std::string& x_label,
                        const std::string& y_label) {
  if (panels.empty()) throw InvalidInput("scatter_svg: no panels");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const ScatterPanel& p : panels) {
    if (p.points.cols() != 2) throw InvalidInput("scatter_svg: panels must be two-dimensional");
    if (p.points.rows() == 0) continue;
    xmin = std::min(xmin, p.points.col(0).minCoeff());
    xmax = std::max(xmax, p.points.col(0).maxCoeff());
    ymin = std::min(ymin, p.points.col(1).minCoeff());
    ymax = std::max(ymax, p.points.col(1).maxCoeff());
  }
  if (!std::isfinite(xmin)) xmin = ymin = 0.0, xmax = ymax = 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double width = static_cast<double>(panels.size()) * (kPanel + kMargin) + kMargin;
  const double height = kPanel + 2.5 * kMargin;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                    "\" height=\"" + num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const ScatterPanel& p = panels[k];
    const double x0 = kMargin + static_cast<double>(k) * (kPanel + kMargin);
    const double y0 = 1.5 * kMargin;
    svg += "<g>\n<text x=\"" + num(x0 + kPanel / 2) + "\" y=\"" + num(y0 - 8) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + escape(p.title) + "</text>\n";
    svg += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(kPanel) +
           "\" height=\"" + num(kPanel) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(x0) + "\" y=\"" + num(y0 + kPanel + 14) + "\">" + tick(xmin) + "</text>\n";
    svg += "<text x=\"" + num(x0 + kPanel) + "\" y=\"" + num(y0 + kPanel + 14) +
           "\" text-anchor=\"end\">" + tick(xmax) + "</text>\n";
    svg += "<text x=\"" + num(x0 + kPanel / 2) + "\" y=\"" + num(y0 + kPanel + 28) +
           "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
    svg += "<text x=\"" + num(x0 - 4) + "\" y=\"" + num(y0 + kPanel) + "\" text-anchor=\"end\">" +
           tick(ymin) + "</text>\n";
    svg += "<text x=\"" + num(x0 - 4) + "\" y=\"" + num(y0 + 10) + "\" text-anchor=\"end\">" +
           tick(ymax) + "</text>\n";
    if (k == 0) {
      svg += "<text transform=\"translate(" + num(x0 - 28) + "," + num(y0 + kPanel / 2) +
             ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
    }
    svg += "<g fill=\"" + escape(p.color) + "\" fill-opacity=\"0.5\">\n";
    for (Eigen::Index i = 0; i < p.points.rows(); ++i) {
      const double px = x0 + (p.points(i, 0) - xmin) / (xmax - xmin) * kPanel;
      const double py = y0 + kPanel - (p.points(i, 1) - ymin) / (ymax - ymin) * kPanel;
      svg += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) + "\" r=\"1.6\"/>\n";
    }
    svg += "</g>\n</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_scatter_svg(const std::filesystem::path& path, const std::vector<ScatterPanel>& panels,
                       const std::string& x_label, const std::string& y_label) {
  const std::string svg = scatter_svg(panels, x_label, y_label);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << svg;
}

}  // namespace rotcic
