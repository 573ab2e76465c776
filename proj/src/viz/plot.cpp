#include "viz/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "core/error.hpp"

namespace argviz {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

// Data → pixel map. The data bounding box is scaled uniformly to fit the
// margin-inset viewport and centred in it; a zero extent maps to the centre line.
struct ViewportMap {
  double data_cx = 0.0, data_cy = 0.0;
  double view_cx = 0.0, view_cy = 0.0;
  double scale = 0.0;

  ViewportMap(const Matrix& points, const PlotSpec& spec) {
    double x_min = points(0, 0), x_max = x_min;
    double y_min = points(0, 1), y_max = y_min;
    for (std::size_t i = 1; i < points.rows(); ++i) {
      x_min = std::min(x_min, points(i, 0));
      x_max = std::max(x_max, points(i, 0));
      y_min = std::min(y_min, points(i, 1));
      y_max = std::max(y_max, points(i, 1));
    }
    data_cx = 0.5 * (x_min + x_max);
    data_cy = 0.5 * (y_min + y_max);
    view_cx = 0.5 * spec.width;
    view_cy = 0.5 * spec.height;
    const double view_w = spec.width - 2.0 * spec.margin;
    const double view_h = spec.height - 2.0 * spec.margin;
    const double dx = x_max - x_min;
    const double dy = y_max - y_min;
    if (dx > 0.0 && dy > 0.0) scale = std::min(view_w / dx, view_h / dy);
    else if (dx > 0.0) scale = view_w / dx;
    else if (dy > 0.0) scale = view_h / dy;
  }

  double x(double v) const { return view_cx + (v - data_cx) * scale; }
  double y(double v) const { return view_cy + (v - data_cy) * scale; }
};

}  // namespace

std::map<std::string, std::string> partition_palette() {
  return {{"A", "#00FFFF"}, {"B", "#FF0000"}, {"C", "#0000FF"}};
}

const std::vector<std::string>& categorical_colours() {
  static const std::vector<std::string> colours = {
      "#1F77B4", "#FF7F0E", "#2CA02C", "#D62728", "#9467BD",
      "#8C564B", "#E377C2", "#7F7F7F", "#BCBD22", "#17BECF"};
  return colours;
}

std::map<std::string, std::string> default_palette(const std::vector<std::string>& labels) {
  const std::set<std::string> unique(labels.begin(), labels.end());
  const auto partitions = partition_palette();
  if (std::all_of(unique.begin(), unique.end(),
                  [&](const std::string& l) { return partitions.count(l) != 0; }))
    return partitions;
  std::map<std::string, std::string> palette;
  const auto& colours = categorical_colours();
  std::size_t next = 0;
  for (const auto& label : unique) palette[label] = colours[next++ % colours.size()];
  return palette;
}

std::string render_svg(const PlotSpec& spec) {
  const std::size_t n = spec.points.rows();
  require(n > 0, "render_svg: empty point set");
  require(spec.points.cols() == 2, "render_svg: points must have 2 columns");
  require(spec.labels.size() == n, "render_svg: label count does not match points");
  require(spec.width > 2.0 * spec.margin && spec.height > 2.0 * spec.margin,
          "render_svg: width and height must exceed twice the margin");
  for (const auto& label : spec.labels)
    require(spec.palette.count(label) != 0, "render_svg: no colour for label '" + label + "'");

  const ViewportMap map(spec.points, spec);
  std::string out;
  out.reserve(256 + n * 64);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(spec.width) + "\" height=\"" + num(spec.height) + "\" viewBox=\"0 0 " +
         num(spec.width) + " " + num(spec.height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(spec.width) + "\" height=\"" +
         num(spec.height) + "\" fill=\"#FFFFFF\"/>\n";
  if (!spec.title.empty())
    out += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"" + num(spec.margin / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           xml_escape(spec.title) + "</text>\n";

  out += "<g id=\"points\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += "<circle cx=\"" + num(map.x(spec.points(i, 0))) + "\" cy=\"" +
           num(map.y(spec.points(i, 1))) + "\" r=\"" + num(spec.point_radius) +
           "\" fill=\"" + spec.palette.at(spec.labels[i]) + "\"/>\n";
  }
  out += "</g>\n";

  if (spec.legend) {
    std::vector<std::string> entries;
    for (const auto& label : std::set<std::string>(spec.labels.begin(), spec.labels.end()))
      if (!label.empty()) entries.push_back(label);
    if (!entries.empty()) {
      const double box_w = 120.0;
      const double row_h = 16.0;
      const double left = spec.width - box_w - 8.0;
      const double top = 8.0;
      out += "<g id=\"legend\">\n";
      out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(box_w) +
             "\" height=\"" + num(8.0 + row_h * static_cast<double>(entries.size())) +
             "\" fill=\"#FFFFFF\" stroke=\"#000000\"/>\n";
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const double cy = top + 4.0 + row_h * (static_cast<double>(e) + 0.5);
        out += "<circle cx=\"" + num(left + 12.0) + "\" cy=\"" + num(cy) + "\" r=\"4.000\" fill=\"" +
               spec.palette.at(entries[e]) + "\"/>\n";
        out += "<text x=\"" + num(left + 22.0) + "\" y=\"" + num(cy + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(entries[e]) +
               "</text>\n";
      }
      out += "</g>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace argviz
