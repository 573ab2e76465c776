#pragma once

#include <map>
#include <string>
#include <vector>

#include "numerics/matrix.hpp"

namespace argviz {

struct PlotSpec {
  Matrix points;  // n x 2
  std::vector<std::string> labels;
  std::map<std::string, std::string> palette;  // label -> "#RRGGBB"
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  double point_radius = 2.5;
  std::string title;
  bool legend = true;
};

// A→#00FFFF, B→#FF0000, C→#0000FF
std::map<std::string, std::string> partition_palette();

// The ten fixed categorical colours, in assignment order.
const std::vector<std::string>& categorical_colours();

// Partition colours when every label is A, B or C; otherwise categorical
// colours assigned in sorted label order, cycling past ten labels.
std::map<std::string, std::string> default_palette(const std::vector<std::string>& labels);

std::string render_svg(const PlotSpec& spec);

}  // namespace argviz
