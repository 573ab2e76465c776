#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "numerics/matrix.hpp"

namespace argviz {

struct LabeledPoints {
  Matrix points;
  std::vector<std::string> labels;
};

// Fraction of points whose majority label among their k nearest neighbours
// equals their own label.
//
// Neighbours are ranked by Euclidean distance, equal distances by index. A tie
// between label counts goes to the label with the smaller summed neighbour
// distance, then to the lexicographically smaller label.
double knn_label_agreement(const LabeledPoints& lp, std::size_t k);

// Mean silhouette (b − a) / max(a, b). Points alone in their label score 0, as
// do points with a = b = 0.
double silhouette(const LabeledPoints& lp);

}  // namespace argviz
