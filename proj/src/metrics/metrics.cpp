#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "core/error.hpp"

namespace argviz {

namespace {

void require_consistent(const LabeledPoints& lp) {
  require(lp.points.rows() == lp.labels.size(),
          "metrics: point count " + std::to_string(lp.points.rows()) +
              " does not match label count " + std::to_string(lp.labels.size()));
}

double distance(const Matrix& points, std::size_t i, std::size_t j) {
  const auto a = points.row(i);
  const auto b = points.row(j);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace

double knn_label_agreement(const LabeledPoints& lp, std::size_t k) {
  require_consistent(lp);
  const std::size_t n = lp.labels.size();
  require(k >= 1, "knn_label_agreement: k must be positive");
  require(k < n, "knn_label_agreement: k = " + std::to_string(k) +
                     " must be smaller than the point count " + std::to_string(n));

  std::size_t agree = 0;
  std::vector<std::pair<double, std::size_t>> ranked(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) ranked[pos++] = {distance(lp.points, i, j), j};
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k),
                      ranked.end());

    struct Vote {
      std::size_t count = 0;
      double distance_sum = 0.0;
    };
    std::map<std::string, Vote> votes;  // ordered: lexicographic fallback
    for (std::size_t r = 0; r < k; ++r) {
      Vote& v = votes[lp.labels[ranked[r].second]];
      v.count += 1;
      v.distance_sum += ranked[r].first;
    }
    auto best = votes.begin();
    for (auto it = std::next(votes.begin()); it != votes.end(); ++it) {
      if (it->second.count > best->second.count ||
          (it->second.count == best->second.count &&
           it->second.distance_sum < best->second.distance_sum))
        best = it;
    }
    if (best->first == lp.labels[i]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(n);
}

double silhouette(const LabeledPoints& lp) {
  require_consistent(lp);
  const std::size_t n = lp.labels.size();
  std::map<std::string, std::size_t> label_index;
  for (const auto& label : lp.labels) label_index.emplace(label, 0);
  require(label_index.size() >= 2, "silhouette: at least two distinct labels required");
  std::size_t next = 0;
  for (auto& [label, index] : label_index) index = next++;

  std::vector<std::size_t> cls(n);
  std::vector<std::size_t> class_size(label_index.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    cls[i] = label_index[lp.labels[i]];
    class_size[cls[i]] += 1;
  }

  double total = 0.0;
  std::vector<double> sums(label_index.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (class_size[cls[i]] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sums[cls[j]] += distance(lp.points, i, j);
    const double a = sums[cls[i]] / static_cast<double>(class_size[cls[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sums.size(); ++c)
      if (c != cls[i]) b = std::min(b, sums[c] / static_cast<double>(class_size[c]));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

}  // namespace argviz
