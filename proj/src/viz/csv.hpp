#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "numerics/matrix.hpp"
#include "tsne/tsne.hpp"

namespace argviz {

// Numeric table keyed by an `id` column, with an optional `label` column.
struct Table {
  std::vector<std::string> ids;
  std::vector<std::string> labels;        // empty when the table has no label column
  std::vector<std::string> value_columns;
  Matrix values;
};

// Layout export: header `id,x,y,label`, coordinates with 9 significant digits.
// Empty `ids` means row indices are used.
std::string export_csv(const Matrix& points, const std::vector<std::string>& labels,
                       const std::vector<std::string>& ids = {});

// Feature export: header `id,f0,...,f{d-1}` (plus a trailing `label` column when
// labels are given); values are written with 17 significant digits.
std::string export_features_csv(const Matrix& features, const std::vector<std::string>& ids,
                                const std::vector<std::string>& labels = {});

// Header `iteration,kl`.
std::string export_kl_csv(const std::vector<KlSample>& history);

// Parses any of the tables above. The first column must be `id`.
Table parse_table_csv(std::string_view text);

}  // namespace argviz
