#include "viz/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>

#include "core/error.hpp"

namespace argviz {

namespace {

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) fail(ErrorKind::parse, "csv line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(current));
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size())
    fail(ErrorKind::parse,
         "csv line " + std::to_string(line_no) + ": '" + field + "' is not a number");
  return v;
}

}  // namespace

std::string export_csv(const Matrix& points, const std::vector<std::string>& labels,
                       const std::vector<std::string>& ids) {
  require(points.rows() == labels.size(), "export_csv: point and label counts differ");
  require(points.rows() == 0 || points.cols() == 2, "export_csv: points must have 2 columns");
  require(ids.empty() || ids.size() == labels.size(), "export_csv: id count differs");
  std::string out = "id,x,y,label\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    out += quote(ids.empty() ? std::to_string(i) : ids[i]);
    out += ',' + format_number(points(i, 0), 9);
    out += ',' + format_number(points(i, 1), 9);
    out += ',' + quote(labels[i]) + '\n';
  }
  return out;
}

std::string export_features_csv(const Matrix& features, const std::vector<std::string>& ids,
                                const std::vector<std::string>& labels) {
  require(ids.size() == features.rows(), "export_features_csv: id count differs");
  require(labels.empty() || labels.size() == features.rows(),
          "export_features_csv: label count differs");
  std::string out = "id";
  for (std::size_t j = 0; j < features.cols(); ++j) out += ",f" + std::to_string(j);
  if (!labels.empty()) out += ",label";
  out += '\n';
  for (std::size_t i = 0; i < features.rows(); ++i) {
    out += quote(ids[i]);
    for (const double v : features.row(i)) out += ',' + format_number(v, 17);
    if (!labels.empty()) out += ',' + quote(labels[i]);
    out += '\n';
  }
  return out;
}

std::string export_kl_csv(const std::vector<KlSample>& history) {
  std::string out = "iteration,kl\n";
  for (const auto& sample : history)
    out += std::to_string(sample.iteration) + ',' + format_number(sample.kl, 17) + '\n';
  return out;
}

Table parse_table_csv(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.emplace_back(line_no, line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  if (lines.empty()) fail(ErrorKind::parse, "csv: missing header");

  const auto header = split_record(lines[0].second, lines[0].first);
  if (header.empty() || header[0] != "id")
    fail(ErrorKind::parse, "csv: first column must be 'id'");
  std::optional<std::size_t> label_col;
  Table table;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_col) fail(ErrorKind::parse, "csv: duplicate label column");
      label_col = c;
    } else {
      table.value_columns.push_back(header[c]);
    }
  }

  std::vector<double> values;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_record(lines[r].second, lines[r].first);
    if (fields.size() != header.size())
      fail(ErrorKind::parse, "csv line " + std::to_string(lines[r].first) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
    table.ids.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (label_col && c == *label_col) table.labels.push_back(fields[c]);
      else values.push_back(parse_number(fields[c], lines[r].first));
    }
  }
  table.values = Matrix(table.ids.size(), table.value_columns.size(), std::move(values));
  return table;
}

}  // namespace argviz
