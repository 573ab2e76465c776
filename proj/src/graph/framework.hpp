#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "numerics/matrix.hpp"

namespace argviz {

using Attack = std::pair<std::size_t, std::size_t>;  // (attacker, target)

// Directed attack graph over named arguments. Immutable once built; attacks are
// kept sorted and unique.
class ArgumentationFramework {
 public:
  ArgumentationFramework() = default;
  ArgumentationFramework(std::vector<std::string> arguments, std::vector<Attack> attacks);

  std::size_t size() const noexcept { return arguments_.size(); }
  std::size_t attack_count() const noexcept { return attacks_.size(); }
  const std::vector<std::string>& arguments() const noexcept { return arguments_; }
  const std::vector<Attack>& attacks() const noexcept { return attacks_; }

  bool attacks_between(std::size_t from, std::size_t to) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const ArgumentationFramework&) const = default;

 private:
  std::vector<std::string> arguments_;
  std::vector<Attack> attacks_;
};

bool is_valid_argument_name(std::string_view name);

struct LabeledFramework {
  ArgumentationFramework framework;
  std::optional<std::string> graph_label;
  std::map<std::size_t, std::string> node_labels;

  bool operator==(const LabeledFramework&) const = default;
};

// Checks that node label keys index into the framework.
void validate(const LabeledFramework& labeled);

// M(i, j) = 1 exactly when i attacks j.
Matrix adjacency_matrix(const ArgumentationFramework& af);

enum class GraphFormat { apx, tgf };

ArgumentationFramework parse_apx(std::string_view text);
ArgumentationFramework parse_tgf(std::string_view text);
ArgumentationFramework parse(std::string_view text, GraphFormat format);

std::string serialize_apx(const ArgumentationFramework& af);
std::string serialize_tgf(const ArgumentationFramework& af);
std::string serialize(const ArgumentationFramework& af, GraphFormat format);

// Picks a format from the file extension (.apx / .tgf); nullopt otherwise.
std::optional<GraphFormat> format_from_path(std::string_view path);

}  // namespace argviz
