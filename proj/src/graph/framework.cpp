#include "graph/framework.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "core/error.hpp"

namespace argviz {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits on '\n' keeping 1-based line numbers.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    fn(line_no, line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + what);
}

class NameTable {
 public:
  void declare(std::string_view name, std::size_t line_no) {
    if (!is_valid_argument_name(name))
      parse_error(line_no, "invalid argument name '" + std::string(name) + "'");
    const auto [it, inserted] = index_.emplace(std::string(name), names_.size());
    if (!inserted)
      parse_error(line_no, "duplicate argument declaration '" + std::string(name) + "'");
    names_.emplace_back(name);
  }

  std::size_t lookup(std::string_view name, std::size_t line_no) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end())
      parse_error(line_no, "attack references undeclared argument '" +
                               std::string(name) + "'");
    return it->second;
  }

  std::vector<std::string> take() && { return std::move(names_); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct PendingAttack {
  std::string from;
  std::string to;
  std::size_t line_no;
};

// Matches `<keyword>(<inner>).` and returns the trimmed inner text.
std::optional<std::string_view> match_predicate(std::string_view line,
                                                std::string_view keyword) {
  if (!line.starts_with(keyword)) return std::nullopt;
  line.remove_prefix(keyword.size());
  line = trim(line);
  if (!line.ends_with('.')) return std::nullopt;
  line.remove_suffix(1);
  line = trim(line);
  if (!line.starts_with('(') || !line.ends_with(')')) return std::nullopt;
  line.remove_prefix(1);
  line.remove_suffix(1);
  return trim(line);
}

}  // namespace

bool is_valid_argument_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v' ||
           c == '(' || c == ')' || c == ',';
  });
}

ArgumentationFramework::ArgumentationFramework(std::vector<std::string> arguments,
                                               std::vector<Attack> attacks)
    : arguments_(std::move(arguments)), attacks_(std::move(attacks)) {
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < arguments_.size(); ++i) {
    require(is_valid_argument_name(arguments_[i]),
            "invalid argument name '" + arguments_[i] + "'");
    require(seen.emplace(arguments_[i], i).second,
            "duplicate argument name '" + arguments_[i] + "'");
  }
  for (const auto& [from, to] : attacks_)
    require(from < arguments_.size() && to < arguments_.size(),
            "attack (" + std::to_string(from) + "," + std::to_string(to) +
                ") out of range for " + std::to_string(arguments_.size()) + " arguments");
  std::sort(attacks_.begin(), attacks_.end());
  attacks_.erase(std::unique(attacks_.begin(), attacks_.end()), attacks_.end());
}

bool ArgumentationFramework::attacks_between(std::size_t from, std::size_t to) const {
  return std::binary_search(attacks_.begin(), attacks_.end(), Attack{from, to});
}

std::optional<std::size_t> ArgumentationFramework::index_of(std::string_view name) const {
  const auto it = std::find(arguments_.begin(), arguments_.end(), name);
  if (it == arguments_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - arguments_.begin());
}

void validate(const LabeledFramework& labeled) {
  for (const auto& [index, label] : labeled.node_labels)
    require(index < labeled.framework.size(),
            "node label index " + std::to_string(index) + " out of range");
}

Matrix adjacency_matrix(const ArgumentationFramework& af) {
  Matrix m(af.size(), af.size());
  for (const auto& [from, to] : af.attacks()) m(from, to) = 1.0;
  return m;
}

ArgumentationFramework parse_apx(std::string_view text) {
  NameTable names;
  std::vector<PendingAttack> pending;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.starts_with('%')) return;
    if (const auto inner = match_predicate(line, "arg")) {
      names.declare(*inner, line_no);
      return;
    }
    if (const auto inner = match_predicate(line, "att")) {
      const auto comma = inner->find(',');
      if (comma == std::string_view::npos || inner->find(',', comma + 1) != std::string_view::npos)
        parse_error(line_no, "malformed attack '" + std::string(line) + "'");
      pending.push_back({std::string(trim(inner->substr(0, comma))),
                         std::string(trim(inner->substr(comma + 1))), line_no});
      return;
    }
    parse_error(line_no, "malformed line '" + std::string(line) + "'");
  });

  std::vector<Attack> attacks;
  attacks.reserve(pending.size());
  for (const auto& p : pending)
    attacks.emplace_back(names.lookup(p.from, p.line_no), names.lookup(p.to, p.line_no));
  return ArgumentationFramework(std::move(names).take(), std::move(attacks));
}

ArgumentationFramework parse_tgf(std::string_view text) {
  NameTable names;
  std::vector<PendingAttack> pending;
  bool in_edges = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    if (line == "#") {
      if (in_edges) parse_error(line_no, "repeated '#' separator");
      in_edges = true;
      return;
    }
    const auto space = line.find_first_of(" \t");
    if (!in_edges) {
      if (space != std::string_view::npos)
        parse_error(line_no, "node line must hold a single id: '" + std::string(line) + "'");
      names.declare(line, line_no);
      return;
    }
    if (space == std::string_view::npos)
      parse_error(line_no, "edge line must be 'SRC DST': '" + std::string(line) + "'");
    const std::string_view from = line.substr(0, space);
    const std::string_view to = trim(line.substr(space + 1));
    if (to.empty() || to.find_first_of(" \t") != std::string_view::npos)
      parse_error(line_no, "edge line must be 'SRC DST': '" + std::string(line) + "'");
    pending.push_back({std::string(from), std::string(to), line_no});
  });
  if (!in_edges) fail(ErrorKind::parse, "missing '#' separator between nodes and edges");

  std::vector<Attack> attacks;
  attacks.reserve(pending.size());
  for (const auto& p : pending)
    attacks.emplace_back(names.lookup(p.from, p.line_no), names.lookup(p.to, p.line_no));
  return ArgumentationFramework(std::move(names).take(), std::move(attacks));
}

ArgumentationFramework parse(std::string_view text, GraphFormat format) {
  return format == GraphFormat::apx ? parse_apx(text) : parse_tgf(text);
}

std::string serialize_apx(const ArgumentationFramework& af) {
  std::string out;
  for (const auto& name : af.arguments()) out += "arg(" + name + ").\n";
  for (const auto& [from, to] : af.attacks())
    out += "att(" + af.arguments()[from] + "," + af.arguments()[to] + ").\n";
  return out;
}

std::string serialize_tgf(const ArgumentationFramework& af) {
  std::string out;
  for (const auto& name : af.arguments()) out += name + "\n";
  out += "#\n";
  for (const auto& [from, to] : af.attacks())
    out += af.arguments()[from] + " " + af.arguments()[to] + "\n";
  return out;
}

std::string serialize(const ArgumentationFramework& af, GraphFormat format) {
  return format == GraphFormat::apx ? serialize_apx(af) : serialize_tgf(af);
}

std::optional<GraphFormat> format_from_path(std::string_view path) {
  std::string lower(path.substr(path.size() < 4 ? 0 : path.size() - 4));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == ".apx") return GraphFormat::apx;
  if (lower == ".tgf") return GraphFormat::tgf;
  return std::nullopt;
}

}  // namespace argviz
