#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vcomp/value_fn.hpp"

namespace vcomp {

struct AgentSpec {
  std::string name;
  ValueFn valuation;
  std::vector<ValueFn> menu;
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

/// Parsed .auc file.
///
///   # free-form header comment
///   items: a b c
///   agent 1: OR(XS(a:2), ADD(b:1, c:0.5))
///     menu: ADD(a:0, b:1, c:0) XOR(ADD(a:1, b:0, c:0), ADD(a:0, b:1, c:1/3))
///   agent 2: TABLE({a}:1, {a b}:3)
///
/// Numbers are exact: integers, finite decimals, or p/q. TABLE entries that are
/// omitted take the maximum over the listed subsets ({} defaults to 0).
struct InstanceFile {
  std::vector<std::string> header;  // leading '#' comment lines, without the marker
  std::vector<std::string> items;
  std::vector<AgentSpec> agents;
  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

class ParseError : public std::runtime_error {
public:
  ParseError(unsigned line, unsigned column, const std::string& message);
  [[nodiscard]] unsigned line() const { return line_; }
  [[nodiscard]] unsigned column() const { return column_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

private:
  unsigned line_;
  unsigned column_;
  std::string detail_;
};

InstanceFile parse_instance(std::string_view text);

/// Canonical text form; parse_instance(render_instance(x)) == x.
std::string render_instance(const InstanceFile& inst);

/// Single expression in the instance syntax.
std::string render_expr(const ValueFn& v, const std::vector<std::string>& items);

/// Bundle as "{a b}".
std::string render_set(ItemSet s, const std::vector<std::string>& items);

}  // namespace vcomp
