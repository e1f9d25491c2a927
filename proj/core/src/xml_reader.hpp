#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sumoviz::detail {

/// Attribute list of the element currently being visited.
class Attributes {
public:
  explicit Attributes(const char** raw) : raw_(raw) {}

  std::optional<std::string_view> get(std::string_view name) const;
  bool has(std::string_view name) const { return get(name).has_value(); }

private:
  const char** raw_;
};

/// Thin streaming wrapper around expat. Handlers may throw; the exception is
/// rethrown from parse() after the parser is torn down.
class XmlReader {
public:
  using StartHandler = std::function<void(std::string_view name, const Attributes& attrs)>;
  using EndHandler = std::function<void(std::string_view name)>;

  XmlReader(StartHandler on_start, EndHandler on_end = {});

  void parse(std::string_view text);

  /// Line of the event currently being dispatched (1-based).
  std::size_t line() const noexcept { return line_; }

private:
  StartHandler on_start_;
  EndHandler on_end_;
  std::size_t line_ = 0;
};

std::optional<double> to_double(std::string_view text);
std::optional<int> to_int(std::string_view text);

/// Parses "x,y x,y ..." (SUMO shape syntax). Empty optional on malformed
/// input; a third coordinate per point is accepted and ignored.
std::optional<std::vector<std::pair<double, double>>> to_points(std::string_view text);

}  // namespace sumoviz::detail
