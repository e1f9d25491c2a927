#include "xml_reader.hpp"

#include <expat.h>

#include <charconv>
#include <cmath>
#include <exception>
#include <memory>

#include "sumoviz/error.hpp"

namespace sumoviz::detail {

std::optional<std::string_view> Attributes::get(std::string_view name) const {
  for (const char** p = raw_; p && *p; p += 2) {
    if (name == p[0]) return std::string_view(p[1]);
  }
  return std::nullopt;
}

namespace {

struct ParserState {
  XmlReader* reader;
  XML_Parser parser;
  const XmlReader::StartHandler* on_start;
  const XmlReader::EndHandler* on_end;
  std::size_t* line;
  std::exception_ptr failure;
};

void XMLCALL start_element(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* state = static_cast<ParserState*>(user);
  if (state->failure) return;
  *state->line = XML_GetCurrentLineNumber(state->parser);
  try {
    (*state->on_start)(name, Attributes(attrs));
  } catch (...) {
    state->failure = std::current_exception();
    XML_StopParser(state->parser, XML_FALSE);
  }
}

void XMLCALL end_element(void* user, const XML_Char* name) {
  auto* state = static_cast<ParserState*>(user);
  if (state->failure || !*state->on_end) return;
  *state->line = XML_GetCurrentLineNumber(state->parser);
  try {
    (*state->on_end)(name);
  } catch (...) {
    state->failure = std::current_exception();
    XML_StopParser(state->parser, XML_FALSE);
  }
}

}  // namespace

XmlReader::XmlReader(StartHandler on_start, EndHandler on_end)
    : on_start_(std::move(on_start)), on_end_(std::move(on_end)) {}

void XmlReader::parse(std::string_view text) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate(nullptr), &XML_ParserFree);
  if (!parser) throw ParseError("cannot allocate XML parser", 0);

  ParserState state{this, parser.get(), &on_start_, &on_end_, &line_, nullptr};
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), &start_element, &end_element);

  const auto status =
      XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE);
  if (state.failure) std::rethrow_exception(state.failure);
  if (status != XML_STATUS_OK) {
    throw ParseError(std::string("malformed XML: ") +
                         XML_ErrorString(XML_GetErrorCode(parser.get())),
                     XML_GetCurrentLineNumber(parser.get()));
  }
}

std::optional<double> to_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> to_int(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::optional<std::vector<std::pair<double, double>>> to_points(std::string_view text) {
  std::vector<std::pair<double, double>> points;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r'))
      ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' && text[end] != '\n' &&
           text[end] != '\r')
      ++end;
    const std::string_view token = text.substr(pos, end - pos);
    const auto c1 = token.find(',');
    if (c1 == std::string_view::npos) return std::nullopt;
    const auto c2 = token.find(',', c1 + 1);
    const auto x = to_double(token.substr(0, c1));
    const auto y = to_double(token.substr(c1 + 1, c2 == std::string_view::npos ? token.npos
                                                                              : c2 - c1 - 1));
    if (!x || !y) return std::nullopt;
    if (c2 != std::string_view::npos && !to_double(token.substr(c2 + 1))) return std::nullopt;
    points.emplace_back(*x, *y);
    pos = end;
  }
  return points;
}

}  // namespace sumoviz::detail
