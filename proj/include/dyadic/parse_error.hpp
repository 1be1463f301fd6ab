#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace dyadic {

enum class ParseErrorKind { syntax, unknown_key, range, duplicate_id, dangling_reference };

struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;
  ParseErrorKind kind = ParseErrorKind::syntax;
};

std::string_view to_string(ParseErrorKind kind);

/// "line:column: kind: message"
std::string format_error(const ParseError& error);

/// Either a parsed value or the full list of diagnostics.
template <class T>
class Parsed {
 public:
  Parsed(T value) : state_(std::move(value)) {}
  Parsed(std::vector<ParseError> errors) : state_(std::move(errors)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(state_); }
  T&& value() && { return std::get<T>(std::move(state_)); }
  const T& operator*() const& { return value(); }
  T&& operator*() && { return std::move(*this).value(); }
  const T* operator->() const { return &value(); }
  const std::vector<ParseError>& errors() const { return std::get<std::vector<ParseError>>(state_); }

 private:
  std::variant<T, std::vector<ParseError>> state_;
};

}  // namespace dyadic
