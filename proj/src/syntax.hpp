#pragma once

// Lexer and generic block reader shared by the scenario and profile formats.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyadic/parse_error.hpp"

namespace dyadic::detail {

enum class TokenType { identifier, string, number, lbrace, rbrace, lbracket, rbracket, colon, comma, arrow, question, end };

struct Token {
  TokenType type = TokenType::end;
  std::string text;
  int line = 1;
  int column = 1;
  bool line_start = false;  // first token on its line
};

std::string_view describe(TokenType type);

/// Tokenizes the whole source. Lexical errors are appended to `errors`; the
/// returned stream always ends with an `end` token.
std::vector<Token> tokenize(std::string_view source, std::vector<ParseError>& errors);

struct Value;

struct Pair {
  std::string key;
  int line = 1;
  int column = 1;
  std::shared_ptr<Value> value;
};

struct Value {
  enum class Kind { number, string, identifier, list, map } kind = Kind::number;
  std::string text;  // literal text for scalars
  double number = 0.0;
  std::vector<Value> items;
  std::vector<Pair> pairs;
  int line = 1;
  int column = 1;

  bool is_scalar() const { return kind != Kind::list && kind != Kind::map; }
  std::optional<bool> as_bool() const;
  /// Identifier or string text.
  std::optional<std::string> as_name() const;
};

/// Recursive-descent cursor over a token stream. Every method reports its
/// own syntax errors and returns nullopt/false on failure.
class Reader {
 public:
  Reader(const std::vector<Token>& tokens, std::vector<ParseError>& errors) : tokens_(tokens), errors_(errors) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance();
  bool at_end() const { return peek().type == TokenType::end; }
  bool accept(TokenType type);
  std::optional<Token> expect(TokenType type, std::string_view what);

  std::optional<Value> value();
  /// Parses `{ key: value, ... }`; commas between pairs are optional.
  std::optional<std::vector<Pair>> block();
  /// Parses pairs until end of input (profile files).
  std::optional<std::vector<Pair>> pairs_until_end();

  /// Skips to the next token that begins a line and satisfies `is_keyword`.
  template <class Pred>
  void recover(Pred is_keyword) {
    if (!at_end()) advance();
    while (!at_end() && !(peek().line_start && is_keyword(peek()))) advance();
  }

  void error(const Token& at, std::string message, ParseErrorKind kind = ParseErrorKind::syntax);

 private:
  std::optional<std::vector<Pair>> pairs(TokenType terminator);
  std::optional<Pair> pair();

  const std::vector<Token>& tokens_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace dyadic::detail
