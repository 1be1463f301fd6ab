#include "syntax.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace dyadic {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::syntax: return "syntax";
    case ParseErrorKind::unknown_key: return "unknown_key";
    case ParseErrorKind::range: return "range";
    case ParseErrorKind::duplicate_id: return "duplicate_id";
    case ParseErrorKind::dangling_reference: return "dangling_reference";
  }
  return "syntax";
}

std::string format_error(const ParseError& error) {
  return std::to_string(error.line) + ":" + std::to_string(error.column) + ": " +
         std::string(to_string(error.kind)) + ": " + error.message;
}

}  // namespace dyadic

namespace dyadic::detail {

namespace {

constexpr int kMaxFractionDigits = 6;
constexpr int kMaxNesting = 16;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string_view describe(TokenType type) {
  switch (type) {
    case TokenType::identifier: return "identifier";
    case TokenType::string: return "string";
    case TokenType::number: return "number";
    case TokenType::lbrace: return "'{'";
    case TokenType::rbrace: return "'}'";
    case TokenType::lbracket: return "'['";
    case TokenType::rbracket: return "']'";
    case TokenType::colon: return "':'";
    case TokenType::comma: return "','";
    case TokenType::arrow: return "'->'";
    case TokenType::question: return "'?'";
    case TokenType::end: return "end of input";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view src, std::vector<ParseError>& errors) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  int last_line = 0;
  std::size_t i = 0;

  auto push = [&](TokenType type, std::string text, int tline, int tcol) {
    tokens.push_back({type, std::move(text), tline, tcol, tline != last_line});
    last_line = tline;
  };
  auto bump = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    const int tline = line;
    const int tcol = column;
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      bump();
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') bump();
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && ident_char(src[i])) bump();
      push(TokenType::identifier, std::string(src.substr(start, i - start)), tline, tcol);
    } else if (digit(c) || (c == '-' && i + 1 < src.size() && digit(src[i + 1]))) {
      std::size_t start = i;
      bump();
      while (i < src.size() && digit(src[i])) bump();
      if (i < src.size() && src[i] == '.') {
        bump();
        std::size_t frac_start = i;
        while (i < src.size() && digit(src[i])) bump();
        const auto frac = i - frac_start;
        if (frac == 0) {
          errors.push_back({tline, tcol, "decimal point must be followed by digits", ParseErrorKind::syntax});
        } else if (frac > kMaxFractionDigits) {
          errors.push_back({tline, tcol, "numeric literal has more than 6 fractional digits", ParseErrorKind::syntax});
        }
      }
      push(TokenType::number, std::string(src.substr(start, i - start)), tline, tcol);
    } else if (c == '"') {
      bump();
      std::string text;
      bool closed = false;
      while (i < src.size() && src[i] != '\n') {
        if (src[i] == '"') {
          closed = true;
          bump();
          break;
        }
        if (src[i] == '\\' && i + 1 < src.size()) {
          const char esc = src[i + 1];
          switch (esc) {
            case 'n': text.push_back('\n'); break;
            case 't': text.push_back('\t'); break;
            case '"': text.push_back('"'); break;
            case '\\': text.push_back('\\'); break;
            default:
              errors.push_back({line, column, std::string("unknown escape '\\") + esc + "'", ParseErrorKind::syntax});
          }
          bump(2);
          continue;
        }
        text.push_back(src[i]);
        bump();
      }
      if (!closed) errors.push_back({tline, tcol, "unterminated string literal", ParseErrorKind::syntax});
      push(TokenType::string, std::move(text), tline, tcol);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      bump(2);
      push(TokenType::arrow, "->", tline, tcol);
    } else {
      TokenType type;
      switch (c) {
        case '{': type = TokenType::lbrace; break;
        case '}': type = TokenType::rbrace; break;
        case '[': type = TokenType::lbracket; break;
        case ']': type = TokenType::rbracket; break;
        case ':': type = TokenType::colon; break;
        case ',': type = TokenType::comma; break;
        case '?': type = TokenType::question; break;
        default: {
          char shown[8];
          if (std::isprint(static_cast<unsigned char>(c))) {
            std::snprintf(shown, sizeof shown, "'%c'", c);
          } else {
            std::snprintf(shown, sizeof shown, "0x%02X", static_cast<unsigned char>(c));
          }
          errors.push_back({tline, tcol, std::string("unexpected character ") + shown, ParseErrorKind::syntax});
          bump();
          continue;
        }
      }
      bump();
      push(type, std::string(1, c), tline, tcol);
    }
  }
  tokens.push_back({TokenType::end, "", line, column, true});
  return tokens;
}

std::optional<bool> Value::as_bool() const {
  if (kind != Kind::identifier) return std::nullopt;
  if (text == "true") return true;
  if (text == "false") return false;
  return std::nullopt;
}

std::optional<std::string> Value::as_name() const {
  if (kind == Kind::identifier || kind == Kind::string) return text;
  return std::nullopt;
}

const Token& Reader::advance() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Reader::accept(TokenType type) {
  if (peek().type != type) return false;
  advance();
  return true;
}

std::optional<Token> Reader::expect(TokenType type, std::string_view what) {
  if (peek().type == type) return advance();
  std::string found = peek().type == TokenType::end ? "end of input" : "'" + peek().text + "'";
  error(peek(), "expected " + std::string(what) + ", found " + found);
  return std::nullopt;
}

void Reader::error(const Token& at, std::string message, ParseErrorKind kind) {
  errors_.push_back({at.line, at.column, std::move(message), kind});
}

std::optional<Value> Reader::value() {
  const Token& t = peek();
  Value v;
  v.line = t.line;
  v.column = t.column;
  switch (t.type) {
    case TokenType::number: {
      advance();
      v.kind = Value::Kind::number;
      v.text = t.text;
      const char* first = t.text.data();
      const char* last = first + t.text.size();
      auto [ptr, ec] = std::from_chars(first, last, v.number);
      if (ec != std::errc() || ptr != last) {
        error(t, "malformed number '" + t.text + "'");
        return std::nullopt;
      }
      return v;
    }
    case TokenType::string:
      advance();
      v.kind = Value::Kind::string;
      v.text = t.text;
      return v;
    case TokenType::identifier:
      advance();
      v.kind = Value::Kind::identifier;
      v.text = t.text;
      return v;
    case TokenType::lbracket: {
      advance();
      v.kind = Value::Kind::list;
      while (peek().type != TokenType::rbracket) {
        if (at_end()) {
          error(peek(), "unterminated list");
          return std::nullopt;
        }
        auto item = value();
        if (!item) return std::nullopt;
        if (!item->is_scalar()) {
          error(t, "lists may only contain scalar values");
          return std::nullopt;
        }
        v.items.push_back(std::move(*item));
        if (!accept(TokenType::comma) && peek().type != TokenType::rbracket) {
          expect(TokenType::rbracket, "',' or ']'");
          return std::nullopt;
        }
      }
      advance();
      return v;
    }
    case TokenType::lbrace: {
      if (depth_ >= kMaxNesting) {
        error(t, "blocks nested too deeply");
        return std::nullopt;
      }
      ++depth_;
      auto inner = block();
      --depth_;
      if (!inner) return std::nullopt;
      v.kind = Value::Kind::map;
      v.pairs = std::move(*inner);
      return v;
    }
    default:
      error(t, t.type == TokenType::end ? "expected a value, found end of input"
                                        : "expected a value, found '" + t.text + "'");
      return std::nullopt;
  }
}

std::optional<Pair> Reader::pair() {
  const Token& key = peek();
  if (key.type != TokenType::identifier && key.type != TokenType::string) {
    error(key, key.type == TokenType::end ? "expected a key, found end of input"
                                          : "expected a key, found '" + key.text + "'");
    return std::nullopt;
  }
  advance();
  if (!expect(TokenType::colon, "':' after key '" + key.text + "'")) return std::nullopt;
  auto v = value();
  if (!v) return std::nullopt;
  return Pair{key.text, key.line, key.column, std::make_shared<Value>(std::move(*v))};
}

std::optional<std::vector<Pair>> Reader::pairs(TokenType terminator) {
  std::vector<Pair> out;
  while (peek().type != terminator) {
    if (at_end()) {
      error(peek(), "unterminated block, expected '}'");
      return std::nullopt;
    }
    auto p = pair();
    if (!p) return std::nullopt;
    for (const auto& existing : out) {
      if (existing.key == p->key) {
        errors_.push_back({p->line, p->column, "key '" + p->key + "' given twice", ParseErrorKind::syntax});
        return std::nullopt;
      }
    }
    out.push_back(std::move(*p));
    accept(TokenType::comma);
  }
  return out;
}

std::optional<std::vector<Pair>> Reader::block() {
  if (!expect(TokenType::lbrace, "'{'")) return std::nullopt;
  auto out = pairs(TokenType::rbrace);
  if (!out) return std::nullopt;
  advance();
  return out;
}

std::optional<std::vector<Pair>> Reader::pairs_until_end() { return pairs(TokenType::end); }

}  // namespace dyadic::detail
