#include "conch/reader.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace conch {

namespace {

bool is_delimiter(char c) {
  return c == '(' || c == ')' || c == '"' || c == ';' || c == '\'' || std::isspace(static_cast<unsigned char>(c));
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool looks_integer(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!is_digit(c)) return false;
  return true;
}

std::optional<double> read_real(std::string_view s) {
  if (s == "+inf.0") return HUGE_VAL;
  if (s == "-inf.0") return -HUGE_VAL;
  if (s == "+nan.0" || s == "-nan.0") return std::nan("");
  bool has_digit = false, has_marker = false;
  for (char c : s) {
    has_digit |= is_digit(c);
    has_marker |= (c == '.' || c == 'e' || c == 'E');
  }
  if (!has_digit || !has_marker) return std::nullopt;
  std::string_view body = s;
  if (!body.empty() && body[0] == '+') {
    body.remove_prefix(1);
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) return std::nullopt;
  }
  double value = 0;
  auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || end != body.data() + body.size()) return std::nullopt;
  return value;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '(') {
        out.push_back({Token::Kind::LParen, "(", here()});
        advance();
      } else if (c == ')') {
        out.push_back({Token::Kind::RParen, ")", here()});
        advance();
      } else if (c == '\'') {
        out.push_back({Token::Kind::Quote, "'", here()});
        advance();
      } else if (c == '"') {
        out.push_back(string_token());
      } else {
        out.push_back(atom_token());
      }
    }
    return out;
  }

 private:
  Location here() const { return {line_, column_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  Token string_token() {
    Location start = here();
    std::size_t begin = pos_;
    advance();
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        advance();
        if (pos_ >= text_.size()) break;
      }
      advance();
    }
    if (pos_ >= text_.size()) throw SyntaxError("unterminated string literal", start);
    advance();
    return {Token::Kind::String, std::string(text_.substr(begin, pos_ - begin)), start};
  }

  Token atom_token() {
    Location start = here();
    std::size_t begin = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) advance();
    std::string lexeme(text_.substr(begin, pos_ - begin));
    if (lexeme[0] == '#') {
      if (lexeme == "#t" || lexeme == "#f" || lexeme == "#true" || lexeme == "#false")
        return {Token::Kind::Boolean, lexeme, start};
      throw SyntaxError("unknown literal '" + lexeme + "'", start);
    }
    if (looks_integer(lexeme)) return {Token::Kind::Integer, lexeme, start};
    if (read_real(lexeme)) return {Token::Kind::Real, lexeme, start};
    return {Token::Kind::Symbol, lexeme, start};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

std::string unescape(const Token& token) {
  std::string_view body(token.text);
  body = body.substr(1, body.size() - 2);
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    char e = body[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case '\\': out += '\\'; break;
      case '"': out += '"'; break;
      default: throw SyntaxError(std::string("unknown escape '\\") + e + "'", token.where);
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  SExpr form() {
    const Token& t = tokens_[pos_++];
    switch (t.kind) {
      case Token::Kind::LParen: {
        SExpr::List items;
        while (true) {
          if (done()) throw SyntaxError("unmatched '(' opened at " + t.where.str(), t.where);
          if (tokens_[pos_].kind == Token::Kind::RParen) {
            ++pos_;
            break;
          }
          items.push_back(form());
        }
        return SExpr::list(std::move(items), t.where);
      }
      case Token::Kind::RParen:
        throw SyntaxError("unexpected ')'", t.where);
      case Token::Kind::Quote: {
        if (done()) throw SyntaxError("quote with no following form", t.where);
        SExpr quoted = form();
        return SExpr::list({SExpr::symbol("quote", t.where), quoted}, t.where);
      }
      case Token::Kind::Integer: {
        std::string_view digits(t.text);
        if (digits[0] == '+') digits.remove_prefix(1);
        return SExpr::integer(Integer(std::string(digits)), t.where);
      }
      case Token::Kind::Real:
        return SExpr::real(*read_real(t.text), t.where);
      case Token::Kind::Boolean:
        return SExpr::boolean(t.text == "#t" || t.text == "#true", t.where);
      case Token::Kind::String:
        return SExpr::text(unescape(t), t.where);
      case Token::Kind::Symbol:
        return SExpr::symbol(t.text, t.where);
    }
    throw SyntaxError("unreachable token kind", t.where);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void print_into(const SExpr& e, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Symbol>) {
          out += v.name;
        } else if constexpr (std::is_same_v<T, Integer>) {
          out += v.str();
        } else if constexpr (std::is_same_v<T, double>) {
          out += format_real(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          out += v ? "#t" : "#f";
        } else if constexpr (std::is_same_v<T, Text>) {
          out += quote_text(v.value);
        } else {
          out += '(';
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ' ';
            print_into(v[i], out);
          }
          out += ')';
        }
      },
      e.data());
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

std::vector<SExpr> parse(std::string_view text) {
  Parser parser(tokenize(text));
  std::vector<SExpr> forms;
  while (!parser.done()) forms.push_back(parser.form());
  return forms;
}

SExpr parse_one(std::string_view text) {
  auto forms = parse(text);
  if (forms.size() != 1)
    throw SyntaxError("expected exactly one form, found " + std::to_string(forms.size()));
  return forms.front();
}

std::string print(const SExpr& expr) {
  std::string out;
  print_into(expr, out);
  return out;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "+nan.0";
  if (std::isinf(value)) return value > 0 ? "+inf.0" : "-inf.0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote_text(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace conch
