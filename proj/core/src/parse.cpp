#include "eprod/parse.hpp"

#include <cctype>
#include <optional>
#include <variant>
#include <vector>

namespace eprod {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

UnknownSymbol::UnknownSymbol(const std::string& symbol, std::size_t position)
    : ParseError("unknown symbol '" + symbol + "'", position) {}

namespace {

struct Token {
  enum Kind { Number, Imaginary, Ident, Symbol, End } kind;
  std::string text;
  std::size_t position;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) { return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])); };
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (digit(i) || (ch == '.' && digit(i + 1))) {
      while (digit(i)) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (digit(i)) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t k = i + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (digit(k)) {
          i = k;
          while (digit(i)) ++i;
        }
      }
      std::string text(s.substr(start, i - start));
      const bool imaginary =
          i < s.size() && s[i] == 'i' && !(i + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[i + 1])));
      if (imaginary) ++i;
      out.push_back(Token{imaginary ? Token::Imaginary : Token::Number, std::move(text), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back(Token{Token::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::string_view("+-*/^()[],'").find(ch) == std::string_view::npos) throw UnknownSymbol(std::string(1, ch), i);
    out.push_back(Token{Token::Symbol, std::string(1, ch), start});
    ++i;
  }
  out.push_back(Token{Token::End, "", s.size()});
  return out;
}

Weight inverse(const Weight& w, std::size_t position) {
  if (w.is_zero()) throw ParseError("division by zero", position);
  const Rational n = w.re * w.re + w.im * w.im;
  Weight out{w.re / n, -w.im / n, Rational(1) / w.radicand};
  return Weight{} * out;  // folds square radicands
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

 protected:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  Token next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool accept(const char* symbol) {
    if (peek().kind == Token::Symbol && peek().text == symbol) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* symbol) {
    if (!accept(symbol)) throw ParseError(std::string("expected '") + symbol + "'", peek().position);
  }
  void expect_end() {
    if (peek().kind != Token::End) throw ParseError("unexpected '" + peek().text + "'", peek().position);
  }

  unsigned long integer() {
    const Token t = next();
    if (t.kind != Token::Number || t.text.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("expected a nonnegative integer", t.position);
    try {
      return std::stoul(t.text);
    } catch (const std::exception&) {
      throw ParseError("integer out of range", t.position);
    }
  }

  /// [-] number [/ number], for exp/cos/sin arguments and sqrt radicands.
  Rational rational() {
    const std::size_t at = peek().position;
    bool negative = false;
    while (peek().kind == Token::Symbol && (peek().text == "-" || peek().text == "+")) negative ^= next().text == "-";
    const Token t = next();
    if (t.kind != Token::Number) throw ParseError("expected a number", t.position);
    Rational r;
    try {
      r = parse_rational(t.text);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + t.text + "'", t.position);
    }
    if (accept("/")) {
      const Token d = next();
      if (d.kind != Token::Number) throw ParseError("expected a denominator", d.position);
      const Rational den = parse_rational(d.text);
      if (sgn(den) == 0) throw ParseError("division by zero", at);
      r /= den;
    }
    return negative ? Rational(-r) : r;
  }

  /// Scalar literal at the cursor, if any: number, 2i, i, sqrt(r).
  std::optional<Weight> scalar_literal() {
    const Token& t = peek();
    if (t.kind == Token::Number || t.kind == Token::Imaginary) {
      next();
      Rational v;
      try {
        v = parse_rational(t.text);
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + t.text + "'", t.position);
      }
      return t.kind == Token::Number ? Weight::real(v) : Weight{0, v, 1};
    }
    if (t.kind == Token::Ident && t.text == "i") {
      next();
      return Weight::imaginary_unit();
    }
    if (t.kind == Token::Ident && t.text == "sqrt") {
      next();
      expect("(");
      const std::size_t at = peek().position;
      const Rational r = rational();
      if (sgn(r) < 0) throw ParseError("sqrt of a negative number", at);
      expect(")");
      if (sgn(r) == 0) return Weight::real(0);
      return Weight{} * Weight{1, 0, r};
    }
    return std::nullopt;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------------ distributions

struct Value {
  std::variant<Weight, Distribution> v;
  bool scalar() const { return std::holds_alternative<Weight>(v); }
  const Weight& w() const { return std::get<Weight>(v); }
  const Distribution& d() const { return std::get<Distribution>(v); }
};

class DistributionParser : public Parser {
 public:
  using Parser::Parser;

  Distribution run() {
    const std::size_t at = peek().position;
    Value v = expression();
    expect_end();
    if (v.scalar()) {
      // "0" is how the zero distribution prints.
      if (v.w().is_zero()) return Distribution(LinearCombo{});
      throw ParseError("expected a distribution, got a scalar", at);
    }
    return canonicalize(v.d());
  }

 private:
  Value expression() {
    Value acc{Weight::real(0)};
    bool first = true;
    for (;;) {
      const std::size_t at = peek().position;
      bool negative = false;
      if (accept("-")) negative = true;
      else if (!first && !accept("+")) break;
      else if (first) accept("+");
      Value t = term();
      if (negative) t = scale(Weight::real(-1), t);
      acc = first ? t : add(acc, t, at);
      first = false;
      if (!(peek().kind == Token::Symbol && (peek().text == "+" || peek().text == "-"))) break;
    }
    return acc;
  }

  Value term() {
    Value acc = factor();
    for (;;) {
      const std::size_t at = peek().position;
      if (accept("*")) {
        Value rhs = factor();
        if (acc.scalar()) acc = scale(acc.w(), rhs);
        else if (rhs.scalar()) acc = scale(rhs.w(), acc);
        else throw ParseError("product of two distributions", at);
      } else if (accept("/")) {
        Value rhs = factor();
        if (!rhs.scalar()) throw ParseError("division by a distribution", at);
        acc = scale(inverse(rhs.w(), at), acc);
      } else {
        return acc;
      }
    }
  }

  static Value scale(const Weight& w, const Value& v) {
    if (v.scalar()) return Value{w * v.w()};
    return Value{w * v.d()};
  }

  static Value add(const Value& a, const Value& b, std::size_t at) {
    if (a.scalar() && b.scalar()) {
      if (a.w().radicand != b.w().radicand) throw ParseError("sum of scalars with different radicals", at);
      return Value{Weight{a.w().re + b.w().re, a.w().im + b.w().im, a.w().radicand}};
    }
    if (a.scalar() || b.scalar()) throw ParseError("sum of a scalar and a distribution", at);
    return Value{a.d() + b.d()};
  }

  Value factor() {
    if (accept("-")) return scale(Weight::real(-1), factor());
    if (accept("(")) {
      Value v = expression();
      expect(")");
      return v;
    }
    if (auto w = scalar_literal()) return Value{*w};
    const Token t = next();
    if (t.kind != Token::Ident) throw ParseError(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.position);
    if (t.text == "delta") {
      unsigned long order = 0;
      if (accept("^")) {
        if (accept("(")) {
          order = integer();
          expect(")");
        } else {
          order = integer();
        }
      }
      while (accept("'")) ++order;
      return Value{Distribution(DeltaDeriv{order})};
    }
    if (t.text == "x") {
      unsigned long degree = 1;
      if (accept("^")) {
        if (accept("(")) {
          degree = integer();
          expect(")");
        } else {
          degree = integer();
        }
      }
      return Value{Distribution(Monomial{degree})};
    }
    if (t.text == "phi" || t.text == "psi" || t.text == "e") {
      expect("(");
      const unsigned long n = integer();
      expect(")");
      if (t.text == "phi") return Value{Distribution(NormalizedMonomial{n})};
      if (t.text == "psi") return Value{Distribution(NormalizedDeltaDeriv{n})};
      return Value{Distribution(Eigenfunction{n})};
    }
    if (t.text == "exp" || t.text == "cos" || t.text == "sin") {
      expect("(");
      const Rational r = rational();
      expect(")");
      if (t.text == "exp") return Value{Distribution(ExpReal{r})};
      if (t.text == "cos") return Value{Distribution(CosWave{r})};
      return Value{Distribution(SinWave{r})};
    }
    if (t.text == "l2") {
      expect("[");
      std::vector<Weight> coefficients;
      if (!accept("]")) {
        do {
          const std::size_t at = peek().position;
          Value v = expression();
          if (!v.scalar()) throw ParseError("l2 entries must be scalars", at);
          coefficients.push_back(v.w());
        } while (accept(","));
        expect("]");
      }
      return Value{Distribution(L2Sample::from_coefficients(std::move(coefficients)))};
    }
    throw UnknownSymbol(t.text, t.position);
  }
};

// ---------------------------------------------------------------- operators

class OperatorParser : public Parser {
 public:
  using Parser::Parser;

  OperatorExpr run() {
    OperatorExpr op = expression();
    expect_end();
    return normalize(op);
  }

 private:
  OperatorExpr expression() {
    OperatorExpr acc;
    bool first = true;
    for (;;) {
      bool negative = false;
      if (accept("-")) negative = true;
      else if (!first && !accept("+")) break;
      else if (first) accept("+");
      OperatorExpr t = term();
      acc = negative ? acc - t : acc + t;
      first = false;
      if (!(peek().kind == Token::Symbol && (peek().text == "+" || peek().text == "-"))) break;
    }
    return acc;
  }

  bool starts_factor() const {
    const Token& t = peek();
    if (t.kind == Token::Number || t.kind == Token::Imaginary || t.kind == Token::Ident) return true;
    return t.kind == Token::Symbol && t.text == "(";
  }

  OperatorExpr term() {
    OperatorExpr acc = factor();
    for (;;) {
      const std::size_t at = peek().position;
      if (accept("*")) {
        acc = acc * factor();
      } else if (accept("/")) {
        OperatorExpr rhs = factor();
        if (rhs.terms.size() != 1 || !rhs.terms.front().word.empty())
          throw ParseError("division by an operator", at);
        acc = inverse(rhs.terms.front().coefficient, at) * acc;
      } else if (starts_factor()) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  OperatorExpr factor() {
    if (accept("-")) return Weight::real(-1) * factor();
    if (accept("(")) {
      OperatorExpr v = expression();
      expect(")");
      return v;
    }
    if (auto w = scalar_literal()) return OperatorExpr{{OperatorTerm{*w, {}}}};
    const Token t = next();
    if (t.kind != Token::Ident) throw ParseError(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.position);
    if (t.text == "id") return OperatorExpr::identity();
    // Letters may be run together, e.g. "ccdag"; longest names first.
    static const std::vector<std::pair<std::string, std::optional<Letter>>> names = {
        {"cdag", Letter::CDag}, {"c", Letter::C}, {"x", Letter::X}, {"D", Letter::D},
        {"a", Letter::D},       {"b", Letter::X}, {"I", std::nullopt}};
    OperatorExpr word = OperatorExpr::identity();
    std::size_t i = 0;
    while (i < t.text.size()) {
      bool matched = false;
      for (const auto& [name, letter] : names) {
        if (t.text.compare(i, name.size(), name) == 0) {
          if (letter) word = word * OperatorExpr::letter(*letter);
          i += name.size();
          matched = true;
          break;
        }
      }
      if (!matched) throw UnknownSymbol(t.text, t.position);
    }
    return word;
  }
};

}  // namespace

Distribution parse_distribution(std::string_view text) { return DistributionParser(text).run(); }

OperatorExpr parse_operator(std::string_view text) { return OperatorParser(text).run(); }

}  // namespace eprod
