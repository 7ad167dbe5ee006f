#pragma once

// Text forms of distributions and operators.
//
//   distribution: delta, delta^(k), delta', x, x^n, phi(n), psi(n), e(n),
//                 exp(r), cos(r), sin(r), l2[w0, w1, ...]
//   operator:     c, cdag, x, D (aliases a = D, b = x, I = identity), composed
//                 by juxtaposition or '*'
//
// Both accept rational and complex scalars (2.5, -1/3, i, 2i, (1+2i),
// sqrt(2)), '*', '/' by a scalar, '+', '-' and parentheses.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eprod/distribution.hpp"
#include "eprod/operators.hpp"

namespace eprod {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  /// Zero-based offset into the input.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public ParseError {
 public:
  UnknownSymbol(const std::string& symbol, std::size_t position);
};

/// Canonical distribution; throws ParseError or UnknownSymbol.
Distribution parse_distribution(std::string_view text);
OperatorExpr parse_operator(std::string_view text);

}  // namespace eprod
