#pragma once

#include <gtest/gtest.h>

#include <string>

#include "eprod/real.hpp"
#include "eprod/summation.hpp"

namespace testutil {

using eprod::Bits;
using eprod::Complex;
using eprod::Real;

/// Precision D of the default configuration and its working precision.
constexpr unsigned kDigits = 60;
inline Bits bits() { return eprod::SummationConfig{}.bits(); }

/// 10^-e at the working precision.
inline Real eps(unsigned e, Bits b = bits()) { return Real::parse("1e-" + std::to_string(e), b); }

inline ::testing::AssertionResult close(const Real& a, const Real& b, const Real& tol) {
  const Real d = abs(a - b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.to_string(30) << " vs " << b.to_string(30) << " (|diff| "
                                       << d.to_string(3) << " > " << tol.to_string(3) << ")";
}

inline ::testing::AssertionResult close(const Complex& a, const Complex& b, const Real& tol) {
  const Real d = abs(a - b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.re.to_string(30) << "+" << a.im.to_string(30) << "i vs "
                                       << b.re.to_string(30) << "+" << b.im.to_string(30) << "i (|diff| "
                                       << d.to_string(3) << ")";
}

}  // namespace testutil
