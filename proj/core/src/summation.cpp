#include "eprod/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace eprod {

Real SummationConfig::tol(Bits bits) const {
  if (sgn(tolerance) > 0) return Real(tolerance, bits);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, 2 * digits / 5);
  return Real(Rational(mpz_class(1), power), bits);
}

void SummationConfig::validate() const {
  if (digits < 30) throw std::invalid_argument("digits must be at least 30");
  if (max_terms < 16) throw std::invalid_argument("max_terms must be at least 16");
  if (sgn(tolerance) < 0) throw std::invalid_argument("tolerance must be positive");
  if (abel_levels < 6) throw std::invalid_argument("abel_levels must be at least 6");
  if (extrapolation_depth < 1) throw std::invalid_argument("extrapolation_depth must be at least 1");
  if (sgn(divergence_margin) <= 0 || divergence_margin >= 1)
    throw std::invalid_argument("divergence_margin must lie in (0, 1)");
  if (sgn(partial_sum_cap) <= 0) throw std::invalid_argument("partial_sum_cap must be positive");
  if (wynn_terms < 4) throw std::invalid_argument("wynn_terms must be at least 4");
}

unsigned SummationConfig::worker_count() const {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// ------------------------------------------------------------------- Raabe

namespace {

Real neville_real(const std::vector<Real>& xs, std::vector<Real> ys, const Real& x0) {
  const std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const Real& xi = xs[i];
      const Real& xj = xs[i + level];
      ys[i] = ((x0 - xj) * ys[i] + (xi - x0) * ys[i + 1]) / (xi - xj);
    }
  }
  return ys[0];
}

}  // namespace

Real raabe_test(const std::vector<Real>& terms, unsigned long first, unsigned long last) {
  if (last > terms.size()) last = terms.size();
  if (last < first + 8) throw std::invalid_argument("raabe_test: window too short");
  const Bits bits = terms[first].bits();
  for (unsigned long n = first; n < last; ++n)
    if (terms[n].sign() <= 0) throw std::domain_error("raabe_test: nonpositive term at index " + std::to_string(n));

  auto rho = [&](unsigned long n) { return (terms[n] / terms[n + 1] - 1) * static_cast<long>(n); };
  std::vector<Real> xs;
  std::vector<Real> ys;
  unsigned long n = last - 2;
  for (int i = 0; i < 4 && n >= first && n > 0; ++i, n /= 2) {
    xs.push_back(Real(1, bits) / static_cast<long>(n));
    ys.push_back(rho(n));
    if (n / 2 < first) break;
  }
  return neville_real(xs, ys, Real(bits));
}

Real raabe_test(const std::vector<Real>& terms) { return raabe_test(terms, terms.size() / 8 + 1, terms.size()); }

std::optional<Real> ratio_estimate(const std::vector<Real>& magnitudes) {
  // Tail = last quarter, skipping exact zeros.
  std::vector<std::size_t> nonzero;
  for (std::size_t n = magnitudes.size() * 3 / 4; n < magnitudes.size(); ++n)
    if (!magnitudes[n].is_zero()) nonzero.push_back(n);
  if (nonzero.size() < 2) return std::nullopt;
  const std::size_t a = nonzero.front();
  const std::size_t b = nonzero.back();
  const double log_ratio = (magnitudes[b].log10_abs() - magnitudes[a].log10_abs()) / static_cast<double>(b - a);
  return Real::from_double(std::pow(10.0, log_ratio), magnitudes[a].bits());
}

// -------------------------------------------------------------------- Wynn

WynnResult wynn_epsilon(const std::vector<Complex>& s) {
  if (s.empty()) throw std::invalid_argument("wynn_epsilon: empty sequence");
  const Bits bits = s.front().bits();
  const Real huge = Real::pow2(static_cast<long>(bits), bits);
  const std::size_t n = s.size();

  // Column-by-column: previous = eps_{k-1}, current = eps_k.
  std::vector<Complex> previous(n + 1, Complex(bits));
  std::vector<Complex> current(s.begin(), s.end());
  WynnResult best{s.back(), n >= 2 ? abs(s[n - 1] - s[n - 2]) : huge};
  for (std::size_t k = 1; current.size() > 1; ++k) {
    std::vector<Complex> next;
    next.reserve(current.size() - 1);
    for (std::size_t i = 0; i + 1 < current.size(); ++i) {
      const Complex diff = current[i + 1] - current[i];
      Complex inverse = diff.is_zero() ? Complex(huge) : Complex(Real(1, bits)) / diff;
      next.push_back(previous[i + 1] + inverse);
    }
    previous = std::move(current);
    current = std::move(next);
    if (k % 2 == 0 && current.size() >= 2) {
      const Complex& last = current.back();
      const Complex& before = current[current.size() - 2];
      if (!last.is_finite() || !before.is_finite()) continue;
      Real error = abs(last - before);
      if (error < best.error) best = WynnResult{last, std::move(error)};
    }
  }
  return best;
}

Complex neville(const std::vector<Real>& xs, const std::vector<Complex>& ys, const Real& x0) {
  if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("neville: size mismatch");
  std::vector<Complex> p(ys);
  const std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const Real& xi = xs[i];
      const Real& xj = xs[i + level];
      p[i] = (p[i] * (x0 - xj) + p[i + 1] * (xi - x0)) / (xi - xj);
    }
  }
  return p[0];
}

// -------------------------------------------------------------------- Abel

namespace {

constexpr int kQuietRun = 16;

double log2_magnitude(const Complex& z) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Real* part : {&z.re, &z.im}) {
    if (part->is_zero()) continue;
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, part->get(), MPFR_RNDN);
    best = std::max(best, std::log2(std::fabs(m)) + static_cast<double>(e));
  }
  return best;
}

// Number of terms needed at 1 - h and the largest log2 |u_n r^n| seen, from
// log-magnitudes only. Scanning stops early once the peak passes peak_limit.
struct Truncation {
  enum Outcome { Done, NeedMore, TooMuchCancellation } outcome;
  unsigned long terms;
  double peak_log2;
};

Truncation truncation(const std::vector<double>& log_mag, double h, double threshold_log2, double peak_limit) {
  const double log2_r = std::log2(1.0 - h);
  const double quiet_below = threshold_log2 + std::log2(h);
  const unsigned long minimum = static_cast<unsigned long>(2.0 / h);
  double peak = -std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (unsigned long n = 0; n < log_mag.size(); ++n) {
    const double v = log_mag[n] + static_cast<double>(n) * log2_r;
    peak = std::max(peak, v);
    if (peak > peak_limit) return Truncation{Truncation::TooMuchCancellation, n + 1, peak};
    quiet = v < quiet_below ? quiet + 1 : 0;
    if (quiet >= kQuietRun && n >= minimum) return Truncation{Truncation::Done, n + 1, peak};
  }
  return Truncation{Truncation::NeedMore, log_mag.size(), peak};
}

Complex abel_value(const std::vector<Complex>& u, const Real& r, unsigned long count) {
  const Bits bits = r.bits();
  Real re(bits);
  Real im(bits);
  Real power(1, bits);
  for (unsigned long n = 0; n < count; ++n) {
    if (!u[n].re.is_zero()) re.add_product(u[n].re, power);
    if (!u[n].im.is_zero()) im.add_product(u[n].im, power);
    power *= r;
  }
  return Complex(std::move(re), std::move(im));
}

template <typename F>
void parallel_for(std::size_t count, unsigned workers, F&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

AbelResult abel_sum(const TermSource& source, const SummationConfig& cfg) {
  cfg.validate();
  AbelResult result;
  const unsigned digits = cfg.digits;
  const double log2_10 = std::log2(10.0);
  const double threshold_log2 = -(digits + 20.0) * log2_10;
  const double peak_limit = cfg.guard_digits * log2_10;

  // Magnitudes at modest precision fix the term count and the cancellation
  // each level has to absorb; each level is then evaluated at a precision
  // covering its own cancellation.
  const CoeffSequence probe = source(bits_for_digits(30));
  std::vector<double> log_mag;
  auto extend = [&](unsigned long count) {
    while (log_mag.size() < count) log_mag.push_back(log2_magnitude(probe.at(log_mag.size())));
  };

  std::optional<CoeffSequence> series;
  std::vector<Complex> u;
  Bits term_bits = 0;

  const unsigned m = cfg.extrapolation_depth + 1;
  std::optional<Complex> previous;
  Real tol = cfg.tol(cfg.bits());
  for (unsigned k = 4; k <= cfg.abel_levels; ++k) {
    const double h_min = std::ldexp(1.0, -static_cast<int>(k));
    Truncation t{Truncation::NeedMore, 0, 0};
    for (unsigned long want = std::max<unsigned long>(64, static_cast<unsigned long>(8.0 / h_min));; want *= 2) {
      extend(std::min(want, cfg.abel_term_budget));
      t = truncation(log_mag, h_min, threshold_log2, peak_limit);
      if (t.outcome != Truncation::NeedMore || want >= cfg.abel_term_budget) break;
    }
    if (t.outcome == Truncation::NeedMore) {
      result.failure = "level " + std::to_string(k) + " needs more than " + std::to_string(cfg.abel_term_budget) +
                       " terms";
      break;
    }
    if (t.outcome == Truncation::TooMuchCancellation) {
      result.failure = "level " + std::to_string(k) + " cancels more than " + std::to_string(cfg.guard_digits) +
                       " digits";
      break;
    }

    const unsigned cancellation = static_cast<unsigned>(std::ceil(std::max(0.0, t.peak_log2 / log2_10)));
    const unsigned level_digits = digits + 30 + cancellation;
    const Bits bits = bits_for_digits(level_digits);
    if (bits > term_bits) {
      series.emplace(source(bits));
      term_bits = bits;
      u.clear();
    }
    if (u.size() < t.terms) u = series->prefix(t.terms);
    result.working_digits = std::max(result.working_digits, level_digits);
    result.terms_used = std::max(result.terms_used, t.terms);
    tol = cfg.tol(bits);

    const Real pi = Real::pi(bits);
    const Real a = Real::pow2(-static_cast<long>(k), bits);
    // Nodes in [2^-k, 2^(3-k)], capped at 1/2, so singularities just past
    // r = 1 recede relative to the interval as k grows.
    const Real b = k >= 4 ? Real::pow2(3 - static_cast<long>(k), bits) : Real(Rational(1, 2), bits);
    std::vector<Real> hs;
    for (unsigned i = 0; i < m; ++i) {
      const Real angle = pi * static_cast<long>(2 * i + 1) / static_cast<long>(2 * m);
      hs.push_back((a + b) / 2 + (b - a) / 2 * cos(angle));
    }
    hs.push_back(a);  // 1 - r_k itself, reported in the trace
    std::vector<Complex> values(hs.size(), Complex(bits));
    parallel_for(hs.size(), cfg.worker_count(), [&](std::size_t i) {
      const Truncation ti = truncation(log_mag, hs[i].to_double(), threshold_log2, peak_limit);
      const unsigned long count = ti.outcome == Truncation::Done ? std::min(ti.terms, t.terms) : t.terms;
      values[i] = abel_value(u, Real(1, bits) - hs[i], count);
    });
    const Complex at_rk = values.back();
    hs.pop_back();
    values.pop_back();
    Complex extrapolant = neville(hs, values, Real(bits));
    result.trace.push_back(AbelTraceEntry{Real(1, bits) - a, at_rk, extrapolant});
    if (previous) {
      Real scale = abs(extrapolant);
      if (scale < 1) scale = Real(1, bits);
      if (abs(extrapolant - *previous) <= tol * scale) {
        result.converged = true;
        result.value = extrapolant;
        break;
      }
    }
    previous = std::move(extrapolant);
  }
  if (!result.converged && result.failure.empty()) result.failure = "successive Abel extrapolants did not agree";
  if (!series) {
    series.emplace(source(cfg.bits()));
    term_bits = cfg.bits();
  }
  if (u.size() < cfg.wynn_terms) u = series->prefix(cfg.wynn_terms);

  std::vector<Complex> partial;
  partial.reserve(cfg.wynn_terms);
  Complex running(term_bits);
  for (unsigned n = 0; n < cfg.wynn_terms && n < u.size(); ++n) {
    running += u[n];
    partial.push_back(running);
  }
  result.wynn = wynn_epsilon(partial).value;
  if (result.value) {
    Real scale = abs(*result.value);
    if (scale < 1) scale = Real(1, term_bits);
    result.wynn_agrees = abs(*result.wynn - *result.value) <= tol * scale * 10;
  }
  return result;
}

AbelResult abel_sum(const std::function<Complex(unsigned long, Bits)>& term, const SummationConfig& cfg) {
  TermSource source = [term](Bits bits) {
    CoeffSequence::GeneratorFactory factory = [term, bits]() -> CoeffSequence::Generator {
      auto index = std::make_shared<unsigned long>(0);
      return [term, bits, index]() { return term((*index)++, bits); };
    };
    return CoeffSequence(std::move(factory), bits, CoeffSequence::Options{});
  };
  return abel_sum(source, cfg);
}

}  // namespace eprod
