#include <gtest/gtest.h>

#include <random>

#include "eprod/eproduct.hpp"
#include "eprod/hermite.hpp"
#include "eprod/parse.hpp"
#include "eprod/special_functions.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace eprod;
using testutil::bits;
using testutil::close;
using testutil::eps;

namespace {

Distribution P(const char* text) { return parse_distribution(text); }

// e_n(0) as an exact sum.
ExactSum e_at_zero(unsigned long n) {
  const SurdTerm norm = eigenfunction_norm(n);
  return ExactSum(SurdTerm(norm.coefficient() * hermite_at_zero(n), norm.radicand()));
}

Distribution random_l2(std::mt19937& rng, unsigned long length) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  std::vector<Weight> c;
  for (unsigned long n = 0; n < length; ++n) c.push_back(Weight{Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 1});
  return canonicalize(L2Sample::from_coefficients(c));
}

}  // namespace

TEST(PartialSums, Examples) {
  const Bits b = bits();
  const auto e5 = partial_sums(P("l2[0,0,0,0,0,1]"), P("e(5)"), 12, b);
  for (unsigned long K = 0; K < 12; ++K) EXPECT_TRUE(close(e5[K], Complex(Real(K >= 5 ? 1 : 0, b)), eps(75))) << K;

  const auto de2 = exact_partial_sums(P("delta"), P("e(2)"), 8);
  for (unsigned long K = 0; K < 8; ++K) EXPECT_EQ(de2[K], ExactComplex(K >= 2 ? e_at_zero(2) : ExactSum())) << K;

  const auto dd = exact_partial_sums(P("delta"), P("delta"), 4);
  const ExactSum expected(ExactTerm(Rational(3, 2), -1, 0));
  EXPECT_EQ(dd[3], ExactComplex(expected));
  EXPECT_TRUE(close(partial_sums(P("delta"), P("delta"), 4, b)[3],
                    Complex(Real(3, b) / 2 / sqrt(Real::pi(b))), eps(75)));
}

TEST(Classify, ExamplesFromTheWorkedCases) {
  SummationConfig cfg;
  const Bits b = cfg.bits();
  const EProductResult exp1 = classify_and_sum(P("exp(1)"), P("delta"), cfg);
  EXPECT_TRUE(exp1.status == Status::AbelSummable || exp1.status == Status::Convergent) << to_string(exp1.status);
  ASSERT_TRUE(exp1.value);
  EXPECT_TRUE(close(*exp1.value, Complex(Real(1, b)), eps(20)));

  const EProductResult c = classify_and_sum(P("cos(1)"), P("delta"), cfg);
  ASSERT_TRUE(c.value);
  EXPECT_TRUE(close(*c.value, Complex(Real(1, b)), eps(20)));
  const EProductResult s = classify_and_sum(P("sin(1)"), P("delta"), cfg);
  EXPECT_EQ(s.status, Status::ZeroByParity);
  ASSERT_TRUE(s.value);
  EXPECT_TRUE(s.value->is_zero());

  const EProductResult dd = classify_and_sum(P("delta"), P("delta"), cfg);
  EXPECT_EQ(dd.status, Status::Divergent);
  EXPECT_FALSE(dd.value);
  ASSERT_TRUE(dd.diagnostics.raabe_estimate);
  EXPECT_TRUE(close(*dd.diagnostics.raabe_estimate, Real::parse("0.5", b), Real::parse("0.05", b)));

  for (unsigned k = 0; k <= 6; ++k)
    for (unsigned l = 0; l <= 6; ++l) {
      if ((k + l) % 2 == 0) continue;
      const Distribution a = DeltaDeriv{k}, bb = DeltaDeriv{l};
      const EProductResult r = classify_and_sum(a, bb, cfg);
      EXPECT_EQ(r.status, Status::ZeroByParity) << k << "," << l;
      ASSERT_TRUE(r.value);
      EXPECT_TRUE(r.value->is_zero());
    }
}

TEST(Classify, DominationCertificateForFirstDerivative) {
  SummationConfig cfg;
  const EProductResult r = classify_and_sum(P("delta'"), P("delta'"), cfg);
  EXPECT_EQ(r.status, Status::Divergent);
  EXPECT_EQ(r.diagnostics.certificate, "domination");
  // Termwise: (e'_{2n+1}(0))^2 >= 2 (e_{2n}(0))^2.
  const auto d1 = coeff_sequence(P("delta'"), bits());
  const auto d0 = coeff_sequence(P("delta"), bits());
  for (unsigned long n = 0; n < 200; ++n) {
    const Real lhs = norm(d1.at(2 * n + 1));
    const Real rhs = 2 * norm(d0.at(2 * n));
    EXPECT_TRUE(lhs >= rhs) << n;
  }
}

TEST(Classify, ValueIffValuedStatus) {
  SummationConfig cfg;
  for (const auto& [l, r] : {std::pair{"exp(1/2)", "delta"}, {"delta", "delta"}, {"e(3)", "x^3"}, {"phi(1)", "psi(1)"},
                             {"delta'", "delta'"}, {"sin(1)", "delta"}}) {
    const EProductResult res = classify_and_sum(P(l), P(r), cfg);
    EXPECT_EQ(res.value.has_value(), has_value(res.status)) << l << " " << r;
  }
}

TEST(Classify, SingleBasisElementIsExact) {
  SummationConfig cfg;
  for (const char* g : {"delta", "delta'''", "x^4", "psi(2) + 3*phi(4)", "i*delta''"}) {
    const Distribution G = P(g);
    for (unsigned long m = 0; m <= 6; ++m) {
      const Distribution em = Eigenfunction{m};
      const EProductResult r = classify_and_sum(G, em, cfg);
      ASSERT_TRUE(r.exact_value) << g << " m=" << m;
      EXPECT_EQ(*r.exact_value, conj(*coeff_exact(G, m))) << g << " m=" << m;
      const auto sums = exact_partial_sums(G, em, m + 4);
      for (unsigned long K = 0; K < sums.size(); ++K)
        EXPECT_EQ(sums[K], K >= m ? conj(*coeff_exact(G, m)) : ExactComplex()) << g << " K=" << K;
    }
  }
}

TEST(Properties, ConjugateSymmetry) {
  const Distribution F = P("i*delta + x^2 - 1/2*psi(3)");
  const Distribution G = P("delta'' + 2*e(3) + (1-i)*phi(1)");
  const auto fg = exact_partial_sums(F, G, 60);
  const auto gf = exact_partial_sums(G, F, 60);
  for (unsigned long K = 0; K < 60; ++K) EXPECT_EQ(fg[K], conj(gf[K])) << K;
  const Bits b = bits();
  const auto nfg = partial_sums(P("exp(1/2)"), P("cos(2) + i*delta"), 60, b);
  const auto ngf = partial_sums(P("cos(2) + i*delta"), P("exp(1/2)"), 60, b);
  for (unsigned long K = 0; K < 60; ++K) EXPECT_TRUE(nfg[K] == conj(ngf[K])) << K;
}

TEST(Properties, Linearity) {
  const Distribution F = P("delta + x");
  const Distribution G = P("psi(2)");
  const Distribution L = P("x^3 - delta'");
  const Weight alpha{Rational(3, 2), Rational(-2), 1};
  const Weight beta{Rational(-1, 5), Rational(1), 1};
  const auto lhs = exact_partial_sums(F, alpha * G + beta * L, 60);
  const auto g = exact_partial_sums(F, G, 60);
  const auto l = exact_partial_sums(F, L, 60);
  for (unsigned long K = 0; K < 60; ++K)
    EXPECT_EQ(lhs[K], alpha.to_exact() * g[K] + beta.to_exact() * l[K]) << K;
}

TEST(Properties, PositivityOfDiagonalPartialSums) {
  const Bits b = bits();
  for (const char* f : {"cos(1) + 2*delta'", "exp(-1)", "(1+i)*x^2 + psi(1)"}) {
    const auto s = partial_sums(P(f), P(f), 200, b);
    for (unsigned long K = 0; K < s.size(); ++K) {
      EXPECT_TRUE(s[K].im.is_zero()) << f << " K=" << K;
      EXPECT_TRUE(s[K].re.sign() >= 0) << f << " K=" << K;
      if (K > 0) EXPECT_TRUE(s[K].re >= s[K - 1].re) << f << " K=" << K;
    }
  }
}

TEST(Properties, ParsevalAgainstQuadrature) {
  SummationConfig cfg;
  const Bits b = cfg.bits();
  std::mt19937 rng(5);
  const oracle::EigenGrid grid(8, b);
  for (int trial = 0; trial < 5; ++trial) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
    std::vector<Weight> fc, gc;
    for (unsigned long n = 0; n <= 8; ++n) {
      fc.push_back(Weight::real(Rational(num(rng), den(rng))));
      gc.push_back(Weight::real(Rational(num(rng), den(rng))));
    }
    const Distribution f = L2Sample::from_coefficients(fc), g = L2Sample::from_coefficients(gc);
    Real integral(b);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
      Real fx(b), gx(b);
      for (unsigned long n = 0; n <= 8; ++n) {
        fx += Real(fc[n].re, b) * grid.e[n][i];
        gx += Real(gc[n].re, b) * grid.e[n][i];
      }
      integral += fx * gx;
    }
    integral *= grid.h;
    const EProductResult r = classify_and_sum(f, g, cfg);
    ASSERT_TRUE(r.value);
    EXPECT_TRUE(close(*r.value, Complex(integral), eps(45) * max(abs(integral), Real(1, b)))) << trial;
  }
}

TEST(Properties, BesselBound) {
  SummationConfig cfg;
  cfg.digits = 30;
  const Bits b = cfg.bits();
  std::mt19937 rng(3);
  const oracle::EigenGrid grid(10, b, 4, 12);
  std::uniform_int_distribution<unsigned long> length(1, 11);
  for (int trial = 0; trial < 100; ++trial) {
    const Distribution f = random_l2(rng, length(rng));
    const Distribution g = random_l2(rng, length(rng));
    // L2 norms from samples, independent of the coefficient lists.
    auto l2_norm = [&](const Distribution& d) {
      Real re_sq(b);
      const auto c = coeff_sequence(d, b);
      for (std::size_t i = 0; i < grid.x.size(); ++i) {
        Complex v(b);
        for (unsigned long n = 0; n <= 10; ++n) v = v + c.at(n) * grid.e[n][i];
        re_sq += norm(v);
      }
      return sqrt(re_sq * grid.h);
    };
    const EProductResult r = classify_and_sum(f, g, cfg);
    ASSERT_TRUE(r.value) << trial;
    EXPECT_TRUE(abs(*r.value) <= l2_norm(f) * l2_norm(g) * (1 + eps(20, b))) << trial;
  }
}

TEST(ExactSeriesTerm, Examples) {
  EXPECT_EQ(exact_series_term('a', 0, 0, 0), ExactTerm(1, 2, 0));
  for (unsigned long j = 0; j <= 12; ++j) {
    // (-4)^j Gamma(j + 1/2)^2 / (2j)!
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), 2 * j);
    const ExactTerm g = gamma_half_integer(j);
    ExactTerm want = g * g * ExactTerm(Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(2 * j), f));
    if (j % 2) want = -want;
    EXPECT_EQ(exact_series_term('a', j, 0, 0), want) << j;
    for (unsigned long n = 0; n <= 3; ++n)
      for (unsigned long m = 0; m <= 3; ++m) {
        const ExactTerm a = exact_series_term('a', j, n, m), c = exact_series_term('c', j, n, m);
        EXPECT_EQ(c, j % 2 ? -a : a) << j << n << m;
        const ExactTerm bb = exact_series_term('b', j, n, m), d = exact_series_term('d', j, n, m);
        EXPECT_EQ(d, j % 2 ? -bb : bb) << j << n << m;
      }
  }
}

TEST(ExactSeriesTerm, RecurrenceStreamsMatchExactTerms) {
  const Bits b = bits();
  for (char kind : {'a', 'b', 'c', 'd'}) {
    const CoeffSequence fast = series_terms(kind, 2, 1)(b);
    const CoeffSequence exact = exact_series_terms(kind, 2, 1)(b);
    for (unsigned long j = 0; j <= 60; ++j) {
      const Real want = exact_series_term(kind, j, 2, 1).to_real(b);
      const Real scale = max(abs(want), Real(1, b));
      EXPECT_TRUE(close(exact.at(j).re, want, eps(75) * scale)) << kind << j;
      EXPECT_TRUE(close(fast.at(j).re, want, eps(70) * scale)) << kind << j;
    }
  }
}

TEST(Products, PhiPsiExamples) {
  SummationConfig cfg;
  const Bits b = cfg.bits();
  for (auto [n, m] : {std::pair{0ul, 0ul}, {1ul, 1ul}, {2ul, 0ul}, {3ul, 3ul}, {4ul, 2ul}}) {
    const EProductResult r = phi_psi_product(n, m, cfg);
    ASSERT_TRUE(r.value) << n << m;
    EXPECT_TRUE(close(*r.value, Complex(Real(n == m ? 1 : 0, b)), eps(12))) << n << m;
  }
  const EProductResult odd = phi_psi_product(2, 1, cfg);
  EXPECT_EQ(odd.status, Status::ZeroByParity);
  EXPECT_TRUE(odd.value->is_zero());
}

TEST(Products, DerivedPrefactorsReproduceTheSeries) {
  for (const char* family : {"phi-psi", "phi-phi", "psi-psi"})
    for (unsigned long n = 0; n <= 5; ++n)
      for (unsigned long m = 0; m <= 5; ++m) {
        const auto d = decompose(family, n, m);
        EXPECT_EQ(d.has_value(), (n + m) % 2 == 0) << family << n << m;
      }
  // Lattice term 1 of <phi_2, psi_2>_e is conj(<e_2, phi_2>) <e_2, psi_2>.
  const auto d = decompose("phi-psi", 2, 2);
  ASSERT_TRUE(d);
  const ExactComplex term = conj(*coeff_exact(P("phi(2)"), 2)) * *coeff_exact(P("psi(2)"), 2);
  const ExactComplex via = ExactComplex(ExactSum(d->prefactor * SurdTerm(exact_series_term(d->kind, 1, d->n, d->m))));
  EXPECT_EQ(term, via);
}

TEST(Products, SameParityDiverges) {
  SummationConfig cfg;
  for (unsigned long n = 0; n <= 3; ++n)
    for (unsigned long m = 0; m <= 3; ++m) {
      const Status want = (n + m) % 2 ? Status::ZeroByParity : Status::Divergent;
      EXPECT_EQ(phi_phi_product(n, m, cfg).status, want) << n << m;
      EXPECT_EQ(psi_psi_product(n, m, cfg).status, want) << n << m;
    }
}

TEST(Products, PsiPsiIsPhiPhiOverTwoPi) {
  // Partial sums S_K of the (2n, 2m) products satisfy psi = (-1)^(n+m) / (2 pi) phi.
  const ExactTerm two_pi(2, 2, 0);
  for (unsigned long n = 0; n <= 2; ++n)
    for (unsigned long m = 0; m <= 2; ++m) {
      const auto i = std::to_string(2 * n), j = std::to_string(2 * m);
      const auto phi = exact_partial_sums(P(("phi(" + i + ")").c_str()), P(("phi(" + j + ")").c_str()), 60);
      const auto psi = exact_partial_sums(P(("psi(" + i + ")").c_str()), P(("psi(" + j + ")").c_str()), 60);
      const ExactComplex factor(ExactSum(ExactTerm((n + m) % 2 ? -1 : 1) / two_pi));
      for (unsigned long K = 0; K < 60; ++K) EXPECT_EQ(psi[K], factor * phi[K]) << n << m << " K=" << K;
    }
}
