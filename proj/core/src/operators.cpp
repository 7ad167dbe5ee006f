#include "eprod/operators.hpp"

#include <algorithm>
#include <memory>
#include <tuple>

namespace eprod {

const char* to_string(Letter l) {
  switch (l) {
    case Letter::C: return "c";
    case Letter::CDag: return "cdag";
    case Letter::X: return "x";
    default: return "D";
  }
}

bool OperatorExpr::is_ladder() const {
  for (const auto& t : terms)
    for (Letter l : t.word)
      if (l != Letter::C && l != Letter::CDag) return false;
  return true;
}

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
  OperatorExpr out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return normalize(out);
}

OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return a + Weight::real(-1) * b; }

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  OperatorExpr out;
  for (const auto& x : a.terms) {
    for (const auto& y : b.terms) {
      OperatorTerm t{x.coefficient * y.coefficient, x.word};
      t.word.insert(t.word.end(), y.word.begin(), y.word.end());
      out.terms.push_back(std::move(t));
    }
  }
  return normalize(out);
}

OperatorExpr operator*(const Weight& w, const OperatorExpr& a) {
  OperatorExpr out = a;
  for (auto& t : out.terms) t.coefficient = w * t.coefficient;
  return normalize(out);
}

OperatorExpr normalize(const OperatorExpr& op) {
  std::vector<OperatorTerm> merged;
  for (const auto& t : op.terms) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const OperatorTerm& m) {
      return m.word == t.word && m.coefficient.radicand == t.coefficient.radicand;
    });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->coefficient.re += t.coefficient.re;
      it->coefficient.im += t.coefficient.im;
    }
  }
  std::erase_if(merged, [](const OperatorTerm& t) { return t.coefficient.is_zero(); });
  std::stable_sort(merged.begin(), merged.end(), [](const OperatorTerm& a, const OperatorTerm& b) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    if (a.word != b.word) return a.word < b.word;
    return a.coefficient.radicand < b.coefficient.radicand;
  });
  return OperatorExpr{std::move(merged)};
}

OperatorExpr to_ladder(const OperatorExpr& op) {
  const Weight half_root{1, 0, Rational(1, 2)};
  const OperatorExpr c = OperatorExpr::letter(Letter::C);
  const OperatorExpr cdag = OperatorExpr::letter(Letter::CDag);
  const OperatorExpr x = half_root * (c + cdag);
  const OperatorExpr d = half_root * (c - cdag);
  OperatorExpr out;
  for (const auto& t : op.terms) {
    OperatorExpr product{{OperatorTerm{t.coefficient, {}}}};
    for (Letter l : t.word) {
      switch (l) {
        case Letter::X: product = product * x; break;
        case Letter::D: product = product * d; break;
        default: product = product * OperatorExpr::letter(l); break;
      }
    }
    out.terms.insert(out.terms.end(), product.terms.begin(), product.terms.end());
  }
  return normalize(out);
}

std::string print(const OperatorExpr& op) {
  if (op.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < op.terms.size(); ++i) {
    Weight w = op.terms[i].coefficient;
    const bool negative = sgn(w.im) == 0 && sgn(w.re) < 0;
    if (negative) w.re = -w.re;
    if (i == 0) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";

    std::string word;
    for (Letter l : op.terms[i].word) word += (word.empty() ? "" : " ") + std::string(to_string(l));
    if (w.is_one()) {
      out += word.empty() ? "I" : word;
    } else {
      out += w.to_string();
      if (!word.empty()) out += "*" + word;
    }
  }
  return out;
}

OperatorExpr ddagger(const OperatorExpr& op) {
  OperatorExpr out;
  for (const auto& t : op.terms) {
    OperatorTerm r{t.coefficient.conj(), {}};
    for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) {
      switch (*it) {
        case Letter::C: r.word.push_back(Letter::CDag); break;
        case Letter::CDag: r.word.push_back(Letter::C); break;
        case Letter::X: r.word.push_back(Letter::X); break;
        case Letter::D:
          r.word.push_back(Letter::D);
          r.coefficient.re = -r.coefficient.re;
          r.coefficient.im = -r.coefficient.im;
          break;
      }
    }
    out.terms.push_back(std::move(r));
  }
  return normalize(out);
}

// ------------------------------------------------------------------ apply

namespace {

// Entry n of word[pos..] applied to s; the rightmost letter acts first.
Complex apply_word(const std::vector<Letter>& word, std::size_t pos, const CoeffSequence& s, unsigned long n) {
  if (pos == word.size()) return s.at(n);
  if (word[pos] == Letter::C) return apply_word(word, pos + 1, s, n + 1) * sqrt(Real(static_cast<long>(n + 1), s.bits()));
  if (n == 0) return Complex(s.bits());
  return apply_word(word, pos + 1, s, n - 1) * sqrt(Real(static_cast<long>(n), s.bits()));
}

std::optional<ExactComplex> apply_word_exact(const std::vector<Letter>& word, std::size_t pos, const CoeffSequence& s,
                                             unsigned long n) {
  if (pos == word.size()) return s.exact(n);
  const unsigned long next = word[pos] == Letter::C ? n + 1 : n - 1;
  const unsigned long factor = word[pos] == Letter::C ? n + 1 : n;
  if (word[pos] == Letter::CDag && n == 0) return ExactComplex();
  auto inner = apply_word_exact(word, pos + 1, s, next);
  if (!inner) return std::nullopt;
  return ExactComplex(ExactSum(SurdTerm(ExactTerm(1), ExactTerm(static_cast<long>(factor))))) * *inner;
}

}  // namespace

CoeffSequence apply(const OperatorExpr& input, const CoeffSequence& s) {
  const OperatorExpr op = input.is_ladder() ? normalize(input) : to_ladder(input);
  const Bits bits = s.bits();

  CoeffSequence::Options options;
  std::optional<Parity> parity;
  std::size_t longest = 0;
  for (const auto& t : op.terms) {
    Parity p = s.parity();
    if (t.word.size() % 2 == 1 && p != Parity::Mixed) p = p == Parity::Even ? Parity::Odd : Parity::Even;
    parity = parity ? combine(*parity, p) : p;
    longest = std::max(longest, t.word.size());
  }
  options.parity = parity.value_or(Parity::Even);
  if (s.support()) options.support = *s.support() + longest;
  if (op.terms.empty()) options.support = 0;

  CoeffSequence::GeneratorFactory factory = [op, s, bits]() -> CoeffSequence::Generator {
    auto n = std::make_shared<unsigned long>(0);
    return [op, s, bits, n]() {
      const unsigned long index = (*n)++;
      Complex value(bits);
      for (const auto& t : op.terms) {
        Complex entry = apply_word(t.word, 0, s, index);
        if (entry.is_zero()) continue;
        value += t.coefficient.to_complex(bits) * entry;
      }
      return value;
    };
  };
  CoeffSequence::ExactGenerator exact;
  if (s.has_exact()) {
    exact = [op, s](unsigned long index) {
      ExactComplex value;
      for (const auto& t : op.terms) {
        const auto entry = apply_word_exact(t.word, 0, s, index);
        if (!entry) throw std::logic_error("apply: exact entry missing");
        value += t.coefficient.to_exact() * *entry;
      }
      return value;
    };
  }
  return CoeffSequence(std::move(factory), bits, options, std::move(exact));
}

// ---------------------------------------------------------------- adjoint

AdjointReport adjoint_check(const OperatorExpr& op, const Distribution& Phi, const Distribution& phi,
                            const SummationConfig& cfg) {
  const OperatorExpr dag = ddagger(op);
  const Distribution big = canonicalize(Phi);
  const Distribution small = canonicalize(phi);
  const std::function<CoeffSequence(Bits)> Phi_stream = [big](Bits b) { return coeff_sequence(big, b); };
  const std::function<CoeffSequence(Bits)> phi_stream = [small](Bits b) { return coeff_sequence(small, b); };
  const std::function<CoeffSequence(Bits)> dag_Phi = [big, dag](Bits b) { return apply(dag, coeff_sequence(big, b)); };
  const std::function<CoeffSequence(Bits)> op_phi = [small, op](Bits b) { return apply(op, coeff_sequence(small, b)); };

  AdjointReport report;
  report.lhs = classify_and_sum(eproduct_series(dag_Phi, phi_stream, cfg), cfg);
  report.rhs = classify_and_sum(eproduct_series(Phi_stream, op_phi, cfg), cfg);
  for (const EProductResult* side : {&report.lhs, &report.rhs}) {
    if (!side->value)
      throw InconclusivePairing(std::string("adjoint_check: ") + (side == &report.lhs ? "<X^ddag Phi, phi>_e" : "<Phi, X phi>_e") +
                                " is " + to_string(side->status));
  }

  const Bits bits = cfg.bits();
  const CoeffSequence a = dag_Phi(bits);
  const CoeffSequence b = phi_stream(bits);
  const CoeffSequence c = Phi_stream(bits);
  const CoeffSequence d = op_phi(bits);
  const unsigned long K = std::min<unsigned long>(cfg.max_terms, 200);
  Complex left(bits);
  Complex right(bits);
  report.max_partial_sum_deviation = Real(bits);
  for (unsigned long n = 0; n < K; ++n) {
    left += conj(a.at(n)) * b.at(n);
    right += conj(c.at(n)) * d.at(n);
    report.max_partial_sum_deviation = max(report.max_partial_sum_deviation, abs(left - right));
  }
  report.difference = abs(*report.lhs.value - *report.rhs.value);
  Real scale = abs(*report.rhs.value);
  if (scale < 1) scale = Real(1, bits);
  report.agree = report.difference <= cfg.tol(bits) * scale;
  return report;
}

}  // namespace eprod
