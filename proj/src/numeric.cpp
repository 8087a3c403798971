#include "grady/numeric.hpp"

#include <sstream>

namespace grady {

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

std::optional<Rat> rat_from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt n(s.substr(0, slash));
      BigInt d(s.substr(slash + 1));
      if (d == 0) return std::nullopt;
      return Rat(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      size_t frac_len = s.size() - dot - 1;
      BigInt n(digits.empty() || digits == "-" ? "0" : digits);
      BigInt d = 1;
      for (size_t i = 0; i < frac_len; ++i) d *= 10;
      return Rat(n, d);
    }
    return Rat(BigInt(s));
  } catch (...) {
    return std::nullopt;
  }
}

Rat rat_floor(const Rat& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return Rat(q);
}

Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

namespace {

// Enclosure of e = exp(1) via the series with remainder < 3/(K+1)!.
RatInterval euler_interval(int terms) {
  Rat sum = 0;
  Rat fact = 1;
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) fact *= k;
    sum += Rat(1) / fact;
  }
  Rat rem = Rat(3) / (fact * (terms + 1));
  return {sum, sum + rem};
}

RatInterval interval_pow(const RatInterval& base, unsigned long n) {
  RatInterval acc{Rat(1), Rat(1)};
  for (unsigned long i = 0; i < n; ++i) {
    acc.lo *= base.lo;
    acc.hi *= base.hi;
  }
  return acc;
}

RatInterval interval_recip(const RatInterval& x) {
  if (x.lo <= 0) throw EvalError("interval reciprocal across zero");
  return {Rat(1) / x.hi, Rat(1) / x.lo};
}

}  // namespace

RatInterval exp_interval(const Rat& x, int terms) {
  if (x == 0) return {Rat(1), Rat(1)};
  if (x < 0) return interval_recip(exp_interval(-x, terms));
  Rat n = rat_floor(x);
  Rat f = x - n;  // f in [0,1)
  RatInterval e_pow{Rat(1), Rat(1)};
  if (n > 0) {
    if (n > 4096) throw EvalError("exp argument too large");
    e_pow = interval_pow(euler_interval(terms), static_cast<unsigned long>(numerator(n)));
  }
  // exp(f) = sum_{k<=K} f^k/k! + R, 0 <= R <= 3 * f^(K+1)/(K+1)! for f < 1.
  Rat sum = 0, powf = 1, fact = 1;
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) {
      fact *= k;
      powf *= f;
    }
    sum += powf / fact;
  }
  Rat rem = 3 * powf * f / (fact * (terms + 1));
  RatInterval ef{sum, sum + rem};
  return {e_pow.lo * ef.lo, e_pow.hi * ef.hi};
}

Rat NumVal::as_rational() const {
  if (!is_rational()) throw EvalError("value is not an exact rational: " + to_string());
  return terms_.empty() ? Rat(0) : terms_.begin()->second;
}

void NumVal::add_term(const Rat& expo, const Rat& coef) {
  if (coef == 0) return;
  auto it = terms_.find(expo);
  if (it == terms_.end()) {
    terms_[expo] = coef;
  } else {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

NumVal NumVal::operator+(const NumVal& o) const {
  if (inf_ || o.inf_) return infinity();
  NumVal r = *this;
  for (auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

NumVal NumVal::operator-(const NumVal& o) const {
  if (o.inf_) throw EvalError("subtraction of infinity");
  if (inf_) return infinity();
  NumVal r = *this;
  for (auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

NumVal NumVal::negate() const {
  if (inf_) throw EvalError("negation of infinity");
  NumVal r;
  for (auto& [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

NumVal NumVal::operator*(const NumVal& o) const {
  if (inf_ || o.inf_) {
    // 0 * inf is rejected rather than given a convention.
    if (is_zero() || o.is_zero()) throw EvalError("0 * infinity");
    return infinity();
  }
  NumVal r;
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) r.add_term(e1 + e2, c1 * c2);
  return r;
}

NumVal NumVal::operator/(const NumVal& o) const {
  if (o.is_zero()) throw EvalError("division by zero");
  if (o.inf_) throw EvalError("division by infinity");
  if (o.terms_.size() != 1) throw EvalError("division by non-monomial value");
  if (inf_) return infinity();
  auto [de, dc] = *o.terms_.begin();
  NumVal r;
  for (auto& [e, c] : terms_) r.add_term(e - de, c / dc);
  return r;
}

bool NumVal::lex_less(const NumVal& o) const {
  if (inf_ != o.inf_) return !inf_;
  return terms_ < o.terms_;
}

Cmp3 NumVal::sign_nonneg() const {
  if (inf_) return Cmp3::True;
  bool any_neg = false, any_pos = false;
  for (auto& [e, c] : terms_) {
    (void)e;
    if (c < 0) any_neg = true;
    if (c > 0) any_pos = true;
  }
  if (!any_neg) return Cmp3::True;   // all coefficients >= 0, exp > 0 everywhere
  if (!any_pos) return Cmp3::False;  // strictly negative somewhere, here everywhere
  // Mixed signs: outward-rounded interval evaluation at increasing precision.
  for (int prec : {24, 64, 160}) {
    Rat lo = 0, hi = 0;
    bool ok = true;
    for (auto& [e, c] : terms_) {
      if (e == 0) {
        lo += c;
        hi += c;
        continue;
      }
      RatInterval iv;
      try {
        iv = exp_interval(e, prec);
      } catch (const EvalError&) {
        ok = false;
        break;
      }
      if (c >= 0) {
        lo += c * iv.lo;
        hi += c * iv.hi;
      } else {
        lo += c * iv.hi;
        hi += c * iv.lo;
      }
    }
    if (!ok) break;
    if (lo >= 0) return Cmp3::True;
    if (hi < 0) return Cmp3::False;
  }
  return Cmp3::Unknown;
}

std::string NumVal::to_string() const {
  if (inf_) return "inf";
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (e == 0) {
      os << rat_to_string(c);
    } else {
      os << rat_to_string(c) << "*exp(" << rat_to_string(e) << ")";
    }
  }
  return os.str();
}

Cmp3 num_le(const NumVal& a, const NumVal& b) {
  if (b.is_infinite()) return Cmp3::True;
  if (a.is_infinite()) return Cmp3::False;
  return (b - a).sign_nonneg();
}

Cmp3 num_lt(const NumVal& a, const NumVal& b) {
  Cmp3 le = num_le(b, a);
  if (le == Cmp3::True) return Cmp3::False;
  if (le == Cmp3::False) return Cmp3::True;
  return Cmp3::Unknown;
}

Cmp3 num_eq(const NumVal& a, const NumVal& b) {
  // Representation is canonical for the rational-exp fragment, so equality
  // of term maps decides equality of values whenever the exponents are
  // pairwise distinct (which add_term guarantees).
  if (a == b) return Cmp3::True;
  Cmp3 le1 = num_le(a, b), le2 = num_le(b, a);
  if (le1 == Cmp3::False || le2 == Cmp3::False) return Cmp3::False;
  if (le1 == Cmp3::True && le2 == Cmp3::True) return Cmp3::True;
  return Cmp3::Unknown;
}

NumVal num_exp(const NumVal& x) {
  Rat r = x.as_rational();
  return NumVal::exp_atom(r);
}

NumVal num_abs(const NumVal& x) {
  Cmp3 s = x.sign_nonneg();
  if (s == Cmp3::True) return x;
  if (s == Cmp3::False) return x.negate();
  throw EvalError("abs: sign undecided for " + x.to_string());
}

NumVal num_min(const NumVal& a, const NumVal& b) {
  Cmp3 c = num_le(a, b);
  if (c == Cmp3::True) return a;
  if (c == Cmp3::False) return b;
  throw EvalError("min: order undecided");
}

NumVal num_max(const NumVal& a, const NumVal& b) {
  Cmp3 c = num_le(a, b);
  if (c == Cmp3::True) return b;
  if (c == Cmp3::False) return a;
  throw EvalError("max: order undecided");
}

NumVal num_monus(const NumVal& a, const NumVal& b) {
  if (b.is_infinite()) return NumVal(Rat(0));
  if (a.is_infinite()) return NumVal::infinity();
  NumVal d = a - b;
  Cmp3 s = d.sign_nonneg();
  if (s == Cmp3::True) return d;
  if (s == Cmp3::False) return NumVal(Rat(0));
  throw EvalError("truncated subtraction undecided");
}

}  // namespace grady
