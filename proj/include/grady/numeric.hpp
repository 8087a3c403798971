#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace grady {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Three-valued verdict for order queries that may be undecidable at the
// configured precision (e.g. comparisons involving exp atoms).
enum class Cmp3 { True, False, Unknown };

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string rat_to_string(const Rat& r);
// Accepts "p/q", integers, and decimal literals ("0.25" -> 1/4).
std::optional<Rat> rat_from_string(const std::string& s);

Rat rat_floor(const Rat& r);
Rat rat_abs(const Rat& r);

// Closed rational interval, used for outward-rounded evaluation of exp.
struct RatInterval {
  Rat lo, hi;
};

// Outward-rounded enclosure of exp(x) for rational x.
RatInterval exp_interval(const Rat& x, int terms = 24);

// Element of [-inf, +inf] represented exactly as  c0 + sum_i c_i * exp(r_i)
// with rational coefficients and exponents, plus an explicit +inf flag.
// Exponent 0 holds the rational part. All corpus arithmetic stays in this
// fragment; anything outside it raises EvalError.
class NumVal {
 public:
  NumVal() = default;
  explicit NumVal(const Rat& r) {
    if (r != 0) terms_[Rat(0)] = r;
  }
  static NumVal infinity() {
    NumVal v;
    v.inf_ = true;
    return v;
  }
  // c * exp(r) as an exact atom.
  static NumVal exp_atom(const Rat& r, const Rat& c = Rat(1)) {
    NumVal v;
    if (c != 0) v.terms_[r] = c;
    return v;
  }

  bool is_infinite() const { return inf_; }
  bool is_rational() const { return !inf_ && (terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0)); }
  // Throws EvalError unless is_rational().
  Rat as_rational() const;
  bool is_zero() const { return !inf_ && terms_.empty(); }
  const std::map<Rat, Rat>& terms() const { return terms_; }

  NumVal operator+(const NumVal& o) const;
  NumVal operator-(const NumVal& o) const;  // full signed subtraction
  NumVal operator*(const NumVal& o) const;
  // Division; divisor must be a nonzero monomial c*exp(r).
  NumVal operator/(const NumVal& o) const;
  NumVal negate() const;

  bool operator==(const NumVal& o) const { return inf_ == o.inf_ && terms_ == o.terms_; }

  // Deterministic total order for canonical sorting (not the numeric order).
  bool lex_less(const NumVal& o) const;

  // Numeric sign analysis: True if self >= 0, False if self < 0.
  Cmp3 sign_nonneg() const;

  std::string to_string() const;

 private:
  void add_term(const Rat& expo, const Rat& coef);
  bool inf_ = false;
  std::map<Rat, Rat> terms_;
};

// a <= b, a < b, a == b with exp-aware sign analysis.
Cmp3 num_le(const NumVal& a, const NumVal& b);
Cmp3 num_lt(const NumVal& a, const NumVal& b);
Cmp3 num_eq(const NumVal& a, const NumVal& b);

// exp of an exact rational; exp of anything else is rejected.
NumVal num_exp(const NumVal& x);
NumVal num_abs(const NumVal& x);
NumVal num_min(const NumVal& a, const NumVal& b);
NumVal num_max(const NumVal& a, const NumVal& b);
// Truncated subtraction max(0, a-b) with a - inf = 0; used by the
// extended-real formula algebra.
NumVal num_monus(const NumVal& a, const NumVal& b);

}  // namespace grady
