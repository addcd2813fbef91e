#pragma once
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "eqlab/errors.hpp"

namespace eqlab::mp {

inline constexpr unsigned kMinPrecision = 64;
inline constexpr unsigned kDefaultPrecision = 128;
inline constexpr unsigned kMaxPrecision = 8192;

inline unsigned clamp_precision(unsigned bits) {
  if (bits < kMinPrecision) return kMinPrecision;
  if (bits > kMaxPrecision) return kMaxPrecision;
  return bits;
}

// Arbitrary-precision real.  Every binary operation rounds to the max of the
// operand precisions (MPFR_RNDN), so precision propagates upward and never
// silently truncates.
class BigFloat {
 public:
  BigFloat() { mpfr_init2(v_, kDefaultPrecision); mpfr_set_zero(v_, 1); }
  explicit BigFloat(double x, unsigned prec = kDefaultPrecision) {
    mpfr_init2(v_, clamp_precision(prec));
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  explicit BigFloat(long x, unsigned prec = kDefaultPrecision) {
    mpfr_init2(v_, clamp_precision(prec));
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  BigFloat(const std::string& dec, unsigned prec) {
    mpfr_init2(v_, clamp_precision(prec));
    if (mpfr_set_str(v_, dec.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw ValidationError("unparseable decimal: " + dec);
    }
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, kMinPrecision);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat with_prec(const BigFloat& x, unsigned prec) {
    BigFloat r(0.0, prec);
    mpfr_set(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  unsigned prec() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  // enough digits to round-trip, prefixed with the precision
  std::string serialize() const {
    return "p" + std::to_string(prec()) + ":" + to_decimal();
  }
  std::string to_decimal() const {
    if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
    unsigned digits = static_cast<unsigned>(prec() * 0.30103) + 3;
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }
  static BigFloat deserialize(const std::string& text) {
    if (text.size() < 3 || text[0] != 'p')
      throw ValidationError("bad BigFloat literal: " + text);
    auto colon = text.find(':');
    if (colon == std::string::npos)
      throw ValidationError("bad BigFloat literal: " + text);
    unsigned prec = static_cast<unsigned>(std::stoul(text.substr(1, colon - 1)));
    return BigFloat(text.substr(colon + 1), prec);
  }

  friend unsigned join_prec(const BigFloat& a, const BigFloat& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
  }

#define EQLAB_BF_BINOP(op, fn)                                   \
  friend BigFloat operator op(const BigFloat& a, const BigFloat& b) { \
    BigFloat r(0.0, join_prec(a, b));                            \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                             \
    return r;                                                    \
  }
  EQLAB_BF_BINOP(+, mpfr_add)
  EQLAB_BF_BINOP(-, mpfr_sub)
  EQLAB_BF_BINOP(*, mpfr_mul)
  EQLAB_BF_BINOP(/, mpfr_div)
#undef EQLAB_BF_BINOP

  BigFloat& operator+=(const BigFloat& o) { return inplace(o, mpfr_add); }
  BigFloat& operator-=(const BigFloat& o) { return inplace(o, mpfr_sub); }
  BigFloat& operator*=(const BigFloat& o) { return inplace(o, mpfr_mul); }
  BigFloat& operator/=(const BigFloat& o) { return inplace(o, mpfr_div); }

  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r(0.0, a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }

#define EQLAB_BF_UNARY(name, fn)              \
  friend BigFloat name(const BigFloat& a) {   \
    BigFloat r(0.0, a.prec());                \
    fn(r.v_, a.v_, MPFR_RNDN);                \
    return r;                                 \
  }
  EQLAB_BF_UNARY(abs, mpfr_abs)
  EQLAB_BF_UNARY(sqrt, mpfr_sqrt)
  EQLAB_BF_UNARY(log, mpfr_log)
  EQLAB_BF_UNARY(exp, mpfr_exp)
  EQLAB_BF_UNARY(sin, mpfr_sin)
  EQLAB_BF_UNARY(cos, mpfr_cos)
  EQLAB_BF_UNARY(floor_bf, mpfr_rint_floor)
#undef EQLAB_BF_UNARY

  friend BigFloat hypot(const BigFloat& a, const BigFloat& b) {
    BigFloat r(0.0, join_prec(a, b));
    mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
  }
  friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(0.0, join_prec(y, x));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
  }
  friend BigFloat pow_ui(const BigFloat& a, unsigned long e) {
    BigFloat r(0.0, a.prec());
    mpfr_pow_ui(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
  }
  friend BigFloat max(const BigFloat& a, const BigFloat& b) { return a >= b ? a : b; }
  friend BigFloat min(const BigFloat& a, const BigFloat& b) { return a <= b ? a : b; }

  // 2^e at the target precision, exact
  static BigFloat pow2(long e, unsigned prec = kDefaultPrecision) {
    BigFloat r(0.0, prec);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

 private:
  template <typename F>
  BigFloat& inplace(const BigFloat& o, F fn) {
    if (o.prec() > prec()) {
      BigFloat tmp(0.0, o.prec());
      fn(tmp.v_, v_, o.v_, MPFR_RNDN);
      mpfr_swap(v_, tmp.v_);
    } else {
      fn(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  mpfr_t v_;
};

}  // namespace eqlab::mp
