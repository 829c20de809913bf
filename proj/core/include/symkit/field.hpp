#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

namespace symkit {

/// Exact Gaussian rational re + im*i with arbitrary-precision parts.
///
/// Both parts are kept canonical (lowest terms, positive denominator), so
/// structural equality is value equality and the text form is unique.
class GaussRat {
 public:
  GaussRat() = default;
  template <std::integral T>
  GaussRat(T value) : re_(static_cast<long>(value)) {}  // NOLINT(implicit)
  GaussRat(mpq_class re);                                // NOLINT(implicit)
  GaussRat(mpq_class re, mpq_class im);

  /// num/den as a real value; throws DivisionByZero when den == 0.
  static GaussRat ratio(long num, long den);
  static GaussRat imag_unit() { return GaussRat(mpq_class(0), mpq_class(1)); }

  /// Parses the text produced by to_string(): "3/2", "-1/2*i", "i", "1 - 2/3*i".
  static GaussRat parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRat conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  /// Multiplicative inverse; throws DivisionByZero on zero.
  GaussRat inv() const;

  GaussRat& operator+=(const GaussRat& rhs);
  GaussRat& operator-=(const GaussRat& rhs);
  GaussRat& operator*=(const GaussRat& rhs);
  GaussRat& operator/=(const GaussRat& rhs);

  friend GaussRat operator+(GaussRat lhs, const GaussRat& rhs) { return lhs += rhs; }
  friend GaussRat operator-(GaussRat lhs, const GaussRat& rhs) { return lhs -= rhs; }
  friend GaussRat operator*(GaussRat lhs, const GaussRat& rhs) { return lhs *= rhs; }
  friend GaussRat operator/(GaussRat lhs, const GaussRat& rhs) { return lhs /= rhs; }
  GaussRat operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  /// Total order: real part first, then imaginary part.
  friend std::strong_ordering operator<=>(const GaussRat& a, const GaussRat& b);

  std::string to_string() const;
  std::size_t hash() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& os, const GaussRat& value);

/// Renders an exact rational as "p" or "p/q".
std::string to_string(const mpq_class& value);

}  // namespace symkit

template <>
struct std::hash<symkit::GaussRat> {
  std::size_t operator()(const symkit::GaussRat& value) const noexcept { return value.hash(); }
};
