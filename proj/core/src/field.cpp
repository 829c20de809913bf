#include "symkit/field.hpp"

#include <cctype>
#include <functional>
#include <ostream>

#include "symkit/error.hpp"

namespace symkit {

namespace {

mpq_class parse_rational(std::string_view text, std::string_view whole) {
  if (text.empty()) throw ParseError("malformed Gaussian rational '" + std::string(whole) + "'");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/') {
      throw ParseError("malformed Gaussian rational '" + std::string(whole) + "'");
    }
  }
  mpq_class value;
  if (value.set_str(std::string(text), 10) != 0 || value.get_den() == 0) {
    throw ParseError("malformed Gaussian rational '" + std::string(whole) + "'");
  }
  value.canonicalize();
  return value;
}

}  // namespace

GaussRat::GaussRat(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }

GaussRat::GaussRat(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussRat GaussRat::ratio(long num, long den) {
  if (den == 0) throw DivisionByZero();
  mpq_class value(num, den);
  value.canonicalize();
  return GaussRat(value);
}

GaussRat GaussRat::inv() const {
  if (is_zero()) throw DivisionByZero();
  mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussRat& GaussRat::operator+=(const GaussRat& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& rhs) {
  if (sgn(im_) == 0 && sgn(rhs.im_) == 0) {
    re_ *= rhs.re_;
    return *this;
  }
  mpq_class re = re_ * rhs.re_ - im_ * rhs.im_;
  mpq_class im = re_ * rhs.im_ + im_ * rhs.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& rhs) {
  if (rhs.is_zero()) throw DivisionByZero();
  if (sgn(rhs.im_) == 0) {
    re_ /= rhs.re_;
    im_ /= rhs.re_;
    return *this;
  }
  return *this *= rhs.inv();
}

std::strong_ordering operator<=>(const GaussRat& a, const GaussRat& b) {
  int c = cmp(a.re_, b.re_);
  if (c == 0) c = cmp(a.im_, b.im_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const mpq_class& value) { return value.get_str(10); }

std::string GaussRat::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_re && !has_im) return "0";
  std::string out;
  if (has_re) out = symkit::to_string(re_);
  if (has_im) {
    mpq_class mag = abs(im_);
    std::string im_text = mag == 1 ? std::string("i") : symkit::to_string(mag) + "*i";
    if (has_re) {
      out += sgn(im_) < 0 ? " - " : " + ";
    } else if (sgn(im_) < 0) {
      out += "-";
    }
    out += im_text;
  }
  return out;
}

GaussRat GaussRat::parse(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  if (compact.empty()) throw ParseError("empty Gaussian rational");

  GaussRat result;
  std::size_t pos = 0;
  bool seen_re = false;
  bool seen_im = false;
  while (pos < compact.size()) {
    bool negative = false;
    if (compact[pos] == '+' || compact[pos] == '-') {
      negative = compact[pos] == '-';
      ++pos;
    } else if (pos != 0) {
      throw ParseError("malformed Gaussian rational '" + std::string(text) + "'");
    }
    std::size_t end = pos;
    while (end < compact.size() && compact[end] != '+' && compact[end] != '-') ++end;
    std::string_view term(compact.data() + pos, end - pos);
    pos = end;

    mpq_class value;
    bool imaginary = false;
    if (term == "i") {
      value = 1;
      imaginary = true;
    } else if (term.size() > 2 && term.substr(term.size() - 2) == "*i") {
      value = parse_rational(term.substr(0, term.size() - 2), text);
      imaginary = true;
    } else {
      value = parse_rational(term, text);
    }
    if (negative) value = -value;
    bool& seen = imaginary ? seen_im : seen_re;
    if (seen) throw ParseError("malformed Gaussian rational '" + std::string(text) + "'");
    seen = true;
    result += imaginary ? GaussRat(mpq_class(0), value) : GaussRat(value);
  }
  return result;
}

std::size_t GaussRat::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str(16)) * 31u ^ h(im_.get_str(16));
}

std::ostream& operator<<(std::ostream& os, const GaussRat& value) {
  return os << value.to_string();
}

}  // namespace symkit
