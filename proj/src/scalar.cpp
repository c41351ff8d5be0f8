#include "amalgam/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "amalgam/errors.hpp"

namespace amalgam {

Scalar& Scalar::operator*=(const Scalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  require(!o.is_zero(), "DivisionByZero", "scalar division by zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  mpq_class d = o.norm2();
  *this *= o.conj();
  re_ /= d;
  im_ /= d;
  return *this;
}

void Scalar::add_product(const Scalar& a, const Scalar& b) {
  if (sgn(a.im_) == 0 && sgn(b.im_) == 0) {
    re_ += a.re_ * b.re_;
    return;
  }
  re_ += a.re_ * b.re_ - a.im_ * b.im_;
  im_ += a.re_ * b.im_ + a.im_ * b.re_;
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error("ParseError", "empty rational");
  if (s.front() == '+') s.erase(0, 1);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw Error("ParseError", "bad rational '" + std::string(text) + "'");
  if (q.get_den() == 0) throw Error("ParseError", "zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string Scalar::str() const {
  if (sgn(im_) == 0) return rational_str(re_);
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = rational_str(im_) + "i";
  if (sgn(re_) == 0) return imag;
  return rational_str(re_) + (sgn(im_) > 0 ? "+" : "") + imag;
}

Scalar Scalar::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw Error("ParseError", "empty scalar");
  if (s.back() != 'i') return Scalar(parse_rational(s));
  // split at the last sign that is not the leading one
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size() - 1; k > 0; --k) {
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "0" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s.substr(0, s.size() - 1) : s.substr(split, s.size() - 1 - split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  return Scalar(parse_rational(re_part), parse_rational(im_part));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace amalgam
