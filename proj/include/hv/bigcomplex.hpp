#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "hv/arith.hpp"
#include "hv/cyclotomic.hpp"

namespace hv {

/// Owning wrapper around an mpfr_t. All arithmetic rounds to nearest and the
/// result takes the larger of the operand precisions.
class bigfloat {
  public:
    explicit bigfloat(mpfr_prec_t prec = 128);
    bigfloat(double v, mpfr_prec_t prec);
    bigfloat(const mpz_class& v, mpfr_prec_t prec);
    bigfloat(const mpq_class& v, mpfr_prec_t prec);
    bigfloat(const bigfloat& o);
    bigfloat(bigfloat&& o) noexcept;
    bigfloat& operator=(const bigfloat& o);
    bigfloat& operator=(bigfloat&& o) noexcept;
    ~bigfloat();

    static bigfloat pi(mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
    mpfr_srcptr get() const { return x_; }
    mpfr_ptr get() { return x_; }

    bigfloat operator+(const bigfloat& o) const;
    bigfloat operator-(const bigfloat& o) const;
    bigfloat operator*(const bigfloat& o) const;
    bigfloat operator/(const bigfloat& o) const;
    bigfloat operator-() const;
    bigfloat& operator+=(const bigfloat& o) { return *this = *this + o; }
    bigfloat& operator-=(const bigfloat& o) { return *this = *this - o; }
    bigfloat& operator*=(const bigfloat& o) { return *this = *this * o; }

    bool operator<(const bigfloat& o) const { return mpfr_less_p(x_, o.x_) != 0; }
    bool operator>(const bigfloat& o) const { return o < *this; }
    int sign() const { return mpfr_sgn(x_); }

    bigfloat abs() const;
    bigfloat sqrt() const;
    bigfloat exp() const;
    bigfloat log() const;
    bigfloat sin() const;
    bigfloat cos() const;
    bigfloat atan2(const bigfloat& x) const;  // atan2(*this, x)

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    /// log2 of the magnitude, or a large negative number for zero.
    long exponent() const;
    /// Nearest integer, ties away from zero.
    mpz_class round() const;
    std::string str(int digits = 0) const;

  private:
    mpfr_t x_;
};

/// Complex number with bigfloat parts.
class bigcomplex {
  public:
    explicit bigcomplex(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
    bigcomplex(bigfloat re, bigfloat im) : re_(std::move(re)), im_(std::move(im)) {}
    bigcomplex(double re, double im, mpfr_prec_t prec) : re_(re, prec), im_(im, prec) {}

    /// exp(2 pi i k / n).
    static bigcomplex root_of_unity(i64 n, i64 k, mpfr_prec_t prec);

    const bigfloat& re() const { return re_; }
    const bigfloat& im() const { return im_; }
    mpfr_prec_t prec() const { return re_.prec(); }

    bigcomplex operator+(const bigcomplex& o) const { return {re_ + o.re_, im_ + o.im_}; }
    bigcomplex operator-(const bigcomplex& o) const { return {re_ - o.re_, im_ - o.im_}; }
    bigcomplex operator-() const { return {-re_, -im_}; }
    bigcomplex operator*(const bigcomplex& o) const;
    bigcomplex operator/(const bigcomplex& o) const;
    bigcomplex operator*(const bigfloat& s) const { return {re_ * s, im_ * s}; }
    bigcomplex& operator+=(const bigcomplex& o) { return *this = *this + o; }
    bigcomplex& operator-=(const bigcomplex& o) { return *this = *this - o; }
    bigcomplex& operator*=(const bigcomplex& o) { return *this = *this * o; }

    bigcomplex conj() const { return {re_, -im_}; }
    bigfloat norm() const { return re_ * re_ + im_ * im_; }
    bigfloat abs() const { return norm().sqrt(); }
    bigfloat arg() const { return im_.atan2(re_); }
    bigcomplex exp() const;
    bigcomplex log() const;   // principal branch
    bigcomplex sqrt() const;  // principal branch
    bigcomplex pow(i64 e) const;

    std::string str(int digits = 0) const;

  private:
    bigfloat re_, im_;
};

/// Raised when a numeric recognition step needs more precision.
class precision_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Image of x under zeta_n -> exp(2 pi i k / n).
bigcomplex embed(const cyc_q& x, i64 k, mpfr_prec_t prec);
bigcomplex embed(const cyc_z& x, i64 k, mpfr_prec_t prec);

struct rounded_poly {
    std::vector<mpz_class> coeffs;  // constant term first, monic
    double defect = 0;              // max distance of a coefficient to its rounding
};

/// Expands prod (X - r) and rounds every coefficient to the nearest integer.
/// Throws precision_error if some coefficient is 0.5 or more from an integer.
rounded_poly min_poly_from_roots(const std::vector<bigcomplex>& roots);

}  // namespace hv
