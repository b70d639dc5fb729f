#include "hv/bigcomplex.hpp"

#include <algorithm>
#include <memory>

namespace hv {

namespace {

mpfr_prec_t max_prec(const bigfloat& a, const bigfloat& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

bigfloat::bigfloat(mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_zero(x_, 1);
}

bigfloat::bigfloat(double v, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_d(x_, v, MPFR_RNDN);
}

bigfloat::bigfloat(const mpz_class& v, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_z(x_, v.get_mpz_t(), MPFR_RNDN);
}

bigfloat::bigfloat(const mpq_class& v, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_q(x_, v.get_mpq_t(), MPFR_RNDN);
}

bigfloat::bigfloat(const bigfloat& o) {
    mpfr_init2(x_, o.prec());
    mpfr_set(x_, o.x_, MPFR_RNDN);
}

bigfloat::bigfloat(bigfloat&& o) noexcept {
    mpfr_init2(x_, o.prec());
    mpfr_swap(x_, o.x_);
}

bigfloat& bigfloat::operator=(const bigfloat& o) {
    if (this != &o) {
        mpfr_set_prec(x_, o.prec());
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
}

bigfloat& bigfloat::operator=(bigfloat&& o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
}

bigfloat::~bigfloat() { mpfr_clear(x_); }

bigfloat bigfloat::pi(mpfr_prec_t prec) {
    bigfloat r(prec);
    mpfr_const_pi(r.x_, MPFR_RNDN);
    return r;
}

#define HV_BINOP(op, fn)                                     \
    bigfloat bigfloat::operator op(const bigfloat& o) const { \
        bigfloat r(max_prec(*this, o));                       \
        fn(r.x_, x_, o.x_, MPFR_RNDN);                        \
        return r;                                             \
    }
HV_BINOP(+, mpfr_add)
HV_BINOP(-, mpfr_sub)
HV_BINOP(*, mpfr_mul)
HV_BINOP(/, mpfr_div)
#undef HV_BINOP

bigfloat bigfloat::operator-() const {
    bigfloat r(prec());
    mpfr_neg(r.x_, x_, MPFR_RNDN);
    return r;
}

#define HV_UNARY(name, fn)           \
    bigfloat bigfloat::name() const { \
        bigfloat r(prec());           \
        fn(r.x_, x_, MPFR_RNDN);      \
        return r;                     \
    }
HV_UNARY(abs, mpfr_abs)
HV_UNARY(sqrt, mpfr_sqrt)
HV_UNARY(exp, mpfr_exp)
HV_UNARY(log, mpfr_log)
HV_UNARY(sin, mpfr_sin)
HV_UNARY(cos, mpfr_cos)
#undef HV_UNARY

bigfloat bigfloat::atan2(const bigfloat& x) const {
    bigfloat r(max_prec(*this, x));
    mpfr_atan2(r.x_, x_, x.x_, MPFR_RNDN);
    return r;
}

long bigfloat::exponent() const {
    if (mpfr_zero_p(x_)) return -(1L << 40);
    return mpfr_get_exp(x_);
}

mpz_class bigfloat::round() const {
    mpz_class z;
    bigfloat t(prec());
    mpfr_round(t.x_, x_);
    mpfr_get_z(z.get_mpz_t(), t.x_, MPFR_RNDN);
    return z;
}

std::string bigfloat::str(int digits) const {
    if (digits <= 0) digits = static_cast<int>(static_cast<double>(prec()) * 0.30103) + 1;
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), x_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

bigcomplex bigcomplex::root_of_unity(i64 n, i64 k, mpfr_prec_t prec) {
    bigfloat theta = bigfloat::pi(prec) * bigfloat(frac(2 * mod(k, n), n), prec);
    return {theta.cos(), theta.sin()};
}

bigcomplex bigcomplex::operator*(const bigcomplex& o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
}

bigcomplex bigcomplex::operator/(const bigcomplex& o) const {
    bigfloat d = o.norm();
    if (d.sign() == 0) throw std::domain_error("bigcomplex: division by zero");
    return {(re_ * o.re_ + im_ * o.im_) / d, (im_ * o.re_ - re_ * o.im_) / d};
}

bigcomplex bigcomplex::exp() const {
    bigfloat m = re_.exp();
    return {m * im_.cos(), m * im_.sin()};
}

bigcomplex bigcomplex::log() const { return {abs().log(), arg()}; }

bigcomplex bigcomplex::sqrt() const {
    bigfloat r = abs();
    bigfloat half(0.5, prec());
    bigfloat a = ((r + re_) * half).sqrt();
    bigfloat b = ((r - re_) * half).sqrt();
    if (im_.sign() < 0) b = -b;
    return {a, b};
}

bigcomplex bigcomplex::pow(i64 e) const {
    bigcomplex base = e < 0 ? bigcomplex(1.0, 0.0, prec()) / *this : *this;
    u64 k = static_cast<u64>(e < 0 ? -e : e);
    bigcomplex r(1.0, 0.0, prec());
    while (k != 0) {
        if (k & 1U) r *= base;
        base *= base;
        k >>= 1U;
    }
    return r;
}

std::string bigcomplex::str(int digits) const { return re_.str(digits) + " " + im_.str(digits); }

bigcomplex embed(const cyc_q& x, i64 k, mpfr_prec_t prec) {
    bigcomplex z = bigcomplex::root_of_unity(x.conductor(), k, prec);
    bigcomplex acc(prec);
    for (std::size_t e = x.degree(); e-- > 0;) {
        acc = acc * z + bigcomplex(bigfloat(x[e], prec), bigfloat(prec));
    }
    return acc;
}

bigcomplex embed(const cyc_z& x, i64 k, mpfr_prec_t prec) { return embed(to_q(x), k, prec); }

rounded_poly min_poly_from_roots(const std::vector<bigcomplex>& roots) {
    mpfr_prec_t prec = 64;
    for (const auto& r : roots) prec = std::max(prec, r.prec());
    std::vector<bigcomplex> poly{bigcomplex(1.0, 0.0, prec)};
    for (const auto& r : roots) {
        std::vector<bigcomplex> next(poly.size() + 1, bigcomplex(prec));
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= poly[k] * r;
        }
        poly = std::move(next);
    }
    rounded_poly out;
    bigfloat worst(prec);
    for (const auto& c : poly) {
        mpz_class z = c.re().round();
        bigfloat d = (c.re() - bigfloat(z, prec)).abs();
        bigfloat di = c.im().abs();
        if (worst < d) worst = d;
        if (worst < di) worst = di;
        out.coeffs.push_back(z);
    }
    out.defect = worst.to_double();
    if (!(worst < bigfloat(0.5, prec))) {
        throw precision_error("min_poly_from_roots: rounding defect " + worst.str(6) + " at " + std::to_string(prec) +
                              " bits");
    }
    return out;
}

}  // namespace hv
