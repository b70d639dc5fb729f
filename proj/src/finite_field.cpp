#include "hv/finite_field.hpp"

namespace hv {

fp2_field::fp2_field(i64 p) : p_(p), d_(0) {
    if (p < 3 || !is_prime(p)) throw config_error("fp2_field: p must be an odd prime");
    for (i64 c = 2; c < p; ++c) {
        if (kronecker(c, p) == -1) {
            d_ = c;
            break;
        }
    }
}

fp2_field::elem fp2_field::mul(elem x, elem y) const {
    i64 a = mod(mul_mod(x.a, y.a, p_) + mul_mod(mul_mod(x.b, y.b, p_), d_, p_), p_);
    i64 b = mod(mul_mod(x.a, y.b, p_) + mul_mod(x.b, y.a, p_), p_);
    return {a, b};
}

i64 fp2_field::norm(elem x) const {
    return mod(mul_mod(x.a, x.a, p_) - mul_mod(mul_mod(x.b, x.b, p_), d_, p_), p_);
}

fp2_field::elem fp2_field::inv(elem x) const {
    i64 n = norm(x);
    if (n == 0) throw std::domain_error("fp2_field: inverse of zero");
    i64 ni = inv_mod(n, p_);
    return {mul_mod(x.a, ni, p_), mul_mod(mod(-x.b, p_), ni, p_)};
}

fp2_field::elem fp2_field::pow(elem x, u64 e) const {
    elem r{1, 0};
    while (e != 0) {
        if (e & 1U) r = mul(r, x);
        x = mul(x, x);
        e >>= 1U;
    }
    return r;
}

fp2_field::elem fp2_field::sqrt_fp(i64 v) const {
    v = mod(v, p_);
    for (i64 s = 0; s < p_; ++s)
        if (mul_mod(s, s, p_) == v) return {s, 0};
    // v is a non-residue, so v/d is a residue and sqrt(v) = t*x with t^2 = v/d
    i64 w = mul_mod(v, inv_mod(d_, p_), p_);
    for (i64 t = 0; t < p_; ++t)
        if (mul_mod(t, t, p_) == w) return {0, t};
    throw internal_error("fp2_field: no square root");
}

fp2_field::elem fp2_field::eval(const std::vector<elem>& poly, elem x) const {
    elem acc{0, 0};
    for (std::size_t k = poly.size(); k-- > 0;) acc = add(mul(acc, x), poly[k]);
    return acc;
}

std::vector<fp2_field::elem> fp2_field::roots(const std::vector<elem>& poly) const {
    std::vector<elem> out;
    for (i64 a = 0; a < p_; ++a)
        for (i64 b = 0; b < p_; ++b) {
            elem x{a, b};
            if (is_zero(eval(poly, x))) out.push_back(x);
        }
    return out;
}

}  // namespace hv
