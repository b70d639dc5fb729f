#include "hv/cyclotomic.hpp"

namespace hv {

namespace {

// Exact division of integer polynomials by a monic divisor.
std::vector<i64> divide_monic(std::vector<i64> num, const std::vector<i64>& den) {
    const std::size_t dn = den.size() - 1;
    std::vector<i64> q(num.size() - dn, 0);
    for (std::size_t k = num.size(); k-- > dn;) {
        i64 c = num[k];
        q[k - dn] = c;
        for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
    }
    for (std::size_t j = 0; j < dn; ++j) {
        if (num[j] != 0) throw internal_error("cyclotomic_polynomial: inexact division");
    }
    return q;
}

}  // namespace

std::vector<i64> cyclotomic_polynomial(i64 n) {
    if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    std::vector<i64> num(static_cast<std::size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(n)] = 1;
    for (i64 d : divisors(n)) {
        if (d == n) continue;
        num = divide_monic(num, cyclotomic_polynomial(d));
    }
    return num;
}

bool is_integral(const cyc_q& x) {
    for (const auto& c : x.coeffs()) {
        if (c.get_den() != 1) return false;
    }
    return true;
}

}  // namespace hv
