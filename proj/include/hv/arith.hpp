#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hv {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Raised when a caller-supplied configuration violates a precondition.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails (a construction bug).
class internal_error : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// a/b in lowest terms (two-argument mpq_class does not reduce).
inline mpq_class frac(const mpz_class& a, const mpz_class& b) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

// Small-integer number theory. All inputs are assumed to fit comfortably in
// 63 bits; products go through 128-bit intermediates.

i64 gcd(i64 a, i64 b);
i64 mod(i64 a, i64 m);  // least nonnegative residue
i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 base, u64 e, i64 m);
i64 inv_mod(i64 a, i64 m);  // throws config_error if not invertible
bool is_prime(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);  // n >= 1
std::vector<i64> divisors(i64 n);
i64 euler_phi(i64 n);
int kronecker(i64 a, i64 n);  // Kronecker symbol (a|n), n >= 1
int valuation(i64 n, i64 p);
i64 int_pow(i64 b, int e);
i64 sigma_prime_to(i64 n, i64 p);  // sum of divisors d | n with p not dividing d
i64 next_prime(i64 n);             // smallest prime > n
i64 smallest_primitive_root(i64 p);
/// Returns (v, k) if n = v^k with v prime and k >= 1, else (1, 0).
std::pair<i64, int> prime_power(i64 n);

/// Element of Z/mZ with the modulus carried alongside the value.
class zmod {
  public:
    zmod() = default;
    zmod(i64 value, i64 modulus) : m_(modulus), v_(mod(value, modulus)) {}

    i64 value() const { return v_; }
    i64 modulus() const { return m_; }

    zmod operator+(zmod o) const { return {v_ + o.v_, m_}; }
    zmod operator-(zmod o) const { return {v_ - o.v_, m_}; }
    zmod operator-() const { return {-v_, m_}; }
    zmod operator*(zmod o) const { return {mul_mod(v_, o.v_, m_), m_}; }
    zmod operator*(i64 k) const { return {mul_mod(v_, mod(k, m_), m_), m_}; }
    zmod& operator+=(zmod o) { return *this = *this + o; }
    zmod& operator-=(zmod o) { return *this = *this - o; }
    zmod& operator*=(zmod o) { return *this = *this * o; }
    bool operator==(const zmod& o) const = default;

    bool is_unit() const { return gcd(v_, m_) == 1; }
    zmod inverse() const { return {inv_mod(v_, m_), m_}; }
    zmod pow(u64 e) const { return {pow_mod(v_, e, m_), m_}; }

  private:
    i64 m_ = 1;
    i64 v_ = 0;
};

/// Reduces an exact rational into Z/mZ; the denominator must be a unit.
zmod to_zmod(const mpq_class& q, i64 modulus);

/// Fixed discrete logarithm F_p^x ->> Z/ell^t, normalized so that the
/// smallest primitive root maps to 1. Baby-step/giant-step on the full group.
class discrete_log {
  public:
    discrete_log(i64 p, i64 ell, int t);

    zmod operator()(i64 x) const;
    /// Full logarithm in Z/(p-1) to the base of the smallest primitive root.
    i64 full(i64 x) const;

    i64 p() const { return p_; }
    i64 ell() const { return ell_; }
    int t() const { return t_; }
    i64 modulus() const { return mod_; }
    i64 generator() const { return g_; }

  private:
    i64 p_, ell_;
    int t_;
    i64 mod_;
    i64 g_;
    i64 step_;
    std::vector<std::pair<i64, i64>> baby_;  // (g^j, j) sorted by value
};

}  // namespace hv
