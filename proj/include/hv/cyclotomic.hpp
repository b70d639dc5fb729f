#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hv/arith.hpp"

namespace hv {

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<i64> cyclotomic_polynomial(i64 n);

/// Element of R[zeta_n] = R[x]/Phi_n(x) in the power basis 1, zeta, ...,
/// zeta^{phi(n)-1}. Every element has exactly one coefficient vector.
///
/// Scalar is one of mpz_class, mpq_class or zmod. The zero scalar is kept
/// alongside so that rings with a runtime modulus can build new elements.
template <class Scalar>
class cyclo {
  public:
    cyclo() = default;
    cyclo(i64 n, Scalar zero)
        : n_(n), phi_(std::make_shared<const std::vector<i64>>(cyclotomic_polynomial(n))), zero_(zero) {
        coeffs_.assign(degree(), zero_);
    }

    static cyclo constant(i64 n, Scalar zero, Scalar value) {
        cyclo r(n, zero);
        r.coeffs_[0] = value;
        return r;
    }

    /// zeta_n^k.
    static cyclo root_of_unity(i64 n, i64 k, Scalar zero, Scalar one) {
        cyclo r(n, zero);
        std::vector<Scalar> raw(static_cast<std::size_t>(n), zero);
        raw[static_cast<std::size_t>(mod(k, n))] = one;
        r.assign_reduced(std::move(raw));
        return r;
    }

    i64 conductor() const { return n_; }
    std::size_t degree() const { return phi_->size() - 1; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    const Scalar& operator[](std::size_t k) const { return coeffs_[k]; }
    const Scalar& zero_scalar() const { return zero_; }

    bool is_zero() const {
        for (const auto& c : coeffs_) {
            if (!(c == zero_)) return false;
        }
        return true;
    }

    cyclo operator+(const cyclo& o) const {
        check_same(o);
        cyclo r = *this;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = r.coeffs_[k] + o.coeffs_[k];
        return r;
    }
    cyclo operator-(const cyclo& o) const {
        check_same(o);
        cyclo r = *this;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = r.coeffs_[k] - o.coeffs_[k];
        return r;
    }
    cyclo operator-() const {
        cyclo r = *this;
        for (auto& c : r.coeffs_) c = zero_ - c;
        return r;
    }
    cyclo operator*(const cyclo& o) const {
        check_same(o);
        std::vector<Scalar> raw(2 * degree() + 1, zero_);
        for (std::size_t a = 0; a < coeffs_.size(); ++a) {
            if (coeffs_[a] == zero_) continue;
            for (std::size_t b = 0; b < o.coeffs_.size(); ++b) raw[a + b] = raw[a + b] + coeffs_[a] * o.coeffs_[b];
        }
        cyclo r(*this);
        r.assign_reduced(std::move(raw));
        return r;
    }
    cyclo scaled(const Scalar& s) const {
        cyclo r = *this;
        for (auto& c : r.coeffs_) c = c * s;
        return r;
    }
    cyclo& operator+=(const cyclo& o) { return *this = *this + o; }
    cyclo& operator-=(const cyclo& o) { return *this = *this - o; }
    cyclo& operator*=(const cyclo& o) { return *this = *this * o; }

    bool operator==(const cyclo& o) const { return n_ == o.n_ && coeffs_ == o.coeffs_; }

    /// Galois automorphism zeta -> zeta^a, gcd(a, n) = 1.
    cyclo galois(i64 a) const {
        std::vector<Scalar> raw(static_cast<std::size_t>(n_), zero_);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            auto idx = static_cast<std::size_t>(mod(a * static_cast<i64>(k), n_));
            raw[idx] = raw[idx] + coeffs_[k];
        }
        cyclo r(*this);
        r.assign_reduced(std::move(raw));
        return r;
    }
    /// Complex conjugation zeta -> zeta^{-1}.
    cyclo conj() const { return galois(-1); }

    /// Applies a coefficientwise ring map, keeping the conductor.
    template <class To, class F>
    cyclo<To> map(To zero, F&& f) const {
        cyclo<To> r(n_, zero);
        std::vector<To> raw(degree(), zero);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) raw[k] = f(coeffs_[k]);
        r.set_coeffs(std::move(raw));
        return r;
    }

    void set_coeffs(std::vector<Scalar> c) {
        if (c.size() != degree()) throw std::invalid_argument("cyclo: wrong coefficient count");
        coeffs_ = std::move(c);
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (k) os << ',';
            os << scalar_str(coeffs_[k]);
        }
        return os.str();
    }

  private:
    template <class>
    friend class cyclo;

    static std::string scalar_str(const mpz_class& s) { return s.get_str(); }
    static std::string scalar_str(const mpq_class& s) { return s.get_str(); }
    static std::string scalar_str(const zmod& s) { return std::to_string(s.value()); }

    void check_same(const cyclo& o) const {
        if (n_ != o.n_) throw std::invalid_argument("cyclo: mismatched conductors");
    }

    // Reduces an arbitrary-length coefficient vector modulo the monic Phi_n.
    void assign_reduced(std::vector<Scalar> raw) {
        const auto& phi = *phi_;
        const std::size_t d = degree();
        for (std::size_t k = raw.size(); k-- > d;) {
            if (raw[k] == zero_) continue;
            Scalar c = raw[k];
            for (std::size_t j = 0; j <= d; ++j) raw[k - d + j] = raw[k - d + j] - c * phi[j];
        }
        raw.resize(d, zero_);
        coeffs_ = std::move(raw);
    }

    i64 n_ = 1;
    std::shared_ptr<const std::vector<i64>> phi_;
    Scalar zero_{};
    std::vector<Scalar> coeffs_;
};

using cyc_z = cyclo<mpz_class>;
using cyc_q = cyclo<mpq_class>;
using cyc_mod = cyclo<zmod>;

inline cyc_z cyc_z_root(i64 n, i64 k) { return cyc_z::root_of_unity(n, k, mpz_class(0), mpz_class(1)); }
inline cyc_q cyc_q_root(i64 n, i64 k) { return cyc_q::root_of_unity(n, k, mpq_class(0), mpq_class(1)); }
inline cyc_q cyc_q_const(i64 n, const mpq_class& v) { return cyc_q::constant(n, mpq_class(0), v); }
inline cyc_z cyc_z_const(i64 n, const mpz_class& v) { return cyc_z::constant(n, mpz_class(0), v); }

inline cyc_q to_q(const cyc_z& x) {
    return x.map(mpq_class(0), [](const mpz_class& c) { return mpq_class(c); });
}
inline cyc_mod to_mod(const cyc_z& x, i64 m) {
    return x.map(zmod(0, m), [m](const mpz_class& c) { return zmod(mpz_class(c % m).get_si(), m); });
}
inline cyc_mod to_mod(const cyc_q& x, i64 m) {
    return x.map(zmod(0, m), [m](const mpq_class& c) { return to_zmod(c, m); });
}
inline cyc_mod cyc_mod_const(i64 n, i64 m, i64 v) { return cyc_mod::constant(n, zmod(0, m), zmod(v, m)); }

/// Whether every rational coefficient is an integer.
bool is_integral(const cyc_q& x);

}  // namespace hv
