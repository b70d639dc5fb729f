#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hv/cyclotomic.hpp"
#include "hv/quadratic.hpp"

namespace hv {

/// Truncated two-variable q-series sum a(m, n) q1^{m/scale} q2^{n/scale},
/// 0 <= m <= bound_m, 0 <= n <= bound_n (indices already multiplied by
/// scale). Only nonzero coefficients are stored.
struct qseries2 {
    i64 n = 1;       // coefficients in Q(zeta_n)
    i64 scale = 1;   // exponent denominator
    i64 disc = 0;
    std::string label;
    i64 bound_m = 0, bound_n = 0;
    std::map<std::pair<i64, i64>, cyc_q> a;

    cyc_q at(i64 m, i64 k) const;
    void set(i64 m, i64 k, const cyc_q& v);
    bool operator==(const qseries2& o) const;
};

/// Coefficients of f(z, pz) for f on a truncation window: entry k is the sum of
/// a[m][n] over m + p n = scale*k. Terms with m + p n not divisible by scale
/// are collected in *stray (exponent numerator, value) when requested.
std::vector<cyc_q> specialize(const qseries2& f, i64 p, i64 K, std::vector<std::pair<i64, cyc_q>>* stray = nullptr);

/// The two-variable optimal form of a ring class character chi, with
/// xi = chi^2. Output indices are rescaled by M = |disc|; the window is
/// [0, bound] in each variable (so M*bound + 1 entries per axis).
/// Supported for c = 1 with |disc_K| odd; other orders raise config_error.
/// alpha_shift moves the coset representatives of O_c / delta O_c and
/// delta_sign picks the generator of the different.
struct opt_options {
    i64 alpha_shift = 0;
    int delta_sign = 1;
    int twist = -1;  // sign applied to the second index (-1 is the literal epsilon twist)
};
qseries2 optimal_form_coeffs(const ring_class_character& chi, i64 bound, const opt_options& opt = {});

/// The local factor sum_alpha a_alpha(T1) a_{-alpha}(T2) at an odd ramified
/// prime q (T1 for chi, T2 for chi^{-1}).
cyc_q local_pair_factor(const ring_class_character& chi, i64 q, i64 T1, i64 T2, const opt_options& opt = {});

class reconstruct_error : public std::runtime_error {
  public:
    enum class kind { need_prime, inconsistent };
    reconstruct_error(kind k, i64 p, i64 idx, const std::string& what)
        : std::runtime_error(what), kind_(k), p_(p), k_(idx) {}
    kind which() const { return kind_; }
    i64 p() const { return p_; }   // offending prime (0 when none exists)
    i64 k() const { return k_; }   // offending coefficient index (m0 for need_prime)

  private:
    kind kind_;
    i64 p_, k_;
};

/// Rebuilds a[m][n] from the single-variable coefficients c_{p,k} by the row
/// induction: a[k][0] = c_{p,k} for a prime p > k, then each later row from
/// a prime p > m. Every other provided (p, k) with k in range is checked
/// against the result.
qseries2 reconstruct_opt(const std::map<i64, std::vector<cyc_q>>& thetas, i64 bound_m, i64 bound_n);

/// Fixture files: a header line "# n=<n> trunc=<N> disc=<D> chi=<label>" then
/// "index<TAB>c0,c1,..." or "m,n<TAB>c0,c1,...".
void write_qseries(std::ostream& os, const std::vector<cyc_q>& s, i64 n, i64 disc, const std::string& label);
void write_qseries2(std::ostream& os, const qseries2& f);
std::vector<cyc_q> read_qseries(std::istream& is);
qseries2 read_qseries2(std::istream& is);

}  // namespace hv
