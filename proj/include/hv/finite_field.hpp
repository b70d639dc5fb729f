#pragma once

#include <vector>

#include "hv/arith.hpp"

namespace hv {

/// F_{p^2} = F_p[x]/(x^2 - d) with d the smallest quadratic non-residue mod
/// an odd prime p. Degree-1 elements are those with b = 0.
class fp2_field {
  public:
    explicit fp2_field(i64 p);

    struct elem {
        i64 a = 0, b = 0;  // a + b*x
        bool operator==(const elem&) const = default;
        bool operator<(const elem& o) const { return a != o.a ? a < o.a : b < o.b; }
    };

    i64 p() const { return p_; }
    i64 nonresidue() const { return d_; }

    elem from_int(i64 v) const { return {mod(v, p_), 0}; }
    /// Embeds u + v*sqrt(d) for integers u, v.
    elem make(i64 u, i64 v) const { return {mod(u, p_), mod(v, p_)}; }
    elem add(elem x, elem y) const { return {mod(x.a + y.a, p_), mod(x.b + y.b, p_)}; }
    elem sub(elem x, elem y) const { return {mod(x.a - y.a, p_), mod(x.b - y.b, p_)}; }
    elem mul(elem x, elem y) const;
    elem inv(elem x) const;
    elem pow(elem x, u64 e) const;
    elem frobenius(elem x) const { return {x.a, mod(-x.b, p_)}; }
    /// N(x) = x^{p+1} in F_p.
    i64 norm(elem x) const;
    bool is_zero(elem x) const { return x.a == 0 && x.b == 0; }

    /// A square root of an element of F_p inside F_{p^2}.
    elem sqrt_fp(i64 v) const;

    /// Distinct roots in F_{p^2} of a polynomial with coefficients in F_{p^2}
    /// (constant term first), found by exhaustive evaluation.
    std::vector<elem> roots(const std::vector<elem>& poly) const;
    elem eval(const std::vector<elem>& poly, elem x) const;

  private:
    i64 p_, d_;
};

}  // namespace hv
