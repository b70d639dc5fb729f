#pragma once

#include <functional>
#include <vector>

#include <gmpxx.h>

#include "hv/arith.hpp"

namespace hv {

using qvec = std::vector<mpq_class>;
using qmat = std::vector<qvec>;  // row-major
using ivec = std::vector<i64>;

qmat identity_qmat(std::size_t n);
mpq_class det(qmat m);
qmat inverse(const qmat& m);  // throws std::domain_error if singular
qmat transpose(const qmat& m);
qmat mul(const qmat& a, const qmat& b);

/// Z-basis (rows, Hermite normal form) of the lattice spanned by rational
/// generators of dimension dim. Throws if the span is not of full rank.
qmat lattice_basis(const std::vector<qvec>& gens, std::size_t dim);

/// Coordinates of v in the row basis b, i.e. the c with c * b = v.
qvec coordinates(const qmat& b, const qvec& v);

/// Positive-definite lattice of rank at most 4. The quadratic form is
/// Q(v) = v^T gram v on integer coordinate vectors v.
class pos_def_lattice {
  public:
    explicit pos_def_lattice(qmat gram, qmat basis = {});

    std::size_t rank() const { return gram_.size(); }
    const qmat& gram() const { return gram_; }
    const qmat& basis() const { return basis_; }

    mpq_class norm(const ivec& v) const;

    /// All v with Q(v) = target, each once, in lexicographic order.
    std::vector<ivec> enumerate_by_norm(const mpq_class& target) const;

    /// Calls f(v, Q(v)) for every v with Q(v) <= bound; order unspecified.
    void for_each_up_to(const mpq_class& bound, const std::function<void(const ivec&, const mpq_class&)>& f) const;

    /// counts[k] = #{v : Q(v) = k} for 0 <= k <= n. Only integral norms are counted.
    std::vector<i64> theta_counts(i64 n) const;

    /// Same as theta_counts, but with the gram scaled by a rational factor
    /// so that norms land on integers: counts[k] = #{v : s*Q(v) = k}.
    std::vector<i64> theta_counts_scaled(const mpq_class& s, i64 n) const;

  private:
    // Walks the LLL-reduced gram; igram is its integer scaling,
    // Q(w) = (w^T igram w) / denom.
    template <class F>
    void walk(long double bound_scaled, F&& f) const;

    void lll_reduce();
    ivec to_input(const ivec& w) const;

    qmat gram_, basis_;
    qmat reduced_;                         // U gram U^T after LLL
    std::vector<std::vector<i64>> unimod_;  // U; input coordinates are w U
    std::vector<std::vector<i64>> igram_;
    mpz_class denom_;
    std::vector<std::vector<long double>> chol_;  // q_ii on the diagonal, mu_ij above
};

}  // namespace hv
