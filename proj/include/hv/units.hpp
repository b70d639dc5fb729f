#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "hv/arith.hpp"
#include "hv/bigcomplex.hpp"
#include "hv/cyclotomic.hpp"
#include "hv/finite_field.hpp"
#include "hv/quadratic.hpp"

namespace hv {

/// Delta(z) = q prod (1 - q^n)^24, q = exp(2 pi i z), through the pentagonal
/// series for prod (1 - q^n). Throws std::domain_error if Im z <= 0.
bigcomplex delta_eval(const bigcomplex& z, mpfr_prec_t prec);

/// Delta of the lattice Z w1 + Z w2 (weight -12 in the lattice). The basis is
/// first reduced so that w1/w2 lies in the standard fundamental domain.
bigcomplex delta_lattice(bigcomplex w1, bigcomplex w2, mpfr_prec_t prec);

/// Delta of an ideal lattice of O_c, embedded via omega_K -> (delta + sqrt(D_K))/2.
bigcomplex delta_ideal(const quad_order& O, const kideal& a, mpfr_prec_t prec);

/// How Pic(O_c) acts on CM values: inverse sends [b] to a -> b^{-1} a
/// (Shimura reciprocity), direct to a -> b a.
enum class galois_convention { inverse, direct };

const char* convention_name(galois_convention g);

/// Element u + v omega_K of O_K recognized from a complex number.
struct ok_int {
    mpz_class x, y;
    bool operator==(const ok_int&) const = default;
};

struct elliptic_unit_packet {
    quad_order order;
    std::shared_ptr<const form_class_group> group;
    i64 lambda = 0;
    int frakl_choice = 0;  // 0: l = [lambda, (-b - c delta)/2 + c omega] with the smaller b >= 0; 1: its conjugate
    form frakl;            // form attached to l
    int frakl_class = 0;   // class of l in Pic(O_c)
    int frakl_bar_class = 0;
    mpfr_prec_t prec = 0;
    /// u(a_t) = Delta(a_t) / Delta(lbar a_t) for the reduced-form ideal a_t of class t.
    std::vector<bigcomplex> class_values;
    std::vector<ok_int> minpoly_K;     // prod_t (X - u(a_t)) over O_K, constant first
    std::vector<mpz_class> minpoly_Q;  // with the complex conjugates, degree 2h over Z
    double defect = 0;

    /// u^sigma for sigma = class index under the given convention.
    const bigcomplex& value(int sigma, galois_convention g) const;
};

/// Builds the packet at a fixed precision; throws precision_error if the
/// minimal polynomials cannot be rounded.
elliptic_unit_packet elliptic_unit_conjugates(const quad_order& O, i64 lambda, int frakl_choice, mpfr_prec_t prec);
/// Default precision policy with doubling until the defect drops below tol.
elliptic_unit_packet elliptic_unit_conjugates(const quad_order& O, i64 lambda, int frakl_choice, double tol = 1e-10);
mpfr_prec_t default_precision(const quad_order& O);

/// Split primes lambda (in K and coprime to c) in increasing order.
std::vector<i64> split_primes(const quad_order& O, int count, i64 start = 2);

void write_packet_json(std::ostream& os, const elliptic_unit_packet& P, int digits = 40);

/// u_xi carried symbolically: u_xi = sum_sigma u^sigma (x) weights[sigma],
/// weights[sigma] = m(xi) xi(sigma) / (1 - xi(lbar)) in Z[zeta_n].
struct unit_xi {
    cyc_z factor;  // m(xi) / (1 - xi(lbar))
    std::vector<cyc_z> weights;
    galois_convention convention = galois_convention::inverse;
    /// sum_sigma log|u^sigma| xi(sigma) under zeta_n -> exp(2 pi i/n)
    bigcomplex log_realization;
    /// 1 - xi(lbar) under the same embedding
    bigcomplex one_minus_xi_lbar;
};

/// Throws config_error if xi is trivial or xi(l) does not generate the image of xi.
unit_xi u_xi(const elliptic_unit_packet& P, const ring_class_character& xi,
             galois_convention g = galois_convention::inverse);

/// log_ell on F_{p^2}^x: norm applies the fixed log of F_p^x to x^{p+1};
/// sylow uses that the ell-parts of F_{p^2}^x and F_p^x coincide, which is
/// the norm version divided by p + 1 (= 2 mod ell^t).
enum class log_normalization { norm, sylow };

const char* normalization_name(log_normalization z);

struct regulator_value {
    cyc_mod coords;        // log_ell Reg(u_xi) in (Z/ell^t)[zeta_n]
    int choice_index = 0;  // embedding * h + base_root
    int embedding = 0;     // which square root of D_K is used in F_{p^2}
    int base_root = 0;     // which root of minpoly_K mod p is red(u(a_1))
};

/// Candidate values of log_ell Reg_{F_p^x}(u_xi), one per choice of the prime
/// above p (an embedding of O_K into F_{p^2} and the root that reduces u(a_1)).
std::vector<regulator_value> regulator_mod_p(const elliptic_unit_packet& P, const unit_xi& u, i64 p, i64 ell, int t,
                                             log_normalization z = log_normalization::norm);

/// red(u(a_t)) in F_{p^2} for every class t, for each labeling choice.
struct reduction_labeling {
    int embedding = 0, base_root = 0;
    std::vector<fp2_field::elem> values;
};
std::vector<reduction_labeling> reduction_labelings(const elliptic_unit_packet& P, i64 p);

}  // namespace hv
