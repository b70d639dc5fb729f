#pragma once

#include <compare>
#include <memory>
#include <string>
#include <vector>

#include "hv/arith.hpp"
#include "hv/bigcomplex.hpp"
#include "hv/cyclotomic.hpp"
#include "hv/lattice.hpp"

namespace hv {

bool is_fundamental_disc(i64 d);

/// Element x + y*omega_K of K = Q(sqrt(disc_K)), omega_K = (delta + sqrt(disc_K))/2
/// with delta in {0, 1}, delta = disc_K mod 2.
struct kelem {
    mpq_class x, y;
    bool operator==(const kelem& o) const { return x == o.x && y == o.y; }
};

/// The order O_c = Z + c*O_K of discriminant c^2 disc_K < 0.
struct quad_order {
    i64 disc_K = -4;
    i64 c = 1;
    i64 disc = -4;

    static quad_order make(i64 disc_K, i64 c);

    i64 delta() const { return mod(disc_K, 2); }
    /// omega_K^2 = delta*omega_K - n_omega.
    i64 n_omega() const { return (delta() - disc_K) / 4; }
    i64 unit_count() const;  // |O_c^x|

    kelem mul(const kelem& a, const kelem& b) const;
    kelem conj(const kelem& a) const { return {a.x + a.y * delta(), -a.y}; }
    mpq_class norm(const kelem& a) const { return a.x * a.x + delta() * a.x * a.y + n_omega() * a.y * a.y; }
    mpq_class trace(const kelem& a) const { return 2 * a.x + delta() * a.y; }
    kelem inverse(const kelem& a) const;
    bigcomplex embed(const kelem& a, mpfr_prec_t prec) const;
    /// Generator omega = (disc mod 2 + sqrt(disc))/2 of O_c over Z, in K coordinates.
    kelem generator() const;
    bool contains(const kelem& a) const;  // a in O_c
};

/// Binary quadratic form a x^2 + b x y + c y^2.
struct form {
    i64 a = 1, b = 0, c = 1;
    i64 disc() const { return b * b - 4 * a * c; }
    i64 eval(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
    auto operator<=>(const form&) const = default;
    std::string str() const;
};

form reduce(form f);
bool is_reduced(const form& f);
form compose(const form& f, const form& g);
/// f(x X + r Y, y X + s Y) for a matrix of determinant 1.
form act(const form& f, i64 x, i64 r, i64 y, i64 s);

/// Z-lattice in K of rank 2, stored as a 2x2 HNF row basis in (x, y) coordinates.
struct kideal {
    qmat basis;
    bool operator==(const kideal& o) const { return basis == o.basis; }
};

kideal make_ideal(const std::vector<kelem>& gens);
kideal ideal_mul(const quad_order& O, const kideal& a, const kideal& b);
kideal ideal_conj(const quad_order& O, const kideal& a);
kideal ideal_scale(const quad_order& O, const kideal& a, const kelem& s);
kideal order_lattice(const quad_order& O);
/// [O_c : I] for a lattice I inside K with O_c-multiplier.
mpq_class ideal_norm(const quad_order& O, const kideal& I);
bool ideal_contains(const kideal& I, const kelem& a);
/// Ideal [a, (-b + sqrt(disc))/2] of the form (a, b, c), a > 0.
kideal ideal_of_form(const quad_order& O, const form& f);
/// The form N(x v1 - y v2)/N(I) for an oriented basis (Im(v2/v1) > 0), reduced.
form form_of_ideal(const quad_order& O, const kideal& I);

/// Pic(O_c) as reduced forms with a composition table.
class form_class_group {
  public:
    explicit form_class_group(const quad_order& O);

    const quad_order& order() const { return order_; }
    int h() const { return static_cast<int>(reps_.size()); }
    const std::vector<form>& reps() const { return reps_; }
    const form& rep(int i) const { return reps_[static_cast<std::size_t>(i)]; }
    int mul(int i, int j) const { return comp_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    int inverse(int i) const;
    int pow(int i, i64 e) const;
    int identity() const { return 0; }
    int element_order(int i) const;
    i64 exponent() const;
    /// Index of the class of a form (reduced internally).
    int index_of(const form& f) const;
    int class_of_ideal(const kideal& I) const { return index_of(form_of_ideal(order_, I)); }
    /// A representative of class i of the form (a, b, c) with gcd(a, m) = 1.
    form rep_prime_to(int i, i64 m) const;

  private:
    quad_order order_;
    std::vector<form> reps_;
    std::vector<std::vector<int>> comp_;
};

std::shared_ptr<const form_class_group> class_group(const quad_order& O);

/// Character Pic(O_c) -> mu_n, class i maps to zeta_n^{exps[i]}.
class ring_class_character {
  public:
    ring_class_character(std::shared_ptr<const form_class_group> g, i64 n, std::vector<i64> exps);

    const form_class_group& group() const { return *group_; }
    std::shared_ptr<const form_class_group> group_ptr() const { return group_; }
    /// Ambient root-of-unity order; values are reported in Z[zeta_n].
    i64 n() const { return n_; }
    /// Exact order of the character (divides n).
    i64 order() const;
    i64 exponent(int cls) const { return exps_[static_cast<std::size_t>(cls)]; }
    const std::vector<i64>& exponents() const { return exps_; }
    cyc_z value(int cls) const { return cyc_z_root(n_, exponent(cls)); }
    bool is_trivial() const { return order() == 1; }

    ring_class_character pow(i64 k) const;
    ring_class_character inverse() const { return pow(-1); }
    /// Same character with values in the smaller ring Z[zeta_order].
    ring_class_character normalized() const;
    bool operator==(const ring_class_character& o) const { return n_ == o.n_ && exps_ == o.exps_; }
    std::string label() const;

  private:
    std::shared_ptr<const form_class_group> group_;
    i64 n_;
    std::vector<i64> exps_;
};

/// All characters of exact order n, in a deterministic order.
std::vector<ring_class_character> characters_of_order(const std::shared_ptr<const form_class_group>& G, i64 n);

/// Class map Pic(O_c) -> Pic(O_c') for c' | c, extension of ideals prime to c.
std::vector<int> projection_map(const form_class_group& G, const form_class_group& Gsmall);

i64 conductor(const ring_class_character& xi);
i64 m_of_xi(const ring_class_character& xi);

/// a(0..N) of the weight-one theta series of chi; entries in Z[zeta_n].
std::vector<cyc_z> theta_newform(const ring_class_character& chi, i64 N);

}  // namespace hv
