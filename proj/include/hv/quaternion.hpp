#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hv/arith.hpp"
#include "hv/cyclotomic.hpp"
#include "hv/lattice.hpp"
#include "hv/quadratic.hpp"

namespace hv {

/// Element x0 + x1 i + x2 j + x3 k of (a, b | Q), i^2 = a, j^2 = b, k = ij.
using quat = std::array<mpq_class, 4>;

class quat_algebra {
  public:
    quat_algebra(i64 p, i64 a, i64 b);

    i64 p() const { return p_; }
    i64 a() const { return a_; }
    i64 b() const { return b_; }

    quat mul(const quat& x, const quat& y) const;
    quat conj(const quat& x) const { return {x[0], -x[1], -x[2], -x[3]}; }
    mpq_class nrd(const quat& x) const;
    mpq_class trd(const quat& x) const { return 2 * x[0]; }
    /// Bilinear form associated with nrd.
    mpq_class pair(const quat& x, const quat& y) const;

  private:
    i64 p_, a_, b_;
};

/// Local Hilbert symbol (a, b)_q; q = 0 stands for the real place.
int hilbert_symbol(i64 a, i64 b, i64 q);

quat_algebra build_algebra(i64 p);

/// Full-rank Z-lattice in B, rows of an HNF basis in (1, i, j, k) coordinates.
struct quat_lattice {
    qmat basis;
    bool operator==(const quat_lattice& o) const { return basis == o.basis; }
};

quat row_quat(const qvec& r);
quat_lattice make_lattice(const std::vector<quat>& gens);
quat_lattice lattice_mul(const quat_algebra& B, const quat_lattice& x, const quat_lattice& y);
quat_lattice lattice_conj(const quat_algebra& B, const quat_lattice& x);
quat_lattice lattice_scale(const quat_lattice& x, const mpq_class& s);
bool lattice_contains(const quat_lattice& L, const quat& x);
/// Gram matrix of nrd on the basis, scaled by s.
qmat norm_gram(const quat_algebra& B, const quat_lattice& L, const mpq_class& s = 1);
quat lattice_vector(const quat_lattice& L, const ivec& v);
mpq_class covolume(const quat_lattice& L);

struct quat_order {
    quat_algebra alg;
    quat_lattice lat;
};

quat_order maximal_order(const quat_algebra& B);
/// |det(trd(e_i e_j))| over a basis.
mpq_class discriminant_squared(const quat_algebra& B, const quat_lattice& L);
bool is_order(const quat_algebra& B, const quat_lattice& L);

/// Left ideal classes of a maximal order with unit weights.
struct ideal_class_set {
    quat_order order;
    std::vector<quat_lattice> reps;
    std::vector<mpq_class> norms;      // nrd(I_i)
    std::vector<i64> weights;          // |O_r(I_i)^x| / 2
    std::vector<quat_lattice> right;   // O_r(I_i)
    int h() const { return static_cast<int>(reps.size()); }
    i64 p() const { return order.alg.p(); }
    mpq_class mass() const;
};

/// nrd of a lattice relative to the maximal order: sqrt(covol(I)/covol(O)).
mpq_class lattice_nrd(const quat_order& O, const quat_lattice& I);

ideal_class_set ideal_classes(const quat_order& O);

/// Whether I ~ J as left ideals (J = I beta).
bool ideals_equivalent(const quat_algebra& B, const quat_lattice& I, const mpq_class& nI, const quat_lattice& J,
                       const mpq_class& nJ);
/// Index of the class of a left ideal J of the order; throws internal_error if none.
int find_class(const ideal_class_set& C, const quat_lattice& J);

using int_matrix = std::vector<std::vector<i64>>;

/// B(n) for a single n.
int_matrix brandt(const ideal_class_set& C, i64 n);
/// B(1), ..., B(N) (index 0 is left empty). The parallel version splits the
/// class pairs across OpenMP threads; the serial one is the reference.
std::vector<int_matrix> brandt_all(const ideal_class_set& C, i64 N);
std::vector<int_matrix> brandt_all_serial(const ideal_class_set& C, i64 N);
void write_brandt_csv(std::ostream& os, const ideal_class_set& C, i64 n, const int_matrix& m);

/// Embedding of O_c into a right order O_r(I_host).
struct embedding {
    quad_order order;
    int host = 0;
    quat image_generator;  // image of the generator of O_c
    quat image_omega_K;    // image of omega_K (rational quaternion)
};

embedding optimal_embedding(const quad_order& K, const ideal_class_set& C);
quat embed_kelem(const embedding& e, const kelem& x);
/// Class of I_host * phi(a) for an O_c-ideal lattice a.
int ideal_class_of(const ideal_class_set& C, const embedding& e, const kideal& a);
/// iota(t) for every t in Pic(O_c), using the reduced-form ideals.
std::vector<int> iota_map(const ideal_class_set& C, const embedding& e, const form_class_group& G);

using pic_fn = std::vector<cyc_q>;

/// S_i = sum over t with iota(t) = i of xi(t), then [xi]_i = w_i S_i.
pic_fn pushforward(const ideal_class_set& C, const std::vector<int>& iota, const ring_class_character& xi);
pic_fn sigma0(const ideal_class_set& C, i64 n);
/// <f, g> = sum f_i g_i / w_i.
cyc_q pairing(const ideal_class_set& C, const pic_fn& f, const pic_fn& g);
pic_fn apply(const int_matrix& m, const pic_fn& f);

/// c_0 = <f, Sigma0><g, Sigma0>/2 and c_n = <T_n f, g> for n = 1..N.
std::vector<cyc_q> theta_lift(const ideal_class_set& C, const std::vector<int_matrix>& T, const pic_fn& f,
                              const pic_fn& g, i64 N);

}  // namespace hv
