#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hv/arith.hpp"
#include "hv/cyclotomic.hpp"
#include "hv/quaternion.hpp"

namespace hv {

/// Raised when the Sigma_1 system is degenerate for the chosen auxiliary prime.
class degenerate_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct eisenstein_context {
    i64 p = 0, ell = 0;
    int t = 0;
    i64 modulus = 0;  // ell^t
    std::shared_ptr<const ideal_class_set> classes;
    discrete_log log;

    /// Checks p, ell >= 5 and ell^t | p - 1 (config_error otherwise).
    static eisenstein_context make(std::shared_ptr<const ideal_class_set> C, i64 ell, int t);
};

/// Result of solving A x = b over Z/ell^t by diagonalization.
struct local_solution {
    std::optional<std::vector<zmod>> x;  // empty if the system is inconsistent
    int kernel_log = 0;                  // |ker A| = ell^kernel_log
    int rank_deficiency = 0;             // diagonal entries divisible by ell
};

/// Diagonalizes A over the local ring Z/ell^t with minimal-valuation pivots
/// and solves A x = b; free coordinates are set to zero.
local_solution solve_local(std::vector<std::vector<zmod>> A, std::vector<zmod> b, i64 ell, int t);

struct sigma1 {
    std::vector<zmod> vec;
    i64 aux_v = 0;
    int kernel_log = 0;
    int rank_deficiency = 0;
};

/// Solves (T_v - (v+1)) x = (v-1) log(v) Sigma_0 over Z/ell^t.
sigma1 solve_sigma1(const eisenstein_context& ctx, i64 v);
/// Smallest admissible prime v (not p, not ell) with a nondegenerate system.
sigma1 solve_sigma1(const eisenstein_context& ctx);

/// <Sigma_1, [xi]> = sum_i Sigma1_i [xi]_i / w_i in (Z/ell^t)[zeta_n].
cyc_mod sigma1_pairing(const eisenstein_context& ctx, const sigma1& s, const pic_fn& xi_push);
/// h/2 * <Sigma_1, [xi]>.
cyc_mod shimura_pairing(const eisenstein_context& ctx, const sigma1& s, const pic_fn& xi_push, i64 h);

}  // namespace hv
