#include "hv/eisenstein.hpp"

namespace hv {

namespace {

int val(const zmod& x, i64 ell, int t) {
    if (x.value() == 0) return t;
    int v = 0;
    for (i64 y = x.value(); y % ell == 0; y /= ell) ++v;
    return v;
}

// x / ell^k for a residue of valuation >= k, as a residue again.
zmod shift_down(const zmod& x, i64 ell, int k) { return {x.value() / int_pow(ell, k), x.modulus()}; }

}  // namespace

eisenstein_context eisenstein_context::make(std::shared_ptr<const ideal_class_set> C, i64 ell, int t) {
    if (!C) throw std::invalid_argument("eisenstein_context: missing class set");
    const i64 p = C->p();
    if (!is_prime(ell) || ell < 5) throw config_error("eisenstein: ell must be a prime >= 5, got " + std::to_string(ell));
    if (t < 1) throw config_error("eisenstein: t must be positive");
    if (p < 5) throw config_error("eisenstein: p must be >= 5");
    const i64 m = int_pow(ell, t);
    if ((p - 1) % m != 0)
        throw config_error("eisenstein: ell^t = " + std::to_string(m) + " does not divide p - 1 = " + std::to_string(p - 1));
    return {p, ell, t, m, std::move(C), discrete_log(p, ell, t)};
}

local_solution solve_local(std::vector<std::vector<zmod>> A, std::vector<zmod> b, i64 ell, int t) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    const i64 m = int_pow(ell, t);
    if (b.size() != rows) throw std::invalid_argument("solve_local: size mismatch");
    std::vector<std::vector<zmod>> Q(cols, std::vector<zmod>(cols, zmod(0, m)));
    for (std::size_t i = 0; i < cols; ++i) Q[i][i] = zmod(1, m);
    std::vector<int> pivval;
    std::size_t k = 0;
    for (; k < std::min(rows, cols); ++k) {
        int best = t;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < rows; ++i)
            for (std::size_t j = k; j < cols; ++j) {
                int v = val(A[i][j], ell, t);
                if (v < best) best = v, bi = i, bj = j;
            }
        if (best >= t) break;
        std::swap(A[k], A[bi]);
        std::swap(b[k], b[bi]);
        if (bj != k) {
            for (auto& row : A) std::swap(row[k], row[bj]);
            for (auto& row : Q) std::swap(row[k], row[bj]);
        }
        const zmod uinv = shift_down(A[k][k], ell, best).inverse();
        for (std::size_t i = k + 1; i < rows; ++i) {
            if (A[i][k].value() == 0) continue;
            zmod f = shift_down(A[i][k], ell, best) * uinv;
            for (std::size_t j = k; j < cols; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
        for (std::size_t j = k + 1; j < cols; ++j) {
            if (A[k][j].value() == 0) continue;
            zmod g = shift_down(A[k][j], ell, best) * uinv;
            for (std::size_t i = 0; i < rows; ++i) A[i][j] -= g * A[i][k];
            for (std::size_t i = 0; i < cols; ++i) Q[i][j] -= g * Q[i][k];
        }
        pivval.push_back(best);
    }
    local_solution out;
    out.kernel_log = static_cast<int>(cols - k) * t;
    out.rank_deficiency = static_cast<int>(cols - k);
    for (int v : pivval) {
        out.kernel_log += v;
        if (v > 0) ++out.rank_deficiency;
    }
    std::vector<zmod> y(cols, zmod(0, m));
    for (std::size_t i = 0; i < k; ++i) {
        int v = pivval[i];
        if (val(b[i], ell, t) < v) return out;
        y[i] = shift_down(b[i], ell, v) * shift_down(A[i][i], ell, v).inverse();
    }
    for (std::size_t i = k; i < rows; ++i)
        if (b[i].value() != 0) return out;
    std::vector<zmod> x(cols, zmod(0, m));
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j) x[i] += Q[i][j] * y[j];
    out.x = std::move(x);
    return out;
}

sigma1 solve_sigma1(const eisenstein_context& ctx, i64 v) {
    if (v < 2 || !is_prime(v)) throw config_error("solve_sigma1: auxiliary v must be prime, got " + std::to_string(v));
    if (v == ctx.p || v == ctx.ell) throw config_error("solve_sigma1: auxiliary v must differ from p and ell");
    const ideal_class_set& C = *ctx.classes;
    const int_matrix T = brandt(C, v);
    const auto h = static_cast<std::size_t>(C.h());
    std::vector<std::vector<zmod>> A(h, std::vector<zmod>(h));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) A[i][j] = zmod(T[i][j] - (i == j ? v + 1 : 0), ctx.modulus);
    const zmod rhs = ctx.log(v) * (v - 1);
    std::vector<zmod> b(h, rhs);
    local_solution s = solve_local(A, b, ctx.ell, ctx.t);
    if (s.kernel_log > ctx.t)
        throw degenerate_error("solve_sigma1: kernel of T_" + std::to_string(v) + " - " + std::to_string(v + 1) +
                               " is larger than the span of Sigma_0; try another v");
    if (!s.x) throw degenerate_error("solve_sigma1: no solution for v=" + std::to_string(v) + " (check ell^t | p-1)");
    // the solution must satisfy the system exactly
    for (std::size_t i = 0; i < h; ++i) {
        zmod r(0, ctx.modulus);
        for (std::size_t j = 0; j < h; ++j) r += A[i][j] * (*s.x)[j];
        if (!(r == rhs)) throw internal_error("solve_sigma1: back substitution failed");
    }
    return {std::move(*s.x), v, s.kernel_log, s.rank_deficiency};
}

sigma1 solve_sigma1(const eisenstein_context& ctx) {
    for (i64 v = 2; v < 200; v = next_prime(v)) {
        if (v == ctx.p || v == ctx.ell) continue;
        try {
            return solve_sigma1(ctx, v);
        } catch (const degenerate_error&) {
        }
    }
    throw degenerate_error("solve_sigma1: no nondegenerate auxiliary prime below 200");
}

cyc_mod sigma1_pairing(const eisenstein_context& ctx, const sigma1& s, const pic_fn& xi_push) {
    const ideal_class_set& C = *ctx.classes;
    if (static_cast<int>(xi_push.size()) != C.h() || s.vec.size() != xi_push.size())
        throw std::invalid_argument("sigma1_pairing: size mismatch");
    const i64 n = xi_push.front().conductor();
    cyc_mod r = cyc_mod_const(n, ctx.modulus, 0);
    for (std::size_t i = 0; i < xi_push.size(); ++i) {
        cyc_q term = xi_push[i].scaled(frac(1, C.weights[i]));
        r += to_mod(term, ctx.modulus).scaled(s.vec[i]);
    }
    return r;
}

cyc_mod shimura_pairing(const eisenstein_context& ctx, const sigma1& s, const pic_fn& xi_push, i64 h) {
    return sigma1_pairing(ctx, s, xi_push).scaled(zmod(h, ctx.modulus) * zmod(2, ctx.modulus).inverse());
}

}  // namespace hv
