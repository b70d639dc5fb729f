#include "hv/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hv {

qmat identity_qmat(std::size_t n) {
    qmat m(n, qvec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

mpq_class det(qmat m) {
    const std::size_t n = m.size();
    mpq_class d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return d;
}

qmat inverse(const qmat& a) {
    const std::size_t n = a.size();
    qmat m = a;
    qmat inv = identity_qmat(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        mpq_class s = 1 / m[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            m[c][k] *= s;
            inv[c][k] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            mpq_class f = m[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                m[r][k] -= f * m[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

qmat transpose(const qmat& m) {
    if (m.empty()) return m;
    qmat t(m[0].size(), qvec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

qmat mul(const qmat& a, const qmat& b) {
    qmat r(a.size(), qvec(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < r[i].size(); ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

qmat lattice_basis(const std::vector<qvec>& gens, std::size_t dim) {
    mpz_class den = 1;
    for (const auto& g : gens)
        for (const auto& x : g) den = lcm(den, mpz_class(x.get_den()));
    std::vector<std::vector<mpz_class>> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) {
        std::vector<mpz_class> r(dim);
        for (std::size_t k = 0; k < dim; ++k) r[k] = mpz_class(g[k] * den);
        rows.push_back(std::move(r));
    }
    // Row-style HNF: for each column, gcd-combine all remaining rows into a pivot.
    std::vector<std::vector<mpz_class>> out;
    std::size_t start = 0;
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = start + 1; r < rows.size(); ++r) {
            while (rows[r][c] != 0) {
                mpz_class q = rows[start][c] / rows[r][c];
                for (std::size_t k = c; k < dim; ++k) rows[start][k] -= q * rows[r][k];
                std::swap(rows[start], rows[r]);
            }
        }
        if (start >= rows.size() || rows[start][c] == 0) throw std::domain_error("lattice_basis: generators not of full rank");
        if (rows[start][c] < 0)
            for (auto& x : rows[start]) x = -x;
        ++start;
    }
    rows.resize(dim);
    // Reduce entries above each pivot into [0, pivot).
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < c; ++r) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[c][c].get_mpz_t());
            if (q == 0) continue;
            for (std::size_t k = c; k < dim; ++k) rows[r][k] -= q * rows[c][k];
        }
    }
    qmat b(dim, qvec(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            b[i][k] = mpq_class(rows[i][k], den);
            b[i][k].canonicalize();
        }
    return b;
}

qvec coordinates(const qmat& b, const qvec& v) {
    qmat bt = transpose(b);
    qmat inv = inverse(bt);
    qvec c(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) c[i] += inv[i][k] * v[k];
    return c;
}

pos_def_lattice::pos_def_lattice(qmat gram, qmat basis) : gram_(std::move(gram)), basis_(std::move(basis)) {
    const std::size_t n = gram_.size();
    if (n == 0 || n > 4) throw std::invalid_argument("pos_def_lattice: rank must be 1..4");
    for (std::size_t i = 0; i < n; ++i) {
        if (gram_[i].size() != n) throw std::invalid_argument("pos_def_lattice: gram not square");
        for (std::size_t j = 0; j < n; ++j)
            if (gram_[i][j] != gram_[j][i]) throw std::invalid_argument("pos_def_lattice: gram not symmetric");
    }
    for (std::size_t k = 1; k <= n; ++k) {
        qmat minor(k, qvec(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor[i][j] = gram_[i][j];
        if (det(minor) <= 0)
            throw std::invalid_argument("pos_def_lattice: gram is not positive definite (leading minor " +
                                        std::to_string(k) + " <= 0)");
    }
    lll_reduce();
    mpz_class den = 1;
    for (const auto& row : reduced_)
        for (const auto& x : row) den = lcm(den, mpz_class(x.get_den()));
    denom_ = den;
    igram_.assign(n, std::vector<i64>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mpz_class v(reduced_[i][j] * den);
            if (!v.fits_slong_p()) throw std::overflow_error("pos_def_lattice: gram entries too large");
            igram_[i][j] = v.get_si();
        }
    chol_.assign(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        long double d = static_cast<long double>(reduced_[i][i].get_d());
        for (std::size_t k = 0; k < i; ++k) d -= chol_[k][k] * chol_[k][i] * chol_[k][i];
        chol_[i][i] = d;
        for (std::size_t j = i + 1; j < n; ++j) {
            long double a = static_cast<long double>(reduced_[i][j].get_d());
            for (std::size_t k = 0; k < i; ++k) a -= chol_[k][k] * chol_[k][i] * chol_[k][j];
            chol_[i][j] = a / d;
        }
    }
}

// Exact LLL (delta = 3/4) on the gram matrix, tracking the unimodular change.
void pos_def_lattice::lll_reduce() {
    const std::size_t n = gram_.size();
    qmat G = gram_;
    std::vector<std::vector<i64>> U(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
    auto gso = [&](qmat& mu, qvec& B) {
        mu.assign(n, qvec(n, 0));
        B.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                mpq_class s = G[i][j];
                for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * B[k];
                mu[i][j] = s / B[j];
            }
            mpq_class s = G[i][i];
            for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * B[k];
            B[i] = s;
        }
    };
    // b_i -= q b_j
    auto sub_row = [&](std::size_t i, std::size_t j, const mpz_class& q) {
        if (q == 0) return;
        if (!q.fits_slong_p()) throw std::overflow_error("pos_def_lattice: LLL multiplier too large");
        const i64 qq = q.get_si();
        for (std::size_t k = 0; k < n; ++k) U[i][k] -= qq * U[j][k];
        for (std::size_t k = 0; k < n; ++k) G[i][k] -= q * G[j][k];
        // G[i][i] now holds G_ii - q G_ji; finish after symmetrizing row i
        for (std::size_t k = 0; k < n; ++k) G[k][i] = G[i][k];
        G[i][i] = G[i][i] - q * G[j][i];
    };
    qmat mu;
    qvec B;
    std::size_t k = 1;
    int guard = 0;
    while (k < n) {
        if (++guard > 100000) throw std::runtime_error("pos_def_lattice: LLL did not terminate");
        gso(mu, B);
        for (std::size_t j = k; j-- > 0;) {
            mpz_class r;
            mpq_class half = mu[k][j] + frac(1, 2);
            mpz_fdiv_q(r.get_mpz_t(), half.get_num_mpz_t(), half.get_den_mpz_t());
            if (r != 0) {
                sub_row(k, j, r);
                gso(mu, B);
            }
        }
        if (B[k] >= (frac(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(U[k], U[k - 1]);
            std::swap(G[k], G[k - 1]);
            for (auto& row : G) std::swap(row[k], row[k - 1]);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    reduced_ = G;
    unimod_ = U;
}

ivec pos_def_lattice::to_input(const ivec& w) const {
    ivec v(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0)
            for (std::size_t k = 0; k < w.size(); ++k) v[k] += w[i] * unimod_[i][k];
    return v;
}

mpq_class pos_def_lattice::norm(const ivec& v) const {
    mpq_class s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) s += gram_[i][j] * v[i] * v[j];
    return s;
}

// Fincke-Pohst walk over Q(v) <= bound (a slightly inflated float bound);
// f receives candidates together with their exact scaled norm v^T igram v.
template <class F>
void pos_def_lattice::walk(long double bound, F&& f) const {
    const int n = static_cast<int>(rank());
    bound = bound * (1 + 1e-12L) + 1e-12L;
    ivec x(static_cast<std::size_t>(n), 0);
    std::vector<long double> rem(static_cast<std::size_t>(n) + 1, 0);
    rem[static_cast<std::size_t>(n)] = bound;
    auto rec = [&](auto&& self, int i) -> void {
        const auto ui = static_cast<std::size_t>(i);
        long double c = 0;
        for (int j = i + 1; j < n; ++j) c -= chol_[ui][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        long double r = rem[ui + 1];
        if (r < 0) r = 0;
        long double w = std::sqrt(r / chol_[ui][ui]);
        auto lo = static_cast<i64>(std::ceil(c - w - 1e-9L));
        auto hi = static_cast<i64>(std::floor(c + w + 1e-9L));
        for (i64 xi = lo; xi <= hi; ++xi) {
            x[ui] = xi;
            long double d = static_cast<long double>(xi) - c;
            rem[ui] = rem[ui + 1] - chol_[ui][ui] * d * d;
            if (rem[ui] < -1e-9L * (1 + bound)) continue;
            if (i == 0) {
                __int128 s = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s += static_cast<__int128>(igram_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) *
                             x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
                f(x, s);
            } else {
                self(self, i - 1);
            }
        }
        x[ui] = 0;
    };
    rec(rec, n - 1);
}

std::vector<ivec> pos_def_lattice::enumerate_by_norm(const mpq_class& target) const {
    if (target < 0) return {};
    mpq_class scaled = target * denom_;
    std::vector<ivec> out;
    if (scaled.get_den() != 1) return out;
    mpz_class st = scaled.get_num();
    if (!st.fits_slong_p()) throw std::overflow_error("enumerate_by_norm: target too large");
    const __int128 want = st.get_si();
    walk(static_cast<long double>(target.get_d()), [&](const ivec& v, __int128 s) {
        if (s == want) out.push_back(to_input(v));
    });
    std::sort(out.begin(), out.end());
    return out;
}

void pos_def_lattice::for_each_up_to(const mpq_class& bound,
                                     const std::function<void(const ivec&, const mpq_class&)>& f) const {
    mpq_class sb = bound * denom_;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), sb.get_num_mpz_t(), sb.get_den_mpz_t());
    const __int128 lim = fl.get_si();
    walk(static_cast<long double>(bound.get_d()), [&](const ivec& v, __int128 s) {
        if (s > lim) return;
        mpq_class q(mpz_class(static_cast<long>(s)), denom_);
        q.canonicalize();
        f(to_input(v), q);
    });
}

std::vector<i64> pos_def_lattice::theta_counts(i64 n) const { return theta_counts_scaled(1, n); }

std::vector<i64> pos_def_lattice::theta_counts_scaled(const mpq_class& s, i64 n) const {
    std::vector<i64> counts(static_cast<std::size_t>(n) + 1, 0);
    mpq_class bound = mpq_class(n) / s;
    for_each_up_to(bound, [&](const ivec&, const mpq_class& q) {
        mpq_class k = q * s;
        if (k.get_den() == 1 && k <= n) ++counts[static_cast<std::size_t>(k.get_num().get_si())];
    });
    return counts;
}

}  // namespace hv
