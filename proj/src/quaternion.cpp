#include "hv/quaternion.hpp"

#include <algorithm>
#include <ostream>

namespace hv {

namespace {

// (u|q)-style Legendre value for a unit u at odd q.
int legendre_unit(i64 u, i64 q) { return kronecker(mod(u, q), q); }

mpz_class exact_sqrt(const mpz_class& x) {
    if (x < 0 || mpz_perfect_square_p(x.get_mpz_t()) == 0) throw internal_error("exact_sqrt: not a square");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

quat scale(const quat& x, const mpq_class& s) { return {x[0] * s, x[1] * s, x[2] * s, x[3] * s}; }
quat add(const quat& x, const quat& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]}; }
quat sub(const quat& x, const quat& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]}; }

}  // namespace

quat_algebra::quat_algebra(i64 p, i64 a, i64 b) : p_(p), a_(a), b_(b) {}

quat quat_algebra::mul(const quat& x, const quat& y) const {
    const mpq_class a = a_, b = b_, ab = a_ * b_;
    return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - ab * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

mpq_class quat_algebra::nrd(const quat& x) const {
    return x[0] * x[0] - a_ * x[1] * x[1] - b_ * x[2] * x[2] + a_ * b_ * x[3] * x[3];
}

mpq_class quat_algebra::pair(const quat& x, const quat& y) const {
    return x[0] * y[0] - a_ * x[1] * y[1] - b_ * x[2] * y[2] + a_ * b_ * x[3] * y[3];
}

int hilbert_symbol(i64 a, i64 b, i64 q) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
    if (q == 0) return (a < 0 && b < 0) ? -1 : 1;
    int alpha = 0, beta = 0;
    while (a % q == 0) a /= q, ++alpha;
    while (b % q == 0) b /= q, ++beta;
    if (q != 2) {
        int s = ((alpha * beta) % 2 == 1 && mod(q, 4) == 3) ? -1 : 1;
        if (beta % 2 == 1) s *= legendre_unit(a, q);
        if (alpha % 2 == 1) s *= legendre_unit(b, q);
        return s;
    }
    auto eps = [](i64 u) { return static_cast<int>(mod((u - 1) / 2, 2)); };
    auto omega = [](i64 u) { return static_cast<int>(mod((mod(u, 16) * mod(u, 16) - 1) / 8, 2)); };
    int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return e % 2 == 0 ? 1 : -1;
}

quat_algebra build_algebra(i64 p) {
    if (p < 5 || !is_prime(p)) throw config_error("build_algebra: p must be a prime >= 5, got " + std::to_string(p));
    i64 a, b = -p;
    if (mod(p, 4) == 3) {
        a = -1;
    } else if (mod(p, 8) == 5) {
        a = -2;
    } else {
        i64 q = 3;
        while (!(mod(q, 4) == 3 && kronecker(q, p) == -1)) q = next_prime(q);
        a = -q;
    }
    // ramification must be exactly {p, infinity}
    std::vector<i64> places{0, 2};
    for (auto [q, e] : factorize(a * b))
        if (q != 2) places.push_back(q);
    for (i64 q : places) {
        int want = (q == 0 || q == p) ? -1 : 1;
        if (hilbert_symbol(a, b, q) != want)
            throw internal_error("build_algebra: wrong ramification at " + std::to_string(q) + " for p=" + std::to_string(p));
    }
    return {p, a, b};
}

quat row_quat(const qvec& r) { return {r[0], r[1], r[2], r[3]}; }

quat_lattice make_lattice(const std::vector<quat>& gens) {
    std::vector<qvec> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) rows.push_back({g[0], g[1], g[2], g[3]});
    return {lattice_basis(rows, 4)};
}

quat_lattice lattice_mul(const quat_algebra& B, const quat_lattice& x, const quat_lattice& y) {
    std::vector<quat> gens;
    gens.reserve(16);
    for (const auto& r : x.basis)
        for (const auto& s : y.basis) gens.push_back(B.mul(row_quat(r), row_quat(s)));
    return make_lattice(gens);
}

quat_lattice lattice_conj(const quat_algebra& B, const quat_lattice& x) {
    std::vector<quat> gens;
    for (const auto& r : x.basis) gens.push_back(B.conj(row_quat(r)));
    return make_lattice(gens);
}

quat_lattice lattice_scale(const quat_lattice& x, const mpq_class& s) {
    quat_lattice r = x;
    for (auto& row : r.basis)
        for (auto& v : row) v *= s;
    if (s < 0) return make_lattice({row_quat(r.basis[0]), row_quat(r.basis[1]), row_quat(r.basis[2]), row_quat(r.basis[3])});
    return r;
}

bool lattice_contains(const quat_lattice& L, const quat& x) {
    qvec c = coordinates(L.basis, {x[0], x[1], x[2], x[3]});
    return std::all_of(c.begin(), c.end(), [](const mpq_class& v) { return v.get_den() == 1; });
}

qmat norm_gram(const quat_algebra& B, const quat_lattice& L, const mpq_class& s) {
    qmat g(4, qvec(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) g[i][j] = g[j][i] = B.pair(row_quat(L.basis[i]), row_quat(L.basis[j])) * s;
    return g;
}

quat lattice_vector(const quat_lattice& L, const ivec& v) {
    quat x{0, 0, 0, 0};
    for (std::size_t k = 0; k < 4; ++k)
        if (v[k] != 0) x = add(x, scale(row_quat(L.basis[k]), v[k]));
    return x;
}

mpq_class covolume(const quat_lattice& L) { return abs(det(L.basis)); }

mpq_class discriminant_squared(const quat_algebra& B, const quat_lattice& L) {
    qmat t(4, qvec(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) t[i][j] = B.trd(B.mul(row_quat(L.basis[i]), row_quat(L.basis[j])));
    return abs(det(t));
}

bool is_order(const quat_algebra& B, const quat_lattice& L) {
    if (!lattice_contains(L, {1, 0, 0, 0})) return false;
    for (const auto& r : L.basis)
        for (const auto& s : L.basis)
            if (!lattice_contains(L, B.mul(row_quat(r), row_quat(s)))) return false;
    return true;
}

quat_order maximal_order(const quat_algebra& B) {
    const i64 p = B.p();
    const mpq_class h(1, 2);
    std::vector<quat> gens;
    if (B.a() == -1) {
        gens = {{1, 0, 0, 0}, {0, 1, 0, 0}, {h, 0, h, 0}, {0, h, 0, h}};
    } else if (B.a() == -2) {
        const mpq_class f(1, 4);
        gens = {{h, 0, h, h}, {0, f, h, f}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    } else {
        const i64 q = -B.a();
        i64 c = 0;
        while (mod(c * c * p + 1, q) != 0) ++c;
        gens = {{h, h, 0, 0}, {0, 0, h, -h}, {0, frac(1, q), 0, frac(-c, q)}, {0, 0, 0, -1}};
    }
    quat_lattice L = make_lattice(gens);
    if (!is_order(B, L)) throw internal_error("maximal_order: recipe basis is not an order for p=" + std::to_string(p));
    if (discriminant_squared(B, L) != p * p)
        throw internal_error("maximal_order: discriminant check failed for p=" + std::to_string(p));
    return {B, L};
}

mpq_class ideal_class_set::mass() const {
    mpq_class m = 0;
    for (i64 w : weights) m += frac(1, w);
    return m;
}

mpq_class lattice_nrd(const quat_order& O, const quat_lattice& I) {
    mpq_class r = covolume(I) / covolume(O.lat);
    return {exact_sqrt(r.get_num()), exact_sqrt(r.get_den())};
}

bool ideals_equivalent(const quat_algebra& B, const quat_lattice& I, const mpq_class& nI, const quat_lattice& J,
                       const mpq_class& nJ) {
    quat_lattice L = lattice_mul(B, lattice_conj(B, I), J);
    pos_def_lattice P(norm_gram(B, L, 1 / (nI * nJ)));
    return !P.enumerate_by_norm(1).empty();
}

int find_class(const ideal_class_set& C, const quat_lattice& J) {
    mpq_class nJ = lattice_nrd(C.order, J);
    for (int i = 0; i < C.h(); ++i)
        if (ideals_equivalent(C.order.alg, C.reps[static_cast<std::size_t>(i)], C.norms[static_cast<std::size_t>(i)], J, nJ))
            return i;
    throw internal_error("find_class: ideal matches no class representative");
}

ideal_class_set ideal_classes(const quat_order& O) {
    const quat_algebra& B = O.alg;
    const i64 p = B.p();
    const mpq_class target = frac(p - 1, 12);
    const i64 q = p == 2 ? 3 : 2;
    const i64 guard = 10 * (p - 1) / 12 + 24;
    ideal_class_set C{O, {}, {}, {}, {}};
    auto add_class = [&](const quat_lattice& I, const mpq_class& n) {
        quat_lattice R = lattice_scale(lattice_mul(B, lattice_conj(B, I), I), 1 / n);
        pos_def_lattice P(norm_gram(B, R));
        auto units = P.enumerate_by_norm(1);
        C.reps.push_back(I);
        C.norms.push_back(n);
        C.weights.push_back(static_cast<i64>(units.size()) / 2);
        C.right.push_back(R);
    };
    add_class(O.lat, 1);
    i64 candidates = 0;
    for (std::size_t head = 0; head < C.reps.size() && C.mass() < target; ++head) {
        const quat_lattice I = C.reps[head];
        const mpq_class nI = C.norms[head];
        std::vector<quat_lattice> seen;
        for (int mask = 1; mask < (1 << 4) * 1; ++mask) {
            // x runs over nonzero classes of I/qI (q = 2: coordinates in {0, 1})
            ivec v(4);
            int m = mask;
            for (std::size_t k = 0; k < 4; ++k, m /= static_cast<int>(q)) v[k] = m % q;
            quat x = lattice_vector(I, v);
            mpq_class t = B.nrd(x) / nI;
            if (t.get_den() != 1 || mpz_class(t.get_num() % q) != 0) continue;
            std::vector<quat> gens;
            for (const auto& r : O.lat.basis) gens.push_back(B.mul(row_quat(r), x));
            for (const auto& r : I.basis) gens.push_back(scale(row_quat(r), q));
            quat_lattice J = make_lattice(gens);
            mpq_class nJ = lattice_nrd(O, J);
            if (nJ != nI * q) continue;
            if (std::find(seen.begin(), seen.end(), J) != seen.end()) continue;
            seen.push_back(J);
            if (++candidates > guard * 4) throw internal_error("ideal_classes: candidate guard exceeded");
            bool known = false;
            for (int i = 0; i < C.h() && !known; ++i)
                known = ideals_equivalent(B, C.reps[static_cast<std::size_t>(i)], C.norms[static_cast<std::size_t>(i)], J, nJ);
            if (!known) add_class(J, nJ);
            if (C.mass() > target) throw internal_error("ideal_classes: mass overshoot for p=" + std::to_string(p));
            if (C.h() > guard) throw internal_error("ideal_classes: class guard exceeded");
        }
    }
    if (C.mass() != target) throw internal_error("ideal_classes: mass not reached for p=" + std::to_string(p));
    return C;
}

namespace {

// Theta series of the pair (i, j): counts of x in conj(I_j) I_i by nrd/(N_i N_j).
std::vector<i64> pair_theta(const ideal_class_set& C, int i, int j, i64 N) {
    const quat_algebra& B = C.order.alg;
    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    quat_lattice L = lattice_mul(B, lattice_conj(B, C.reps[uj]), C.reps[ui]);
    pos_def_lattice P(norm_gram(B, L, 1 / (C.norms[ui] * C.norms[uj])));
    return P.theta_counts(N);
}

std::vector<int_matrix> assemble(const ideal_class_set& C, const std::vector<std::vector<i64>>& thetas, i64 N) {
    const int h = C.h();
    std::vector<int_matrix> out(static_cast<std::size_t>(N) + 1);
    for (i64 n = 1; n <= N; ++n) {
        int_matrix m(static_cast<std::size_t>(h), std::vector<i64>(static_cast<std::size_t>(h)));
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) {
                i64 cnt = thetas[static_cast<std::size_t>(i * h + j)][static_cast<std::size_t>(n)];
                i64 d = 2 * C.weights[static_cast<std::size_t>(j)];
                if (cnt % d != 0) throw internal_error("brandt: non-integral entry");
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cnt / d;
            }
        out[static_cast<std::size_t>(n)] = std::move(m);
    }
    return out;
}

}  // namespace

std::vector<int_matrix> brandt_all_serial(const ideal_class_set& C, i64 N) {
    const int h = C.h();
    std::vector<std::vector<i64>> thetas(static_cast<std::size_t>(h * h));
    for (int ij = 0; ij < h * h; ++ij) thetas[static_cast<std::size_t>(ij)] = pair_theta(C, ij / h, ij % h, N);
    return assemble(C, thetas, N);
}

std::vector<int_matrix> brandt_all(const ideal_class_set& C, i64 N) {
    const int h = C.h();
    std::vector<std::vector<i64>> thetas(static_cast<std::size_t>(h * h));
#pragma omp parallel for schedule(dynamic)
    for (int ij = 0; ij < h * h; ++ij) thetas[static_cast<std::size_t>(ij)] = pair_theta(C, ij / h, ij % h, N);
    return assemble(C, thetas, N);
}

int_matrix brandt(const ideal_class_set& C, i64 n) {
    if (n < 1) throw std::invalid_argument("brandt: n must be positive");
    return brandt_all(C, n)[static_cast<std::size_t>(n)];
}

void write_brandt_csv(std::ostream& os, const ideal_class_set& C, i64 n, const int_matrix& m) {
    os << "# p=" << C.p() << ",n=" << n << ",H=" << C.h() << ",weights=";
    for (std::size_t i = 0; i < C.weights.size(); ++i) os << (i ? ";" : "") << C.weights[i];
    os << '\n';
    for (const auto& row : m) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
        os << '\n';
    }
}

embedding optimal_embedding(const quad_order& K, const ideal_class_set& C) {
    const quat_algebra& B = C.order.alg;
    const i64 p = B.p();
    if (kronecker(K.disc_K, p) != -1)
        throw config_error("optimal_embedding: p=" + std::to_string(p) + " is not inert in K (disc " +
                           std::to_string(K.disc_K) + ")");
    if (gcd(K.c, p) != 1) throw config_error("optimal_embedding: p divides the conductor");
    const kelem w = K.generator();
    const mpq_class tr = K.trace(w), nm = K.norm(w);
    const i64 dc = mod(K.disc, 2);
    for (int host = 0; host < C.h(); ++host) {
        const quat_lattice& R = C.right[static_cast<std::size_t>(host)];
        pos_def_lattice P(norm_gram(B, R));
        for (const auto& v : P.enumerate_by_norm(nm)) {
            quat x = lattice_vector(R, v);
            if (B.trd(x) != tr) continue;
            bool optimal = true;
            for (auto [q, e] : factorize(K.c)) {
                i64 dq = mod(K.disc / (q * q), 2);
                mpq_class s((dc - q * dq) / 2);
                quat y = scale(sub(x, quat{s, 0, 0, 0}), frac(1, q));
                if (lattice_contains(R, y)) optimal = false;
            }
            if (!optimal) continue;
            mpq_class s0 = frac(dc - K.c * K.delta(), 2);
            quat wk = scale(sub(x, quat{s0, 0, 0, 0}), frac(1, K.c));
            return {K, host, x, wk};
        }
    }
    throw internal_error("optimal_embedding: no optimal embedding found");
}

quat embed_kelem(const embedding& e, const kelem& x) {
    quat r = scale(e.image_omega_K, x.y);
    r[0] += x.x;
    return r;
}

int ideal_class_of(const ideal_class_set& C, const embedding& e, const kideal& a) {
    const quat_algebra& B = C.order.alg;
    std::vector<quat> gens;
    for (const auto& r : C.reps[static_cast<std::size_t>(e.host)].basis)
        for (const auto& s : a.basis) gens.push_back(B.mul(row_quat(r), embed_kelem(e, {s[0], s[1]})));
    return find_class(C, make_lattice(gens));
}

std::vector<int> iota_map(const ideal_class_set& C, const embedding& e, const form_class_group& G) {
    std::vector<int> out;
    for (int t = 0; t < G.h(); ++t) out.push_back(ideal_class_of(C, e, ideal_of_form(e.order, G.rep(t))));
    return out;
}

pic_fn pushforward(const ideal_class_set& C, const std::vector<int>& iota, const ring_class_character& xi) {
    pic_fn f(static_cast<std::size_t>(C.h()), cyc_q(xi.n(), 0));
    for (std::size_t t = 0; t < iota.size(); ++t)
        f[static_cast<std::size_t>(iota[t])] += to_q(xi.value(static_cast<int>(t)));
    for (int i = 0; i < C.h(); ++i)
        f[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)].scaled(C.weights[static_cast<std::size_t>(i)]);
    return f;
}

pic_fn sigma0(const ideal_class_set& C, i64 n) { return pic_fn(static_cast<std::size_t>(C.h()), cyc_q_const(n, 1)); }

cyc_q pairing(const ideal_class_set& C, const pic_fn& f, const pic_fn& g) {
    if (f.size() != g.size() || static_cast<int>(f.size()) != C.h()) throw std::invalid_argument("pairing: size mismatch");
    cyc_q s(f.front().conductor(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] * g[i]).scaled(frac(1, C.weights[i]));
    return s;
}

pic_fn apply(const int_matrix& m, const pic_fn& f) {
    pic_fn r(f.size(), cyc_q(f.front().conductor(), 0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[i][j] != 0) r[i] += f[j].scaled(m[i][j]);
    return r;
}

std::vector<cyc_q> theta_lift(const ideal_class_set& C, const std::vector<int_matrix>& T, const pic_fn& f,
                              const pic_fn& g, i64 N) {
    if (static_cast<int>(f.size()) != C.h() || static_cast<int>(g.size()) != C.h())
        throw std::invalid_argument("theta_lift: functions on different class sets");
    if (static_cast<i64>(T.size()) <= N) throw std::invalid_argument("theta_lift: not enough Brandt matrices");
    const i64 n = f.front().conductor();
    pic_fn s0 = sigma0(C, n);
    std::vector<cyc_q> out;
    out.push_back((pairing(C, f, s0) * pairing(C, g, s0)).scaled(frac(1, 2)));
    for (i64 k = 1; k <= N; ++k) out.push_back(pairing(C, apply(T[static_cast<std::size_t>(k)], f), g));
    return out;
}

}  // namespace hv
