#include "hv/quadratic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace hv {

namespace {

bool squarefree(i64 n) {
    for (auto [q, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

// Returns g = gcd(a, b) with u a + v b = g.
i64 egcd(i64 a, i64 b, i64& u, i64& v) {
    i64 old_r = a, r = b, old_u = 1, uu = 0, old_v = 0, vv = 1;
    while (r != 0) {
        i64 q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_u, uu) = std::make_pair(uu, old_u - q * uu);
        std::tie(old_v, vv) = std::make_pair(vv, old_v - q * vv);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_u = -old_u;
        old_v = -old_v;
    }
    u = old_u;
    v = old_v;
    return old_r;
}

kelem row_elem(const qvec& r) { return {r[0], r[1]}; }

}  // namespace

bool is_fundamental_disc(i64 d) {
    if (d == 0 || d == 1) return false;
    if (mod(d, 4) == 1) return squarefree(d < 0 ? -d : d);
    if (mod(d, 4) != 0) return false;
    i64 m = d / 4;
    i64 r = mod(m, 4);
    return (r == 2 || r == 3) && squarefree(m < 0 ? -m : m);
}

quad_order quad_order::make(i64 disc_K, i64 c) {
    if (disc_K >= 0) throw config_error("quadratic order: discriminant must be negative");
    if (!is_fundamental_disc(disc_K)) throw config_error("quadratic order: " + std::to_string(disc_K) + " is not fundamental");
    if (c < 1) throw config_error("quadratic order: conductor must be positive");
    return {disc_K, c, c * c * disc_K};
}

i64 quad_order::unit_count() const {
    if (disc == -3) return 6;
    if (disc == -4) return 4;
    return 2;
}

kelem quad_order::mul(const kelem& a, const kelem& b) const {
    mpq_class yy = a.y * b.y;
    return {a.x * b.x - n_omega() * yy, a.x * b.y + a.y * b.x + delta() * yy};
}

kelem quad_order::inverse(const kelem& a) const {
    mpq_class n = norm(a);
    if (n == 0) throw std::domain_error("kelem: inverse of zero");
    kelem b = conj(a);
    return {b.x / n, b.y / n};
}

bigcomplex quad_order::embed(const kelem& a, mpfr_prec_t prec) const {
    bigfloat s = bigfloat(mpz_class(-disc_K), prec).sqrt();
    bigfloat half(0.5, prec);
    bigfloat re = bigfloat(a.x, prec) + bigfloat(a.y, prec) * bigfloat(mpz_class(delta()), prec) * half;
    bigfloat im = bigfloat(a.y, prec) * s * half;
    return {re, im};
}

kelem quad_order::generator() const {
    i64 dc = mod(disc, 2);
    return {frac(dc - c * delta(), 2), mpq_class(c)};
}

bool quad_order::contains(const kelem& a) const {
    if (a.x.get_den() != 1 || a.y.get_den() != 1) return false;
    return mpz_class(a.y.get_num() % c) == 0;
}

std::string form::str() const {
    std::ostringstream os;
    os << '(' << a << ',' << b << ',' << c << ')';
    return os.str();
}

bool is_reduced(const form& f) {
    if (!(std::abs(f.b) <= f.a && f.a <= f.c)) return false;
    if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

form reduce(form f) {
    if (f.a <= 0 || f.disc() >= 0) throw std::invalid_argument("reduce: form must be positive definite");
    auto normalize = [](form& g) {
        // b into (-a, a]
        // k = floor((a - b) / 2a)
        i64 two_a = 2 * g.a;
        i64 k = (g.a - g.b) >= 0 ? (g.a - g.b) / two_a : -((g.b - g.a + two_a - 1) / two_a);
        i64 nb = g.b + two_a * k;
        g.c = g.a * k * k + g.b * k + g.c;
        g.b = nb;
    };
    normalize(f);
    while (f.a > f.c) {
        f = {f.c, -f.b, f.a};
        normalize(f);
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

form act(const form& f, i64 x, i64 r, i64 y, i64 s) {
    return {f.eval(x, y), 2 * f.a * x * r + f.b * (x * s + r * y) + 2 * f.c * y * s, f.eval(r, s)};
}

form compose(const form& f1, const form& f2) {
    if (f1.disc() != f2.disc()) throw std::invalid_argument("compose: discriminants differ");
    const i64 D = f1.disc();
    form g1 = f1, g2 = f2;
    if (g1.a > g2.a) std::swap(g1, g2);
    i64 s = (g1.b + g2.b) / 2;
    i64 n = g2.b - s;
    i64 y1, d;
    if (g2.a % g1.a == 0) {
        y1 = 0;
        d = g1.a;
    } else {
        i64 u, v;
        d = egcd(g2.a, g1.a, u, v);
        y1 = u;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        d1 = egcd(s, d, x2, y2);
        y2 = -y2;
    }
    i64 v1 = g1.a / d1, v2 = g2.a / d1;
    i64 r = mod(static_cast<i64>((static_cast<__int128>(y1) * y2 * n - static_cast<__int128>(x2) * g2.c) % v1), v1);
    i64 b3 = g2.b + 2 * v2 * r;
    i64 a3 = v1 * v2;
    if ((b3 * b3 - D) % (4 * a3) != 0) throw internal_error("compose: non-integral result");
    i64 c3 = (b3 * b3 - D) / (4 * a3);
    return reduce({a3, b3, c3});
}

kideal make_ideal(const std::vector<kelem>& gens) {
    std::vector<qvec> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) rows.push_back({g.x, g.y});
    return {lattice_basis(rows, 2)};
}

kideal ideal_mul(const quad_order& O, const kideal& a, const kideal& b) {
    std::vector<kelem> gens;
    for (const auto& r : a.basis)
        for (const auto& s : b.basis) gens.push_back(O.mul(row_elem(r), row_elem(s)));
    return make_ideal(gens);
}

kideal ideal_conj(const quad_order& O, const kideal& a) {
    return make_ideal({O.conj(row_elem(a.basis[0])), O.conj(row_elem(a.basis[1]))});
}

kideal ideal_scale(const quad_order& O, const kideal& a, const kelem& s) {
    return make_ideal({O.mul(row_elem(a.basis[0]), s), O.mul(row_elem(a.basis[1]), s)});
}

kideal order_lattice(const quad_order& O) { return make_ideal({{1, 0}, {0, O.c}}); }

mpq_class ideal_norm(const quad_order& O, const kideal& I) { return abs(det(I.basis)) / O.c; }

bool ideal_contains(const kideal& I, const kelem& a) {
    qvec c = coordinates(I.basis, {a.x, a.y});
    return c[0].get_den() == 1 && c[1].get_den() == 1;
}

kideal ideal_of_form(const quad_order& O, const form& f) {
    if (f.disc() != O.disc) throw std::invalid_argument("ideal_of_form: discriminant mismatch");
    return make_ideal({{f.a, 0}, {frac(-f.b - O.c * O.delta(), 2), O.c}});
}

form form_of_ideal(const quad_order& O, const kideal& I) {
    kelem v1 = row_elem(I.basis[0]), v2 = row_elem(I.basis[1]);
    if (det(I.basis) < 0) std::swap(v1, v2);
    mpq_class n = ideal_norm(O, I);
    mpq_class a = O.norm(v1) / n;
    mpq_class b = -O.trace(O.mul(v1, O.conj(v2))) / n;
    mpq_class c = O.norm(v2) / n;
    if (a.get_den() != 1 || b.get_den() != 1 || c.get_den() != 1)
        throw internal_error("form_of_ideal: lattice is not an invertible O_c-ideal");
    form f{a.get_num().get_si(), b.get_num().get_si(), c.get_num().get_si()};
    if (f.disc() != O.disc) throw internal_error("form_of_ideal: lattice multiplier is not O_c");
    return reduce(f);
}

form_class_group::form_class_group(const quad_order& O) : order_(O) {
    const i64 D = O.disc;
    if (D >= 0) throw config_error("class_group: discriminant must be negative");
    for (i64 a = 1; 3 * a * a <= -D; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod(b - D, 2) != 0) continue;
            i64 num = b * b - D;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (gcd(gcd(a, b), c) != 1) continue;
            reps_.push_back({a, b, c});
        }
    }
    std::sort(reps_.begin(), reps_.end());
    const std::size_t h = reps_.size();
    comp_.assign(h, std::vector<int>(h, 0));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = i; j < h; ++j) {
            int k = index_of(compose(reps_[i], reps_[j]));
            comp_[i][j] = comp_[j][i] = k;
        }
}

int form_class_group::index_of(const form& f) const {
    form r = reduce(f);
    auto it = std::lower_bound(reps_.begin(), reps_.end(), r);
    if (it == reps_.end() || *it != r) throw internal_error("class group: form " + f.str() + " not found");
    return static_cast<int>(it - reps_.begin());
}

int form_class_group::inverse(int i) const {
    const form& f = rep(i);
    return index_of({f.a, -f.b, f.c});
}

int form_class_group::pow(int i, i64 e) const {
    if (e < 0) return pow(inverse(i), -e);
    int r = identity();
    for (i64 k = 0; k < e; ++k) r = mul(r, i);
    return r;
}

int form_class_group::element_order(int i) const {
    int k = 1;
    for (int x = i; x != identity(); x = mul(x, i)) ++k;
    return k;
}

i64 form_class_group::exponent() const {
    i64 e = 1;
    for (int i = 0; i < h(); ++i) e = std::lcm(e, static_cast<i64>(element_order(i)));
    return e;
}

form form_class_group::rep_prime_to(int i, i64 m) const {
    const form& f = rep(i);
    for (i64 box = 1;; ++box) {
        for (i64 x = -box; x <= box; ++x)
            for (i64 y = 0; y <= box; ++y) {
                if (std::max(std::abs(x), y) != box) continue;
                if (gcd(x, y) != 1) continue;
                if (gcd(f.eval(x, y), m) != 1) continue;
                i64 s, r;
                egcd(x, y, s, r);  // s x + r y = 1
                return act(f, x, -r, y, s);
            }
        if (box > 1000) throw internal_error("rep_prime_to: search exhausted");
    }
}

std::shared_ptr<const form_class_group> class_group(const quad_order& O) {
    return std::make_shared<const form_class_group>(O);
}

ring_class_character::ring_class_character(std::shared_ptr<const form_class_group> g, i64 n, std::vector<i64> exps)
    : group_(std::move(g)), n_(n), exps_(std::move(exps)) {
    for (auto& e : exps_) e = mod(e, n_);
}

i64 ring_class_character::order() const {
    i64 g = n_;
    for (i64 e : exps_) g = gcd(g, e);
    return n_ / g;
}

ring_class_character ring_class_character::pow(i64 k) const {
    std::vector<i64> e = exps_;
    for (auto& x : e) x = mod(x * k, n_);
    return {group_, n_, e};
}

ring_class_character ring_class_character::normalized() const {
    i64 d = order();
    std::vector<i64> e = exps_;
    for (auto& x : e) x /= n_ / d;
    return {group_, d, e};
}

std::string ring_class_character::label() const {
    std::ostringstream os;
    os << "disc=" << group_->order().disc << ";n=" << n_ << ";exps=";
    for (std::size_t i = 0; i < exps_.size(); ++i) os << (i ? "," : "") << exps_[i];
    return os.str();
}

std::vector<ring_class_character> characters_of_order(const std::shared_ptr<const form_class_group>& G, i64 n) {
    const int h = G->h();
    std::vector<ring_class_character> out;
    if (G->exponent() % n != 0) return out;
    // greedy generating set
    std::vector<int> gens;
    std::vector<char> span(static_cast<std::size_t>(h), 0);
    span[0] = 1;
    for (int g = 1; g < h; ++g) {
        if (span[static_cast<std::size_t>(g)]) continue;
        gens.push_back(g);
        bool grew = true;
        while (grew) {
            grew = false;
            for (int x = 0; x < h; ++x) {
                if (!span[static_cast<std::size_t>(x)]) continue;
                for (int s : gens) {
                    int y = G->mul(x, s);
                    if (!span[static_cast<std::size_t>(y)]) span[static_cast<std::size_t>(y)] = 1, grew = true;
                }
            }
        }
    }
    std::vector<i64> assign(gens.size(), 0);
    while (true) {
        std::vector<i64> val(static_cast<std::size_t>(h), -1);
        val[0] = 0;
        std::vector<int> queue{0};
        bool ok = true;
        for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
            int x = queue[qi];
            for (std::size_t k = 0; k < gens.size(); ++k) {
                int y = G->mul(x, gens[k]);
                i64 v = mod(val[static_cast<std::size_t>(x)] + assign[k], n);
                if (val[static_cast<std::size_t>(y)] < 0) {
                    val[static_cast<std::size_t>(y)] = v;
                    queue.push_back(y);
                } else if (val[static_cast<std::size_t>(y)] != v) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            ring_class_character chi(G, n, val);
            if (chi.order() == n) out.push_back(chi);
        }
        std::size_t k = 0;
        while (k < assign.size() && ++assign[k] == n) assign[k++] = 0;
        if (k == assign.size()) break;
    }
    return out;
}

std::vector<int> projection_map(const form_class_group& G, const form_class_group& Gs) {
    const quad_order& O = G.order();
    const quad_order& Os = Gs.order();
    if (O.disc_K != Os.disc_K || O.c % Os.c != 0) throw std::invalid_argument("projection_map: incompatible orders");
    std::vector<int> out;
    for (int i = 0; i < G.h(); ++i) {
        form f = G.rep_prime_to(i, O.c);
        kideal J = ideal_mul(O, ideal_of_form(O, f), order_lattice(Os));
        out.push_back(Gs.class_of_ideal(J));
    }
    return out;
}

i64 conductor(const ring_class_character& xi) {
    const form_class_group& G = xi.group();
    const quad_order& O = G.order();
    for (i64 cp : divisors(O.c)) {
        if (cp == O.c) return cp;
        form_class_group Gs(quad_order::make(O.disc_K, cp));
        auto pm = projection_map(G, Gs);
        std::map<int, i64> seen;
        bool factors = true;
        for (int i = 0; i < G.h() && factors; ++i) {
            auto [it, fresh] = seen.emplace(pm[static_cast<std::size_t>(i)], xi.exponent(i));
            if (!fresh && it->second != xi.exponent(i)) factors = false;
        }
        if (factors) return cp;
    }
    return O.c;
}

i64 m_of_xi(const ring_class_character& xi) {
    if (xi.is_trivial()) throw config_error("m(xi) is undefined for the trivial character");
    auto [v, k] = prime_power(xi.order());
    return k > 0 ? v : 1;
}

std::vector<cyc_z> theta_newform(const ring_class_character& chi, i64 N) {
    const form_class_group& G = chi.group();
    const quad_order& O = G.order();
    const i64 n = chi.n();
    std::vector<cyc_z> sum(static_cast<std::size_t>(N) + 1, cyc_z(n, 0));
    for (int i = 0; i < G.h(); ++i) {
        const form& f = G.rep(i);
        qmat gram = {{f.a, frac(f.b, 2)}, {frac(f.b, 2), f.c}};
        auto r = pos_def_lattice(gram).theta_counts(N);
        cyc_z v = chi.value(i);
        for (i64 k = 1; k <= N; ++k) {
            if (r[static_cast<std::size_t>(k)] == 0 || gcd(k, O.c) != 1) continue;
            sum[static_cast<std::size_t>(k)] += v.scaled(mpz_class(r[static_cast<std::size_t>(k)]));
        }
    }
    const mpz_class w = O.unit_count();
    for (auto& a : sum) {
        std::vector<mpz_class> c = a.coeffs();
        for (auto& x : c) {
            if (mpz_class(x % w) != 0) throw internal_error("theta_newform: representation count not divisible by units");
            x /= w;
        }
        a.set_coeffs(c);
    }
    return sum;
}

}  // namespace hv
