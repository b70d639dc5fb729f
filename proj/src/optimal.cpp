#include "hv/optimal.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "hv/quaternion.hpp"

namespace hv {

cyc_q qseries2::at(i64 m, i64 k) const {
    auto it = a.find({m, k});
    return it == a.end() ? cyc_q_const(n, 0) : it->second;
}

void qseries2::set(i64 m, i64 k, const cyc_q& v) {
    if (v.is_zero())
        a.erase({m, k});
    else
        a[{m, k}] = v;
}

bool qseries2::operator==(const qseries2& o) const {
    return n == o.n && scale == o.scale && bound_m == o.bound_m && bound_n == o.bound_n && a == o.a;
}

std::vector<cyc_q> specialize(const qseries2& f, i64 p, i64 K, std::vector<std::pair<i64, cyc_q>>* stray) {
    std::vector<cyc_q> out(static_cast<std::size_t>(K + 1), cyc_q_const(f.n, 0));
    for (const auto& [mn, v] : f.a) {
        i64 e = mn.first + p * mn.second;
        if (e > f.scale * K) continue;
        if (e % f.scale == 0)
            out[static_cast<std::size_t>(e / f.scale)] += v;
        else if (stray)
            stray->emplace_back(e, v);
    }
    if (stray) {
        // merge equal exponents, drop cancellations
        std::sort(stray->begin(), stray->end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<std::pair<i64, cyc_q>> merged;
        for (const auto& [e, v] : *stray) {
            if (!merged.empty() && merged.back().first == e)
                merged.back().second += v;
            else
                merged.emplace_back(e, v);
        }
        stray->clear();
        for (auto& x : merged)
            if (!x.second.is_zero()) stray->push_back(std::move(x));
    }
    return out;
}

namespace {

int vq(i64 x, i64 q) {
    int v = 0;
    while (x != 0 && x % q == 0) x /= q, ++v;
    return v;
}

// class of the prime of O_K above a ramified q
int ramified_prime_class(const form_class_group& G, i64 q) {
    const i64 D = G.order().disc;
    for (i64 b = 0; b < 2 * q; ++b) {
        if (mod(b - D, 2) != 0 || mod(b * b - D, 4 * q) != 0) continue;
        return G.index_of(form{q, b, (b * b - D) / (4 * q)});
    }
    throw internal_error("ramified_prime_class: no form of norm q");
}

// volume of {t in K_q^1 : t z0 = alpha mod pi}, N(z0) = T, for odd ramified q
mpq_class local_volume(i64 D, i64 q, i64 T, i64 alpha) {
    if (T == 0 || hilbert_symbol(T, D, q) != 1) return 0;
    if (T % q == 0) return mod(alpha, q) == 0 ? 1 : 0;
    // z = a + b pi has residue a with a^2 = T mod q; t -> -t swaps the two halves
    return mod(alpha * alpha - T, q) == 0 ? frac(1, 2) : mpq_class(0);
}

void check_supported(const quad_order& O) {
    if (O.c != 1 || mod(O.disc_K, 2) == 0)
        throw config_error("optimal_form_coeffs: only c = 1 with odd |disc_K| is supported; use reconstruct_opt for " +
                           std::to_string(O.disc));
}

cyc_q pair_factor(i64 D, i64 q, i64 e, i64 n, i64 T1, i64 T2, const opt_options& opt) {
    mpq_class s = 0;
    for (i64 j = 0; j < q; ++j) {
        i64 alpha = opt.delta_sign * (opt.alpha_shift + j);
        s += local_volume(D, q, T1, alpha) * local_volume(D, q, T2, -alpha);
    }
    if (s == 0) return cyc_q_const(n, 0);
    // chi_q(t z0) chi_q(delta)^{-1} on each factor; the second uses chi^{-1}
    return cyc_q_root(n, e * (vq(T1, q) - 1) - e * (vq(T2, q) - 1)).scaled(s);
}

}  // namespace

cyc_q local_pair_factor(const ring_class_character& chi, i64 q, i64 T1, i64 T2, const opt_options& opt) {
    const auto& G = chi.group();
    const quad_order& O = G.order();
    check_supported(O);
    if (O.disc_K % q != 0) throw config_error("local_pair_factor: q must divide disc_K");
    // chi_q is unramified with chi_q(pi) = chi(prime above q)
    return pair_factor(O.disc_K, q, chi.exponent(ramified_prime_class(G, q)), chi.n(), T1, T2, opt);
}

qseries2 optimal_form_coeffs(const ring_class_character& chi, i64 bound, const opt_options& opt) {
    const auto& G = chi.group();
    const quad_order& O = G.order();
    check_supported(O);
    if (bound < 0) throw config_error("optimal_form_coeffs: negative bound");
    ring_class_character xi = chi.pow(2);
    if (xi.is_trivial()) throw config_error("optimal_form_coeffs: xi = chi^2 is trivial");
    const i64 M = -O.disc;
    const i64 N = M * bound;
    const i64 n = chi.n();
    std::vector<i64> primes, exps;
    for (auto [q, e] : factorize(M)) {
        primes.push_back(q);
        exps.push_back(chi.exponent(ramified_prime_class(G, q)));
    }

    auto A = theta_newform(chi, N);
    auto B = theta_newform(chi.inverse(), N);
    auto away = [&](i64 m) {
        for (i64 q : primes)
            while (m % q == 0) m /= q;
        return m;
    };

    qseries2 f;
    f.n = n;
    f.scale = M;
    f.disc = O.disc;
    f.label = chi.label();
    f.bound_m = f.bound_n = N;
    std::vector<std::vector<std::pair<i64, cyc_q>>> rows(static_cast<std::size_t>(N + 1));
#pragma omp parallel for schedule(dynamic, 8)
    for (i64 m1 = 1; m1 <= N; ++m1) {
        const cyc_z& a1 = A[static_cast<std::size_t>(away(m1))];
        if (a1.is_zero()) continue;
        for (i64 m2 = 1; m2 <= N; ++m2) {
            const cyc_z& a2 = B[static_cast<std::size_t>(away(m2))];
            if (a2.is_zero()) continue;
            cyc_q loc = cyc_q_const(n, 1);
            for (std::size_t i = 0; i < primes.size(); ++i) {
                loc *= pair_factor(O.disc_K, primes[i], exps[i], n, m1, opt.twist * m2, opt);
                if (loc.is_zero()) break;
            }
            if (loc.is_zero()) continue;
            cyc_q v = to_q(a1 * a2) * loc;
            if (!v.is_zero()) rows[static_cast<std::size_t>(m1)].emplace_back(m2, std::move(v));
        }
    }
    for (i64 m1 = 0; m1 <= N; ++m1)
        for (auto& [m2, v] : rows[static_cast<std::size_t>(m1)]) f.a.emplace(std::make_pair(m1, m2), std::move(v));
    return f;
}

qseries2 reconstruct_opt(const std::map<i64, std::vector<cyc_q>>& thetas, i64 bound_m, i64 bound_n) {
    if (thetas.empty()) throw config_error("reconstruct_opt: no theta series given");
    const i64 n = thetas.begin()->second.empty() ? 1 : thetas.begin()->second.front().conductor();
    std::map<std::pair<i64, i64>, cyc_q> memo;

    auto coeff = [&](i64 p, i64 k) -> const cyc_q* {
        const auto& c = thetas.at(p);
        return k < static_cast<i64>(c.size()) ? &c[static_cast<std::size_t>(k)] : nullptr;
    };
    // a(m, r) from the smallest prime p > m whose series reaches m + p r
    auto solve = [&](auto&& self, i64 m, i64 r) -> cyc_q {
        auto it = memo.find({m, r});
        if (it != memo.end()) return it->second;
        i64 p = 0;
        for (const auto& [q, c] : thetas) {
            if (q >= 5 && q > m && coeff(q, m + q * r)) {
                p = q;
                break;
            }
        }
        if (p == 0)
            throw reconstruct_error(reconstruct_error::kind::need_prime, 0, m,
                                    "reconstruct_opt: need prime > " + std::to_string(m) + " with coefficients up to index " +
                                        std::to_string(m) + " + p*" + std::to_string(r));
        cyc_q v = *coeff(p, m + p * r);
        for (i64 j = 0; j < r; ++j) v -= self(self, m + p * (r - j), j);
        memo.emplace(std::make_pair(m, r), v);
        return v;
    };

    qseries2 f;
    f.n = n;
    f.scale = 1;
    f.bound_m = bound_m;
    f.bound_n = bound_n;
    for (i64 r = 0; r <= bound_n; ++r)
        for (i64 m = 0; m <= bound_m; ++m) f.set(m, r, solve(solve, m, r));

    // every provided coefficient whose terms are all known must agree
    for (const auto& [p, c] : thetas) {
        if (p < 5) continue;
        for (i64 k = 0; k < static_cast<i64>(c.size()); ++k) {
            cyc_q s = cyc_q_const(n, 0);
            bool known = true;
            for (i64 r = 0; r * p <= k && known; ++r) {
                auto it = memo.find({k - p * r, r});
                if (it == memo.end())
                    known = false;
                else
                    s += it->second;
            }
            if (known && !(s == c[static_cast<std::size_t>(k)]))
                throw reconstruct_error(reconstruct_error::kind::inconsistent, p, k,
                                        "reconstruct_opt: consistency violation at p=" + std::to_string(p) +
                                            " k=" + std::to_string(k));
        }
    }
    return f;
}

void write_qseries(std::ostream& os, const std::vector<cyc_q>& s, i64 n, i64 disc, const std::string& label) {
    os << "# n=" << n << " trunc=" << (static_cast<i64>(s.size()) - 1) << " disc=" << disc << " chi=" << label << '\n';
    for (std::size_t k = 0; k < s.size(); ++k) os << k << '\t' << s[k].str() << '\n';
}

void write_qseries2(std::ostream& os, const qseries2& f) {
    os << "# n=" << f.n << " trunc=" << f.bound_m << ',' << f.bound_n << " disc=" << f.disc << " chi=" << f.label
       << " scale=" << f.scale << '\n';
    for (const auto& [mn, v] : f.a) os << mn.first << ',' << mn.second << '\t' << v.str() << '\n';
}

namespace {

std::map<std::string, std::string> parse_header(const std::string& line) {
    if (line.empty() || line[0] != '#') throw config_error("fixture: missing header line");
    std::map<std::string, std::string> kv;
    std::istringstream is(line.substr(1));
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    if (!kv.count("n")) throw config_error("fixture: header lacks n=");
    return kv;
}

cyc_q parse_coords(const std::string& s, i64 n) {
    cyc_q x = cyc_q_const(n, 0);
    std::vector<mpq_class> c;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        mpq_class v(tok);
        v.canonicalize();
        c.push_back(v);
    }
    if (c.size() != x.degree()) throw config_error("fixture: expected " + std::to_string(x.degree()) + " coordinates");
    x.set_coeffs(std::move(c));
    return x;
}

}  // namespace

std::vector<cyc_q> read_qseries(std::istream& is) {
    std::string line;
    std::getline(is, line);
    auto kv = parse_header(line);
    const i64 n = std::stoll(kv["n"]);
    std::vector<cyc_q> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw config_error("fixture: missing tab");
        auto k = static_cast<std::size_t>(std::stoll(line.substr(0, tab)));
        if (out.size() <= k) out.resize(k + 1, cyc_q_const(n, 0));
        out[k] = parse_coords(line.substr(tab + 1), n);
    }
    return out;
}

qseries2 read_qseries2(std::istream& is) {
    std::string line;
    std::getline(is, line);
    auto kv = parse_header(line);
    qseries2 f;
    f.n = std::stoll(kv["n"]);
    f.scale = kv.count("scale") ? std::stoll(kv["scale"]) : 1;
    f.disc = kv.count("disc") ? std::stoll(kv["disc"]) : 0;
    f.label = kv["chi"];
    if (kv.count("trunc")) {
        auto t = kv["trunc"];
        auto comma = t.find(',');
        f.bound_m = std::stoll(t.substr(0, comma));
        f.bound_n = comma == std::string::npos ? f.bound_m : std::stoll(t.substr(comma + 1));
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t'), comma = line.find(',');
        if (tab == std::string::npos || comma == std::string::npos || comma > tab) throw config_error("fixture: bad index");
        f.set(std::stoll(line.substr(0, comma)), std::stoll(line.substr(comma + 1, tab - comma - 1)),
              parse_coords(line.substr(tab + 1), f.n));
    }
    return f;
}

}  // namespace hv
