#include "hv/units.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <json.hpp>

namespace hv {

namespace {

std::vector<bigcomplex> expand(const std::vector<bigcomplex>& roots, mpfr_prec_t prec) {
    std::vector<bigcomplex> poly{bigcomplex(1.0, 0.0, prec)};
    for (const auto& r : roots) {
        std::vector<bigcomplex> next(poly.size() + 1, bigcomplex(prec));
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= poly[k] * r;
        }
        poly = std::move(next);
    }
    return poly;
}

// Rounds complex coefficients into O_K = Z[omega_K]; returns the worst defect.
double recognize_ok(const quad_order& O, const std::vector<bigcomplex>& poly, std::vector<ok_int>& out) {
    const mpfr_prec_t prec = poly.front().prec();
    const bigfloat im_omega = bigfloat(mpz_class(-O.disc_K), prec).sqrt() * bigfloat(0.5, prec);
    const bigfloat re_omega(frac(O.delta(), 2), prec);
    bigfloat worst(prec);
    out.clear();
    for (const auto& c : poly) {
        bigfloat y = c.im() / im_omega;
        mpz_class yi = y.round();
        bigfloat x = c.re() - bigfloat(yi, prec) * re_omega;
        mpz_class xi = x.round();
        bigfloat dy = (y - bigfloat(yi, prec)).abs(), dx = (x - bigfloat(xi, prec)).abs();
        if (worst < dy) worst = dy;
        if (worst < dx) worst = dx;
        out.push_back({xi, yi});
    }
    return worst.to_double();
}

form frakl_form(const quad_order& O, i64 lambda, int choice) {
    const i64 D = O.disc;
    for (i64 b = 0; b <= 2 * lambda; ++b) {
        if (mod(b - D, 2) != 0 || mod(b * b - D, 4 * lambda) != 0) continue;
        i64 bb = choice == 0 ? b : -b;
        return {lambda, bb, (bb * bb - D) / (4 * lambda)};
    }
    throw internal_error("frakl_form: no square root of the discriminant");
}

}  // namespace

bigcomplex delta_eval(const bigcomplex& z, mpfr_prec_t prec) {
    if (z.im().sign() <= 0) throw std::domain_error("delta_eval: Im z must be positive");
    const mpfr_prec_t wp = prec + 32;
    const bigfloat two_pi = bigfloat::pi(wp) * bigfloat(2.0, wp);
    bigcomplex iz(-z.im() * two_pi, z.re() * two_pi);
    bigcomplex q = iz.exp();
    // -log2 |q| = 2 pi Im z / log 2
    const double decay = 2 * M_PI * z.im().to_double() / std::log(2.0);
    bigcomplex eta(1.0, 0.0, wp);
    bigcomplex qk = q;        // q^k
    bigcomplex qa = q;        // q^{k(3k-1)/2}
    for (i64 k = 1;; ++k) {
        bigcomplex qb = qa * qk;  // q^{k(3k+1)/2}
        bigcomplex term = qa + qb;
        if (k % 2 == 1)
            eta -= term;
        else
            eta += term;
        if (decay * static_cast<double>(k * (3 * k - 1)) / 2 > static_cast<double>(wp) + 16) break;
        // advance: qa_{k+1} = qa_k q^{3k+1}
        bigcomplex q3 = qk * qk * qk * q;
        qa = qa * q3;
        qk = qk * q;
    }
    return q * eta.pow(24);
}

bigcomplex delta_lattice(bigcomplex w1, bigcomplex w2, mpfr_prec_t prec) {
    const mpfr_prec_t wp = prec + 32;
    bigcomplex tau = w1 / w2;
    if (tau.im().sign() < 0) {
        std::swap(w1, w2);
        tau = w1 / w2;
    }
    for (int guard = 0;; ++guard) {
        if (guard > 10000) throw internal_error("delta_lattice: reduction did not terminate");
        mpz_class n = tau.re().round();
        if (n != 0) {
            w1 = w1 - w2 * bigfloat(n, wp);
            tau = w1 / w2;
        }
        if (tau.norm().to_double() < 1 - 1e-12) {
            bigcomplex t = w1;
            w1 = -w2;
            w2 = t;
            tau = w1 / w2;
            continue;
        }
        break;
    }
    bigcomplex d = delta_eval(tau, prec);
    return d / w2.pow(12);
}

bigcomplex delta_ideal(const quad_order& O, const kideal& a, mpfr_prec_t prec) {
    const mpfr_prec_t wp = prec + 32;
    bigcomplex w1 = O.embed({a.basis[0][0], a.basis[0][1]}, wp);
    bigcomplex w2 = O.embed({a.basis[1][0], a.basis[1][1]}, wp);
    return delta_lattice(w1, w2, prec);
}

const char* convention_name(galois_convention g) { return g == galois_convention::inverse ? "inverse" : "direct"; }

const bigcomplex& elliptic_unit_packet::value(int sigma, galois_convention g) const {
    int cls = g == galois_convention::inverse ? group->inverse(sigma) : sigma;
    return class_values[static_cast<std::size_t>(cls)];
}

mpfr_prec_t default_precision(const quad_order& O) {
    auto G = class_group(O);
    auto r = static_cast<mpfr_prec_t>(std::ceil(std::sqrt(static_cast<double>(-O.disc))));
    return 64 + 16 * G->h() * r;
}

std::vector<i64> split_primes(const quad_order& O, int count, i64 start) {
    std::vector<i64> out;
    for (i64 q = std::max<i64>(start, 2); static_cast<int>(out.size()) < count; q = next_prime(q)) {
        if (!is_prime(q)) continue;
        if (kronecker(O.disc_K, q) == 1 && O.c % q != 0) out.push_back(q);
    }
    return out;
}

elliptic_unit_packet elliptic_unit_conjugates(const quad_order& O, i64 lambda, int frakl_choice, mpfr_prec_t prec) {
    if (!is_prime(lambda) || kronecker(O.disc_K, lambda) != 1)
        throw config_error("elliptic units: lambda=" + std::to_string(lambda) + " must be a prime split in K");
    if (O.c % lambda == 0) throw config_error("elliptic units: lambda divides the conductor");
    if (frakl_choice != 0 && frakl_choice != 1) throw config_error("elliptic units: frakl choice must be 0 or 1");
    elliptic_unit_packet P;
    P.order = O;
    P.group = class_group(O);
    P.lambda = lambda;
    P.frakl_choice = frakl_choice;
    P.frakl = frakl_form(O, lambda, frakl_choice);
    P.prec = prec;
    const form_class_group& G = *P.group;
    kideal l = ideal_of_form(O, P.frakl);
    kideal lbar = ideal_conj(O, l);
    P.frakl_class = G.class_of_ideal(l);
    P.frakl_bar_class = G.class_of_ideal(lbar);
    const int h = G.h();
    P.class_values.assign(static_cast<std::size_t>(h), bigcomplex(prec));
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < h; ++t) {
        kideal a = ideal_of_form(O, G.rep(t));
        kideal b = ideal_mul(O, lbar, a);
        P.class_values[static_cast<std::size_t>(t)] = delta_ideal(O, a, prec) / delta_ideal(O, b, prec);
    }
    double dK = recognize_ok(O, expand(P.class_values, prec), P.minpoly_K);
    if (!(dK < 0.5)) throw precision_error("elliptic units: O_K rounding defect " + std::to_string(dK));
    std::vector<bigcomplex> all = P.class_values;
    for (const auto& v : P.class_values) all.push_back(v.conj());
    rounded_poly q = min_poly_from_roots(all);
    P.minpoly_Q = q.coeffs;
    P.defect = std::max(dK, q.defect);
    return P;
}

elliptic_unit_packet elliptic_unit_conjugates(const quad_order& O, i64 lambda, int frakl_choice, double tol) {
    mpfr_prec_t prec = default_precision(O);
    for (int attempt = 0; attempt < 6; ++attempt, prec *= 2) {
        try {
            auto P = elliptic_unit_conjugates(O, lambda, frakl_choice, prec);
            if (P.defect < tol) return P;
        } catch (const precision_error&) {
        }
    }
    throw precision_error("elliptic units: defect above tolerance up to " + std::to_string(prec / 2) + " bits");
}

void write_packet_json(std::ostream& os, const elliptic_unit_packet& P, int digits) {
    nlohmann::json j;
    j["disc_K"] = P.order.disc_K;
    j["conductor"] = P.order.c;
    j["lambda"] = P.lambda;
    j["frakl"] = P.frakl.str();
    j["frakl_choice"] = P.frakl_choice;
    j["prec_bits"] = P.prec;
    j["defect"] = P.defect;
    nlohmann::json vals = nlohmann::json::array();
    for (int t = 0; t < P.group->h(); ++t) {
        const auto& v = P.class_values[static_cast<std::size_t>(t)];
        vals.push_back({{"class", P.group->rep(t).str()}, {"re", v.re().str(digits)}, {"im", v.im().str(digits)}});
    }
    j["conj_values"] = vals;
    nlohmann::json mk = nlohmann::json::array();
    for (const auto& c : P.minpoly_K) mk.push_back({c.x.get_str(), c.y.get_str()});
    j["minpoly_K"] = mk;
    nlohmann::json mq = nlohmann::json::array();
    for (const auto& c : P.minpoly_Q) mq.push_back(c.get_str());
    j["minpoly_Q"] = mq;
    os << j.dump(2) << '\n';
}

unit_xi u_xi(const elliptic_unit_packet& P, const ring_class_character& xi, galois_convention g) {
    const form_class_group& G = *P.group;
    if (xi.group().h() != G.h() || xi.group().order().disc != P.order.disc)
        throw config_error("u_xi: character and packet live on different class groups");
    if (xi.is_trivial()) throw config_error("u_xi: xi must be nontrivial");
    const i64 n = xi.n();
    const i64 m = m_of_xi(xi);
    // xi(l) must generate the image of xi
    const i64 ord_l = n / gcd(n, xi.exponent(P.frakl_class));
    if (ord_l != xi.order())
        throw config_error("u_xi: xi(l) does not generate the image of xi for lambda=" + std::to_string(P.lambda));
    cyc_q x = cyc_q_const(n, 1) - to_q(xi.value(P.frakl_bar_class));
    cyc_q others = cyc_q_const(n, 1);
    for (i64 a = 2; a < n; ++a)
        if (gcd(a, n) == 1) others *= x.galois(a);
    cyc_q normx = x * others;
    for (std::size_t k = 1; k < normx.degree(); ++k)
        if (normx[k] != 0) throw internal_error("u_xi: norm is not rational");
    if (normx[0] == 0) throw config_error("u_xi: xi(lbar) = 1");
    cyc_q f = others.scaled(mpq_class(m) / normx[0]);
    if (!is_integral(f)) throw internal_error("u_xi: m(xi)/(1 - xi(lbar)) is not integral");
    unit_xi U;
    U.factor = f.map(mpz_class(0), [](const mpq_class& c) { return mpz_class(c.get_num()); });
    U.convention = g;
    const mpfr_prec_t prec = P.prec;
    U.log_realization = bigcomplex(prec);
    for (int s = 0; s < G.h(); ++s) {
        U.weights.push_back(U.factor * xi.value(s));
        bigfloat lg = P.value(s, g).abs().log();
        U.log_realization += embed(xi.value(s), 1, prec) * lg;
    }
    U.one_minus_xi_lbar = embed(x, 1, prec);
    return U;
}

std::vector<reduction_labeling> reduction_labelings(const elliptic_unit_packet& P, i64 p) {
    const quad_order& O = P.order;
    if (!is_prime(p) || p < 5) throw config_error("regulator: p must be a prime >= 5");
    if (kronecker(O.disc_K, p) != -1) throw config_error("regulator: p=" + std::to_string(p) + " is not inert in K");
    if (P.lambda % p == 0 || O.c % p == 0) throw config_error("regulator: p divides lambda or the conductor");
    const form_class_group& G = *P.group;
    const int h = G.h();
    const fp2_field F(p);
    const mpfr_prec_t prec = P.prec;
    // O_K-coefficient polynomials prod_t (X - (u_t + k u_{t rho})) for the chosen k
    auto pair_poly = [&](int rho, i64 k) {
        std::vector<bigcomplex> roots;
        for (int t = 0; t < h; ++t)
            roots.push_back(P.class_values[static_cast<std::size_t>(t)] +
                            P.class_values[static_cast<std::size_t>(G.mul(t, rho))] * bigfloat(mpz_class(k), prec));
        std::vector<ok_int> c;
        double d = recognize_ok(O, expand(roots, prec), c);
        if (!(d < 1e-6)) throw precision_error("regulator: pair polynomial not recognized at " + std::to_string(prec) + " bits");
        return c;
    };
    std::vector<reduction_labeling> out;
    for (int emb = 0; emb < 2; ++emb) {
        fp2_field::elem s = F.sqrt_fp(O.disc_K);
        if (emb == 1) s = F.sub(F.from_int(0), s);
        const fp2_field::elem omega = F.mul(F.add(F.from_int(O.delta()), s), F.from_int(inv_mod(2, p)));
        auto reduce_poly = [&](const std::vector<ok_int>& c) {
            std::vector<fp2_field::elem> r;
            for (const auto& z : c) {
                i64 x = mpz_class(z.x % p).get_si(), y = mpz_class(z.y % p).get_si();
                r.push_back(F.add(F.from_int(x), F.mul(F.from_int(y), omega)));
            }
            return r;
        };
        const auto roots = F.roots(reduce_poly(P.minpoly_K));
        if (static_cast<int>(roots.size()) != h)
            throw config_error("regulator: minimal polynomial has repeated roots mod p=" + std::to_string(p) +
                               "; choose another p");
        std::vector<std::vector<std::set<fp2_field::elem>>> pair_roots;  // [k-1][rho]
        auto pair_set = [&](std::size_t kidx, int rho) -> const std::set<fp2_field::elem>& {
            while (pair_roots.size() <= kidx) pair_roots.emplace_back(static_cast<std::size_t>(h));
            auto& slot = pair_roots[kidx][static_cast<std::size_t>(rho)];
            if (slot.empty()) {
                auto r = F.roots(reduce_poly(pair_poly(rho, static_cast<i64>(kidx) + 1)));
                slot.insert(r.begin(), r.end());
            }
            return slot;
        };
        for (int br = 0; br < h; ++br) {
            reduction_labeling L{emb, br, std::vector<fp2_field::elem>(static_cast<std::size_t>(h))};
            const auto r = roots[static_cast<std::size_t>(br)];
            L.values[0] = r;
            for (int rho = 1; rho < h; ++rho) {
                bool done = false;
                for (std::size_t kidx = 0; kidx < 6 && !done; ++kidx) {
                    const auto& S = pair_set(kidx, rho);
                    const auto k = F.from_int(static_cast<i64>(kidx) + 1);
                    std::vector<fp2_field::elem> hits;
                    for (const auto& cand : roots)
                        if (S.count(F.add(r, F.mul(k, cand)))) hits.push_back(cand);
                    if (hits.size() == 1) {
                        L.values[static_cast<std::size_t>(rho)] = hits[0];
                        done = true;
                    }
                }
                if (!done) throw internal_error("regulator: ambiguous labeling of roots mod p");
            }
            std::set<fp2_field::elem> distinct(L.values.begin(), L.values.end());
            if (static_cast<int>(distinct.size()) != h) throw internal_error("regulator: labeling is not a bijection");
            out.push_back(std::move(L));
        }
    }
    return out;
}

const char* normalization_name(log_normalization z) { return z == log_normalization::norm ? "norm" : "sylow"; }

std::vector<regulator_value> regulator_mod_p(const elliptic_unit_packet& P, const unit_xi& u, i64 p, i64 ell, int t,
                                             log_normalization z) {
    const i64 M = int_pow(ell, t);
    if (ell < 5 || !is_prime(ell) || (p - 1) % M != 0)
        throw config_error("regulator: need a prime ell >= 5 with ell^t | p - 1");
    const discrete_log dl(p, ell, t);
    const fp2_field F(p);
    const form_class_group& G = *P.group;
    const int h = G.h();
    std::vector<regulator_value> out;
    for (const auto& L : reduction_labelings(P, p)) {
        std::vector<zmod> logs;
        for (const auto& v : L.values) {
            if (F.is_zero(v)) throw config_error("regulator: unit reduces to zero mod p");
            zmod lg = dl(F.norm(v));
            if (z == log_normalization::sylow) lg *= zmod(p + 1, M).inverse();
            logs.push_back(lg);
        }
        const i64 n = u.factor.conductor();
        cyc_mod acc = cyc_mod_const(n, M, 0);
        for (int s = 0; s < h; ++s) {
            int cls = u.convention == galois_convention::inverse ? G.inverse(s) : s;
            acc += to_mod(u.weights[static_cast<std::size_t>(s)], M).scaled(logs[static_cast<std::size_t>(cls)]);
        }
        out.push_back({acc, L.embedding * h + L.base_root, L.embedding, L.base_root});
    }
    return out;
}

}  // namespace hv
