#include "hv/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "hv/eisenstein.hpp"
#include "hv/optimal.hpp"
#include "hv/quaternion.hpp"
#include "hv/units.hpp"

namespace hv {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

i64 parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: " + key + " expects an integer, got '" + v + "'");
    }
}

std::vector<i64> parse_list(const std::string& key, const std::string& v) {
    std::vector<i64> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(parse_int(key, tok));
    }
    return out;
}

std::string join(const std::vector<i64>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

using clock_type = std::chrono::steady_clock;

template <class F>
check_result timed(const std::string& name, F&& body) {
    check_result r;
    r.name = name;
    auto t0 = clock_type::now();
    try {
        body(r);
    } catch (const config_error& e) {
        r.status = check_status::fail;
        r.detail = std::string("config error: ") + e.what();
    } catch (const std::exception& e) {
        r.status = check_status::fail;
        r.detail = std::string("error: ") + e.what();
    }
    r.ms = std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    return r;
}

std::shared_ptr<const ideal_class_set> classes_for(i64 p) {
    return std::make_shared<const ideal_class_set>(ideal_classes(maximal_order(build_algebra(p))));
}

ring_class_character pick_xi(const std::shared_ptr<const form_class_group>& G, i64 order, int index) {
    auto cs = characters_of_order(G, order);
    if (cs.empty())
        throw config_error("no character of order " + std::to_string(order) + " on Pic (h = " + std::to_string(G->h()) +
                           ")");
    if (index < 0 || index >= static_cast<int>(cs.size()))
        throw config_error("xi_index out of range: " + std::to_string(cs.size()) + " characters of order " +
                           std::to_string(order));
    return cs[static_cast<std::size_t>(index)];
}

ring_class_character trivial_like(const ring_class_character& xi) {
    return ring_class_character(xi.group_ptr(), xi.n(), std::vector<i64>(static_cast<std::size_t>(xi.group().h()), 0));
}

bool embeds(const quad_order& O, i64 p) { return kronecker(O.disc_K, p) == -1 && gcd(O.c, p) == 1; }

std::vector<cyc_q> theta_series(const ideal_class_set& C, const quad_order& O, const ring_class_character& xi, i64 N,
                                const std::vector<i64>& corrupt) {
    auto iota = iota_map(C, optimal_embedding(O, C), xi.group());
    auto T = brandt_all(C, N);
    if (corrupt.size() == 4 && corrupt[0] == C.p() && corrupt[1] >= 1 && corrupt[1] <= N) {
        auto& m = T[static_cast<std::size_t>(corrupt[1])];
        m.at(static_cast<std::size_t>(corrupt[2])).at(static_cast<std::size_t>(corrupt[3])) += 1;
    }
    return theta_lift(C, T, pushforward(C, iota, trivial_like(xi)), pushforward(C, iota, xi), N);
}

void dump_windows(const verify_config& cfg, const std::string& tag, const std::vector<cyc_q>& lhs,
                  const std::vector<cyc_q>& rhs, const ring_class_character& xi, nlohmann::json& witness) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.fixture_dir, ec);
    if (ec) return;
    std::string a = cfg.fixture_dir + "/" + tag + "_lhs.tsv", b = cfg.fixture_dir + "/" + tag + "_rhs.tsv";
    std::ofstream fa(a), fb(b);
    write_qseries(fa, lhs, xi.n(), xi.group().order().disc, xi.label());
    write_qseries(fb, rhs, xi.n(), xi.group().order().disc, xi.label());
    witness["fixtures"] = {a, b};
}

// first k with lhs[k] != rhs[k], or -1
i64 first_mismatch(const std::vector<cyc_q>& lhs, const std::vector<cyc_q>& rhs) {
    for (std::size_t k = 0; k < std::min(lhs.size(), rhs.size()); ++k)
        if (!(lhs[k] == rhs[k])) return static_cast<i64>(k);
    return -1;
}

}  // namespace

// ---------------------------------------------------------------- config

void set_config_key(verify_config& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "mode")
        cfg.mode = v;
    else if (key == "disc" || key == "disc_K")
        cfg.disc_K = parse_int(key, v);
    else if (key == "cond" || key == "c")
        cfg.c = parse_int(key, v);
    else if (key == "xi_order" || key == "xi-order")
        cfg.xi_order = parse_int(key, v);
    else if (key == "xi_index")
        cfg.xi_index = static_cast<int>(parse_int(key, v));
    else if (key == "p" || key == "primes")
        cfg.primes = parse_list(key, v);
    else if (key == "ell")
        cfg.ell = parse_int(key, v);
    else if (key == "t")
        cfg.t = static_cast<int>(parse_int(key, v));
    else if (key == "bound")
        cfg.bound = parse_int(key, v);
    else if (key == "prec")
        cfg.prec = static_cast<mpfr_prec_t>(parse_int(key, v));
    else if (key == "lambda" || key == "lambdas")
        cfg.lambdas = parse_list(key, v);
    else if (key == "mass_max")
        cfg.mass_max = parse_int(key, v);
    else if (key == "twist")
        cfg.twist = static_cast<int>(parse_int(key, v));
    else if (key == "fixture_dir")
        cfg.fixture_dir = v;
    else if (key == "corrupt_brandt")
        cfg.corrupt_brandt = parse_list(key, v);
    else
        throw config_error("config: unknown key '" + key + "'");
}

void load_config(verify_config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::vector<std::tuple<std::string, std::string, std::string, int>> entries;
    std::string line, section = "general";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("config: " + path + ":" + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
        entries.emplace_back(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno);
    }
    for (const auto& [sec, k, v, n] : entries) {
        if (sec != "general" && sec != cfg.mode) continue;
        try {
            set_config_key(cfg, k, v);
        } catch (const config_error& e) {
            throw config_error(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
}

std::vector<i64> effective_primes(const verify_config& cfg) {
    if (cfg.primes) return *cfg.primes;
    if (cfg.mode == "opt-unique") return {7, 11, 13, 17, 19};
    if (cfg.mode == "main-identity") return {11};
    return {11, 13, 23, 37};
}

void validate(const verify_config& cfg) {
    if (cfg.mode != "opt-unique" && cfg.mode != "main-identity" && cfg.mode != "properties")
        throw config_error("mode must be opt-unique, main-identity or properties (got '" + cfg.mode + "')");
    if (cfg.disc_K >= 0 || !is_fundamental_disc(cfg.disc_K))
        throw config_error("disc must be a negative fundamental discriminant (got " + std::to_string(cfg.disc_K) + ")");
    if (cfg.c < 1) throw config_error("cond must be >= 1");
    if (cfg.xi_order < 2) throw config_error("xi_order must be >= 2: the trivial character is rejected");
    auto O = quad_order::make(cfg.disc_K, cfg.c);
    pick_xi(class_group(O), cfg.xi_order, cfg.xi_index);
    for (i64 p : effective_primes(cfg))
        if (p < 5 || !is_prime(p)) throw config_error("p must be a prime >= 5 (got " + std::to_string(p) + ")");
    if (cfg.mode == "main-identity") {
        if (cfg.ell < 5 || !is_prime(cfg.ell)) throw config_error("ell must be a prime >= 5");
        if (cfg.t < 1) throw config_error("t must be >= 1");
        const i64 m = int_pow(cfg.ell, cfg.t);
        for (i64 p : effective_primes(cfg)) {
            if (kronecker(cfg.disc_K, p) == 0 || cfg.c % p == 0)
                throw config_error("p = " + std::to_string(p) + " is ramified in K or divides c; use an inert prime");
            if ((p - 1) % m != 0)
                throw config_error("ell^t = " + std::to_string(m) + " must divide p - 1 for p = " + std::to_string(p));
        }
    }
    if (cfg.bound < 1) throw config_error("bound must be >= 1");
    for (i64 l : cfg.lambdas)
        if (!is_prime(l) || kronecker(cfg.disc_K, l) != 1 || cfg.c % l == 0)
            throw config_error("lambda = " + std::to_string(l) + " must be a prime split in K and prime to c");
    if (cfg.twist != 1 && cfg.twist != -1) throw config_error("twist must be 1 or -1");
    if (!cfg.corrupt_brandt.empty() && cfg.corrupt_brandt.size() != 4)
        throw config_error("corrupt_brandt expects p,n,i,j");
}

nlohmann::json config_json(const verify_config& cfg) {
    return {{"mode", cfg.mode},         {"disc_K", cfg.disc_K},
            {"c", cfg.c},               {"xi_order", cfg.xi_order},
            {"xi_index", cfg.xi_index}, {"primes", effective_primes(cfg)},
            {"ell", cfg.ell},           {"t", cfg.t},
            {"bound", cfg.bound},       {"prec", static_cast<long>(cfg.prec)},
            {"lambdas", cfg.lambdas},   {"mass_max", cfg.mass_max},
            {"twist", cfg.twist},       {"corrupt_brandt", cfg.corrupt_brandt}};
}

// ---------------------------------------------------------------- report

const char* status_name(check_status s) {
    switch (s) {
        case check_status::pass: return "pass";
        case check_status::fail: return "fail";
        case check_status::skip: return "skip";
    }
    return "?";
}

bool report::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const check_result& c) { return c.status == check_status::fail; });
}

nlohmann::json report::to_json(bool with_timing) const {
    nlohmann::json j;
    j["config"] = config;
    j["checks"] = nlohmann::json::array();
    double total = 0;
    for (const auto& c : checks) {
        nlohmann::json e = {{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}, {"witness", c.witness}};
        if (with_timing) e["ms"] = c.ms;
        total += c.ms;
        j["checks"].push_back(e);
    }
    if (with_timing) j["timing_ms"] = total;
    j["verdict"] = passed() ? "pass" : "fail";
    return j;
}

void report::print_summary(std::ostream& os) const {
    for (const auto& c : checks) {
        os << std::left << std::setw(5) << status_name(c.status) << ' ' << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << '\n';
    }
    os << "verdict: " << (passed() ? "pass" : "fail") << '\n';
}

// ---------------------------------------------------------------- checks

check_result check_mass(i64 p_lo, i64 p_hi) {
    return timed("mass formula " + std::to_string(p_lo) + ".." + std::to_string(p_hi), [&](check_result& r) {
        std::vector<i64> ps;
        for (i64 p = std::max<i64>(5, p_lo); p <= p_hi; p = next_prime(p))
            if (is_prime(p)) ps.push_back(p);
        if (ps.empty()) {
            r.status = check_status::skip;
            r.detail = "empty prime range";
            return;
        }
        std::vector<mpq_class> mass(ps.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < ps.size(); ++i) mass[i] = ideal_classes(maximal_order(build_algebra(ps[i]))).mass();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (mass[i] != frac(ps[i] - 1, 12)) {
                r.status = check_status::fail;
                r.detail = "p=" + std::to_string(ps[i]) + " mass " + mass[i].get_str();
                r.witness = {{"p", ps[i]}, {"mass", mass[i].get_str()}};
                return;
            }
        }
        r.status = check_status::pass;
        r.witness = {{"primes", ps.size()}};
    });
}

check_result check_brandt_structure(const std::vector<i64>& ps, i64 N) {
    return timed("brandt structure p=" + join(ps), [&](check_result& r) {
        if (ps.empty()) {
            r.status = check_status::skip;
            r.detail = "no primes";
            return;
        }
        auto fail = [&](i64 p, const std::string& what) {
            r.status = check_status::fail;
            r.detail = "p=" + std::to_string(p) + ": " + what;
            r.witness = {{"p", p}, {"what", what}};
        };
        for (i64 p : ps) {
            auto C = classes_for(p);
            const std::size_t h = static_cast<std::size_t>(C->h());
            auto T = brandt_all(*C, std::max<i64>(N, 20));
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < h; ++j)
                    if (T[1][i][j] != (i == j)) return fail(p, "B(1) != I");
            for (i64 n = 1; n <= N; ++n) {
                const auto& A = T[static_cast<std::size_t>(n)];
                for (std::size_t i = 0; i < h; ++i)
                    for (std::size_t j = 0; j < h; ++j)
                        if (C->weights[j] * A[i][j] != C->weights[i] * A[j][i])
                            return fail(p, "w_j B(" + std::to_string(n) + ")_ij != w_i B_ji at " + std::to_string(i) + "," +
                                               std::to_string(j));
                for (i64 m = n + 1; m <= N; ++m) {
                    const auto& B = T[static_cast<std::size_t>(m)];
                    for (std::size_t i = 0; i < h; ++i)
                        for (std::size_t j = 0; j < h; ++j) {
                            i64 ab = 0, ba = 0;
                            for (std::size_t k = 0; k < h; ++k) ab += A[i][k] * B[k][j], ba += B[i][k] * A[k][j];
                            if (ab != ba)
                                return fail(p, "B(" + std::to_string(n) + ")B(" + std::to_string(m) + ") not commuting");
                        }
                }
            }
            for (i64 q = 2; q <= 20; q = next_prime(q)) {
                if (q == p) continue;
                for (std::size_t i = 0; i < h; ++i) {
                    i64 s = 0;
                    for (std::size_t j = 0; j < h; ++j) s += T[static_cast<std::size_t>(q)][i][j];
                    if (s != q + 1) return fail(p, "T_" + std::to_string(q) + " Sigma0 != (q+1) Sigma0");
                }
            }
        }
        r.status = check_status::pass;
        r.witness = {{"primes", ps}, {"N", N}};
    });
}

check_result check_pairing_anchors(i64 disc_K, i64 c, i64 xi_order, i64 p) {
    return timed("pairing anchors disc=" + std::to_string(c * c * disc_K) + " p=" + std::to_string(p), [&](check_result& r) {
        auto O = quad_order::make(disc_K, c);
        auto G = class_group(O);
        auto xi = pick_xi(G, xi_order, 0);
        auto C = classes_for(p);
        auto iota = iota_map(*C, optimal_embedding(O, *C), *G);
        cyc_q one = pairing(*C, sigma0(*C, xi.n()), pushforward(*C, iota, trivial_like(xi)));
        cyc_q zero = pairing(*C, sigma0(*C, xi.n()), pushforward(*C, iota, xi));
        r.witness = {{"sigma0_one", one.str()}, {"sigma0_xi", zero.str()}, {"h", G->h()}};
        bool ok = one == cyc_q_const(xi.n(), G->h()) && zero.is_zero();
        r.status = ok ? check_status::pass : check_status::fail;
        if (!ok) r.detail = "<Sigma0,[1]> = " + one.str() + ", <Sigma0,[xi]> = " + zero.str();
    });
}

check_result check_constant_term(i64 disc_K, i64 c, i64 xi_order, const std::vector<i64>& ps) {
    return timed("constant term disc=" + std::to_string(c * c * disc_K), [&](check_result& r) {
        auto O = quad_order::make(disc_K, c);
        auto G = class_group(O);
        auto xis = characters_of_order(G, xi_order);
        int tested = 0;
        for (i64 p : ps) {
            if (!embeds(O, p)) continue;
            auto C = classes_for(p);
            for (const auto& xi : xis) {
                auto th = theta_series(*C, O, xi, 1, {});
                ++tested;
                if (!th[0].is_zero()) {
                    r.status = check_status::fail;
                    r.detail = "p=" + std::to_string(p) + " " + xi.label() + ": c0 = " + th[0].str();
                    r.witness = {{"p", p}, {"xi", xi.label()}, {"c0", th[0].str()}};
                    return;
                }
            }
        }
        r.status = tested ? check_status::pass : check_status::skip;
        r.witness = {{"cases", tested}};
        if (!tested) r.detail = "no inert prime given";
    });
}

check_result check_lambda_independence(i64 disc_K, i64 c, i64 xi_order, int count, mpfr_prec_t prec) {
    return timed("lambda independence disc=" + std::to_string(c * c * disc_K), [&](check_result& r) {
        auto O = quad_order::make(disc_K, c);
        auto G = class_group(O);
        auto xi = pick_xi(G, xi_order, 0);
        prec = std::max<mpfr_prec_t>({prec, 256, default_precision(O)});
        struct entry {
            i64 lambda;
            unit_xi u;
        };
        std::vector<entry> us;
        for (i64 lam : split_primes(O, count)) {
            auto P = elliptic_unit_conjugates(O, lam, 0, prec);
            us.push_back({lam, u_xi(P, xi)});
        }
        double worst = 0;
        const double tol = std::ldexp(1.0, -static_cast<int>(prec / 2));
        for (std::size_t i = 0; i < us.size(); ++i)
            for (std::size_t j = i + 1; j < us.size(); ++j) {
                bigcomplex lhs = us[j].u.one_minus_xi_lbar * us[i].u.log_realization;
                bigcomplex rhs = us[i].u.one_minus_xi_lbar * us[j].u.log_realization;
                double d = (lhs - rhs).abs().to_double() / (1.0 + lhs.abs().to_double());
                worst = std::max(worst, d);
            }
        std::vector<i64> lams;
        for (const auto& e : us) lams.push_back(e.lambda);
        r.witness = {{"lambdas", lams}, {"prec", static_cast<long>(prec)}, {"max_rel_diff", worst}};
        r.status = worst <= tol ? check_status::pass : check_status::fail;
        if (r.status == check_status::fail) r.detail = "relative difference " + std::to_string(worst);
    });
}

check_result check_minpoly(i64 disc_K, i64 c, i64 lambda) {
    return timed("minpoly recognition disc=" + std::to_string(c * c * disc_K) + " lambda=" + std::to_string(lambda),
                 [&](check_result& r) {
                     auto O = quad_order::make(disc_K, c);
                     auto P = elliptic_unit_conjugates(O, lambda, 0);
                     auto P2 = elliptic_unit_conjugates(O, lambda, 0, static_cast<mpfr_prec_t>(2 * P.prec));
                     bool stable = P2.minpoly_Q == P.minpoly_Q && P2.minpoly_K == P.minpoly_K;
                     std::vector<std::string> coeffs;
                     for (const auto& x : P.minpoly_Q) coeffs.push_back(x.get_str());
                     r.witness = {{"prec", static_cast<long>(P.prec)}, {"defect", P.defect}, {"minpoly_Q", coeffs}};
                     r.status = P.defect < 1e-10 && stable ? check_status::pass : check_status::fail;
                     if (r.status == check_status::fail) r.detail = stable ? "defect too large" : "unstable under doubling";
                 });
}

check_result check_sigma1_aux(i64 p, i64 ell, int t, i64 disc_K, i64 c, i64 xi_order) {
    return timed("Sigma1 auxiliary prime p=" + std::to_string(p), [&](check_result& r) {
        auto C = classes_for(p);
        auto ctx = eisenstein_context::make(C, ell, t);
        auto O = quad_order::make(disc_K, c);
        auto G = class_group(O);
        auto xi = pick_xi(G, xi_order, 0);
        auto push = pushforward(*C, iota_map(*C, optimal_embedding(O, *C), *G), xi);
        std::vector<std::pair<i64, cyc_mod>> vals;
        for (i64 v = 2; v < 60 && vals.size() < 2; v = next_prime(v)) {
            if (v == p || v == ell) continue;
            try {
                vals.emplace_back(v, sigma1_pairing(ctx, solve_sigma1(ctx, v), push));
            } catch (const degenerate_error&) {
            }
        }
        if (vals.size() < 2) {
            r.status = check_status::fail;
            r.detail = "fewer than two nondegenerate auxiliary primes";
            return;
        }
        r.witness = {{"v", {vals[0].first, vals[1].first}}, {"values", {vals[0].second.str(), vals[1].second.str()}}};
        r.status = vals[0].second == vals[1].second ? check_status::pass : check_status::fail;
        if (r.status == check_status::fail) r.detail = vals[0].second.str() + " vs " + vals[1].second.str();
    });
}

check_result check_theta_fixtures(i64 N) {
    return timed("weight-one theta disc=-23", [&](check_result& r) {
        auto O = quad_order::make(-23, 1);
        auto chi = characters_of_order(class_group(O), 3)[0];
        auto a = theta_newform(chi, N);
        // q prod (1 - q^n)(1 - q^{23n})
        std::vector<i64> eta(static_cast<std::size_t>(N + 1), 0);
        eta[1] = 1;
        auto times = [&](i64 step) {
            for (i64 k = N; k >= step; --k) eta[static_cast<std::size_t>(k)] -= eta[static_cast<std::size_t>(k - step)];
        };
        for (i64 n = 1; n <= N; ++n) {
            times(n);
            if (23 * n <= N) times(23 * n);
        }
        for (i64 n = 1; n <= N; ++n)
            if (!(a[static_cast<std::size_t>(n)] == cyc_z_const(3, eta[static_cast<std::size_t>(n)]))) {
                r.status = check_status::fail;
                r.detail = "a(" + std::to_string(n) + ") = " + a[static_cast<std::size_t>(n)].str() + ", eta gives " +
                           std::to_string(eta[static_cast<std::size_t>(n)]);
                return;
            }
        int pairs = 0;
        for (i64 m = 2; m <= N; ++m)
            for (i64 n = m + 1; m * n <= N; ++n) {
                if (gcd(m, n) != 1 || m % 23 == 0 || n % 23 == 0) continue;
                ++pairs;
                if (!(a[static_cast<std::size_t>(m * n)] == a[static_cast<std::size_t>(m)] * a[static_cast<std::size_t>(n)])) {
                    r.status = check_status::fail;
                    r.detail = "a(mn) != a(m)a(n) at m=" + std::to_string(m) + " n=" + std::to_string(n);
                    return;
                }
            }
        r.status = check_status::pass;
        r.witness = {{"N", N}, {"coprime_pairs", pairs}};
    });
}

// ---------------------------------------------------------------- pipelines

report verify_opt_unique(const verify_config& cfg_in) {
    verify_config cfg = cfg_in;
    cfg.mode = "opt-unique";
    validate(cfg);
    report rep;
    rep.config = config_json(cfg);
    auto O = quad_order::make(cfg.disc_K, cfg.c);
    auto G = class_group(O);
    auto xi = pick_xi(G, cfg.xi_order, cfg.xi_index);
    const i64 K = cfg.bound;

    std::vector<i64> ps = effective_primes(cfg);
    std::sort(ps.begin(), ps.end());
    std::map<i64, std::vector<cyc_q>> thetas;
    std::vector<i64> usable;
    for (i64 p : ps) {
        if (!embeds(O, p)) {
            check_result r;
            r.name = "theta p=" + std::to_string(p);
            r.status = check_status::skip;
            r.detail = "p is not inert in K or divides c: no optimal embedding, no Theta_p";
            r.witness = {{"p", p}};
            rep.checks.push_back(r);
            continue;
        }
        rep.checks.push_back(timed("theta p=" + std::to_string(p), [&](check_result& r) {
            auto C = classes_for(p);
            thetas[p] = theta_series(*C, O, xi, K, cfg.corrupt_brandt);
            usable.push_back(p);
            r.status = check_status::pass;
            r.witness = {{"p", p}, {"classes", C->h()}, {"c1", thetas[p].size() > 1 ? thetas[p][1].str() : ""}};
        }));
    }

    // held-out discipline: the two smallest usable primes reconstruct
    std::optional<qseries2> recon;
    std::vector<i64> train(usable.begin(), usable.begin() + std::min<std::size_t>(2, usable.size()));
    std::vector<i64> held(usable.begin() + static_cast<long>(train.size()), usable.end());
    rep.checks.push_back(timed("reconstruct from p=" + join(train), [&](check_result& r) {
        if (train.empty()) {
            r.status = check_status::skip;
            r.detail = "no usable primes";
            return;
        }
        std::map<i64, std::vector<cyc_q>> tr;
        for (i64 p : train) tr[p] = thetas[p];
        try {
            recon = reconstruct_opt(tr, K, K / train.front());
            r.status = check_status::pass;
            r.witness = {{"train", train}, {"nonzero", recon->a.size()}};
        } catch (const reconstruct_error& e) {
            r.status = check_status::fail;
            r.detail = e.what();
            r.witness = {{"train", train},
                         {"kind", e.which() == reconstruct_error::kind::need_prime ? "need_prime" : "inconsistent"},
                         {"p", e.p()},
                         {"k", e.k()}};
        }
    }));
    for (i64 p : held) {
        rep.checks.push_back(timed("reconstruction predicts p=" + std::to_string(p), [&](check_result& r) {
            if (!recon) {
                r.status = check_status::skip;
                r.detail = "no reconstruction";
                return;
            }
            auto lhs = specialize(*recon, p, K);
            i64 k = first_mismatch(lhs, thetas[p]);
            r.status = k < 0 ? check_status::pass : check_status::fail;
            if (k >= 0) {
                r.detail = "p=" + std::to_string(p) + " k=" + std::to_string(k) + ": " + lhs[static_cast<std::size_t>(k)].str() +
                           " vs " + thetas[p][static_cast<std::size_t>(k)].str();
                r.witness = {{"p", p}, {"k", k}, {"lhs", lhs[static_cast<std::size_t>(k)].str()}, {"rhs", thetas[p][static_cast<std::size_t>(k)].str()}};
                dump_windows(cfg, "recon_p" + std::to_string(p), lhs, thetas[p], xi, r.witness);
            }
        }));
    }

    // direct character sum when xi is a square of a ring class character
    std::optional<qseries2> direct;
    rep.checks.push_back(timed("direct optimal form", [&](check_result& r) {
        if (xi.order() % 2 == 0) {
            r.status = check_status::skip;
            r.detail = "xi has even order: no ring class chi with chi^2 = xi is used; reconstruction only";
            return;
        }
        auto chi = xi.pow((xi.order() + 1) / 2);
        opt_options o;
        o.twist = cfg.twist;
        try {
            direct = optimal_form_coeffs(chi, K, o);
        } catch (const config_error& e) {
            r.status = check_status::skip;
            r.detail = e.what();
            return;
        }
        r.status = check_status::pass;
        r.witness = {{"chi", chi.label()}, {"nonzero", direct->a.size()}, {"scale", direct->scale}, {"a00", direct->at(0, 0).str()}};
    }));
    if (direct) {
        for (i64 p : usable) {
            rep.checks.push_back(timed("direct form matches Theta p=" + std::to_string(p), [&](check_result& r) {
                std::vector<std::pair<i64, cyc_q>> stray;
                auto lhs = specialize(*direct, p, K, &stray);
                i64 k = first_mismatch(lhs, thetas[p]);
                if (k >= 0) {
                    r.status = check_status::fail;
                    r.detail = "p=" + std::to_string(p) + " k=" + std::to_string(k) + ": " + lhs[static_cast<std::size_t>(k)].str() +
                               " vs " + thetas[p][static_cast<std::size_t>(k)].str();
                    r.witness = {{"p", p}, {"k", k}, {"lhs", lhs[static_cast<std::size_t>(k)].str()}, {"rhs", thetas[p][static_cast<std::size_t>(k)].str()}};
                    dump_windows(cfg, "direct_p" + std::to_string(p), lhs, thetas[p], xi, r.witness);
                } else if (!stray.empty()) {
                    r.status = check_status::fail;
                    r.detail = "nonzero coefficient at non-integral exponent " + std::to_string(stray.front().first) + "/" +
                               std::to_string(direct->scale);
                    r.witness = {{"p", p}, {"exponent", stray.front().first}, {"value", stray.front().second.str()}};
                } else {
                    r.status = check_status::pass;
                }
            }));
        }
        if (recon) {
            rep.checks.push_back(timed("direct and reconstructed forms agree", [&](check_result& r) {
                // compare on the integer-exponent window of the reconstruction
                for (i64 m = 0; m <= recon->bound_m; ++m)
                    for (i64 n = 0; n <= recon->bound_n; ++n) {
                        cyc_q d = direct->at(m * direct->scale, n * direct->scale);
                        if (!(d == recon->at(m, n))) {
                            r.status = check_status::fail;
                            r.detail = "a(" + std::to_string(m) + "," + std::to_string(n) + "): " + d.str() + " vs " +
                                       recon->at(m, n).str();
                            return;
                        }
                    }
                r.status = check_status::pass;
            }));
        }
    }
    return rep;
}

report verify_main_identity(const verify_config& cfg_in) {
    verify_config cfg = cfg_in;
    cfg.mode = "main-identity";
    validate(cfg);
    report rep;
    rep.config = config_json(cfg);
    auto O = quad_order::make(cfg.disc_K, cfg.c);
    auto G = class_group(O);
    auto xi = pick_xi(G, cfg.xi_order, cfg.xi_index);

    std::vector<i64> lambdas = cfg.lambdas.empty() ? split_primes(O, 3) : cfg.lambdas;
    // packets do not depend on p
    std::vector<elliptic_unit_packet> packets;
    rep.checks.push_back(timed("elliptic unit packets", [&](check_result& r) {
        nlohmann::json w = nlohmann::json::array();
        for (i64 lam : lambdas)
            for (int ch = 0; ch < 2; ++ch) {
                auto P = cfg.prec > 0 ? elliptic_unit_conjugates(O, lam, ch, cfg.prec) : elliptic_unit_conjugates(O, lam, ch);
                w.push_back({{"lambda", lam}, {"choice", ch}, {"prec", static_cast<long>(P.prec)}, {"defect", P.defect}});
                packets.push_back(std::move(P));
            }
        r.status = check_status::pass;
        r.witness = {{"packets", w}};
    }));

    for (i64 p : effective_primes(cfg)) {
        const std::string name = "main identity p=" + std::to_string(p) + " ell=" + std::to_string(cfg.ell) +
                                 " t=" + std::to_string(cfg.t);
        if (kronecker(O.disc_K, p) == 1) {
            check_result r;
            r.name = name;
            r.status = check_status::skip;
            r.detail = "p split in K: both sides vanish (trivial case excluded)";
            rep.checks.push_back(r);
            continue;
        }
        rep.checks.push_back(timed(name, [&](check_result& r) {
            auto C = classes_for(p);
            auto ctx = eisenstein_context::make(C, cfg.ell, cfg.t);
            auto iota = iota_map(*C, optimal_embedding(O, *C), *G);
            auto s1 = solve_sigma1(ctx);
            cyc_mod pair = sigma1_pairing(ctx, s1, pushforward(*C, iota, xi));
            const i64 m = m_of_xi(xi);
            cyc_mod lhs = pair.scaled(zmod(-6 * m, ctx.modulus));
            nlohmann::json matches = nlohmann::json::array();
            int candidates = 0;
            std::vector<std::string> notes;
            for (const auto& P : packets) {
                for (int inv = 0; inv < 2; ++inv) {
                    auto x = inv ? xi.inverse() : xi;
                    for (auto g : {galois_convention::inverse, galois_convention::direct}) {
                        unit_xi u;
                        try {
                            u = u_xi(P, x, g);
                        } catch (const config_error& e) {
                            notes.push_back("lambda=" + std::to_string(P.lambda) + ": " + e.what());
                            continue;
                        }
                        for (auto z : {log_normalization::norm, log_normalization::sylow}) {
                            for (const auto& v : regulator_mod_p(P, u, p, cfg.ell, cfg.t, z)) {
                                ++candidates;
                                if (v.coords == lhs)
                                    matches.push_back({{"lambda", P.lambda},
                                                       {"frakl_choice", P.frakl_choice},
                                                       {"xi", inv ? "xi^-1" : "xi"},
                                                       {"convention", convention_name(g)},
                                                       {"normalization", normalization_name(z)},
                                                       {"choice_index", v.choice_index}});
                            }
                        }
                    }
                }
            }
            std::sort(notes.begin(), notes.end());
            notes.erase(std::unique(notes.begin(), notes.end()), notes.end());
            r.witness = {{"lhs", lhs.str()},
                         {"pairing", pair.str()},
                         {"m_xi", m},
                         {"aux_v", s1.aux_v},
                         {"candidates", candidates},
                         {"matches", matches},
                         {"notes", notes}};
            if (candidates == 0) {
                r.status = check_status::fail;
                r.detail = "empty candidate set";
                return;
            }
            // a lambda counts when at least one of its choices matches
            std::set<i64> hit;
            for (const auto& mt : matches) hit.insert(mt["lambda"].get<i64>());
            r.status = matches.empty() ? check_status::fail : check_status::pass;
            r.detail = std::to_string(matches.size()) + " of " + std::to_string(candidates) + " candidates match; lambdas hit: " +
                       join(std::vector<i64>(hit.begin(), hit.end()));
        }));
    }
    return rep;
}

report run_property_suite(const verify_config& cfg_in) {
    verify_config cfg = cfg_in;
    cfg.mode = "properties";
    validate(cfg);
    report rep;
    rep.config = config_json(cfg);
    const std::vector<i64> ps = effective_primes(cfg);
    auto skip = [&](const std::string& name) {
        check_result r;
        r.name = name;
        r.status = check_status::skip;
        r.detail = "empty prime list";
        rep.checks.push_back(r);
    };
    if (ps.empty()) {
        for (const char* s : {"mass formula", "brandt structure", "pairing anchors", "constant term", "lambda independence",
                              "theta multiplicativity", "Sigma1 auxiliary prime"})
            skip(s);
        return rep;
    }
    rep.checks.push_back(check_mass(5, cfg.mass_max));
    rep.checks.push_back(check_brandt_structure(ps, 12));
    auto O = quad_order::make(cfg.disc_K, cfg.c);
    std::vector<i64> inert;
    for (i64 p : ps)
        if (embeds(O, p)) inert.push_back(p);
    if (inert.empty()) {
        skip("pairing anchors");
    } else {
        rep.checks.push_back(check_pairing_anchors(cfg.disc_K, cfg.c, cfg.xi_order, inert.front()));
    }
    rep.checks.push_back(check_constant_term(cfg.disc_K, cfg.c, cfg.xi_order, inert));
    rep.checks.push_back(check_lambda_independence(cfg.disc_K, cfg.c, cfg.xi_order, 3, cfg.prec));
    rep.checks.push_back(check_theta_fixtures(50));
    bool sig = false;
    for (i64 p : inert) {
        if ((p - 1) % int_pow(cfg.ell, cfg.t) == 0) {
            rep.checks.push_back(check_sigma1_aux(p, cfg.ell, cfg.t, cfg.disc_K, cfg.c, cfg.xi_order));
            sig = true;
            break;
        }
    }
    if (!sig) skip("Sigma1 auxiliary prime");
    return rep;
}

}  // namespace hv
