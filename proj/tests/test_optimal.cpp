#include <doctest.h>

#include <random>
#include <sstream>

#include "hv/optimal.hpp"
#include "hv/quaternion.hpp"

using namespace hv;

namespace {

// fraction of solutions of N(z) = T mod q (q | disc_K odd, T a unit) whose
// residue mod the prime above q is alpha
mpq_class residue_fraction(const quad_order& O, i64 q, i64 T, i64 alpha) {
    // omega = (1 + sqrt D)/2 reduces to 1/2 mod the ramified prime
    const i64 w0 = inv_mod(2, q);
    i64 hit = 0, all = 0;
    for (i64 x = 0; x < q; ++x)
        for (i64 y = 0; y < q; ++y) {
            if (mod(x * x + x * y + O.n_omega() * y * y - T, q) != 0) continue;
            ++all;
            hit += mod(x + y * w0 - alpha, q) == 0;
        }
    return all == 0 ? mpq_class(0) : frac(hit, all);
}

}  // namespace

TEST_CASE("local factor against residue counting") {
    for (i64 D : {-23, -39}) {
        auto O = quad_order::make(D, 1);
        auto G = class_group(O);
        auto chi = characters_of_order(G, G->h() == 3 ? 3 : 4)[0];
        for (auto [q, e] : factorize(-D)) {
            for (i64 T1 = 1; T1 < 3 * q; ++T1) {
                if (T1 % q == 0) continue;
                for (i64 T2 : {T1, T1 + q, T1 + 1, 2 * T1}) {
                    if (T2 % q == 0 || hilbert_symbol(T1, D, q) != 1 || hilbert_symbol(T2, D, q) != 1) continue;
                    mpq_class expect = 0;
                    for (i64 a = 0; a < q; ++a) expect += residue_fraction(O, q, T1, a) * residue_fraction(O, q, T2, -a);
                    opt_options untwisted;
                    untwisted.twist = 1;
                    cyc_q got = local_pair_factor(chi, q, T1, T2, untwisted);
                    // for unit arguments the chi_q factors cancel
                    CHECK_MESSAGE(got == cyc_q_const(chi.n(), expect), "D=" << D << " q=" << q << " T=" << T1 << "," << T2);
                }
            }
        }
    }
}

TEST_CASE("optimal form basic shape") {
    auto O = quad_order::make(-23, 1);
    auto G = class_group(O);
    auto xi = characters_of_order(G, 3)[0];
    auto chi = xi.pow(2);
    opt_options untwisted;
    untwisted.twist = 1;
    auto f = optimal_form_coeffs(chi, 4, untwisted);
    CHECK(f.scale == 23);
    CHECK(f.bound_m == 92);
    CHECK(f.at(0, 0).is_zero());
    CHECK_FALSE(f.a.empty());
    for (const auto& [mn, v] : f.a) {
        CHECK(mn.first > 0);
        CHECK(mn.second > 0);
    }
    // with the epsilon twist the second factor needs -m2 to be a local norm at 23,
    // which never happens for m2 a norm of an ideal
    CHECK(optimal_form_coeffs(chi, 4).a.empty());
    ring_class_character triv(G, 3, {0, 0, 0});
    CHECK_THROWS_AS(optimal_form_coeffs(triv, 2), config_error);
    auto O2 = quad_order::make(-4, 5);
    CHECK_THROWS_AS(optimal_form_coeffs(characters_of_order(class_group(O2), 2)[0], 2), config_error);
}

TEST_CASE("optimal form independent of delta and coset representatives") {
    for (i64 D : {-23, -39}) {
        auto O = quad_order::make(D, 1);
        auto G = class_group(O);
        auto chi = characters_of_order(G, G->h() == 3 ? 3 : 4)[0];
        for (int tw : {-1, 1}) {
            opt_options a, b;
            a.twist = b.twist = tw;
            b.alpha_shift = 17;
            b.delta_sign = -1;
            CHECK(optimal_form_coeffs(chi, 3, a) == optimal_form_coeffs(chi, 3, b));
        }
    }
}

TEST_CASE("characters with the same square give the same form") {
    auto O = quad_order::make(-39, 1);
    auto G = class_group(O);
    auto cs = characters_of_order(G, 4);
    REQUIRE(cs.size() == 2);
    REQUIRE(cs[0].pow(2) == cs[1].pow(2));
    for (int tw : {-1, 1}) {
        opt_options o;
        o.twist = tw;
        auto f = optimal_form_coeffs(cs[0], 4, o), g = optimal_form_coeffs(cs[1], 4, o);
        CHECK(f.a == g.a);
    }
}

TEST_CASE("specialize collects stray exponents") {
    qseries2 f;
    f.n = 3;
    f.scale = 5;
    f.bound_m = f.bound_n = 20;
    f.set(3, 1, cyc_q_root(3, 1));  // 3 + 7 = 10 -> k = 2
    f.set(1, 1, cyc_q_const(3, 2));  // 1 + 7 = 8, not a multiple of 5
    std::vector<std::pair<i64, cyc_q>> stray;
    auto s = specialize(f, 7, 3, &stray);
    CHECK(s[2] == cyc_q_root(3, 1));
    CHECK(s[1].is_zero());
    REQUIRE(stray.size() == 1);
    CHECK(stray[0].first == 8);
}

TEST_CASE("reconstruct_opt trivial inputs") {
    std::map<i64, std::vector<cyc_q>> zero, one;
    for (i64 p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43}) {
        zero[p] = std::vector<cyc_q>(60, cyc_q_const(3, 0));
        one[p] = zero[p];
        one[p][0] = cyc_q_const(3, 1);
    }
    auto z = reconstruct_opt(zero, 10, 1);
    CHECK(z.a.empty());
    auto o = reconstruct_opt(one, 10, 1);
    CHECK(o.a.size() == 1);
    CHECK(o.at(0, 0) == cyc_q_const(3, 1));
}

TEST_CASE("reconstruct_opt inverts specialization") {
    std::mt19937_64 rng(11);
    // random integer-indexed array supported on a small window
    qseries2 f;
    f.n = 3;
    f.bound_m = f.bound_n = 6;
    for (i64 m = 0; m <= 6; ++m)
        for (i64 r = 0; r <= 2; ++r) f.set(m, r, cyc_q_root(3, static_cast<i64>(rng() % 3)).scaled(mpq_class(static_cast<long>(rng() % 5) - 2)));
    std::map<i64, std::vector<cyc_q>> thetas;
    for (i64 p : {7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53}) thetas[p] = specialize(f, p, 120);
    auto g = reconstruct_opt(thetas, 6, 2);
    g.bound_m = f.bound_m;
    g.bound_n = f.bound_n;
    CHECK(g.a == f.a);
}

TEST_CASE("reconstruct_opt errors") {
    std::map<i64, std::vector<cyc_q>> thetas;
    thetas[7] = std::vector<cyc_q>(40, cyc_q_const(3, 0));
    thetas[11] = thetas[7];
    try {
        reconstruct_opt(thetas, 12, 0);
        FAIL("expected need_prime");
    } catch (const reconstruct_error& e) {
        CHECK(e.which() == reconstruct_error::kind::need_prime);
        CHECK(e.k() == 11);
        CHECK(std::string(e.what()).find("need prime > 11") != std::string::npos);
    }
    // c_{7,3} and c_{11,3} disagree about a_{3,0}
    thetas[11][3] = cyc_q_const(3, 1);
    try {
        reconstruct_opt(thetas, 5, 0);
        FAIL("expected inconsistency");
    } catch (const reconstruct_error& e) {
        CHECK(e.which() == reconstruct_error::kind::inconsistent);
        CHECK(e.p() == 11);
        CHECK(e.k() == 3);
    }
}

TEST_CASE("fixture round trip") {
    auto O = quad_order::make(-23, 1);
    auto chi = characters_of_order(class_group(O), 3)[0];
    auto s = theta_newform(chi, 30);
    std::vector<cyc_q> sq;
    for (const auto& x : s) sq.push_back(to_q(x));
    std::stringstream a;
    write_qseries(a, sq, 3, -23, chi.label());
    CHECK(a.str().rfind("# n=3 trunc=30 disc=-23", 0) == 0);
    CHECK(read_qseries(a) == sq);

    opt_options untwisted;
    untwisted.twist = 1;
    auto f = optimal_form_coeffs(chi.pow(2), 2, untwisted);
    std::stringstream b;
    write_qseries2(b, f);
    auto g = read_qseries2(b);
    CHECK(g == f);
    CHECK(g.label == f.label);
    std::stringstream bad("no header\n");
    CHECK_THROWS_AS(read_qseries(bad), config_error);
}
