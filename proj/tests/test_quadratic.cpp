#include <doctest.h>

#include <random>

#include "hv/quadratic.hpp"

using namespace hv;

namespace {

// Dirichlet's class number formula for a fundamental discriminant D < 0.
i64 h_fundamental(i64 D) {
    i64 w = D == -3 ? 6 : (D == -4 ? 4 : 2);
    i64 s = 0;
    for (i64 a = 1; a < -D; ++a) s += kronecker(D, a) * a;
    // h = -w/(2|D|) * s
    return -w * s / (2 * -D);
}

i64 h_order_oracle(i64 D, i64 c) {
    i64 num = h_fundamental(D) * c;
    i64 den = 1;
    for (auto [q, e] : factorize(c)) {
        num *= q - kronecker(D, q);
        den *= q;
    }
    i64 wK = D == -3 ? 6 : (D == -4 ? 4 : 2);
    i64 wc = c == 1 ? wK : 2;
    return num / den / (wK / wc);
}

// q-expansion of q * prod (1 - q^n)(1 - q^{23 n}).
std::vector<i64> eta_product_23(i64 N) {
    std::vector<i64> s(static_cast<std::size_t>(N) + 1, 0);
    s[1] = 1;
    auto times = [&](i64 step) {
        for (i64 k = N; k >= step; --k) s[static_cast<std::size_t>(k)] -= s[static_cast<std::size_t>(k - step)];
    };
    for (i64 n = 1; n <= N; ++n) {
        times(n);
        if (23 * n <= N) times(23 * n);
    }
    return s;
}

}  // namespace

TEST_CASE("fundamental discriminants") {
    CHECK(is_fundamental_disc(-3));
    CHECK(is_fundamental_disc(-4));
    CHECK(is_fundamental_disc(-8));
    CHECK(is_fundamental_disc(-23));
    CHECK_FALSE(is_fundamental_disc(-12));
    CHECK_FALSE(is_fundamental_disc(-16));
    CHECK_THROWS_AS(quad_order::make(-100, 1), config_error);
}

TEST_CASE("class group examples") {
    CHECK(class_group(quad_order::make(-4, 1))->h() == 1);
    auto G = class_group(quad_order::make(-23, 1));
    REQUIRE(G->h() == 3);
    CHECK(G->rep(0) == form{1, 1, 6});
    CHECK(G->rep(1) == form{2, -1, 3});
    CHECK(G->rep(2) == form{2, 1, 3});
    CHECK(class_group(quad_order::make(-4, 5))->h() == 2);
}

TEST_CASE("class numbers match the order class number formula") {
    for (i64 D : {-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, -31, -35, -39, -40, -43, -47}) {
        for (i64 c : {1, 2, 3, 5}) {
            auto G = class_group(quad_order::make(D, c));
            CHECK_MESSAGE(G->h() == h_order_oracle(D, c), "D=" << D << " c=" << c);
            for (const auto& f : G->reps()) CHECK(is_reduced(f));
        }
    }
}

TEST_CASE("composition table is an abelian group") {
    for (i64 D : {-23, -47, -71, -87, -104}) {
        if (!is_fundamental_disc(D)) continue;
        auto G = class_group(quad_order::make(D, 1));
        const int h = G->h();
        for (int i = 0; i < h; ++i) {
            CHECK(G->mul(i, G->identity()) == i);
            CHECK(G->mul(i, G->inverse(i)) == G->identity());
            for (int j = 0; j < h; ++j) {
                CHECK(G->mul(i, j) == G->mul(j, i));
                for (int k = 0; k < h; ++k) CHECK(G->mul(G->mul(i, j), k) == G->mul(i, G->mul(j, k)));
            }
        }
    }
}

TEST_CASE("reduction is class preserving under unimodular change") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dist(-4, 4);
    for (i64 D : {-23, -56, -84, -100, -243}) {
        std::vector<form> reps;
        for (i64 a = 1; 3 * a * a <= -D; ++a)
            for (i64 b = -a + 1; b <= a; ++b) {
                i64 num = b * b - D;
                if (num % (4 * a) == 0 && num / (4 * a) >= a) reps.push_back(reduce({a, b, num / (4 * a)}));
            }
        for (const auto& f : reps) {
            for (int t = 0; t < 100; ++t) {
                i64 x = dist(rng), y = dist(rng);
                if (gcd(x, y) != 1) continue;
                // extend (x, y) to a determinant-one matrix
                i64 s = 0, r = 0;
                for (s = -8; s <= 8; ++s) {
                    bool found = false;
                    for (r = -8; r <= 8; ++r)
                        if (x * s - r * y == 1) {
                            found = true;
                            break;
                        }
                    if (found) break;
                }
                if (x * s - r * y != 1) continue;
                form g = act(f, x, r, y, s);
                CHECK(reduce(g) == f);
                CHECK(reduce(reduce(g)) == reduce(g));
            }
        }
    }
}

TEST_CASE("ideals and forms correspond") {
    for (auto [D, c] : std::vector<std::pair<i64, i64>>{{-23, 1}, {-4, 5}, {-3, 9}, {-87, 1}, {-7, 3}}) {
        quad_order O = quad_order::make(D, c);
        auto G = class_group(O);
        for (int i = 0; i < G->h(); ++i) {
            kideal I = ideal_of_form(O, G->rep(i));
            CHECK(form_of_ideal(O, I) == G->rep(i));
            CHECK(ideal_norm(O, I) == G->rep(i).a);
            for (int j = 0; j < G->h(); ++j) {
                kideal J = ideal_of_form(O, G->rep(j));
                CHECK(G->class_of_ideal(ideal_mul(O, I, J)) == G->mul(i, j));
            }
            CHECK(G->class_of_ideal(ideal_conj(O, I)) == G->inverse(i));
            form g = G->rep_prime_to(i, 2 * c * 3);
            CHECK(gcd(g.a, 2 * c * 3) == 1);
            CHECK(reduce(g) == G->rep(i));
        }
    }
}

TEST_CASE("characters") {
    auto G1 = class_group(quad_order::make(-4, 1));
    auto triv = characters_of_order(G1, 1);
    REQUIRE(triv.size() == 1);
    CHECK(triv[0].is_trivial());
    auto G = class_group(quad_order::make(-23, 1));
    auto cubic = characters_of_order(G, 3);
    REQUIRE(cubic.size() == 2);
    CHECK(cubic[0].inverse() == cubic[1]);
    CHECK(characters_of_order(G, 2).empty());
    for (const auto& chi : cubic)
        for (int i = 0; i < G->h(); ++i)
            for (int j = 0; j < G->h(); ++j) CHECK(chi.value(G->mul(i, j)) == chi.value(i) * chi.value(j));
    CHECK(conductor(cubic[0]) == 1);
    CHECK(conductor(triv[0]) == 1);
    auto G5 = class_group(quad_order::make(-4, 5));
    auto genus = characters_of_order(G5, 2);
    REQUIRE(genus.size() == 1);
    CHECK(conductor(genus[0]) == 5);
    CHECK(conductor(characters_of_order(G5, 1)[0]) == 1);
    auto G87 = class_group(quad_order::make(-87, 1));
    CHECK(G87->h() == 6);
    CHECK(characters_of_order(G87, 6).size() == 2);
}

TEST_CASE("m of xi") {
    auto G = class_group(quad_order::make(-23, 1));
    CHECK(m_of_xi(characters_of_order(G, 3)[0]) == 3);
    auto G87 = class_group(quad_order::make(-87, 1));
    CHECK(m_of_xi(characters_of_order(G87, 6)[0]) == 1);
    auto G56 = class_group(quad_order::make(-56, 1));  // Pic cyclic of order 4
    REQUIRE(G56->h() == 4);
    CHECK(m_of_xi(characters_of_order(G56, 4)[0]) == 2);
    CHECK_THROWS_AS(m_of_xi(characters_of_order(G, 1)[0]), config_error);
}

TEST_CASE("theta newform, trivial character of Z[i]") {
    auto G = class_group(quad_order::make(-4, 1));
    auto a = theta_newform(characters_of_order(G, 1)[0], 10);
    CHECK(a[1] == cyc_z_const(1, 1));
    CHECK(a[2] == cyc_z_const(1, 1));
    CHECK(a[5] == cyc_z_const(1, 2));
    CHECK(a[3].is_zero());
}

TEST_CASE("theta newform of the cubic character matches eta(z)eta(23z)") {
    auto G = class_group(quad_order::make(-23, 1));
    auto chi = characters_of_order(G, 3)[0];
    const i64 N = 50;
    auto a = theta_newform(chi, N);
    auto eta = eta_product_23(N);
    for (i64 n = 1; n <= N; ++n) CHECK_MESSAGE(a[static_cast<std::size_t>(n)] == cyc_z_const(3, eta[static_cast<std::size_t>(n)]), "n=" << n);
    CHECK(a[1] == cyc_z_const(3, 1));
    CHECK(a[2] == cyc_z_const(3, -1));
    CHECK(a[3] == cyc_z_const(3, -1));
    CHECK(a[4].is_zero());
    for (i64 m = 1; m <= N; ++m)
        for (i64 n = 1; m * n <= N; ++n) {
            if (gcd(m, n) != 1 || gcd(m * n, 23) != 1) continue;
            CHECK(a[static_cast<std::size_t>(m * n)] == a[static_cast<std::size_t>(m)] * a[static_cast<std::size_t>(n)]);
        }
    for (i64 q : {5, 7, 11, 17, 19, 37, 43}) {
        REQUIRE(kronecker(-23, q) == -1);
        CHECK(a[static_cast<std::size_t>(q)].is_zero());
    }
}
