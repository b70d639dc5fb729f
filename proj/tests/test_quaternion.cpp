#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "hv/quaternion.hpp"

using namespace hv;

namespace {

int_matrix matmul(const int_matrix& a, const int_matrix& b) {
    const std::size_t n = a.size();
    int_matrix r(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

i64 sigma_coprime(i64 n, i64 p) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
        if (n % d == 0 && d % p != 0) s += d;
    return s;
}

const ideal_class_set& classes(i64 p) {
    static std::map<i64, ideal_class_set> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, ideal_classes(maximal_order(build_algebra(p)))).first;
    return it->second;
}

}  // namespace

TEST_CASE("hilbert symbols") {
    CHECK(hilbert_symbol(-1, -1, 0) == -1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol(-1, -1, 3) == 1);
    CHECK(hilbert_symbol(2, 3, 3) == -1);
    CHECK(hilbert_symbol(5, 7, 5) == -1);
    // product formula over all places
    for (i64 a : {-1, -2, -3, 5, 6, -7, 10})
        for (i64 b : {-1, 3, -5, 7, -11, 14}) {
            int prod = hilbert_symbol(a, b, 0) * hilbert_symbol(a, b, 2);
            for (auto [q, e] : factorize(std::abs(a * b)))
                if (q != 2) prod *= hilbert_symbol(a, b, q);
            CHECK_MESSAGE(prod == 1, "a=" << a << " b=" << b);
        }
}

TEST_CASE("algebra construction") {
    CHECK_THROWS_AS(build_algebra(4), config_error);
    CHECK_THROWS_AS(build_algebra(3), config_error);
    auto B11 = build_algebra(11);
    CHECK(B11.a() == -1);
    CHECK(B11.b() == -11);
    CHECK(build_algebra(13).a() == -2);
    CHECK(build_algebra(17).a() == -3);
    CHECK(build_algebra(41).a() == -3);
    CHECK(build_algebra(73).a() == -7);
    quat i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(B11.mul(i, j) == k);
    CHECK(B11.mul(j, i) == quat{0, 0, 0, -1});
    CHECK(B11.mul(k, k) == quat{-11, 0, 0, 0});
    quat x{1, 2, -3, frac(1, 2)}, y{frac(-2, 3), 0, 5, 1};
    CHECK(B11.nrd(B11.mul(x, y)) == B11.nrd(x) * B11.nrd(y));
    CHECK(B11.mul(x, B11.conj(x)) == quat{B11.nrd(x), 0, 0, 0});
}

TEST_CASE("maximal orders") {
    for (i64 p = 5; p <= 199; p = next_prime(p)) {
        auto B = build_algebra(p);
        auto O = maximal_order(B);
        CHECK(is_order(B, O.lat));
        CHECK(discriminant_squared(B, O.lat) == p * p);
        for (const auto& r : O.lat.basis) {
            quat x = row_quat(r);
            CHECK(B.nrd(x).get_den() == 1);
            CHECK(B.trd(x).get_den() == 1);
        }
    }
}

TEST_CASE("class numbers and weights") {
    const auto& C11 = classes(11);
    REQUIRE(C11.h() == 2);
    auto w = C11.weights;
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<i64>{2, 3});
    CHECK(classes(13).h() == 1);
    CHECK(classes(13).weights == std::vector<i64>{1});
    CHECK(classes(37).h() == 3);
    CHECK(classes(37).mass() == 3);
    CHECK(classes(23).h() == 3);
}

TEST_CASE("mass formula for all primes up to 199") {
    for (i64 p = 5; p <= 199; p = next_prime(p)) {
        const auto& C = classes(p);
        CHECK_MESSAGE(C.mass() == frac(p - 1, 12), "p=" << p);
        // Eichler's class number formula
        mpq_class h = frac(p - 1, 12) + frac(1 - kronecker(-4, p), 4) + frac(1 - kronecker(-3, p), 3);
        CHECK_MESSAGE(C.h() == h, "p=" << p);
        for (int i = 0; i < C.h(); ++i) CHECK(lattice_nrd(C.order, C.reps[static_cast<std::size_t>(i)]).get_den() == 1);
    }
}

TEST_CASE("brandt matrix identities") {
    const i64 N = 12;
    for (i64 p : {11, 13, 23, 37}) {
        const auto& C = classes(p);
        auto T = brandt_all(C, N);
        const auto h = static_cast<std::size_t>(C.h());
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j) CHECK(T[1][i][j] == (i == j ? 1 : 0));
        for (i64 n = 1; n <= N; ++n) {
            const auto& M = T[static_cast<std::size_t>(n)];
            for (std::size_t i = 0; i < h; ++i) {
                i64 row = 0;
                for (std::size_t j = 0; j < h; ++j) {
                    row += M[i][j];
                    CHECK(C.weights[j] * M[i][j] == C.weights[i] * M[j][i]);
                }
                CHECK_MESSAGE(row == sigma_coprime(n, p), "p=" << p << " n=" << n);
            }
            for (i64 m = 1; m <= N; ++m) {
                CHECK(matmul(M, T[static_cast<std::size_t>(m)]) == matmul(T[static_cast<std::size_t>(m)], M));
                if (gcd(m, n) == 1 && m * n <= N)
                    CHECK(matmul(M, T[static_cast<std::size_t>(m)]) == T[static_cast<std::size_t>(m * n)]);
            }
        }
        for (i64 q : {2, 3}) {
            if (q == p) continue;
            auto sq = matmul(T[static_cast<std::size_t>(q)], T[static_cast<std::size_t>(q)]);
            for (std::size_t i = 0; i < h; ++i) sq[i][i] -= q;
            CHECK(sq == T[static_cast<std::size_t>(q * q)]);
        }
        CHECK(brandt(C, 5) == T[5]);
    }
}

TEST_CASE("parallel and serial brandt matrices agree") {
    for (i64 p : {37, 61, 101}) {
        const auto& C = classes(p);
        CHECK(brandt_all(C, 10) == brandt_all_serial(C, 10));
    }
}

TEST_CASE("brandt csv") {
    const auto& C = classes(11);
    std::ostringstream os;
    write_brandt_csv(os, C, 2, brandt(C, 2));
    const std::string out = os.str();
    CHECK(out.rfind("# p=11,n=2,H=2,weights=", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 3);
}

TEST_CASE("optimal embeddings and pushforward") {
    auto K = quad_order::make(-23, 1);
    auto G = class_group(K);
    const auto& C = classes(11);
    auto e = optimal_embedding(K, C);
    const auto& B = C.order.alg;
    CHECK(B.nrd(e.image_generator) == K.norm(K.generator()));
    CHECK(B.trd(e.image_generator) == K.trace(K.generator()));
    // phi is a ring map on K
    kelem x{2, 3}, y{-1, 5};
    CHECK(B.mul(embed_kelem(e, x), embed_kelem(e, y)) == embed_kelem(e, K.mul(x, y)));
    auto iota = iota_map(C, e, *G);
    REQUIRE(iota.size() == 3);
    // iota does not depend on the ideal chosen in a class
    for (int t = 0; t < G->h(); ++t) {
        form g = G->rep_prime_to(t, 2 * 3 * 5 * 7 * 11);
        CHECK(ideal_class_of(C, e, ideal_of_form(K, g)) == iota[static_cast<std::size_t>(t)]);
    }
    auto xi = characters_of_order(G, 3)[0];
    auto s0 = sigma0(C, 3);
    auto one = pushforward(C, iota, ring_class_character(G, 3, std::vector<i64>(3, 0)));
    auto fx = pushforward(C, iota, xi);
    CHECK(pairing(C, s0, one) == cyc_q_const(3, 3));
    CHECK(pairing(C, s0, fx).is_zero());
    auto T = brandt_all(C, 20);
    auto lift = theta_lift(C, T, one, fx, 20);
    CHECK(lift[0].is_zero());
    auto ss = theta_lift(C, T, s0, s0, 20);
    CHECK(ss[0] == cyc_q_const(3, frac(25, 72)));
    for (i64 n = 1; n <= 20; ++n)
        CHECK(ss[static_cast<std::size_t>(n)] == cyc_q_const(3, frac(10 * sigma_coprime(n, 11), 12)));
    CHECK_THROWS_AS(optimal_embedding(K, classes(13)), config_error);  // 13 splits in Q(sqrt(-23))
    CHECK_THROWS_AS(optimal_embedding(K, classes(23)), config_error);
}

TEST_CASE("order of conductor 5 in Z[i]") {
    auto K = quad_order::make(-4, 5);
    auto G = class_group(K);
    const auto& C = classes(7);
    auto e = optimal_embedding(K, C);
    const auto& B = C.order.alg;
    CHECK(B.nrd(e.image_generator) == K.norm(K.generator()));
    // optimality: (x - s)/5 is not in the host right order for any integer s
    for (i64 s = 0; s < 5; ++s) {
        quat y = e.image_generator;
        y[0] -= s;
        for (auto& v : y) v /= 5;
        CHECK_FALSE(lattice_contains(C.right[static_cast<std::size_t>(e.host)], y));
    }
    auto xi = characters_of_order(G, 2)[0];
    auto iota = iota_map(C, e, *G);
    auto fx = pushforward(C, iota, xi);
    auto s0 = sigma0(C, 2);
    CHECK(pairing(C, s0, fx).is_zero());
}

TEST_CASE("brandt row sums for larger discriminants") {
    // large ideal norms give badly conditioned HNF grams
    for (i64 p : {251, 307}) {
        const auto& C = classes(p);
        auto T = brandt_all(C, 7);
        for (i64 n = 1; n <= 7; ++n)
            for (const auto& row : T[static_cast<std::size_t>(n)]) {
                i64 s = 0;
                for (i64 x : row) s += x;
                CHECK_MESSAGE(s == sigma_coprime(n, p), "p=" << p << " n=" << n);
            }
    }
}
