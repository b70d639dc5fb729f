#include <doctest.h>

#include <map>
#include <random>

#include "hv/bigcomplex.hpp"
#include "hv/cyclotomic.hpp"
#include "hv/lattice.hpp"

using namespace hv;

namespace {

// Boxed exhaustive count of Q(v) = k for integer Q, used as an oracle.
std::vector<i64> boxed_theta(const std::vector<std::vector<i64>>& g, i64 n, i64 box) {
    const std::size_t r = g.size();
    std::vector<i64> counts(static_cast<std::size_t>(n) + 1, 0);
    std::vector<i64> v(r, -box);
    while (true) {
        i64 q = 0;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) q += g[a][b] * v[a] * v[b];
        if (q <= n) ++counts[static_cast<std::size_t>(q)];
        std::size_t k = 0;
        while (k < r && ++v[k] > box) v[k++] = -box;
        if (k == r) break;
    }
    return counts;
}

qmat to_qmat(const std::vector<std::vector<i64>>& g) {
    qmat m(g.size(), qvec(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) m[i][j] = g[i][j];
    return m;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == std::vector<i64>{-1, 1});
    CHECK(cyclotomic_polynomial(3) == std::vector<i64>{1, 1, 1});
    CHECK(cyclotomic_polynomial(4) == std::vector<i64>{1, 0, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<i64>{1, 0, -1, 0, 1});
    CHECK(cyclotomic_polynomial(6) == std::vector<i64>{1, -1, 1});
}

TEST_CASE("cyclotomic arithmetic is canonical") {
    auto z = cyc_z_root(3, 1);
    auto one = cyc_z_const(3, 1);
    CHECK((z * z * z) == one);
    CHECK((one + z + z * z).is_zero());
    CHECK(z.conj() == z * z);
    CHECK(cyc_z_root(12, 12) == cyc_z_const(12, 1));
    CHECK(cyc_z_root(12, 6) == cyc_z_const(12, -1));
    CHECK(cyc_z_root(4, 1).galois(3) == -cyc_z_root(4, 1));
}

TEST_CASE("complex embedding is a ring homomorphism") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> dist(-20, 20);
    const mpfr_prec_t prec = 128;
    for (i64 n : {3, 4, 5, 7, 12}) {
        const auto d = static_cast<std::size_t>(euler_phi(n));
        for (int trial = 0; trial < 1000; ++trial) {
            cyc_z a(n, 0), b(n, 0);
            std::vector<mpz_class> ca(d), cb(d);
            for (std::size_t k = 0; k < d; ++k) {
                ca[k] = dist(rng);
                cb[k] = dist(rng);
            }
            a.set_coeffs(ca);
            b.set_coeffs(cb);
            for (i64 k : {1L, n - 1}) {
                bigcomplex lhs = embed(a * b, k, prec);
                bigcomplex rhs = embed(a, k, prec) * embed(b, k, prec);
                // error measured relative to the magnitude of the product (floor 1)
                long scale = std::max(0L, lhs.abs().exponent());
                bigfloat err = (lhs - rhs).abs();
                CHECK(err.exponent() - scale < -(prec - 16));
                bigfloat err2 = (embed(a + b, k, prec) - embed(a, k, prec) - embed(b, k, prec)).abs();
                CHECK(err2.exponent() - scale < -(prec - 16));
            }
        }
    }
}

TEST_CASE("residue ring and discrete log") {
    zmod a(7, 25);
    CHECK(a.is_unit());
    CHECK((a * a.inverse()).value() == 1);
    CHECK_FALSE(zmod(10, 25).is_unit());
    discrete_log lg(11, 5, 1);
    CHECK(lg(1).value() == 0);
    CHECK(lg(2).value() == 1);
    CHECK(lg(10).value() == 0);
    CHECK_THROWS_AS(discrete_log(11, 3, 1), config_error);
    for (i64 p = 3; p <= 100; ++p) {
        if (!is_prime(p)) continue;
        for (auto [ell, e] : factorize(p - 1)) {
            if (ell < 3) continue;
            discrete_log L(p, ell, e);
            for (i64 x = 1; x < p; ++x)
                for (i64 y = 1; y < p; ++y) CHECK(L(x * y % p) == L(x) + L(y));
        }
    }
}

TEST_CASE("enumerate_by_norm on Z^4") {
    pos_def_lattice z4(identity_qmat(4));
    CHECK(z4.enumerate_by_norm(1).size() == 8);
    CHECK(z4.enumerate_by_norm(2).size() == 24);
    auto zero = z4.enumerate_by_norm(0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0] == ivec{0, 0, 0, 0});
    auto v = z4.enumerate_by_norm(3);
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(boxed_theta({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 2, 2)[2] == 24);
}

TEST_CASE("theta counts agree with boxed search") {
    std::vector<std::vector<std::vector<i64>>> grams = {
        {{2, 1}, {1, 3}},
        {{1, 0, 0}, {0, 2, 1}, {0, 1, 3}},
        {{2, 1, 0, 1}, {1, 2, 1, 0}, {0, 1, 4, 1}, {1, 0, 1, 6}},
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 3, 1}, {0, 0, 1, 3}},
    };
    for (const auto& g : grams) {
        pos_def_lattice L(to_qmat(g));
        auto got = L.theta_counts(50);
        // every vector of norm <= 50 has coordinates bounded by sqrt(50 / lambda_min) <= 10 here
        auto want = boxed_theta(g, 50, g.size() == 4 ? 8 : 12);
        CHECK(got == want);
    }
}

TEST_CASE("non positive definite gram is rejected") {
    CHECK_THROWS(pos_def_lattice(qmat{{1, 2}, {2, 1}}));
}

TEST_CASE("rational lattice basis") {
    std::vector<qvec> gens = {{2, 0}, {0, 3}, {1, frac(3, 2)}};
    qmat b = lattice_basis(gens, 2);
    CHECK(det(b) == 3);
    auto c = coordinates(b, {mpq_class(1), frac(3, 2)});
    CHECK(c[0].get_den() == 1);
    CHECK(c[1].get_den() == 1);
}

TEST_CASE("min_poly_from_roots") {
    auto p1 = min_poly_from_roots({bigcomplex(1.0, 0.0, 128)});
    CHECK(p1.coeffs == std::vector<mpz_class>{-1, 1});
    CHECK(p1.defect == 0);
    auto p2 = min_poly_from_roots({bigcomplex(0.0, 1.0, 128), bigcomplex(0.0, -1.0, 128)});
    CHECK(p2.coeffs == std::vector<mpz_class>{1, 0, 1});
    CHECK(p2.defect < std::ldexp(1.0, -100));
    bigfloat s5 = bigfloat(5.0, 256).sqrt();
    bigfloat half(0.5, 256);
    bigcomplex phi((bigfloat(1.0, 256) + s5) * half, bigfloat(256));
    bigcomplex psi((bigfloat(1.0, 256) - s5) * half, bigfloat(256));
    auto p3 = min_poly_from_roots({phi, psi});
    CHECK(p3.coeffs == std::vector<mpz_class>{-1, -1, 1});
    CHECK_THROWS_AS(min_poly_from_roots({bigcomplex(0.5, 0.0, 64)}), precision_error);
}
