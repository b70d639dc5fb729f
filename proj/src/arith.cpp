#include "hv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace hv {

i64 gcd(i64 a, i64 b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        i64 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

i64 pow_mod(i64 base, u64 e, i64 m) {
    if (m == 1) return 0;
    i64 r = 1;
    i64 b = mod(base, m);
    while (e != 0) {
        if (e & 1U) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1U;
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 old_r = mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) throw config_error("inv_mod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
    return mod(old_s, m);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d : {2, 3, 5, 7, 11, 13}) {
        if (n % d == 0) return n == d;
    }
    for (i64 d = 17; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n < 0) n = -n;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> out{1};
    for (auto [q, e] : factorize(n)) {
        std::size_t cur = out.size();
        i64 pw = 1;
        for (int k = 1; k <= e; ++k) {
            pw *= q;
            for (std::size_t i = 0; i < cur; ++i) out.push_back(out[i] * pw);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [q, e] : factorize(n)) r = r / q * (q - 1);
    return r;
}

int kronecker(i64 a, i64 n) {
    if (n <= 0) throw std::invalid_argument("kronecker: n must be positive");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        i64 am8 = mod(a, 8);
        if (am8 % 2 == 0) return 0;
        if (am8 == 3 || am8 == 5) result = -result;
    }
    // Jacobi symbol for odd n
    a = mod(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int valuation(i64 n, i64 p) {
    if (n == 0) return 1 << 20;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

i64 int_pow(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

i64 sigma_prime_to(i64 n, i64 p) {
    i64 s = 0;
    for (i64 d : divisors(n)) {
        if (d % p != 0) s += d;
    }
    return s;
}

i64 next_prime(i64 n) {
    i64 c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

i64 smallest_primitive_root(i64 p) {
    if (p == 2) return 1;
    auto fs = factorize(p - 1);
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [q, e] : fs) {
            if (pow_mod(g, static_cast<u64>((p - 1) / q), p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw internal_error("no primitive root found");
}

std::pair<i64, int> prime_power(i64 n) {
    auto fs = factorize(n);
    if (fs.size() == 1) return fs.front();
    return {1, 0};
}

zmod to_zmod(const mpq_class& q, i64 modulus) {
    mpz_class num = q.get_num() % modulus;
    mpz_class den = q.get_den() % modulus;
    zmod n(num.get_si(), modulus);
    zmod d(den.get_si(), modulus);
    if (!d.is_unit()) throw config_error("rational " + q.get_str() + " has denominator not invertible mod " + std::to_string(modulus));
    return n * d.inverse();
}

discrete_log::discrete_log(i64 p, i64 ell, int t) : p_(p), ell_(ell), t_(t) {
    if (!is_prime(p)) throw config_error("discrete_log: p=" + std::to_string(p) + " is not prime");
    if (!is_prime(ell)) throw config_error("discrete_log: ell=" + std::to_string(ell) + " is not prime");
    if (t < 1) throw config_error("discrete_log: t must be positive");
    mod_ = int_pow(ell, t);
    if ((p - 1) % mod_ != 0) {
        throw config_error("discrete_log: ell^t=" + std::to_string(mod_) + " does not divide p-1=" + std::to_string(p - 1));
    }
    g_ = smallest_primitive_root(p);
    step_ = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(p - 1))));
    baby_.reserve(static_cast<std::size_t>(step_));
    i64 cur = 1;
    for (i64 j = 0; j < step_; ++j) {
        baby_.emplace_back(cur, j);
        cur = mul_mod(cur, g_, p);
    }
    std::sort(baby_.begin(), baby_.end());
}

i64 discrete_log::full(i64 x) const {
    x = mod(x, p_);
    if (x == 0) throw config_error("discrete_log: log of zero");
    i64 giant = inv_mod(pow_mod(g_, static_cast<u64>(step_), p_), p_);
    i64 cur = x;
    for (i64 i = 0; i <= step_; ++i) {
        auto it = std::lower_bound(baby_.begin(), baby_.end(), std::make_pair(cur, i64{0}));
        if (it != baby_.end() && it->first == cur) return mod(i * step_ + it->second, p_ - 1);
        cur = mul_mod(cur, giant, p_);
    }
    throw internal_error("discrete_log: BSGS failed");
}

zmod discrete_log::operator()(i64 x) const { return {full(x), mod_}; }

}  // namespace hv
