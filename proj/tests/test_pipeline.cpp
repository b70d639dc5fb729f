#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hv/pipeline.hpp"
#include "hv/quaternion.hpp"

using namespace hv;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream(path) << text;
    return path;
}

const check_result* find(const report& r, const std::string& prefix) {
    for (const auto& c : r.checks)
        if (c.name.rfind(prefix, 0) == 0) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("config sections and overrides") {
    auto path = write_temp("hv_cfg_test.cfg",
                           "# comment\n"
                           "disc = -23\n"
                           "bound = 20   # trailing comment\n"
                           "[main-identity]\n"
                           "p = 11, 61\n"
                           "ell = 5\n"
                           "[opt-unique]\n"
                           "p = 7,11,17\n");
    verify_config a;
    a.mode = "main-identity";
    load_config(a, path);
    CHECK(a.bound == 20);
    CHECK(effective_primes(a) == std::vector<i64>{11, 61});
    verify_config b;
    b.mode = "opt-unique";
    load_config(b, path);
    CHECK(effective_primes(b) == std::vector<i64>{7, 11, 17});
    verify_config c;
    c.mode = "properties";
    load_config(c, path);
    CHECK(effective_primes(c) == std::vector<i64>{11, 13, 23, 37});

    verify_config d;
    CHECK_THROWS_AS(load_config(d, write_temp("hv_bad1.cfg", "colour = blue\n")), config_error);
    CHECK_THROWS_AS(load_config(d, write_temp("hv_bad2.cfg", "bound = many\n")), config_error);
    CHECK_THROWS_AS(load_config(d, write_temp("hv_bad3.cfg", "bound 3\n")), config_error);
    CHECK_THROWS_AS(load_config(d, "/nonexistent/hv.cfg"), config_error);
}

TEST_CASE("eager validation") {
    verify_config cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.xi_order = 1;
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = {};
    cfg.disc_K = -12;
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = {};
    cfg.xi_order = 5;  // Pic(O) of disc -23 has order 3
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = {};
    cfg.mode = "main-identity";
    cfg.primes = std::vector<i64>{13};
    CHECK_THROWS_AS(validate(cfg), config_error);  // 5 does not divide 12
    cfg.primes = std::vector<i64>{11};
    cfg.lambdas = {5};  // inert in Q(sqrt -23)
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = {};
    cfg.mode = "nonsense";
    CHECK_THROWS_AS(validate(cfg), config_error);
}

TEST_CASE("property suite with an empty prime list skips everything") {
    verify_config cfg;
    cfg.primes = std::vector<i64>{};
    auto r = run_property_suite(cfg);
    CHECK(r.passed());
    REQUIRE_FALSE(r.checks.empty());
    for (const auto& c : r.checks) CHECK(c.status == check_status::skip);
}

TEST_CASE("main identity for disc -23 records the matching conventions") {
    verify_config cfg;
    cfg.mode = "main-identity";
    auto r = verify_main_identity(cfg);
    CHECK(r.passed());
    const auto* c = find(r, "main identity p=11");
    REQUIRE(c != nullptr);
    const auto& m = c->witness["matches"];
    REQUIRE(m.size() > 0);
    for (const auto& x : m) {
        CHECK(x["convention"] == "inverse");
        CHECK(x["normalization"] == "sylow");
    }
    // deterministic apart from timing
    CHECK(verify_main_identity(cfg).to_json(false) == r.to_json(false));
}

TEST_CASE("split p is skipped in main identity") {
    verify_config cfg;
    cfg.mode = "main-identity";
    cfg.primes = std::vector<i64>{11, 31};  // 31 = 1 mod 5, split in Q(sqrt -23)
    auto r = verify_main_identity(cfg);
    const auto* c = find(r, "main identity p=31");
    REQUIRE(c != nullptr);
    if (kronecker(-23, 31) == 1) {
        CHECK(c->status == check_status::skip);
        CHECK(c->detail.find("both sides vanish") != std::string::npos);
    } else {
        CHECK(c->status != check_status::skip);
    }
}

TEST_CASE("a corrupted Brandt entry is detected at the first affected k") {
    auto O = quad_order::make(-23, 1);
    auto G = class_group(O);
    auto xi = characters_of_order(G, 3)[0];
    ring_class_character triv(G, 3, {0, 0, 0});
    auto C = ideal_classes(maximal_order(build_algebra(11)));
    auto iota = iota_map(C, optimal_embedding(O, C), *G);
    auto f = pushforward(C, iota, triv), g = pushforward(C, iota, xi);
    auto T = brandt_all(C, 8);
    auto clean = theta_lift(C, T, f, g, 8);
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < g.size() && !found; ++i)
        for (std::size_t j = 0; j < f.size() && !found; ++j)
            if (!g[i].is_zero() && !f[j].is_zero()) bi = i, bj = j, found = true;
    REQUIRE(found);
    for (i64 n : {1, 3, 7}) {
        auto bad = T;
        bad[static_cast<std::size_t>(n)][bi][bj] += 1;
        auto lifted = theta_lift(C, bad, f, g, 8);
        std::size_t k = 0;
        while (k < lifted.size() && lifted[k] == clean[k]) ++k;
        CHECK(static_cast<i64>(k) == n);
    }

    // through the pipeline: the corrupted run reports a different c_1 at p = 11
    verify_config cfg;
    cfg.mode = "opt-unique";
    cfg.primes = std::vector<i64>{11};
    cfg.bound = 4;
    cfg.fixture_dir = (std::filesystem::temp_directory_path() / "hv_fixture_test").string();
    auto r0 = verify_opt_unique(cfg);
    cfg.corrupt_brandt = {11, 1, static_cast<i64>(bi), static_cast<i64>(bj)};
    auto r1 = verify_opt_unique(cfg);
    const auto *a = find(r0, "theta p=11"), *b = find(r1, "theta p=11");
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(a->witness["c1"] != b->witness["c1"]);
}

TEST_CASE("report json schema") {
    verify_config cfg;
    cfg.primes = std::vector<i64>{11};
    cfg.mass_max = 13;
    auto j = run_property_suite(cfg).to_json();
    CHECK(j.contains("config"));
    CHECK(j.contains("checks"));
    CHECK(j.contains("verdict"));
    CHECK(j.contains("timing_ms"));
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c.contains("status"));
        CHECK(c.contains("witness"));
    }
}
