#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hv/arith.hpp"
#include "hv/bigcomplex.hpp"

namespace hv {

struct verify_config {
    std::string mode = "properties";  // opt-unique | main-identity | properties
    i64 disc_K = -23;
    i64 c = 1;
    i64 xi_order = 3;
    int xi_index = 0;
    std::optional<std::vector<i64>> primes;  // unset: the mode default
    i64 ell = 5;
    int t = 1;
    i64 bound = 50;
    mpfr_prec_t prec = 0;      // 0: adaptive
    std::vector<i64> lambdas;  // empty: three smallest split primes
    i64 mass_max = 61;         // property suite range for the mass formula
    int twist = -1;            // sign on the second index of the direct optimal form
    std::string fixture_dir = "hv_fixtures";
    std::vector<i64> corrupt_brandt;  // p, n, i, j: add 1 to B(n)_ij at p (sensitivity runs)
};

/// Reads "key = value" lines; "[section]" headers restrict the following keys
/// to cfg.mode of that name ("[general]" applies always). Throws config_error.
void load_config(verify_config& cfg, const std::string& path);
/// Applies one key; the same names as the config file.
void set_config_key(verify_config& cfg, const std::string& key, const std::string& value);
/// Eager precondition checks with actionable messages (config_error).
void validate(const verify_config& cfg);
std::vector<i64> effective_primes(const verify_config& cfg);
nlohmann::json config_json(const verify_config& cfg);

enum class check_status { pass, fail, skip };
const char* status_name(check_status s);

struct check_result {
    std::string name;
    check_status status = check_status::skip;
    std::string detail;
    nlohmann::json witness = nlohmann::json::object();
    double ms = 0;
};

struct report {
    nlohmann::json config;
    std::vector<check_result> checks;
    bool passed() const;  // no failed check
    nlohmann::json to_json(bool with_timing = true) const;
    void print_summary(std::ostream& os) const;
};

report verify_opt_unique(const verify_config& cfg);
report verify_main_identity(const verify_config& cfg);
report run_property_suite(const verify_config& cfg);

/// Individual checks, shared by the property suite and the acceptance run.
check_result check_mass(i64 p_lo, i64 p_hi);
check_result check_brandt_structure(const std::vector<i64>& ps, i64 N);
check_result check_pairing_anchors(i64 disc_K, i64 c, i64 xi_order, i64 p);
check_result check_constant_term(i64 disc_K, i64 c, i64 xi_order, const std::vector<i64>& ps);
check_result check_lambda_independence(i64 disc_K, i64 c, i64 xi_order, int count, mpfr_prec_t prec);
check_result check_minpoly(i64 disc_K, i64 c, i64 lambda);
check_result check_sigma1_aux(i64 p, i64 ell, int t, i64 disc_K, i64 c, i64 xi_order);
check_result check_theta_fixtures(i64 N);

}  // namespace hv
