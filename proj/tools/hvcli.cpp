#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hv/pipeline.hpp"
#include "hv/quaternion.hpp"
#include "hv/units.hpp"

using namespace hv;

namespace {

struct flags {
    std::string config, json_out;
    std::optional<i64> disc, cond, xi_order, ell, bound;
    std::optional<int> t;
    std::optional<long> prec;
    std::vector<i64> p;
};

void add_common(CLI::App* app, flags& f) {
    app->add_option("--config", f.config, "config file (key = value, [section] per mode)");
    app->add_option("--disc", f.disc, "fundamental discriminant of K");
    app->add_option("--cond", f.cond, "conductor c of O_c");
    app->add_option("--xi-order", f.xi_order, "order of the ring class character xi");
    app->add_option("--p", f.p, "primes p (repeat or comma separated)")->delimiter(',');
    app->add_option("--ell", f.ell, "prime ell >= 5");
    app->add_option("--t", f.t, "exponent t, ell^t | p - 1");
    app->add_option("--bound", f.bound, "truncation bound");
    app->add_option("--prec", f.prec, "working precision in bits (0: adaptive)");
    app->add_option("--json", f.json_out, "write the JSON report here");
}

verify_config build_config(const std::string& mode, const flags& f) {
    verify_config cfg;
    cfg.mode = mode;
    if (!f.config.empty()) load_config(cfg, f.config);
    cfg.mode = mode;
    if (f.disc) cfg.disc_K = *f.disc;
    if (f.cond) cfg.c = *f.cond;
    if (f.xi_order) cfg.xi_order = *f.xi_order;
    if (!f.p.empty()) cfg.primes = f.p;
    if (f.ell) cfg.ell = *f.ell;
    if (f.t) cfg.t = *f.t;
    if (f.bound) cfg.bound = *f.bound;
    if (f.prec) cfg.prec = static_cast<mpfr_prec_t>(*f.prec);
    return cfg;
}

void emit(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

int finish(const report& r, const flags& f) {
    r.print_summary(std::cout);
    emit(f.json_out, r.to_json());
    return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hvcli: optimal forms, theta lifts, Eisenstein elements and elliptic units"};
    app.require_subcommand(1);
    flags f;

    auto* verify = app.add_subcommand("verify", "run a verification pipeline");
    verify->require_subcommand(1);
    auto* opt = verify->add_subcommand("opt-unique", "reconstruct and cross-check the optimal form against Theta_p");
    auto* main_id = verify->add_subcommand("main-identity", "compare <Sigma_1,[xi]> with regulators of elliptic units");
    auto* props = app.add_subcommand("properties", "run the invariant suites");
    auto* dump = app.add_subcommand("dump", "write intermediate objects");
    dump->require_subcommand(1);
    auto* dbrandt = dump->add_subcommand("brandt", "Brandt matrices B(1..bound) as CSV");
    auto* dunits = dump->add_subcommand("units", "elliptic unit packet as JSON");
    i64 lambda = 0;
    int choice = 0;
    dunits->add_option("--lambda", lambda, "split prime lambda (default: smallest)");
    dunits->add_option("--choice", choice, "which prime above lambda (0 or 1)");
    for (auto* s : {opt, main_id, props, dbrandt, dunits}) add_common(s, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*opt) return finish(verify_opt_unique(build_config("opt-unique", f)), f);
        if (*main_id) return finish(verify_main_identity(build_config("main-identity", f)), f);
        if (*props) return finish(run_property_suite(build_config("properties", f)), f);
        if (*dbrandt) {
            auto cfg = build_config("properties", f);
            if (!cfg.primes || cfg.primes->empty()) throw config_error("dump brandt needs --p");
            nlohmann::json j = nlohmann::json::array();
            for (i64 p : *cfg.primes) {
                if (p < 2 || !is_prime(p)) throw config_error("p must be prime");
                auto C = ideal_classes(maximal_order(build_algebra(p)));
                auto T = brandt_all(C, cfg.bound);
                for (i64 n = 1; n <= cfg.bound; ++n) {
                    write_brandt_csv(std::cout, C, n, T[static_cast<std::size_t>(n)]);
                    j.push_back({{"p", p}, {"n", n}, {"weights", C.weights}, {"matrix", T[static_cast<std::size_t>(n)]}});
                }
            }
            emit(f.json_out, j);
            return 0;
        }
        if (*dunits) {
            auto cfg = build_config("main-identity", f);
            auto O = quad_order::make(cfg.disc_K, cfg.c);
            if (lambda == 0) lambda = split_primes(O, 1).front();
            auto P = cfg.prec > 0 ? elliptic_unit_conjugates(O, lambda, choice, cfg.prec)
                                  : elliptic_unit_conjugates(O, lambda, choice);
            write_packet_json(std::cout, P);
            if (!f.json_out.empty()) {
                std::ofstream out(f.json_out);
                write_packet_json(out, P);
            }
            return 0;
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
