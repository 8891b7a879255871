#include <doctest.h>

#include "rodsim/config.hpp"

using namespace rodsim;

TEST_CASE("empty config yields the physical defaults") {
    const RunConfig cfg = parse_config_text("");
    CHECK(cfg.youngs_modulus_pa == doctest::Approx(1.2e6));
    CHECK(cfg.dt_s == doctest::Approx(0.01));
    CHECK(cfg.tail_radius_m == doctest::Approx(0.0032));
    CHECK(cfg.tail_length_m == doctest::Approx(0.111));
    CHECK(cfg.head_radius_m == doctest::Approx(0.02));
    CHECK(cfg.density_kg_m3 == doctest::Approx(1000.0));
    CHECK(cfg.poisson_ratio == doctest::Approx(0.5));
    CHECK(cfg.c1 == doctest::Approx(2.420));
    CHECK(cfg.c2 == doctest::Approx(0.039));
    CHECK(cfg.mu_pa_s == doctest::Approx(6.828));
    CHECK(cfg.n == 2);
    CHECK(cfg.target_edge_length_m == doctest::Approx(4.11e-3));
}

TEST_CASE("config conversions: solver tolerance derives from the tail stiffness") {
    const RunConfig cfg = parse_config_text("");
    const SolverConfig solver = cfg.solver_config();
    const double ea = 1.2e6 * M_PI * 0.0032 * 0.0032;
    CHECK(solver.newton_tolerance == doctest::Approx(1e-9 * ea));
    CHECK(solver.max_newton_iterations == 50);

    const RunConfig pinned = parse_config_text("newton_tolerance_n: 1e-7");
    CHECK(pinned.solver_config().newton_tolerance == doctest::Approx(1e-7));
}

TEST_CASE("negative control parameter is rejected with the key name") {
    try {
        parse_config_text("omega_T_rpm: -5");
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("omega_T_rpm") != std::string::npos);
    }
}

TEST_CASE("unknown keys and malformed lines are rejected with location info") {
    CHECK_THROWS_AS(parse_config_text("no_such_key: 3"), ConfigError);
    try {
        parse_config_text("n: 2\nnot a key value pair\n", "test.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("test.cfg:2") != std::string::npos);
    }
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    const std::string text =
        "n: 3\n"
        "omega_T_rpm: 175.5\n"
        "duration_s: 42\n"
        "mu_pa_s: 5.5\n"
        "sweep.n_list: 2, 3\n"
        "sweep.omega_T_rpm_list: 60, 105.5, 250\n"
        "parallelism: 4\n";
    const RunConfig once = parse_config_text(text);
    const std::string serialized = serialize_config(once);
    const RunConfig twice = parse_config_text(serialized);
    CHECK(serialize_config(twice) == serialized);
    CHECK(twice.n == 3);
    CHECK(twice.sweep_omega_T_rpm_list.size() == 3);
    CHECK(twice.sweep_omega_T_rpm_list[1] == doctest::Approx(105.5));
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfig cfg = parse_config_text("# a comment\n\nn: 4  # trailing comment\n");
    CHECK(cfg.n == 4);
}

TEST_CASE("missing config file reports a descriptive error") {
    CHECK_THROWS_AS(parse_config("/nonexistent/rodsim.cfg"), ConfigError);
}
