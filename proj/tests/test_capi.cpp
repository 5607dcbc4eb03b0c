// Exercises the shared-library interface exactly as an external C client
// would: statuses, the thread-local error slot, and handle lifecycle.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <doctest.h>

#include "sbm/sbm.h"

TEST_CASE("status names") {
    CHECK(std::string(sbm_status_name(SBM_OK)) == "ok");
    CHECK(std::string(sbm_status_name(SBM_CONFIG_ERROR)) == "config_error");
    CHECK(std::string(sbm_status_name(SBM_NO_CONVERGENCE)) == "no_convergence");
    CHECK(std::string(sbm_version()).size() >= 5);
}

TEST_CASE("closed forms through the C surface") {
    double v = 0.0;
    double x[2] = {0.0, 0.0};
    double y[2] = {0.0, 0.0};
    REQUIRE(sbm_heat_kernel(1.0, x, y, 1, &v) == SBM_OK);
    CHECK(v == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    y[0] = 1.0;
    REQUIRE(sbm_heat_kernel(1.0, x, y, 1, &v) == SBM_OK);
    CHECK(v == doctest::Approx(0.24197072451914337).epsilon(1e-15));

    REQUIRE(sbm_constant_solution(1.0, 1.0, 0.5, &v) == SBM_OK);
    CHECK(v == doctest::Approx(2.25).epsilon(1e-15));
    REQUIRE(sbm_constant_solution(1.0, 1.0, 0.9, &v) == SBM_OK);
    CHECK(v == doctest::Approx(2.5937424601000023).epsilon(1e-14));

    REQUIRE(sbm_explosion_cdf(1.0, 0.5, 1.0, &v) == SBM_OK);
    CHECK(v == doctest::Approx(0.22119921692859512).epsilon(1e-15));
    REQUIRE(sbm_explosion_sample(1.0, 0.5, std::exp(-1.0), &v) == SBM_OK);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(sbm_survival_laplace(1.0, 1.0, 0.5, 1.0, &v) == SBM_OK);
    CHECK(v == doctest::Approx(0.10539922456186433).epsilon(1e-15));
    // a = 0 reduces to the survival probability
    double s = 0.0;
    REQUIRE(sbm_survival_laplace(0.0, 1.0, 0.5, 1.0, &s) == SBM_OK);
    double f = 0.0;
    REQUIRE(sbm_explosion_cdf(1.0, 0.5, 1.0, &f) == SBM_OK);
    CHECK(s == doctest::Approx(1.0 - f).epsilon(1e-15));
}

TEST_CASE("domain violations set the error slot and leave output untouched") {
    double v = -7.0;
    CHECK(sbm_constant_solution(1.0, 1.0, 1.5, &v) == SBM_DOMAIN_ERROR);
    CHECK(v == -7.0);
    CHECK(std::string(sbm_last_error()).find("gamma") != std::string::npos);
    CHECK(sbm_explosion_cdf(-1.0, 0.5, 1.0, &v) == SBM_DOMAIN_ERROR);
    CHECK(sbm_explosion_sample(1.0, 0.5, 1.5, &v) == SBM_DOMAIN_ERROR);
    CHECK(sbm_heat_kernel(0.0, nullptr, nullptr, 1, &v) == SBM_DOMAIN_ERROR);
    CHECK(sbm_constant_solution(1.0, 1.0, 0.5, nullptr) == SBM_DOMAIN_ERROR);

    // a success clears the slot
    CHECK(sbm_constant_solution(1.0, 1.0, 0.5, &v) == SBM_OK);
    CHECK(std::string(sbm_last_error()).empty());
}

TEST_CASE("experiment handles parse, describe, and reject bad input") {
    sbm_experiment* e = nullptr;
    REQUIRE(sbm_experiment_parse("[model]\ngamma = 0.6\n", "inline", &e) == SBM_OK);
    REQUIRE(e != nullptr);

    CHECK(sbm_experiment_set_seed(e, 12345) == SBM_OK);

    size_t needed = 0;
    REQUIRE(sbm_experiment_describe(e, nullptr, 0, &needed) == SBM_OK);
    REQUIRE(needed > 0);
    std::vector<char> buf(needed + 1);
    REQUIRE(sbm_experiment_describe(e, buf.data(), buf.size(), nullptr) == SBM_OK);
    std::string text(buf.data());
    CHECK(text.size() == needed);
    CHECK(text.find("gamma = 0.59999999999999998") != std::string::npos);
    CHECK(text.find("seed = 12345") != std::string::npos);
    sbm_experiment_free(e);

    sbm_experiment* bad = reinterpret_cast<sbm_experiment*>(0x1);
    CHECK(sbm_experiment_parse("[model]\ngamma = 2\n", nullptr, &bad) == SBM_CONFIG_ERROR);
    CHECK(bad == nullptr);  // cleared on failure
    CHECK(std::string(sbm_last_error()).find("gamma") != std::string::npos);

    CHECK(sbm_experiment_load("/definitely/not/here.ini", &bad) != SBM_OK);
    CHECK(sbm_experiment_set_seed(nullptr, 1) == SBM_CONFIG_ERROR);
    sbm_experiment_free(nullptr);  // must be a no-op
}

TEST_CASE("describe truncates politely into small buffers") {
    sbm_experiment* e = nullptr;
    REQUIRE(sbm_experiment_parse("", nullptr, &e) == SBM_OK);
    char tiny[8];
    std::memset(tiny, 'x', sizeof tiny);
    REQUIRE(sbm_experiment_describe(e, tiny, sizeof tiny, nullptr) == SBM_OK);
    CHECK(tiny[7] == '\0');
    CHECK(std::strlen(tiny) == 7);
    sbm_experiment_free(e);
}
