#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eml/exp.hpp"

using namespace eml;

TEST_CASE("reduce-evaluate-square reference matches exp(-u)") {
    ExpConfig cfg;  // u_max=32, k=6, d=8
    // analytic truncation bound: 2^k * (u_max/2^k)^(d+1) / (d+1)!
    const double bound = cfg.analytic_bound();
    CHECK(bound < 4e-7);
    for (double u = 0.0; u <= 32.0; u += 0.173) {
        double got = exp_neg_reference(u, cfg);
        CHECK(std::fabs(got - std::exp(-u)) <= bound);
    }
}

TEST_CASE("tighter configs shrink the truncation error") {
    // the default config sits at the double noise floor, so ordering is only
    // visible from a deliberately coarse starting point (segment length 2)
    ExpConfig coarse{32, 4, 8};
    ExpConfig deeper{32, 4, 12};
    ExpConfig finer{32, 5, 8};
    double e_coarse = 0, e_deeper = 0, e_finer = 0;
    for (double u = 0.0; u <= 32.0; u += 0.0311) {
        e_coarse = std::max(e_coarse, std::fabs(exp_neg_reference(u, coarse) - std::exp(-u)));
        e_deeper = std::max(e_deeper, std::fabs(exp_neg_reference(u, deeper) - std::exp(-u)));
        e_finer = std::max(e_finer, std::fabs(exp_neg_reference(u, finer) - std::exp(-u)));
    }
    CHECK(e_coarse > 1e-11);  // the coarse error is real, not noise
    CHECK(e_coarse < 1e-9);
    CHECK(e_deeper < e_coarse / 100);
    CHECK(e_finer < e_coarse / 100);
    CHECK(e_coarse <= coarse.analytic_bound());
}

TEST_CASE("coefficient table is the inverse-factorial ladder") {
    auto c = taylor_coefficients(8);
    REQUIRE(c.size() == 9);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 1.0);
    CHECK(c[2] == 0.5);
    CHECK(c[8] == doctest::Approx(1.0 / 40320.0).epsilon(1e-15));
}
