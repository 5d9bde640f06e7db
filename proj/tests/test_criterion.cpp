#include <vector>

#include "doctest.h"
#include "fracid/criterion.hpp"
#include "test_helpers.hpp"

using fracid::approximation_criterion;
using helpers::make_series;

TEST_SUITE("approximation_criterion") {

TEST_CASE("identical series score zero") {
    const auto series = make_series(0.1, {0.4, -1.0, 2.5, 0.0});
    CHECK(approximation_criterion(series, series) == 0.0);
}

TEST_CASE("constant offset of one scores one") {
    const auto ones = make_series(0.2, std::vector<double>(5, 1.0));
    const auto zeros = make_series(0.2, std::vector<double>(5, 0.0));
    CHECK(approximation_criterion(ones, zeros) == doctest::Approx(1.0));
}

TEST_CASE("mean of squared deviations") {
    const auto experimental = make_series(0.5, {0.0, 1.0, 2.0});
    const auto modeled = make_series(0.5, {0.0, 0.0, 0.0});
    CHECK(approximation_criterion(experimental, modeled) ==
          doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mismatched series are rejected") {
    const auto series = make_series(0.1, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(approximation_criterion(series, make_series(0.1, {1.0, 2.0})),
                    fracid::LengthMismatch);
    CHECK_THROWS_AS(approximation_criterion(series, make_series(0.2, {1.0, 2.0, 3.0})),
                    fracid::LengthMismatch);
}

}  // TEST_SUITE
