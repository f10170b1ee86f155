#include "doctest.h"
#include "fixtures.hpp"
#include "test_support.hpp"
#include "wavesel/analysis.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace wavesel;

TEST_CASE("chi-square cdf closed forms") {
    CHECK(chi_square_cdf(1, 0.0) == 0.0);
    CHECK(chi_square_cdf(7, 0.0) == 0.0);
    CHECK(chi_square_cdf(1, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-13));
    for (double x = 0.0; x <= 50.0; x += 0.125) {
        CHECK(std::abs(chi_square_cdf(2, x) - (1.0 - std::exp(-x / 2))) < 1e-12);
        CHECK(std::abs(chi_square_cdf(1, x) - std::erf(std::sqrt(x / 2))) < 1e-12);
    }
    CHECK_THROWS_AS(chi_square_cdf(2, -1.0), std::domain_error);
    CHECK_THROWS_AS(chi_square_cdf(0, 1.0), std::domain_error);
}

TEST_CASE("incomplete gamma agrees with Boost.Math") {
    for (double a : {0.5, 1.0, 1.5, 2.0, 3.5, 10.0, 25.0, 100.0}) {
        for (double x : {1e-6, 0.01, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0, 150.0, 400.0}) {
            CHECK(std::abs(regularized_gamma_p(a, x) - boost::math::gamma_p(a, x)) < 1e-12);
        }
    }
}

TEST_CASE("predicted mse") {
    CHECK(predicted_mse(test::fixture_a(), 1.0) == doctest::Approx(900.0 / 361.0).epsilon(1e-14));
    CHECK(predicted_mse(test::fixture_b(), 1.0) == doctest::Approx(900.0 / 269.0).epsilon(1e-14));
    CHECK(predicted_mse(test::fixture_b(), 1.0) == doctest::Approx(3.3457).epsilon(1e-4));
    CHECK(predicted_mse(WavelengthSet({Rational(7)}), 0.5) == doctest::Approx(24.5));
    CHECK(predicted_mse(test::fixture_a(), 0.0) == 0.0);
}

TEST_CASE("the two forms of the upper bound agree") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const IntVector v = test::random_primitive(rng, n, 1, 300);
        const auto ctx = LatticeContext::from_integer_vector(v);
        for (double s2 : {1e-6, 1e-4, 1e-3, 1e-2, 0.1}) {
            const double direct = prob_correct_upper(ctx, s2);
            const double general = ball_probability_upper(static_cast<int>(n - 1), ctx.det_dual(), s2);
            CHECK(std::abs(direct - general) < 1e-12);
        }
    }
}

TEST_CASE("upper bound for the integer set, hand formula") {
    // N = 3: F_2(Gamma(2) / (|v| sigma^2 pi)) = 1 - exp(-1 / (2 * 19 * sigma^2 * pi))
    const auto ctx = build_context(test::fixture_a());
    for (double s2 : {1e-4, 5e-4, 1e-3}) {
        const double expected = 1.0 - std::exp(-1.0 / (2.0 * 19.0 * s2 * std::numbers::pi));
        CHECK(prob_correct_upper(ctx, s2) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("bounds are ordered, monotone and have the right limits") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const IntVector v = test::random_primitive(rng, n, 1, 40);
        const auto ctx = LatticeContext::from_integer_vector(v);
        double prev_up = 2.0, prev_lo = 2.0;
        for (double s2 = 1e-7; s2 < 10.0; s2 *= 3.0) {
            const double up = prob_correct_upper(ctx, s2);
            const double lo = prob_correct_lower(ctx, s2);
            CHECK(lo <= up + 1e-15);
            CHECK(up <= prev_up);
            CHECK(lo <= prev_lo);
            CHECK(up >= 0.0);
            CHECK(lo >= 0.0);
            prev_up = up;
            prev_lo = lo;
        }
        CHECK(prob_correct_upper(ctx, 1e-12) == doctest::Approx(1.0));
        CHECK(prob_correct_lower(ctx, 1e-12) == doctest::Approx(1.0));
        CHECK(prob_correct_upper(ctx, 1e8) < 1e-3);
    }
}

TEST_CASE("lower bound forms") {
    const auto ctx = build_context(test::fixture_a());
    const double rho = 0.5 * std::sqrt(13.0 / 361.0);
    const double s2 = 1e-3;
    CHECK(prob_correct_lower(ctx, s2) == doctest::Approx(chi_square_cdf(2, rho * rho / s2)).epsilon(1e-12));
    CHECK(prob_correct_lower(ctx, s2, InradiusForm::as_printed) ==
          doctest::Approx(chi_square_cdf(2, rho / s2)).epsilon(1e-12));
}

TEST_CASE("single wavelength and predictions") {
    const auto ctx = build_context(WavelengthSet({Rational(5)}));
    CHECK(prob_correct_upper(ctx, 0.1) == 1.0);
    const auto pred = predict_errors(ctx, 0.1);
    CHECK(pred.p_correct_lower == 1.0);
    CHECK(pred.mse_correct == doctest::Approx(2.5));

    const auto ctx_b = build_context(test::fixture_b());
    const auto pb = predict_errors(ctx_b, 1e-4);
    CHECK(pb.sigma_sq == 1e-4);
    CHECK(pb.mse_correct == doctest::Approx(1e-4 * 900.0 / 269.0));
    CHECK(pb.p_correct_lower <= pb.p_correct_upper);
    CHECK_THROWS(prob_correct_upper(ctx_b, 0.0));
    CHECK_THROWS(predict_errors(LatticeContext::from_integer_vector({1, 2}), 1e-3));
}
