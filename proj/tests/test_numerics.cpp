#include <doctest.h>

#include <cmath>

#include "spillnet/distributions.hpp"
#include "spillnet/numerics.hpp"
#include "spillnet/optim.hpp"

using namespace spillnet;

TEST_CASE("quantile uses inclusive linear interpolation") {
    CHECK(quantile({1, 2, 3, 4}, 0.75) == doctest::Approx(3.25).epsilon(1e-12));
    CHECK(quantile({1, 2, 3, 4}, 0.0) == doctest::Approx(1.0));
    CHECK(quantile({1, 2, 3, 4}, 1.0) == doctest::Approx(4.0));
    CHECK(quantile({5}, 0.3) == doctest::Approx(5.0));
    CHECK(quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));  // order-free
}

TEST_CASE("expectile reduces to the mean at psi = 0.5") {
    const std::vector<double> x = {0.3, -1.2, 2.4, 0.9, -0.4};
    CHECK(expectile(x, 0.5) == doctest::Approx(mean(x)).epsilon(1e-10));
    const std::vector<double> sym = {-1.0, 1.0};
    CHECK(expectile(sym, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("expectile satisfies its first-order condition") {
    const std::vector<double> x = {1.7, -0.3, 0.2, -2.4, 0.8, 1.1, -0.9, 0.05};
    for (double psi : {0.1, 0.25, 0.7}) {
        const double d = expectile(x, psi);
        double gradient = 0.0;
        for (double v : x) gradient += std::abs(psi - (v < d ? 1.0 : 0.0)) * (v - d);
        CHECK(std::abs(gradient) < 1e-10);
    }
}

TEST_CASE("seed mixing separates nearby salts") {
    CHECK(mix_seed(42, 0) != mix_seed(42, 1));
    CHECK(mix_seed(42, fnv1a64("AXA")) != mix_seed(42, fnv1a64("AGN")));
    CHECK(mix_seed(42, fnv1a64("AXA")) == mix_seed(42, fnv1a64("AXA")));
}

TEST_CASE("innovation densities are standardized to mean zero, unit variance") {
    struct Case {
        InnovationDist dist;
        double shape, skew;
    };
    const std::vector<Case> cases = {
        {InnovationDist::Gaussian, 0.0, 1.0},       {InnovationDist::StudentT, 6.0, 1.0},
        {InnovationDist::GED, 1.4, 1.0},            {InnovationDist::SkewGaussian, 0.0, 1.5},
        {InnovationDist::SkewStudentT, 7.0, 0.8},   {InnovationDist::SkewGED, 1.8, 1.3},
    };
    for (const auto& c : cases) {
        CAPTURE(to_string(c.dist));
        const InnovationDensity density(c.dist, c.shape, c.skew);
        REQUIRE(density.valid());
        const double mass =
            integrate_real_line([&](double z) { return std::exp(density.log_pdf(z)); });
        const double mean_z =
            integrate_real_line([&](double z) { return z * std::exp(density.log_pdf(z)); });
        const double var_z =
            integrate_real_line([&](double z) { return z * z * std::exp(density.log_pdf(z)); });
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(mean_z) < 1e-6);
        CHECK(var_z == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("closed-form absolute moments match quadrature") {
    for (const auto& [dist, shape] :
         {std::pair{InnovationDist::Gaussian, 0.0}, std::pair{InnovationDist::StudentT, 5.0},
          std::pair{InnovationDist::GED, 1.3}}) {
        const InnovationDensity density(dist, shape, 1.0);
        const double numeric = integrate_real_line(
            [&](double z) { return std::abs(z) * std::exp(density.log_pdf(z)); });
        CHECK(density.abs_moment() == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("nelder-mead minimizes a shifted quadratic") {
    auto f = [](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - static_cast<double>(i + 1);
            s += (1.0 + static_cast<double>(i)) * d * d;
        }
        return s;
    };
    auto res = nelder_mead(f, {0.0, 0.0, 0.0});
    REQUIRE(res.converged);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(res.x[1] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(res.x[2] == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("nelder-mead walks out of an infeasible-penalty region") {
    auto f = [](const std::vector<double>& x) {
        if (x[0] < 0.0) return 1e100 * (1.0 - x[0]);
        return (x[0] - 2.0) * (x[0] - 2.0);
    };
    auto res = nelder_mead(f, {0.5});
    CHECK(res.value < 1e-6);
}
