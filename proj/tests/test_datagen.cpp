#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "projstat/datagen.hpp"
#include "projstat/error.hpp"
#include "projstat/hypotest.hpp"

using namespace projstat;

namespace {

double column_mean(const Sample& s, std::size_t i) {
    double m = 0.0;
    for (const auto& r : s.rows) m += r[i];
    return m / static_cast<double>(s.size());
}

// Cross-product ratio of the (i, j) margin, summed directly over the table.
double table_odds_ratio(const JointPmf& p, std::size_t i, std::size_t j) {
    double c[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t cell = 0; cell < p.probs.size(); ++cell) c[cell >> i & 1U][cell >> j & 1U] += p.probs[cell];
    return c[1][1] * c[0][0] / (c[1][0] * c[0][1]);
}

}  // namespace

TEST_CASE("independent Bernoulli") {
    Rng rng(1);
    for (const auto& r : gen_independent_bernoulli(6, 0.0, 50, rng).rows)
        for (double v : r) CHECK(v == 0.0);
    for (const auto& r : gen_independent_bernoulli(6, 1.0, 50, rng).rows)
        for (double v : r) CHECK(v == 1.0);
    auto s = gen_independent_bernoulli(5, 0.5, 10000, rng);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(column_mean(s, i) - 0.5) <= 0.02);
    CHECK_THROWS(gen_independent_bernoulli(3, 1.5, 10, rng));
}

TEST_CASE("equicorrelated Bernoulli") {
    Rng rng(2);
    const std::size_t n = 100000;
    auto s = gen_equicorrelated_bernoulli(4, 0.5, 0.5, n, rng);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(column_mean(s, i) - 0.5) <= 3 * 0.5 / std::sqrt(double(n)));
        for (std::size_t j = i + 1; j < 4; ++j) {
            const auto [r, se] = oracle::correlation_with_se(s, i, j);
            CHECK(std::abs(r - 0.5) <= 3 * se);
        }
    }

    auto ind = gen_equicorrelated_bernoulli(3, 0.3, 0.0, n, rng);
    const auto [r0, se0] = oracle::correlation_with_se(ind, 0, 1);
    CHECK(std::abs(r0) <= 3 * se0);
    CHECK(std::abs(column_mean(ind, 2) - 0.3) <= 3 * std::sqrt(0.21 / double(n)));

    // Exact table: Z shared with probability sqrt(rho) per coordinate.
    const double q = 0.3, rho = 0.4, u = std::sqrt(rho);
    auto pmf = equicorrelated_pmf(3, q, rho);
    for (std::size_t cell = 0; cell < 8; ++cell) {
        double expect = 0.0;
        for (int z = 0; z < 2; ++z) {
            double p = z ? q : 1 - q;
            for (std::size_t i = 0; i < 3; ++i) {
                const int x = cell >> i & 1U;
                const double one = u * z + (1 - u) * q;
                p *= x ? one : 1 - one;
            }
            expect += p;
        }
        CHECK(pmf.probs[cell] == doctest::Approx(expect).epsilon(1e-12));
    }
    const double cov = pmf.pair(0, 1, 1, 1) - q * q;
    CHECK(cov / (q * (1 - q)) == doctest::Approx(rho).epsilon(1e-12));
}

TEST_CASE("Plackett 2x2") {
    CHECK(plackett_2x2(0.3, 0.6, 1.0) == doctest::Approx(0.18));
    for (double g : {0.2, 3.0, 17.0}) {
        const double a = 0.4, b = 0.7, p11 = plackett_2x2(a, b, g);
        const double p10 = a - p11, p01 = b - p11, p00 = 1 - a - b + p11;
        CHECK(std::abs(p11 * p00 / (p10 * p01) - g) < 1e-10 * g);
        CHECK(p10 >= 0);
        CHECK(p00 >= 0);
    }
    CHECK(plackett_2x2(0.5, 0.5, 1e12) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("odds-ratio joint by IPF") {
    CHECK(gen_odds_ratio_joint(5, 1.0).iterations == 0);

    auto two = gen_odds_ratio_joint(2, 3.0);
    const double p11 = plackett_2x2(0.5, 0.5, 3.0);
    CHECK(two.pmf.probs[3] == doctest::Approx(p11).epsilon(1e-8));
    CHECK(two.pmf.probs[0] == doctest::Approx(p11).epsilon(1e-8));

    auto eight = gen_odds_ratio_joint(8, 2.0);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(eight.pmf.margin(i) - 0.5) <= 1e-8);
        for (std::size_t j = i + 1; j < 8; ++j) CHECK(std::abs(table_odds_ratio(eight.pmf, i, j) - 2.0) <= 1e-3);
    }
    CHECK(std::accumulate(eight.pmf.probs.begin(), eight.pmf.probs.end(), 0.0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(gen_odds_ratio_joint(8, 2.0, 1, 1e-14), NumericalError);
}

TEST_CASE("sampling from a table") {
    Rng rng(3);
    auto s = sample_from_pmf(JointPmf::uniform(3), 100000, rng);
    std::vector<double> freq(8, 0.0);
    for (const auto& r : s.rows) freq[static_cast<std::size_t>(r[0] + 2 * r[1] + 4 * r[2])] += 1e-5;
    for (double f : freq) CHECK(std::abs(f - 0.125) <= 0.01);

    JointPmf delta{3, std::vector<double>(8, 0.0)};
    delta.probs[5] = 1.0;
    for (const auto& r : sample_from_pmf(delta, 100, rng).rows) CHECK(r == Point{1, 0, 1});

    Rng a(11), b(11);
    CHECK(sample_from_pmf(JointPmf::uniform(4), 30, a).rows == sample_from_pmf(JointPmf::uniform(4), 30, b).rows);
}

TEST_CASE("Poisson-Binomial parameters") {
    Rng rng(4);
    auto q = gen_poisson_binomial_params(10000, 2.0, 2.0, rng);
    CHECK(std::abs(std::accumulate(q.begin(), q.end(), 0.0) / 1e4 - 0.5) <= 0.02);
    auto skew = gen_poisson_binomial_params(10000, 1.0, 3.0, rng);
    CHECK(std::abs(std::accumulate(skew.begin(), skew.end(), 0.0) / 1e4 - 0.25) <= 0.02);
    for (double x : gen_poisson_binomial_params(100, 1.0, 1e8, rng)) CHECK(x < 1e-5);
    Rng a(5), b(5);
    CHECK(gen_poisson_binomial_params(20, 2, 3, a) == gen_poisson_binomial_params(20, 2, 3, b));
    CHECK_THROWS(gen_poisson_binomial_params(5, 0.0, 1.0, rng));
}

TEST_CASE("uniform simplex") {
    Rng rng(6);
    CHECK(sample_simplex_uniform(1, rng) == std::vector<double>{1.0});
    std::vector<double> mean(7, 0.0);
    for (int t = 0; t < 20000; ++t) {
        auto p = sample_simplex_uniform(7, rng);
        CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(p[i] > 0.0);
            mean[i] += p[i] / 20000;
        }
    }
    // Var of a Dirichlet(1,...,1) mass is (m-1)/(m^2 (m+1)).
    const double sd = std::sqrt(6.0 / (49.0 * 8.0) / 20000);
    for (double m : mean) CHECK(std::abs(m - 1.0 / 7) <= 4 * sd);
}

TEST_CASE("simplex measure of near-binomial sum laws") {
    const std::size_t d = 10, draws = 10000;
    const auto binom = binomial_pmf_vector(d, 0.5);
    const std::vector<double> eps{0.15, 0.2, 0.3};
    std::vector<std::size_t> close(eps.size(), 0);
    Rng rng(7);
    for (std::size_t t = 0; t < draws; ++t) {
        auto p = sample_simplex_uniform(std::size_t{1} << d, rng);
        std::vector<double> law(d + 1, 0.0);
        for (std::size_t c = 0; c < p.size(); ++c) law[static_cast<std::size_t>(std::popcount(c))] += p[c];
        double gap = 0.0;
        for (std::size_t k = 0; k <= d; ++k) gap = std::max(gap, std::abs(law[k] - binom[k]));
        for (std::size_t e = 0; e < eps.size(); ++e) close[e] += gap <= eps[e];
    }
    for (std::size_t e = 0; e < eps.size(); ++e) {
        const double bound = chevallier_bound(d, eps[e]);
        REQUIRE(bound > 0.0);
        REQUIRE(bound < 1.0);
        CHECK(static_cast<double>(close[e]) / draws >= bound);
    }
}
