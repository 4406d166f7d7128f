#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "projstat/classify.hpp"
#include "projstat/datagen.hpp"
#include "projstat/experiments.hpp"

using namespace projstat;

TEST_CASE("distance kind names") {
    for (auto k : {DistanceKind::W1, DistanceKind::KS, DistanceKind::CVM, DistanceKind::TV})
        CHECK(parse_distance_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_distance_kind("l2"), std::invalid_argument);
}

TEST_CASE("fitting") {
    Sample one{{{0, 1}, {1, 1}}, {0, 0}};
    auto m = fit_rp(one, {Direction({1, 0})});
    REQUIRE(m.num_classes() == 1);
    CHECK(m.priors[0] == 1.0);

    Sample two{{{0, 1}, {1, 0}}, {0, 1}};
    auto m2 = fit_rp(two, {Direction({1, 0}), Direction({0, 1})});
    CHECK(m2.per_class_proj[0][0].size() == 1);
    CHECK(m2.per_class_proj[1][1].size() == 1);

    Rng rng(2);
    auto data = gen_independent_bernoulli(4, 0.5, 60, rng);
    for (std::size_t i = 0; i < data.size(); ++i) data.labels.push_back(static_cast<int>(i % 3));
    const auto dirs = random_directions(4, 5, rng);
    auto fitted = fit_rp(data, dirs);
    for (int l = 0; l < 3; ++l)
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            std::vector<double> vals;
            for (std::size_t i = 0; i < data.size(); ++i)
                if (data.labels[i] == l) vals.push_back(dirs[j].dot(data.rows[i]));
            auto ref = DiscreteMeasure::from_values(vals);
            CHECK(tv_distance(ref, fitted.per_class_proj[l][j]) < 1e-12);
        }

    Sample gap{{{0}, {1}}, {0, 2}};
    CHECK_THROWS_AS(fit_rp(gap, {Direction({1})}), std::invalid_argument);
}

TEST_CASE("random projection rule") {
    Sample s{{{0, 0}, {0, 0}, {3, 3}, {3, 3}}, {0, 0, 1, 1}};
    auto m = fit_rp(s, {Direction({1, 2}), Direction({2, -1})}, DistanceKind::W1);
    CHECK(predict_rp(m, {3, 3}) == 1);
    CHECK(predict_rp(m, {0, 0}) == 0);

    Sample sym{{{0.0}, {1.0}}, {0, 1}};
    // CvM weights the CDF gap by the pooled masses, so it is not reflection invariant.
    for (auto k : {DistanceKind::W1, DistanceKind::KS, DistanceKind::TV}) {
        auto ms = fit_rp(sym, {Direction({1})}, k);
        CHECK(predict_rp(ms, {0.5}) == 0);
    }

    // TV between P and its add-one-point version is (1 - P({y})) / (n + 1).
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 3 + t % 4;
        auto data = gen_independent_bernoulli(d, 0.5, 30 + t % 7, rng);
        for (std::size_t i = 0; i < data.size(); ++i) data.labels.push_back(i % 3 == 0 ? 1 : 0);
        auto dirs = random_directions(d, 4, rng);
        auto model = fit_rp(data, dirs, DistanceKind::TV);
        Point x(d);
        std::bernoulli_distribution b(0.5);
        for (auto& v : x) v = b(rng);
        auto scores = rp_scores(model, x);
        std::vector<double> closed(2, 0.0);
        for (int l = 0; l < 2; ++l) {
            const double n = static_cast<double>(model.class_counts[l]);
            for (std::size_t j = 0; j < dirs.size(); ++j) {
                const double mass = model.per_class_proj[l][j].mass_at(Point{dirs[j].dot(x)});
                closed[l] = std::max(closed[l], (1.0 - mass) / (n + 1.0));
            }
            CHECK(scores[l] == doctest::Approx(closed[l]).epsilon(1e-12));
        }
        CHECK(predict_rp(model, x) == (closed[1] < closed[0] ? 1 : 0));
    }
}

TEST_CASE("add-one-point total variation rule") {
    Sample s{{{0, 0}, {0, 0}, {1, 1}, {1, 0}}, {0, 0, 1, 1}};
    auto m = fit_full(s);
    CHECK(predict_addpoint_tv(m, {1, 1}) == 1);
    CHECK(predict_addpoint_tv(m, {0, 0}) == 0);
    CHECK(predict_addpoint_tv(m, {0, 1}) == 0);

    Sample same{{{0}, {1}, {0}, {1}}, {0, 0, 1, 1}};
    CHECK(predict_addpoint_tv(fit_full(same), {0}) == 0);

    Sample three{{{0}, {1}, {2}}, {0, 1, 2}};
    CHECK_THROWS_AS(predict_addpoint_tv(fit_full(three), {0}), std::invalid_argument);

    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        auto data = gen_independent_bernoulli(3, 0.4, 20 + t % 11, rng);
        for (std::size_t i = 0; i < data.size(); ++i) data.labels.push_back(i % 2 == 0 || i % 5 == 0);
        auto fm = fit_full(data);
        Point x(3);
        std::bernoulli_distribution b(0.5);
        for (auto& v : x) v = b(rng);
        const double p0 = fm.per_class_full[0].mass_at(x), p1 = fm.per_class_full[1].mass_at(x);
        int expect;
        if (p0 == 0 && p1 == 0)
            expect = 0;
        else if (p1 == 0)
            expect = 0;
        else if (p0 == 0)
            expect = 1;
        else {
            const double n0 = static_cast<double>(fm.class_counts[0]), n1 = static_cast<double>(fm.class_counts[1]);
            const double t0 = oracle::tv(fm.per_class_full[0], fm.per_class_full[0].mixed_with_point(x, 1 / (n0 + 1)));
            const double t1 = oracle::tv(fm.per_class_full[1], fm.per_class_full[1].mixed_with_point(x, 1 / (n1 + 1)));
            CHECK(t0 == doctest::Approx((1 - p0) / (n0 + 1)));
            CHECK(t1 == doctest::Approx((1 - p1) / (n1 + 1)));
            expect = t1 < t0 ? 1 : 0;
        }
        CHECK(predict_addpoint_tv(fm, x) == expect);
    }
}

TEST_CASE("plug-in rule") {
    Sample s{{{0}, {0}, {0}, {1}, {1}, {0}, {1}, {1}}, {1, 1, 1, 1, 0, 0, 0, 0}};
    auto m = fit_full(s);
    CHECK(predict_plugin(m, {0}) == 1);  // 3:1 at x = 0 with equal priors
    Sample only1{{{0}, {1}}, {0, 1}};
    CHECK(predict_plugin(fit_full(only1), {1}) == 1);
    Sample tie{{{0}, {0}}, {0, 1}};
    CHECK(predict_plugin(fit_full(tie), {0}) == 0);
}

TEST_CASE("evaluation") {
    Sample test{{{0}, {1}, {2}, {3}}, {0, 1, 0, 1}};
    CHECK(evaluate([&](const Point& x) { return static_cast<int>(x[0]) % 2; }, test) == 0.0);
    CHECK(evaluate([](const Point&) { return 0; }, test) == 0.5);
    CHECK(evaluate([](const Point& x) { return x[0] < 2 ? 1 : 0; }, test) == doctest::Approx(0.5));
    CHECK(evaluate([](const Point& x) { return x[0] == 0 ? 1 : static_cast<int>(x[0]) % 2; }, test) ==
          doctest::Approx(0.25));
}

TEST_CASE("stratified split") {
    Rng rng(3);
    Sample s;
    for (int i = 0; i < 40; ++i) {
        s.rows.push_back({double(i)});
        s.labels.push_back(i < 10 ? 1 : 0);
    }
    auto [train, test] = stratified_split(s, 0.25, rng);
    CHECK(train.size() == 31);  // llround(22.5) + llround(7.5)
    CHECK(test.size() == 9);
    int ones = 0;
    for (int l : test.labels) ones += l;
    CHECK(ones == 2);
}

TEST_CASE("error decreases with sample size") {
    // Held-out error of the add-one-point rule falls as the training set grows.
    auto run = [](std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        auto data = two_class_bernoulli(3, 0.8, n, rng);
        auto test = two_class_bernoulli(3, 0.8, 2000, rng);
        auto m = fit_full(data);
        return evaluate([&](const Point& x) { return predict_addpoint_tv(m, x); }, test);
    };
    double small = 0, large = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        small += run(5, s);
        large += run(400, s);
    }
    CHECK(large < small);
}
