// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "projstat/classify.hpp"
#include "projstat/datagen.hpp"
#include "projstat/experiments.hpp"
#include "projstat/hypotest.hpp"
#include "projstat/measures.hpp"
#include "projstat/projections.hpp"

using namespace projstat;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        o.pass = false;
        o.detail += fmt(" [runtime %.1fs exceeds %.0fs]", secs, limit_s);
    }
    std::printf("criterion %2d %s: %s (%.1fs) %s\n", id, name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
}

double column_mean(const Sample& s, std::size_t i) {
    double m = 0;
    for (const auto& r : s.rows) m += r[i];
    return m / static_cast<double>(s.size());
}

Outcome heppes_bound() {
    Rng rng(101);
    std::size_t violations = 0, tv_mismatch = 0;
    double worst = -INFINITY;
    for (int t = 0; t < 500; ++t) {
        const std::size_t d = 2 + t % 3;
        const std::size_t k = 1 + (t / 3) % 5;
        const std::size_t m = (d + 1) / 2;
        const auto fam = heppes_family(d, k, m, rng);
        std::uniform_int_distribution<std::size_t> atoms_p(1, 12), atoms_q(1, k);
        const auto p = oracle::random_lattice_measure(d, atoms_p(rng), 3, rng);
        const auto q = oracle::random_lattice_measure(d, atoms_q(rng), 3, rng);
        const auto r = quantitative_bound(p, q, fam);
        violations += !(r.lhs <= r.rhs + 1e-10);
        tv_mismatch += std::abs(r.lhs - oracle::tv(p, q)) > 1e-12;
        worst = std::max(worst, r.lhs - r.rhs);
    }
    return {violations == 0 && tv_mismatch == 0,
            fmt("violations=%zu tv_oracle_mismatches=%zu max(lhs-rhs)=%.3g", violations, tv_mismatch, worst)};
}

Outcome single_projection_equality() {
    Rng rng(202);
    std::size_t bad = 0;
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = 2 + t % 9;
        const auto p = oracle::random_cube_measure(d, 1 + t % 12, rng);
        const auto q = oracle::random_cube_measure(d, 1 + (t / 7) % 12, rng);
        auto support = p.support();
        for (const auto& x : q.support()) support.push_back(x);
        const auto u = good_direction_for_support(support, rng);
        if (!is_good_direction(u, support)) ++bad;
        const double gap = std::abs(oracle::tv(p, q) - tv_distance(project_measure(u, p), project_measure(u, q)));
        worst = std::max(worst, gap);
        bad += gap > 1e-10;
    }
    return {bad == 0, fmt("failures=%zu max_gap=%.3g", bad, worst)};
}

Outcome sandwich() {
    Rng rng(303);
    std::size_t violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = 1 + t % 6;
        const auto p = oracle::random_cube_measure(d, 1 + t % 6, rng);
        const auto q = oracle::random_cube_measure(d, 1 + (t / 6) % 6, rng);
        const auto c = metric_sandwich_check(p, q);
        violations += !(c.lhs_ok && c.rhs_ok);
        violations += std::abs(c.tv - oracle::tv(p, q)) > 1e-12;
    }
    return {violations == 0, fmt("violations=%zu", violations)};
}

Outcome distance_oracles() {
    Rng rng(404);
    std::uniform_real_distribution<double> unit(0, 1);
    std::uniform_int_distribution<int> grid(-20, 20);
    double w1_err = 0, perm_err = 0, mallows_err = 0, pb_err = 0;
    for (int t = 0; t < 300; ++t) {
        const auto p = oracle::random_lattice_measure(1, 1 + t % 6, 10, rng);
        const auto q = oracle::random_lattice_measure(1, 1 + (t / 6) % 6, 10, rng);
        w1_err = std::max(w1_err, std::abs(w1_distance_1d(p, q) - oracle::w1_cdf_1d(p, q)));

        const std::size_t n = 1 + t % 6;
        std::vector<Point> a(n), b(n);
        for (auto& x : a) x = {grid(rng) * 0.25};
        for (auto& x : b) x = {grid(rng) * 0.25};
        const std::vector<double> w(n, 1.0 / static_cast<double>(n));
        perm_err = std::max(perm_err, std::abs(w1_distance_1d(DiscreteMeasure::from_atoms(a, w),
                                                              DiscreteMeasure::from_atoms(b, w)) -
                                               oracle::w1_permutations(a, b)));
    }
    for (int t = 0; t < 30; ++t) {
        auto hist = [&](std::size_t bins) {
            std::vector<double> e{-2 + unit(rng)}, m;
            for (std::size_t j = 0; j < bins; ++j) {
                e.push_back(e.back() + 0.1 + unit(rng));
                m.push_back(unit(rng) < 0.2 ? 0.0 : unit(rng));
            }
            m[bins / 2] += 0.5;
            return std::make_pair(e, m);
        };
        auto [e1, m1] = hist(3 + t % 8);
        auto [e2, m2] = hist(2 + t % 5);
        const double lib = mallows_l2_histogram(Histogram(e1, m1), Histogram(e2, m2));
        mallows_err = std::max(mallows_err, std::abs(lib - oracle::mallows_quadrature(e1, m1, e2, m2, 1000000)));
    }
    for (int t = 0; t < 100; ++t) {
        std::vector<double> q(1 + t % 12);
        for (auto& x : q) x = unit(rng);
        const auto dp = poisson_binomial_pmf(q), en = oracle::poisson_binomial_enumerate(q);
        for (std::size_t k = 0; k < dp.size(); ++k) pb_err = std::max(pb_err, std::abs(dp[k] - en[k]));
    }
    const bool ok = w1_err <= 1e-10 && perm_err <= 1e-10 && mallows_err <= 1e-8 && pb_err <= 1e-12;
    return {ok, fmt("w1_vs_cdf=%.2g w1_vs_transport=%.2g mallows_vs_quadrature=%.2g pb_vs_enum=%.2g", w1_err,
                    perm_err, mallows_err, pb_err)};
}

double classify_mean_error(double corr) {
    ClassifyConfig cfg;
    cfg.dim = 5;
    cfg.corr = corr;
    cfg.projections = {100};
    cfg.n_per_class = 200;
    cfg.test_fraction = 0.25;
    cfg.replicates = 50;
    cfg.seed = 5005;
    for (const auto& r : cmd_classify(cfg))
        if (r.metric == "error_mean") return r.value;
    return NAN;
}

Outcome example1() {
    const std::vector<double> corrs{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> means;
    for (double c : corrs) means.push_back(classify_mean_error(c));
    bool decreasing = true;
    for (std::size_t i = 1; i < means.size(); ++i) decreasing &= means[i] < means[i - 1];
    const double at9 = 100 * means.back();
    std::string detail = fmt("error(corr=0.9)=%.2f%% target 9.7+-3.0; by corr:", at9);
    for (double m : means) detail += fmt(" %.2f%%", 100 * m);
    return {std::abs(at9 - 9.7) <= 3.0 && decreasing, detail};
}

Outcome example2() {
    TomoConfig cfg;
    cfg.scenario = 1;
    cfg.n_per_class = 100;
    cfg.directions = 40;
    cfg.neighbours = 21;
    cfg.seed = 6006;
    double err = NAN;
    for (const auto& r : cmd_tomo(cfg))
        if (r.metric == "error_mean") err = r.value;
    return {err <= 0.10, fmt("test error=%.2f%% (limit 10%%)", 100 * err)};
}

Outcome example3() {
    const auto pts = multi_ks_power_curve(8, 200, {1.0, 1.75}, {50}, 0.05, 500, 300, 7007);
    const double level = pts[0].power, power = pts[1].power;
    return {std::abs(level - 0.05) <= 0.03 && power >= 0.60,
            fmt("level=%.3f (0.05+-0.03) power(gamma=1.75,k=50)=%.3f (>=0.60)", level, power)};
}

Outcome formulas() {
    const double cb = chevallier_bound(30, 0.01);
    const std::size_t threshold = min_admissible_dimension(0.01, 0.01);
    const bool threshold_ok = threshold == 26 && !epsilon_admissible(25, 0.01, 0.01) &&
                              epsilon_admissible(26, 0.01, 0.01);
    const double term = critical_value_a(30, 200, 0.05).structure_term;
    return {cb > 0.99979 && threshold_ok && term < 0.0018,
            fmt("chevallier(30,0.01)=%.7f (>0.99979) threshold d=%zu (26) structure_term(30,200,0.05)=%.7f (<0.0018)",
                cb, threshold, term)};
}

Outcome test_level() {
    const std::size_t reps = 500, d = 6;
    const double alpha = 0.05, tol = 2 * std::sqrt(alpha * (1 - alpha) / reps);
    const auto p0 = JointPmf::uniform(d).to_measure();
    std::size_t one = 0, two = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(derive_seed(8008, r));
        const auto u = random_direction(d, rng);
        const auto s = sample_from_pmf(JointPmf::uniform(d), 100, rng);
        one += one_sample_projected_ks(s, p0, u, alpha, 200, rng).reject;
        const auto x = gen_independent_bernoulli(d, 0.3, 100, rng);
        const auto y = gen_independent_bernoulli(d, 0.3, 120, rng);
        two += two_sample_projected_ks(x, y, random_direction(d, rng), alpha, 200, rng).reject;
    }
    const double l1 = static_cast<double>(one) / reps, l2 = static_cast<double>(two) / reps;
    return {std::abs(l1 - alpha) <= tol && std::abs(l2 - alpha) <= tol,
            fmt("one-sample=%.3f two-sample=%.3f (0.05+-%.4f)", l1, l2, tol)};
}

Outcome generators() {
    const std::size_t n = 100000, d = 5;
    double worst_z = 0;
    Rng rng(9009);
    for (double rho : {0.1, 0.5, 0.9}) {
        const auto s = gen_equicorrelated_bernoulli(d, 0.5, rho, n, rng);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                const auto [r, se] = oracle::correlation_with_se(s, i, j);
                worst_z = std::max(worst_z, std::abs(r - rho) / se);
            }
    }
    double worst_or = 0;
    for (double g : {1.5, 2.0, 4.0}) {
        const auto pmf = gen_odds_ratio_joint(8, g).pmf;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = i + 1; j < 8; ++j) {
                double c[2][2] = {{0, 0}, {0, 0}};
                for (std::size_t cell = 0; cell < pmf.probs.size(); ++cell)
                    c[cell >> i & 1U][cell >> j & 1U] += pmf.probs[cell];
                worst_or = std::max(worst_or, std::abs(c[1][1] * c[0][0] / (c[1][0] * c[0][1]) - g));
            }
    }
    return {worst_z <= 3 && worst_or <= 1e-3, fmt("max |corr-rho|/se=%.2f (<=3) max OR error=%.2g (<=1e-3)", worst_z,
                                                  worst_or)};
}

}  // namespace

int main() {
    run(1, "quantitative Heppes bound", 10, heppes_bound);
    run(2, "single good projection preserves TV", 10, single_projection_equality);
    run(3, "TV/W1 metric sandwich", 0, sandwich);
    run(4, "distance oracles", 0, distance_oracles);
    run(5, "example 1 classification", 300, example1);
    run(6, "example 2 tomography", 600, example2);
    run(7, "example 3 level and power", 900, example3);
    run(8, "simplex-measure formulas", 0, formulas);
    run(9, "projected KS level control", 0, test_level);
    run(10, "generators", 0, generators);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
