#include "projstat/hypotest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "projstat/error.hpp"

namespace projstat {

namespace {

// Floating-point slack when comparing statistics produced by identical
// arithmetic on different draws.
constexpr double kStatTol = 1e-12;

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
}

void require_calibration(std::size_t B) {
    if (B < kMinCalibration)
        throw std::invalid_argument("calibration size " + std::to_string(B) + " is below " +
                                    std::to_string(kMinCalibration));
}

// log(n!) - log(sqrt(2 pi n) (n/e)^n).
double stirlerr(double n) {
    constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680,
                     s4 = 1.0 / 1188;
    if (n <= 15.0) {
        const long double ln = static_cast<long double>(n);
        return static_cast<double>(std::lgamma(ln + 1.0L) - (ln + 0.5L) * std::log(ln) + ln -
                                   0.5L * std::log(2.0L * std::numbers::pi_v<long double>));
    }
    const double nn = n * n;
    if (n > 500) return (s0 - s1 / nn) / n;
    if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
    if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x/np) + np - x, accurate when x is close to np.
double bd0(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

std::vector<double> draw_values(const DiscreteMeasure& m, const std::vector<double>& cdf,
                                std::size_t n, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& v : out) {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), unif(rng));
        const std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        v = m.atoms()[idx].point[0];
    }
    return out;
}

std::vector<double> cumulative(const DiscreteMeasure& m) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& a : m.atoms()) cdf.push_back(acc += a.weight);
    return cdf;
}

}  // namespace

double binomial_pmf(std::size_t d, double p, std::size_t k) {
    if (k > d) throw std::invalid_argument("k = " + std::to_string(k) + " exceeds d = " +
                                           std::to_string(d));
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0, 1]");
    const double q = 1.0 - p;
    const double n = static_cast<double>(d), x = static_cast<double>(k);
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (q == 0.0) return k == d ? 1.0 : 0.0;
    if (k == 0) {
        if (d == 0) return 1.0;
        return std::exp(p < 0.1 ? -bd0(n, n * q) - n * p : n * std::log(q));
    }
    if (k == d) return std::exp(q < 0.1 ? -bd0(n, n * p) - n * q : n * std::log(p));
    const double lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) -
                      bd0(n - x, n * q);
    const double lf = std::log(2 * std::numbers::pi) + std::log(x) + std::log1p(-x / n);
    return std::exp(lc - 0.5 * lf);
}

std::vector<double> binomial_pmf_vector(std::size_t d, double p) {
    std::vector<double> out(d + 1);
    for (std::size_t k = 0; k <= d; ++k) out[k] = binomial_pmf(d, p, k);
    return out;
}

std::vector<double> poisson_binomial_pmf(const std::vector<double>& q) {
    for (double qi : q)
        if (!(qi >= 0.0 && qi <= 1.0)) throw std::invalid_argument("q_i must be in [0, 1]");
    std::vector<double> pmf(q.size() + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t k = i + 1; k > 0; --k) pmf[k] = pmf[k] * (1.0 - q[i]) + pmf[k - 1] * q[i];
        pmf[0] *= 1.0 - q[i];
    }
    return pmf;
}

double upper_quantile(std::vector<double> values, double alpha) {
    if (values.empty()) throw std::invalid_argument("no values");
    require_alpha(alpha);
    std::sort(values.begin(), values.end());
    const double pos = (1.0 - alpha) * static_cast<double>(values.size() - 1);
    const auto idx = static_cast<std::size_t>(std::ceil(pos - 1e-12));
    return values[std::min(idx, values.size() - 1)];
}

std::vector<double> mc_null_statistics(const std::function<double(Rng&)>& null_stat,
                                       std::size_t B, Rng& rng) {
    require_calibration(B);
    const std::uint64_t root = rng();
    std::vector<double> out(B);
    for (std::size_t b = 0; b < B; ++b) {
        Rng stream = make_stream(root, b);
        out[b] = null_stat(stream);
    }
    return out;
}

double mc_null_calibration(const std::function<double(Rng&)>& null_stat, std::size_t B,
                           double alpha, Rng& rng) {
    require_alpha(alpha);
    return upper_quantile(mc_null_statistics(null_stat, B, rng), alpha);
}

TestReport decide(double statistic, std::vector<double> null_stats, double alpha) {
    require_alpha(alpha);
    TestReport r;
    r.statistic = statistic;
    r.alpha = alpha;
    r.calibration_size = null_stats.size();
    std::size_t at_least = 0;
    for (double s : null_stats)
        if (s >= statistic - kStatTol) ++at_least;
    r.p_value = static_cast<double>(1 + at_least) / static_cast<double>(null_stats.size() + 1);
    r.critical_value = alpha >= 1.0 ? -std::numeric_limits<double>::infinity()
                                    : upper_quantile(std::move(null_stats), alpha);
    r.reject = statistic > r.critical_value + kStatTol;
    return r;
}

TestReport one_sample_projected_ks(const Sample& sample, const DiscreteMeasure& p0,
                                   const Direction& u, double alpha, std::size_t B, Rng& rng) {
    validate_sample(sample);
    require_alpha(alpha);
    require_calibration(B);
    if (sample.dim() != p0.dim() || u.dim() != p0.dim())
        throw std::invalid_argument("sample, null measure and direction differ in dimension");

    const DiscreteMeasure null_proj = project_measure(u, p0);
    const auto cdf = cumulative(null_proj);
    const std::size_t n = sample.size();
    const double observed =
        ks_distance_1d(DiscreteMeasure::from_values(project_rows(u, sample.rows)), null_proj);

    const std::uint64_t seed = rng();
    Rng calib(seed);
    auto null_stats = mc_null_statistics(
        [&](Rng& r) {
            return ks_distance_1d(DiscreteMeasure::from_values(draw_values(null_proj, cdf, n, r)),
                                  null_proj);
        },
        B, calib);
    TestReport rep = decide(observed, std::move(null_stats), alpha);
    rep.seed = seed;
    rep.direction_good = is_good_direction(u, p0.support());
    return rep;
}

TestReport two_sample_projected_ks(const Sample& x, const Sample& y, const Direction& u,
                                   double alpha, std::size_t B, Rng& rng) {
    validate_sample(x);
    validate_sample(y);
    require_alpha(alpha);
    require_calibration(B);
    if (x.dim() != y.dim() || u.dim() != x.dim())
        throw std::invalid_argument("samples and direction differ in dimension");

    std::vector<double> pooled = project_rows(u, x.rows);
    const std::size_t n = pooled.size();
    const auto py = project_rows(u, y.rows);
    pooled.insert(pooled.end(), py.begin(), py.end());

    auto stat = [n](const std::vector<double>& v) {
        const std::span<const double> all(v);
        return ks_distance_1d(DiscreteMeasure::from_values(all.first(n)),
                              DiscreteMeasure::from_values(all.subspan(n)));
    };
    const double observed = stat(pooled);

    const std::uint64_t seed = rng();
    Rng calib(seed);
    auto null_stats = mc_null_statistics(
        [&](Rng& r) {
            std::vector<double> perm = pooled;
            std::shuffle(perm.begin(), perm.end(), r);
            return stat(perm);
        },
        B, calib);
    TestReport rep = decide(observed, std::move(null_stats), alpha);
    rep.seed = seed;
    return rep;
}

double multi_projection_ks_stat(const Sample& sample, const DiscreteMeasure& p0,
                                const std::vector<Direction>& directions) {
    validate_sample(sample);
    if (directions.empty()) throw std::invalid_argument("at least one direction is required");
    double sum = 0.0;
    for (const auto& u : directions)
        sum += ks_distance_1d(DiscreteMeasure::from_values(project_rows(u, sample.rows)),
                              project_measure(u, p0));
    return sum / static_cast<double>(directions.size());
}

ProjectedNull::ProjectedNull(const DiscreteMeasure& p0, std::vector<Direction> directions)
    : p0_(p0), p0_cdf_(cumulative(p0)), directions_(std::move(directions)), dim_(p0.dim()) {
    if (directions_.empty()) throw std::invalid_argument("at least one direction is required");
    for (const auto& u : directions_) {
        if (u.dim() != dim_) throw std::invalid_argument("direction dimension mismatch");
        projected_.push_back(project_measure(u, p0_));
    }
}

double ProjectedNull::statistic(const std::vector<Point>& rows) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < directions_.size(); ++j)
        sum += ks_distance_1d(DiscreteMeasure::from_values(project_rows(directions_[j], rows)),
                              projected_[j]);
    return sum / static_cast<double>(directions_.size());
}

std::vector<Point> ProjectedNull::draw(std::size_t n, Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::upper_bound(p0_cdf_.begin(), p0_cdf_.end(), unif(rng));
        const std::size_t idx = std::min<std::size_t>(it - p0_cdf_.begin(), p0_cdf_.size() - 1);
        out.push_back(p0_.atoms()[idx].point);
    }
    return out;
}

TestReport multi_projection_ks_test(const Sample& sample, const ProjectedNull& null,
                                    double alpha, std::size_t B, Rng& rng) {
    validate_sample(sample);
    if (sample.dim() != null.sample_dim())
        throw std::invalid_argument("sample dimension does not match the null");
    const std::size_t n = sample.size();
    const double observed = null.statistic(sample.rows);
    const std::uint64_t seed = rng();
    Rng calib(seed);
    auto null_stats =
        mc_null_statistics([&](Rng& r) { return null.statistic(null.draw(n, r)); }, B, calib);
    TestReport rep = decide(observed, std::move(null_stats), alpha);
    rep.seed = seed;
    return rep;
}

double chevallier_bound(std::size_t d, double epsilon) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double dd = static_cast<double>(d);
    return 1.0 - 2.0 * std::sqrt(dd) / std::ldexp(epsilon * epsilon, static_cast<int>(d) - 1);
}

double chevallier_subset_bound(std::size_t d, double epsilon) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double dd = static_cast<double>(d);
    return 1.0 - 2.0 * std::pow(dd, 2.5) / std::ldexp(epsilon * epsilon, static_cast<int>(d) - 1);
}

bool epsilon_admissible(std::size_t d, double epsilon, double alpha) {
    require_alpha(alpha);
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double dd = static_cast<double>(d);
    return 2.0 * std::sqrt(dd) / std::ldexp(epsilon * epsilon, static_cast<int>(d) - 1) <=
           alpha / 2.0;
}

double min_admissible_epsilon(std::size_t d, double alpha) {
    require_alpha(alpha);
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    const double dd = static_cast<double>(d);
    double eps = std::sqrt(4.0 * std::sqrt(dd) / std::ldexp(alpha, static_cast<int>(d) - 1));
    // Step past rounding so the returned value passes epsilon_admissible.
    while (!epsilon_admissible(d, eps, alpha)) eps = std::nextafter(eps, INFINITY);
    return eps;
}

std::size_t min_admissible_dimension(double epsilon, double alpha) {
    for (std::size_t d = 1; d <= 4096; ++d)
        if (epsilon_admissible(d, epsilon, alpha)) return d;
    throw NumericalError("no dimension up to 4096 is admissible");
}

CentralInterval binomial_central_interval(std::size_t d, double alpha) {
    require_alpha(alpha);
    const auto pmf = binomial_pmf_vector(d, 0.5);
    // Widest tail [0, l-1] whose doubled mass stays within alpha/2.
    CentralInterval ci;
    double tail = 0.0;
    std::size_t l = 0;
    while (l < d - l) {
        const double next = tail + pmf[l];
        if (2.0 * next > alpha / 2.0) break;
        tail = next;
        ++l;
    }
    ci.left = l;
    ci.right = d - l;
    ci.outside_mass = 2.0 * tail;
    return ci;
}

SumStructureReport sum_structure_test(std::size_t s_obs, std::size_t d, double alpha,
                                      std::optional<double> epsilon) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (s_obs > d) throw std::invalid_argument("observed sum exceeds d");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");

    SumStructureReport out;
    if (epsilon) {
        if (!epsilon_admissible(d, *epsilon, alpha))
            throw NumericalError("epsilon " + std::to_string(*epsilon) +
                                 " does not satisfy the simplex-measure condition at d = " +
                                 std::to_string(d));
        out.epsilon = *epsilon;
    } else {
        out.epsilon = min_admissible_epsilon(d, alpha);
        if (!(out.epsilon < 1.0))
            throw NumericalError("no epsilon in (0, 1) satisfies the simplex-measure condition at d = " +
                                 std::to_string(d));
    }

    out.interval = binomial_central_interval(d, alpha);
    const double half = static_cast<double>(d) / 2.0;
    const double dev = std::abs(static_cast<double>(s_obs) - half);

    TestReport& r = out.report;
    r.alpha = alpha;
    r.statistic = dev;
    r.critical_value = static_cast<double>(out.interval.right) - half;
    r.reject = s_obs < out.interval.left || s_obs > out.interval.right;
    r.side = !r.reject ? "" : (s_obs < out.interval.left ? "left" : "right");
    const auto pmf = binomial_pmf_vector(d, 0.5);
    double p = 0.0;
    for (std::size_t k = 0; k <= d; ++k)
        if (std::abs(static_cast<double>(k) - half) >= dev - 1e-9) p += pmf[k];
    r.p_value = std::min(p, 1.0);
    return out;
}

CriticalValueA critical_value_a(std::size_t d, std::size_t n, double alpha) {
    if (d < 1 || n < 1) throw std::invalid_argument("d and N must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
    CriticalValueA a;
    a.hoeffding_term = std::sqrt(-std::log(alpha / 2.0) / (2.0 * static_cast<double>(n)));
    a.structure_term = std::pow(static_cast<double>(d), 0.25) /
                       (std::pow(2.0, (static_cast<double>(d) - 5.0) / 2.0) * std::sqrt(alpha));
    a.value = std::max(a.hoeffding_term, a.structure_term);
    return a;
}

RareDistributionReport rare_distribution_test(const Sample& rows, double alpha) {
    validate_sample(rows);
    const std::size_t d = rows.dim(), n = rows.size();
    std::vector<double> freq(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = rows.rows[i][j];
            if (v != 0.0 && v != 1.0)
                throw DataError("non-binary entry " + std::to_string(v) + " at row " +
                                std::to_string(i) + ", column " + std::to_string(j));
            s += v == 1.0;
        }
        freq[s] += 1.0;
    }

    RareDistributionReport rep;
    rep.n = n;
    rep.d = d;
    rep.alpha = alpha;
    rep.a = critical_value_a(d, n, alpha);
    rep.a_union = rep.a;
    rep.a_union.hoeffding_term =
        std::sqrt(-std::log(alpha / (2.0 * static_cast<double>(d + 1))) /
                  (2.0 * static_cast<double>(n)));
    rep.a_union.value = std::max(rep.a_union.hoeffding_term, rep.a_union.structure_term);

    const auto binom = binomial_pmf_vector(d, 0.5);
    for (std::size_t k = 0; k <= d; ++k) {
        RareKDecision dk;
        dk.k = k;
        dk.empirical = freq[k] / static_cast<double>(n);
        dk.binomial = binom[k];
        const double gap = std::abs(dk.empirical - dk.binomial);
        dk.reject = gap > rep.a.value;
        dk.reject_union = gap > rep.a_union.value;
        rep.reject_any = rep.reject_any || dk.reject;
        rep.reject_union = rep.reject_union || dk.reject_union;
        rep.per_k.push_back(dk);
    }
    return rep;
}

}  // namespace projstat
