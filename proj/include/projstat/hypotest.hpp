#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "projstat/measures.hpp"
#include "projstat/projections.hpp"
#include "projstat/rng.hpp"

namespace projstat {

struct TestReport {
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    std::size_t calibration_size = 0;
    std::uint64_t seed = 0;
    /// Whether the projection was injective on the null support (one-sample).
    bool direction_good = true;
    /// Sum-structure test only: "left", "right" or "" when not rejected.
    std::string side;
};

/// Minimum Monte Carlo calibration size accepted by the tests.
inline constexpr std::size_t kMinCalibration = 100;

// ---- pmfs ---------------------------------------------------------------

/// C(d,k) p^k (1-p)^(d-k), evaluated with the saddle-point expansion so that
/// it stays accurate to relative ~1e-15 for large d.
double binomial_pmf(std::size_t d, double p, std::size_t k);
std::vector<double> binomial_pmf_vector(std::size_t d, double p);

/// Law of a sum of independent Bernoulli(q_i), by iterative convolution.
std::vector<double> poisson_binomial_pmf(const std::vector<double>& q);

// ---- projected KS tests -------------------------------------------------

/// Empirical (1 - alpha) quantile with the "higher" convention: the order
/// statistic at index ceil((1 - alpha)(B - 1)).
double upper_quantile(std::vector<double> values, double alpha);

/// B null statistics; replicate b uses the stream derive_seed(root, b) where
/// root is drawn once from `rng`.
std::vector<double> mc_null_statistics(const std::function<double(Rng&)>& null_stat,
                                       std::size_t B, Rng& rng);

/// Critical value from B null draws of the statistic.
double mc_null_calibration(const std::function<double(Rng&)>& null_stat, std::size_t B,
                           double alpha, Rng& rng);

/// Fills critical value, p-value ((1 + #{null >= observed}) / (B + 1)) and
/// the decision. alpha >= 1 rejects everything (critical value -inf).
TestReport decide(double statistic, std::vector<double> null_stats, double alpha);

TestReport one_sample_projected_ks(const Sample& sample, const DiscreteMeasure& p0,
                                   const Direction& u, double alpha, std::size_t B, Rng& rng);

/// Permutation calibration on the pooled projected sample.
TestReport two_sample_projected_ks(const Sample& x, const Sample& y, const Direction& u,
                                   double alpha, std::size_t B, Rng& rng);

/// Mean over directions of KS(projected sample, projected P0).
double multi_projection_ks_stat(const Sample& sample, const DiscreteMeasure& p0,
                                const std::vector<Direction>& directions);

/// Precomputed projections of P0 for repeated evaluation of the averaged
/// statistic (Monte Carlo calibration and power studies).
class ProjectedNull {
public:
    ProjectedNull(const DiscreteMeasure& p0, std::vector<Direction> directions);

    std::size_t sample_dim() const { return dim_; }
    const std::vector<Direction>& directions() const { return directions_; }
    /// Same value as multi_projection_ks_stat(sample, p0, directions).
    double statistic(const std::vector<Point>& rows) const;
    /// n draws from P0.
    std::vector<Point> draw(std::size_t n, Rng& rng) const;

private:
    DiscreteMeasure p0_;
    std::vector<double> p0_cdf_;
    std::vector<Direction> directions_;
    std::vector<DiscreteMeasure> projected_;
    std::size_t dim_;
};

/// Averaged projected KS test, calibrated by simulating samples of the same
/// size from P0.
TestReport multi_projection_ks_test(const Sample& sample, const ProjectedNull& null,
                                    double alpha, std::size_t B, Rng& rng);

// ---- sum-based tests ----------------------------------------------------

/// 1 - 2 sqrt(d) / (eps^2 2^(d-1)); lower bound on the simplex measure of the
/// laws whose sum is eps-close to Binomial(d, 1/2). May be negative.
double chevallier_bound(std::size_t d, double epsilon);

/// 1 - 2 d^(5/2) / (eps^2 2^(d-1)), the same bound over index subsets.
double chevallier_subset_bound(std::size_t d, double epsilon);

/// Whether chevallier_bound(d, eps) >= 1 - alpha/2.
bool epsilon_admissible(std::size_t d, double epsilon, double alpha);

/// Smallest eps satisfying epsilon_admissible(d, eps, alpha).
double min_admissible_epsilon(std::size_t d, double alpha);

/// Smallest d with epsilon_admissible(d, eps, alpha).
std::size_t min_admissible_dimension(double epsilon, double alpha);

struct CentralInterval {
    std::size_t left = 0;
    std::size_t right = 0;
    double outside_mass = 0.0;
};

/// Narrowest symmetric [l, d - l] with Binomial(d, 1/2) mass outside <= alpha/2.
CentralInterval binomial_central_interval(std::size_t d, double alpha);

struct SumStructureReport {
    TestReport report;
    CentralInterval interval;
    double epsilon = 0.0;
};

/// Single-datum test of whether S_d is atypical for Binomial(d, 1/2). Uses
/// `epsilon` if given, otherwise the smallest admissible one. Throws
/// NumericalError if no epsilon in (0, 1) is admissible.
SumStructureReport sum_structure_test(std::size_t s_obs, std::size_t d, double alpha,
                                      std::optional<double> epsilon = std::nullopt);

struct CriticalValueA {
    double hoeffding_term = 0.0;
    double structure_term = 0.0;
    double value = 0.0;
};

/// max{ sqrt(-log(alpha/2) / (2N)), d^(1/4) / (2^((d-5)/2) sqrt(alpha)) }.
CriticalValueA critical_value_a(std::size_t d, std::size_t n, double alpha);

struct RareKDecision {
    std::size_t k = 0;
    double empirical = 0.0;
    double binomial = 0.0;
    bool reject = false;
    bool reject_union = false;
};

struct RareDistributionReport {
    std::vector<RareKDecision> per_k;
    CriticalValueA a;
    /// alpha/2 replaced by alpha/(2(d+1)) in the Hoeffding term.
    CriticalValueA a_union;
    bool reject_any = false;
    bool reject_union = false;
    std::size_t n = 0;
    std::size_t d = 0;
    double alpha = 0.05;
};

/// Compares the empirical law of the row sums with Binomial(d, 1/2) at every
/// k. Throws DataError on a non-binary entry.
RareDistributionReport rare_distribution_test(const Sample& rows, double alpha);

}  // namespace projstat
