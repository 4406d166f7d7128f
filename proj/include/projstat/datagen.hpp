#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "projstat/measures.hpp"
#include "projstat/rng.hpp"

namespace projstat {

/// Joint pmf on {0,1}^d. Cell index bit i (least significant first) is the
/// value of coordinate i.
struct JointPmf {
    std::size_t d = 0;
    std::vector<double> probs;

    static constexpr std::size_t kMaxDim = 20;

    static JointPmf uniform(std::size_t d);
    static JointPmf independent(const std::vector<double>& q);
    static Point outcome(std::size_t d, std::size_t cell);

    /// P(X_i = 1).
    double margin(std::size_t i) const;
    /// P(X_i = a, X_j = b).
    double pair(std::size_t i, std::size_t j, int a, int b) const;
    double odds_ratio(std::size_t i, std::size_t j) const;
    /// Law of the coordinate sum, indexed 0..d.
    std::vector<double> sum_law() const;
    DiscreteMeasure to_measure() const;
};

Sample gen_independent_bernoulli(std::size_t d, double q, std::size_t n, Rng& rng);

/// X_i = U_i Z + (1 - U_i) Y_i with Z, Y_i ~ Bernoulli(q) and
/// U_i ~ Bernoulli(sqrt(rho)), all independent: margins q, pairwise
/// correlation rho.
Sample gen_equicorrelated_bernoulli(std::size_t d, double q, double rho, std::size_t n, Rng& rng);

/// Exact pmf of the equicorrelated construction above.
JointPmf equicorrelated_pmf(std::size_t d, double q, double rho);

/// P(X=1, Y=1) for margins (a, b) and odds ratio gamma.
double plackett_2x2(double a, double b, double gamma);

struct IpfResult {
    JointPmf pmf;
    std::size_t iterations = 0;
    double margin_discrepancy = 0.0;
    double pair_discrepancy = 0.0;
};

/// Fits a pmf on {0,1}^d with Bernoulli(1/2) margins and every pairwise odds
/// ratio equal to gamma by iterative proportional fitting from the uniform
/// table. Throws NumericalError if tol is not reached within max_iters sweeps.
IpfResult gen_odds_ratio_joint(std::size_t d, double gamma, std::size_t max_iters = 10000,
                               double tol = 1e-8);

Sample sample_from_pmf(const JointPmf& pmf, std::size_t n, Rng& rng);

/// d i.i.d. Beta(gamma1, gamma2) draws via Gamma ratios.
std::vector<double> gen_poisson_binomial_params(std::size_t d, double gamma1, double gamma2,
                                                Rng& rng);

/// Uniform point of the probability simplex with m vertices.
std::vector<double> sample_simplex_uniform(std::size_t m, Rng& rng);

}  // namespace projstat
