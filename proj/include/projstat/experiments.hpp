#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projstat/classify.hpp"
#include "projstat/io.hpp"
#include "projstat/measures.hpp"
#include "projstat/rng.hpp"

namespace projstat {

/// Per class: shuffle indices, first round((1 - test_fraction) n_l) go to train.
std::pair<Sample, Sample> stratified_split(const Sample& data, double test_fraction, Rng& rng);

struct ErrorSummary {
    double mean = 0.0;
    double sd = 0.0;
};

/// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
ErrorSummary summarize(const std::vector<double>& values);

/// Two-class data of the binary classification study: class 0 independent
/// Bernoulli(1/2), class 1 equicorrelated with margins 1/2.
Sample two_class_bernoulli(std::size_t d, double corr, std::size_t n_per_class, Rng& rng);

enum class ClassifyRule { RandomProjections, AddPointTv, Plugin };
ClassifyRule parse_classify_rule(const std::string& name);
std::string to_string(ClassifyRule r);

struct ClassifyConfig {
    std::size_t dim = 5;
    double corr = 0.9;
    /// Every entry is evaluated on the same data; directions for k come from
    /// their own stream so adding a k leaves the others unchanged.
    std::vector<std::size_t> projections{100};
    DistanceKind distance = DistanceKind::KS;
    ClassifyRule rule = ClassifyRule::RandomProjections;
    std::size_t n_per_class = 200;
    double test_fraction = 0.25;
    std::size_t replicates = 50;
    std::uint64_t seed = 0;
    /// Labeled binary matrix; replaces the generator when set.
    std::optional<std::string> data_path;
};

/// Per replicate "error" plus "error_mean" / "error_sd" (replicate -1) for
/// every projection count.
std::vector<ResultRecord> cmd_classify(const ClassifyConfig& cfg);

struct TomoConfig {
    int scenario = 1;
    std::size_t n_per_class = 100;
    std::size_t directions = 40;
    std::size_t neighbours = 21;
    std::size_t bins = 30;
    double test_fraction = 0.25;
    std::size_t replicates = 1;
    bool filled = false;
    std::uint64_t seed = 0;
    /// File of "path,label" lines naming point-set CSVs; replaces generation.
    std::optional<std::string> image_list;
};

std::vector<ResultRecord> cmd_tomo(const TomoConfig& cfg);

enum class TestKind { OneSample, TwoSample, MultiKs, MultiKsPower, SumStructure, Rare, PbPower };
TestKind parse_test_kind(const std::string& name);
std::string to_string(TestKind k);

struct TestConfig {
    TestKind kind = TestKind::MultiKs;
    std::size_t dim = 8;
    std::size_t n = 200;
    /// Second sample size for the two-sample test.
    std::size_t n2 = 200;
    /// Odds ratio of the alternative (1 = null).
    double gamma = 1.0;
    std::vector<double> gamma_grid;
    double gamma2 = 2.0;
    std::vector<std::size_t> projections{50};
    std::vector<std::size_t> dims;
    double alpha = 0.05;
    std::size_t mc_reps = 500;
    std::size_t replicates = 1;
    std::optional<std::size_t> observed_sum;
    std::optional<double> epsilon;
    std::optional<std::string> data_path;
    std::optional<std::string> data_path2;
    std::uint64_t seed = 0;
};

std::vector<ResultRecord> cmd_test(const TestConfig& cfg);

struct PowerPoint {
    double gamma = 1.0;
    std::size_t projections = 0;
    std::size_t dim = 0;
    double power = 0.0;
    std::size_t replicates = 0;
};

/// Rejection rate of the averaged projected KS test of independence
/// (uniform P0 on {0,1}^d) against odds-ratio joints. For each k one set of
/// directions is drawn and calibrated once with B null samples; replicate
/// data are shared across k.
std::vector<PowerPoint> multi_ks_power_curve(std::size_t d, std::size_t n,
                                             const std::vector<double>& gammas,
                                             const std::vector<std::size_t>& ks, double alpha,
                                             std::size_t B, std::size_t reps, std::uint64_t seed);

/// Rejection rate of the sum-structure test when S_d is Poisson-Binomial
/// with Beta(gamma1, gamma2) parameters drawn afresh in each replicate.
std::vector<PowerPoint> pb_power_curve(const std::vector<std::size_t>& dims,
                                       const std::vector<double>& gamma1s, double gamma2,
                                       double alpha, std::size_t reps, std::uint64_t seed);

struct GenConfig {
    /// independent | equicorrelated | odds-ratio | two-class | phantom
    std::string model = "independent";
    std::size_t dim = 5;
    std::size_t n = 100;
    double q = 0.5;
    double corr = 0.5;
    double gamma = 1.0;
    int scenario = 1;
    /// Phantom class: 0 base pattern, 1 scenario alternative.
    int image_class = 0;
    bool filled = false;
    std::uint64_t seed = 0;
};

/// Writes a binary matrix (or a point list for phantoms).
void cmd_gen(const GenConfig& cfg, std::ostream& out);

struct BenchResult {
    std::vector<ResultRecord> records;
    std::string summary;
};

/// Reproduces simulation example 1-4 with replicate counts (and, for the
/// tomography example, image counts) multiplied by scale in (0, 1].
BenchResult cmd_bench(int example_id, double scale, std::uint64_t seed);

}  // namespace projstat
