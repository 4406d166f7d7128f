#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "projstat/measures.hpp"
#include "projstat/projections.hpp"

namespace projstat {

enum class DistanceKind { W1, KS, CVM, TV };

std::string to_string(DistanceKind k);
/// Accepts "w1", "ks", "cvm", "tv"; throws std::invalid_argument otherwise.
DistanceKind parse_distance_kind(const std::string& name);

double distance_1d(DistanceKind kind, const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Per-class, per-direction empirical laws of the projected training data.
struct RPClassifierModel {
    std::vector<Direction> directions;
    /// per_class_proj[l][j]: law of class l projected on directions[j].
    std::vector<std::vector<DiscreteMeasure>> per_class_proj;
    std::vector<std::size_t> class_counts;
    std::vector<double> priors;
    DistanceKind distance_kind = DistanceKind::KS;

    std::size_t num_classes() const { return class_counts.size(); }
};

/// Empirical laws of the raw training points per class.
struct FullModel {
    std::vector<DiscreteMeasure> per_class_full;
    std::vector<std::size_t> class_counts;
    std::vector<double> priors;

    std::size_t num_classes() const { return class_counts.size(); }
};

/// Labels must be 0..m-1 with every class present.
RPClassifierModel fit_rp(const Sample& train, std::vector<Direction> directions,
                         DistanceKind kind = DistanceKind::KS);
FullModel fit_full(const Sample& train);

/// d_b(l) = max_j d(P_lj, P_lj augmented by the projected x) for every class l.
std::vector<double> rp_scores(const RPClassifierModel& model, const Point& x);

/// argmin_l d_b(l); ties go to the smallest label.
int predict_rp(const RPClassifierModel& model, const Point& x);

/// Binary add-one-point total variation rule.
int predict_addpoint_tv(const FullModel& model, const Point& x);

/// argmax_l P_nl({x}) * prior_l; ties go to the smallest label.
int predict_plugin(const FullModel& model, const Point& x);

using Predictor = std::function<int(const Point&)>;

/// Fraction of test rows whose prediction differs from the label.
double evaluate(const Predictor& predict, const Sample& test);

}  // namespace projstat
