#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace projstat {

using Point = std::vector<double>;

/// Points closer than this in sup-norm are one atom.
inline constexpr double kMergeTol = 1e-9;

/// Finitely supported probability measure on R^d.
///
/// Atoms are kept in lexicographic order of their points. Construction drops
/// zero-mass atoms, merges points that lie within the merge tolerance of an
/// earlier point (the earlier point is kept as representative) and rescales
/// the weights so that they sum to one.
class DiscreteMeasure {
public:
    struct Atom {
        Point point;
        double weight;
    };

    /// Throws std::invalid_argument on empty input, mismatched dimensions,
    /// non-finite coordinates, negative weights, or a total mass away from 1
    /// by more than 1e-9.
    static DiscreteMeasure from_atoms(const std::vector<Point>& points,
                                      const std::vector<double>& weights,
                                      double merge_tol = kMergeTol);

    static DiscreteMeasure point_mass(Point x);

    /// Empirical measure of scalar values (each value has weight 1/n).
    static DiscreteMeasure from_values(std::span<const double> values,
                                       double merge_tol = kMergeTol);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return atoms_.size(); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::vector<Point> support() const;

    /// P({x}), matching atoms within `tol` in sup-norm.
    double mass_at(std::span<const double> x, double tol = kMergeTol) const;

    /// (1 - t) P + t delta_x.
    DiscreteMeasure mixed_with_point(const Point& x, double t) const;

private:
    DiscreteMeasure() = default;

    std::vector<Atom> atoms_;
    std::size_t dim_ = 0;
};

/// Histogram on strictly increasing bin edges. Masses are normalized on
/// construction; an all-zero histogram is allowed and reported by empty().
class Histogram {
public:
    Histogram(std::vector<double> edges, std::vector<double> masses);

    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& masses() const { return masses_; }
    std::size_t bins() const { return masses_.size(); }
    bool empty() const { return empty_; }

    /// Quantile function with mass spread uniformly inside each bin.
    double quantile(double t) const;

private:
    std::vector<double> edges_;
    std::vector<double> masses_;
    bool empty_ = false;
};

/// Observations of common dimension with optional class labels.
struct Sample {
    std::vector<Point> rows;
    std::vector<int> labels;

    std::size_t dim() const { return rows.empty() ? 0 : rows.front().size(); }
    std::size_t size() const { return rows.size(); }
    bool labeled() const { return !labels.empty(); }
};

/// Throws std::invalid_argument unless the sample is nonempty, rectangular,
/// and has either no labels or one label per row.
void validate_sample(const Sample& s);

/// 1/2 sum over the union of supports of |P({x}) - Q({x})|.
double tv_distance(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Wasserstein-1 between one-dimensional measures, integrating the
/// difference of the two quantile step functions exactly.
double w1_distance_1d(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Wasserstein-1 with Euclidean ground cost in any dimension, solved exactly
/// as a transportation problem. Intended for small supports.
double w1_distance(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Mallows L2 (Wasserstein-2) distance between histograms, exact.
double mallows_l2_histogram(const Histogram& h1, const Histogram& h2);

/// sup_x |F_P(x) - F_Q(x)| with right-continuous CDFs.
double ks_distance_1d(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// sum over the union support of (F_P - F_Q)^2 weighted by (p(x) + q(x)) / 2.
double cvm_distance_1d(const DiscreteMeasure& p, const DiscreteMeasure& q);

DiscreteMeasure empirical_measure(const Sample& s, double merge_tol = kMergeTol);

struct SandwichCheck {
    bool lhs_ok = false;  // d_min * d_TV <= d_W1
    bool rhs_ok = false;  // d_W1 <= diam * d_TV
    double tv = 0.0;
    double w1 = 0.0;
    double min_separation = 0.0;
    double diameter = 0.0;
};

/// Checks d_min(E) d_TV <= d_W1 <= diam(E) d_TV on E = union of supports,
/// with 1e-10 slack on both sides.
SandwichCheck metric_sandwich_check(const DiscreteMeasure& p, const DiscreteMeasure& q);

}  // namespace projstat
