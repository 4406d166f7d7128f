#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "projstat/measures.hpp"
#include "projstat/rng.hpp"

namespace projstat {

/// Smallest singular value above which a stacked basis counts as full rank.
inline constexpr double kRankTol = 1e-8;

/// Linear subspace H of R^d held as a d x m column-orthonormal basis.
class Subspace {
public:
    /// Orthonormalizes the columns of `spanning` (modified Gram-Schmidt, two
    /// passes). Throws std::invalid_argument if they are rank deficient.
    explicit Subspace(const Eigen::MatrixXd& spanning);

    const Eigen::MatrixXd& basis() const { return basis_; }
    std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }

    /// Orthonormal basis of the orthogonal complement (d x (d - m), possibly empty).
    Eigen::MatrixXd complement_basis() const;

private:
    Eigen::MatrixXd basis_;
};

/// Unit vector u; the one-dimensional subspace span{u}.
class Direction {
public:
    /// Normalizes `v`; throws std::invalid_argument for a zero or non-finite vector.
    explicit Direction(const Eigen::VectorXd& v);
    Direction(std::initializer_list<double> coords);

    const Eigen::VectorXd& vector() const { return u_; }
    std::size_t dim() const { return static_cast<std::size_t>(u_.size()); }
    double operator[](std::size_t i) const { return u_[static_cast<Eigen::Index>(i)]; }

    /// <u, x>.
    double dot(const Point& x) const;
    Subspace subspace() const { return Subspace(u_); }

private:
    Eigen::VectorXd u_;
};

/// k+1 subspaces whose orthogonal complements pairwise meet only at 0.
struct HeppesFamily {
    std::vector<Subspace> subspaces;

    std::size_t size() const { return subspaces.size(); }
    /// Largest number of atoms of Q the family can certify.
    std::size_t max_atoms() const { return subspaces.empty() ? 0 : subspaces.size() - 1; }
};

/// Coordinates of pi_H(x) in the basis of H.
Point project_point(const Subspace& h, const Point& x);

/// Pushforward of `p` under pi_H; coinciding images merge and add weights.
DiscreteMeasure project_measure(const Subspace& h, const DiscreteMeasure& p);
DiscreteMeasure project_measure(const Direction& u, const DiscreteMeasure& p);

/// Projects every row of the sample onto u.
std::vector<double> project_rows(const Direction& u, const std::vector<Point>& rows);

Direction random_direction(std::size_t d, Rng& rng);
std::vector<Direction> random_directions(std::size_t d, std::size_t count, Rng& rng);
Subspace random_subspace(std::size_t d, std::size_t m, Rng& rng);

/// True iff H_i^perp and H_j^perp meet only at 0.
bool validate_heppes_pair(const Subspace& hi, const Subspace& hj, double tol = kRankTol);

/// k+1 random m-dimensional subspaces of R^d, each redrawn until it forms a
/// valid pair with every earlier one. Requires 2(d - m) <= d.
HeppesFamily heppes_family(std::size_t d, std::size_t k, std::size_t m, Rng& rng,
                           std::size_t max_tries = 1000);

/// True iff pi_H is injective on E: every nonzero difference of points of E
/// has a projection of sup-norm above `tol`.
bool is_good_direction(const Subspace& h, const std::vector<Point>& support,
                       double tol = kMergeTol);
bool is_good_direction(const Direction& u, const std::vector<Point>& support,
                       double tol = kMergeTol);

/// Random directions until one is injective on `support`. Throws
/// NumericalError once `max_tries` draws have failed.
Direction good_direction_for_support(const std::vector<Point>& support, Rng& rng,
                                     std::size_t max_tries = 100);

struct BoundCheck {
    double lhs = 0.0;  // d_TV(P, Q)
    double rhs = 0.0;  // sum_j d_TV(P_Hj, Q_Hj)
    bool holds() const { return lhs <= rhs + 1e-10; }
};

/// Both sides of d_TV(P,Q) <= sum_j d_TV(P_Hj, Q_Hj). Q may have at most
/// family.max_atoms() atoms.
BoundCheck quantitative_bound(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              const HeppesFamily& family);

/// P({x}) - Q({x}) <= max_j (P_Hj({pi x}) - Q_Hj({pi x})) + 1e-10.
bool pointwise_lemma_check(const DiscreteMeasure& p, const DiscreteMeasure& q,
                           const HeppesFamily& family, const Point& x);

}  // namespace projstat
