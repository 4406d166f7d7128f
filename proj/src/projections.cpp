#include "projstat/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "projstat/error.hpp"

namespace projstat {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const Point& x) {
    return {x.data(), static_cast<Eigen::Index>(x.size())};
}

Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = normal(rng);
    return g;
}

// Modified Gram-Schmidt with a second orthogonalization pass. Returns false
// when a column collapses relative to its original norm.
bool orthonormalize(Eigen::MatrixXd& q) {
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
        const double original = q.col(c).norm();
        if (!(original > 0.0) || !std::isfinite(original)) return false;
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < c; ++k) q.col(c) -= q.col(k).dot(q.col(c)) * q.col(k);
        const double norm = q.col(c).norm();
        if (norm <= 1e-10 * original) return false;
        q.col(c) /= norm;
    }
    return true;
}

}  // namespace

Subspace::Subspace(const Eigen::MatrixXd& spanning) : basis_(spanning) {
    if (basis_.rows() < 1 || basis_.cols() < 1 || basis_.cols() > basis_.rows())
        throw std::invalid_argument("subspace needs 1 <= m <= d spanning columns");
    if (!orthonormalize(basis_)) throw std::invalid_argument("spanning columns are rank deficient");
}

Eigen::MatrixXd Subspace::complement_basis() const {
    const Eigen::Index d = basis_.rows(), m = basis_.cols();
    if (m == d) return Eigen::MatrixXd(d, 0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_);
    Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    return full.rightCols(d - m);
}

Direction::Direction(const Eigen::VectorXd& v) : u_(v) {
    const double n = u_.norm();
    if (u_.size() < 1 || !(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("direction needs a finite nonzero vector");
    u_ /= n;
}

Direction::Direction(std::initializer_list<double> coords)
    : Direction(Eigen::Map<const Eigen::VectorXd>(coords.begin(),
                                                  static_cast<Eigen::Index>(coords.size()))) {}

double Direction::dot(const Point& x) const {
    if (x.size() != dim()) throw std::invalid_argument("point dimension does not match direction");
    return u_.dot(as_vector(x));
}

Point project_point(const Subspace& h, const Point& x) {
    if (x.size() != h.ambient_dim())
        throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                    " does not match subspace ambient dimension " +
                                    std::to_string(h.ambient_dim()));
    const Eigen::VectorXd c = h.basis().transpose() * as_vector(x);
    return Point(c.data(), c.data() + c.size());
}

DiscreteMeasure project_measure(const Subspace& h, const DiscreteMeasure& p) {
    if (p.dim() != h.ambient_dim())
        throw std::invalid_argument("measure dimension does not match subspace");
    std::vector<Point> images;
    std::vector<double> weights;
    images.reserve(p.size());
    weights.reserve(p.size());
    for (const auto& a : p.atoms()) {
        images.push_back(project_point(h, a.point));
        weights.push_back(a.weight);
    }
    return DiscreteMeasure::from_atoms(images, weights);
}

DiscreteMeasure project_measure(const Direction& u, const DiscreteMeasure& p) {
    return project_measure(u.subspace(), p);
}

std::vector<double> project_rows(const Direction& u, const std::vector<Point>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(u.dot(r));
    return out;
}

Direction random_direction(std::size_t d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (;;) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
        if (v.norm() > 1e-12) return Direction(v);
    }
}

std::vector<Direction> random_directions(std::size_t d, std::size_t count, Rng& rng) {
    std::vector<Direction> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_direction(d, rng));
    return out;
}

Subspace random_subspace(std::size_t d, std::size_t m, Rng& rng) {
    if (m < 1 || m > d) throw std::invalid_argument("subspace dimension must satisfy 1 <= m <= d");
    for (;;) {
        Eigen::MatrixXd g = gaussian_matrix(d, m, rng);
        if (orthonormalize(g)) return Subspace(g);
    }
}

bool validate_heppes_pair(const Subspace& hi, const Subspace& hj, double tol) {
    const std::size_t d = hi.ambient_dim();
    if (hj.ambient_dim() != d) throw std::invalid_argument("subspaces live in different spaces");
    const std::size_t ci = d - hi.dim(), cj = d - hj.dim();
    if (ci + cj > d) return false;
    if (ci == 0 || cj == 0) return true;
    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(ci + cj));
    stacked << hi.complement_basis(), hj.complement_basis();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    return svd.singularValues().minCoeff() > tol;
}

HeppesFamily heppes_family(std::size_t d, std::size_t k, std::size_t m, Rng& rng,
                           std::size_t max_tries) {
    if (m < 1 || m > d) throw std::invalid_argument("subspace dimension must satisfy 1 <= m <= d");
    if (2 * (d - m) > d)
        throw std::invalid_argument("subspace dimension " + std::to_string(m) +
                                    " is below ceil(d/2) = " + std::to_string((d + 1) / 2));
    HeppesFamily fam;
    std::size_t tries = 0;
    while (fam.subspaces.size() < k + 1) {
        Subspace cand = random_subspace(d, m, rng);
        std::size_t failing = 0;
        for (const auto& h : fam.subspaces)
            if (!validate_heppes_pair(h, cand)) ++failing;
        if (failing == 0) {
            fam.subspaces.push_back(std::move(cand));
            continue;
        }
        if (++tries >= max_tries)
            throw NumericalError("heppes_family: " + std::to_string(max_tries) +
                                 " draws rejected; last candidate failed against " +
                                 std::to_string(failing) + " accepted subspaces");
    }
    return fam;
}

bool is_good_direction(const Subspace& h, const std::vector<Point>& support, double tol) {
    std::vector<Point> images;
    images.reserve(support.size());
    for (const auto& x : support) images.push_back(project_point(h, x));
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            if (support[i] == support[j]) continue;
            double sup = 0.0;
            for (std::size_t c = 0; c < images[i].size(); ++c)
                sup = std::max(sup, std::abs(images[i][c] - images[j][c]));
            if (sup <= tol) return false;
        }
    return true;
}

bool is_good_direction(const Direction& u, const std::vector<Point>& support, double tol) {
    // Sorting the projections makes this O(n log n) instead of pairwise.
    std::vector<double> v = project_rows(u, support);
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (v[idx[k]] - v[idx[k - 1]] <= tol && support[idx[k]] != support[idx[k - 1]])
            return false;
    return true;
}

Direction good_direction_for_support(const std::vector<Point>& support, Rng& rng,
                                     std::size_t max_tries) {
    if (support.empty()) throw std::invalid_argument("support is empty");
    const std::size_t d = support.front().size();
    for (std::size_t t = 0; t < max_tries; ++t) {
        Direction u = random_direction(d, rng);
        if (is_good_direction(u, support)) return u;
    }
    throw NumericalError("no injective direction found in " + std::to_string(max_tries) +
                         " draws");
}

BoundCheck quantitative_bound(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              const HeppesFamily& family) {
    if (family.size() == 0) throw std::invalid_argument("empty subspace family");
    if (q.size() > family.max_atoms())
        throw std::invalid_argument("Q has " + std::to_string(q.size()) +
                                    " atoms but the family certifies at most " +
                                    std::to_string(family.max_atoms()));
    BoundCheck b;
    b.lhs = tv_distance(p, q);
    for (const auto& h : family.subspaces)
        b.rhs += tv_distance(project_measure(h, p), project_measure(h, q));
    return b;
}

bool pointwise_lemma_check(const DiscreteMeasure& p, const DiscreteMeasure& q,
                           const HeppesFamily& family, const Point& x) {
    if (family.size() == 0) throw std::invalid_argument("empty subspace family");
    if (q.size() > family.max_atoms())
        throw std::invalid_argument("Q has more atoms than the family certifies");
    const double lhs = p.mass_at(x) - q.mass_at(x);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& h : family.subspaces) {
        const Point y = project_point(h, x);
        best = std::max(best,
                        project_measure(h, p).mass_at(y) - project_measure(h, q).mass_at(y));
    }
    return lhs <= best + 1e-10;
}

}  // namespace projstat
