#include "projstat/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace projstat {

namespace {

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

void require_same_dim(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    if (p.dim() != q.dim())
        throw std::invalid_argument("measures have different dimensions: " +
                                    std::to_string(p.dim()) + " vs " + std::to_string(q.dim()));
}

void require_1d(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    require_same_dim(p, q);
    if (p.dim() != 1) throw std::invalid_argument("one-dimensional measures required");
}

// Walks the union of two sorted 1-D supports, treating locations within
// kMergeTol as one point. Calls f(x, p_mass, q_mass) in increasing x.
template <class F>
void walk_union_1d(const DiscreteMeasure& p, const DiscreteMeasure& q, F&& f) {
    const auto& a = p.atoms();
    const auto& b = q.atoms();
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].point[0] < b[j].point[0] - kMergeTol)) {
            f(a[i].point[0], a[i].weight, 0.0);
            ++i;
        } else if (i == a.size() || b[j].point[0] < a[i].point[0] - kMergeTol) {
            f(b[j].point[0], 0.0, b[j].weight);
            ++j;
        } else {
            f(a[i].point[0], a[i].weight, b[j].weight);
            ++i;
            ++j;
        }
    }
}

}  // namespace

DiscreteMeasure DiscreteMeasure::from_atoms(const std::vector<Point>& points,
                                            const std::vector<double>& weights,
                                            double merge_tol) {
    if (points.empty()) throw std::invalid_argument("measure needs at least one atom");
    if (points.size() != weights.size())
        throw std::invalid_argument("points and weights differ in length");
    const std::size_t d = points.front().size();
    if (d == 0) throw std::invalid_argument("points must have dimension >= 1");

    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != d) throw std::invalid_argument("points differ in dimension");
        for (double c : points[i])
            if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
            throw std::invalid_argument("weights must be finite and nonnegative");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("weights sum to " + std::to_string(total) + ", not 1");

    // Representatives indexed by first coordinate for the tolerance lookup.
    DiscreteMeasure m;
    m.dim_ = d;
    std::multimap<double, std::size_t> by_first;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const Point& x = points[i];
        bool merged = false;
        for (auto it = by_first.lower_bound(x[0] - merge_tol);
             it != by_first.end() && it->first <= x[0] + merge_tol; ++it) {
            Atom& rep = m.atoms_[it->second];
            if (sup_distance(rep.point, x) <= merge_tol) {
                rep.weight += weights[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            by_first.emplace(x[0], m.atoms_.size());
            m.atoms_.push_back({x, weights[i]});
        }
    }
    for (auto& a : m.atoms_) a.weight /= total;
    std::sort(m.atoms_.begin(), m.atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.point < r.point; });
    return m;
}

DiscreteMeasure DiscreteMeasure::point_mass(Point x) {
    return from_atoms({std::move(x)}, {1.0});
}

DiscreteMeasure DiscreteMeasure::from_values(std::span<const double> values, double merge_tol) {
    if (values.empty()) throw std::invalid_argument("measure needs at least one atom");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });

    // Groups are anchored at their smallest value; the representative is the
    // member that occurs first in the input.
    DiscreteMeasure m;
    m.dim_ = 1;
    const double w = 1.0 / static_cast<double>(values.size());
    std::size_t k = 0;
    while (k < order.size()) {
        const double anchor = values[order[k]];
        if (!std::isfinite(anchor)) throw std::invalid_argument("non-finite coordinate");
        std::size_t first = order[k];
        std::size_t count = 0;
        while (k < order.size() && values[order[k]] - anchor <= merge_tol) {
            first = std::min(first, order[k]);
            ++count;
            ++k;
        }
        m.atoms_.push_back({Point{values[first]}, w * static_cast<double>(count)});
    }
    return m;
}

std::vector<Point> DiscreteMeasure::support() const {
    std::vector<Point> s;
    s.reserve(atoms_.size());
    for (const auto& a : atoms_) s.push_back(a.point);
    return s;
}

double DiscreteMeasure::mass_at(std::span<const double> x, double tol) const {
    if (x.size() != dim_) throw std::invalid_argument("point dimension does not match measure");
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x[0] - tol,
                               [](const Atom& a, double v) { return a.point[0] < v; });
    for (; it != atoms_.end() && it->point[0] <= x[0] + tol; ++it)
        if (sup_distance(it->point, x) <= tol) return it->weight;
    return 0.0;
}

DiscreteMeasure DiscreteMeasure::mixed_with_point(const Point& x, double t) const {
    if (x.size() != dim_) throw std::invalid_argument("point dimension does not match measure");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mixing weight must be in [0,1]");
    DiscreteMeasure m;
    m.dim_ = dim_;
    m.atoms_.reserve(atoms_.size() + 1);
    bool placed = false;
    for (const auto& a : atoms_) {
        double w = (1.0 - t) * a.weight;
        if (!placed && sup_distance(a.point, x) <= kMergeTol) {
            w += t;
            placed = true;
        }
        if (w > 0.0) m.atoms_.push_back({a.point, w});
    }
    if (!placed && t > 0.0) {
        Atom extra{x, t};
        auto pos = std::lower_bound(m.atoms_.begin(), m.atoms_.end(), extra,
                                    [](const Atom& l, const Atom& r) { return l.point < r.point; });
        m.atoms_.insert(pos, std::move(extra));
    }
    return m;
}

Histogram::Histogram(std::vector<double> edges, std::vector<double> masses)
    : edges_(std::move(edges)), masses_(std::move(masses)) {
    if (edges_.size() < 2) throw std::invalid_argument("histogram needs at least one bin");
    if (masses_.size() + 1 != edges_.size())
        throw std::invalid_argument("histogram needs one mass per bin");
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
        if (!(edges_[i] < edges_[i + 1])) throw std::invalid_argument("bin edges must increase");
    double total = 0.0;
    for (double m : masses_) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("negative bin mass");
        total += m;
    }
    empty_ = total == 0.0;
    if (!empty_)
        for (double& m : masses_) m /= total;
}

double Histogram::quantile(double t) const {
    if (empty_) throw std::invalid_argument("empty histogram");
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < masses_.size(); ++j) {
        if (masses_[j] == 0.0) continue;
        last = j;
        if (t <= cum + masses_[j]) {
            const double frac = std::clamp((t - cum) / masses_[j], 0.0, 1.0);
            return edges_[j] + frac * (edges_[j + 1] - edges_[j]);
        }
        cum += masses_[j];
    }
    return edges_[last + 1];
}

void validate_sample(const Sample& s) {
    if (s.rows.empty()) throw std::invalid_argument("sample is empty");
    const std::size_t d = s.rows.front().size();
    if (d == 0) throw std::invalid_argument("sample rows must have dimension >= 1");
    for (const auto& r : s.rows)
        if (r.size() != d) throw std::invalid_argument("sample rows differ in dimension");
    if (s.labeled() && s.labels.size() != s.rows.size())
        throw std::invalid_argument("label count does not match row count");
}

double tv_distance(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    require_same_dim(p, q);
    double sum = 0.0;
    if (p.dim() == 1) {
        walk_union_1d(p, q, [&](double, double a, double b) { sum += std::abs(a - b); });
    } else {
        for (const auto& a : p.atoms()) sum += std::abs(a.weight - q.mass_at(a.point));
        for (const auto& b : q.atoms())
            if (p.mass_at(b.point) == 0.0) sum += b.weight;
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

double w1_distance_1d(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    require_1d(p, q);
    const auto& a = p.atoms();
    const auto& b = q.atoms();
    std::size_t i = 0, j = 0;
    double ra = a[0].weight, rb = b[0].weight, total = 0.0;
    // Both quantile functions are constant between consecutive cumulative
    // masses; consume the shorter remaining level each step.
    while (i < a.size() && j < b.size()) {
        const double gap = std::abs(a[i].point[0] - b[j].point[0]);
        if (ra <= rb) {
            total += ra * gap;
            rb -= ra;
            if (++i < a.size()) ra = a[i].weight;
        } else {
            total += rb * gap;
            ra -= rb;
            if (++j < b.size()) rb = b[j].weight;
        }
    }
    return total;
}

double mallows_l2_histogram(const Histogram& h1, const Histogram& h2) {
    if (h1.empty() || h2.empty()) throw std::invalid_argument("empty histogram");

    // Pieces (t0, t1, x0, x1): on cumulative mass [t0, t1] the quantile
    // function rises linearly from x0 to x1.
    struct Piece {
        double t0, t1, x0, x1;
    };
    auto pieces = [](const Histogram& h) {
        std::vector<Piece> out;
        double cum = 0.0;
        for (std::size_t j = 0; j < h.bins(); ++j) {
            const double m = h.masses()[j];
            if (m == 0.0) continue;
            out.push_back({cum, cum + m, h.edges()[j], h.edges()[j + 1]});
            cum += m;
        }
        out.back().t1 = 1.0;
        return out;
    };
    const auto a = pieces(h1);
    const auto b = pieces(h2);

    auto at = [](const Piece& p, double t) {
        return p.x0 + (p.x1 - p.x0) * (t - p.t0) / (p.t1 - p.t0);
    };

    double integral = 0.0;
    std::size_t i = 0, j = 0;
    double t = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t_end = std::min(a[i].t1, b[j].t1);
        if (t_end > t) {
            // Difference is linear on [t, t_end]: integrate g^2 exactly from its ends.
            const double g0 = at(a[i], t) - at(b[j], t);
            const double g1 = at(a[i], t_end) - at(b[j], t_end);
            integral += (t_end - t) * (g0 * g0 + g0 * g1 + g1 * g1) / 3.0;
            t = t_end;
        }
        if (a[i].t1 <= t_end) ++i;
        if (j < b.size() && b[j].t1 <= t_end) ++j;
    }
    return std::sqrt(std::max(integral, 0.0));
}

double ks_distance_1d(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    require_1d(p, q);
    double fp = 0.0, fq = 0.0, best = 0.0;
    walk_union_1d(p, q, [&](double, double a, double b) {
        fp += a;
        fq += b;
        best = std::max(best, std::abs(fp - fq));
    });
    return std::min(best, 1.0);
}

double cvm_distance_1d(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    require_1d(p, q);
    double fp = 0.0, fq = 0.0, sum = 0.0;
    walk_union_1d(p, q, [&](double, double a, double b) {
        fp += a;
        fq += b;
        sum += (fp - fq) * (fp - fq) * 0.5 * (a + b);
    });
    return sum;
}

DiscreteMeasure empirical_measure(const Sample& s, double merge_tol) {
    validate_sample(s);
    if (s.dim() == 1) {
        std::vector<double> v;
        v.reserve(s.size());
        for (const auto& r : s.rows) v.push_back(r[0]);
        return DiscreteMeasure::from_values(v, merge_tol);
    }
    const double w = 1.0 / static_cast<double>(s.size());
    return DiscreteMeasure::from_atoms(s.rows, std::vector<double>(s.size(), w), merge_tol);
}

SandwichCheck metric_sandwich_check(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    require_same_dim(p, q);
    std::vector<Point> pts = p.support();
    for (const auto& a : q.atoms())
        if (p.mass_at(a.point) == 0.0) pts.push_back(a.point);

    SandwichCheck c;
    if (pts.size() > 1) {
        c.min_separation = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double dist = euclidean(pts[i], pts[j]);
                c.min_separation = std::min(c.min_separation, dist);
                c.diameter = std::max(c.diameter, dist);
            }
    }
    c.tv = tv_distance(p, q);
    c.w1 = w1_distance(p, q);
    constexpr double slack = 1e-10;
    c.lhs_ok = c.min_separation * c.tv <= c.w1 + slack;
    c.rhs_ok = c.w1 <= c.diameter * c.tv + slack;
    return c;
}

}  // namespace projstat
