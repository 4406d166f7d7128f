#pragma once

// Reference computations kept independent of the library code paths.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <random>
#include <vector>

#include "projstat/measures.hpp"
#include "projstat/rng.hpp"

namespace oracle {

using projstat::DiscreteMeasure;
using projstat::Point;

// Masses keyed by exact point; callers use exact (grid) coordinates.
inline std::map<Point, double> as_map(const DiscreteMeasure& m) {
    std::map<Point, double> out;
    for (const auto& a : m.atoms()) out[a.point] += a.weight;
    return out;
}

inline double tv(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    auto mp = as_map(p), mq = as_map(q);
    for (const auto& [x, w] : mq) mp.try_emplace(x, 0.0);
    double s = 0.0;
    for (const auto& [x, w] : mp) {
        const auto it = mq.find(x);
        s += std::abs(w - (it == mq.end() ? 0.0 : it->second));
    }
    return s / 2;
}

/// Integral of |F_P - F_Q| over R, from the CDFs.
inline double w1_cdf_1d(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    std::vector<double> xs;
    for (const auto& a : p.atoms()) xs.push_back(a.point[0]);
    for (const auto& a : q.atoms()) xs.push_back(a.point[0]);
    std::sort(xs.begin(), xs.end());
    auto cdf = [](const DiscreteMeasure& m, double x) {
        double s = 0.0;
        for (const auto& a : m.atoms())
            if (a.point[0] <= x) s += a.weight;
        return s;
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        total += std::abs(cdf(p, xs[i]) - cdf(q, xs[i])) * (xs[i + 1] - xs[i]);
    return total;
}

/// Optimal transport between two uniform n-point clouds is attained at a
/// permutation; enumerate all of them.
inline double w1_permutations(const std::vector<Point>& a, const std::vector<Point>& b) {
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a[i].size(); ++j)
                s += (a[i][j] - b[perm[i]][j]) * (a[i][j] - b[perm[i]][j]);
            c += std::sqrt(s);
        }
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(a.size());
}

/// Histogram quantile with mass uniform inside each bin; zero-mass bins are skipped.
inline double hist_quantile(const std::vector<double>& edges, const std::vector<double>& mass, double t) {
    double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < mass.size(); ++j) {
        const double w = mass[j] / total;
        if (w <= 0.0) continue;
        if (t <= acc + w || j + 1 == mass.size()) {
            const double f = std::clamp((t - acc) / w, 0.0, 1.0);
            return edges[j] + f * (edges[j + 1] - edges[j]);
        }
        acc += w;
    }
    return edges.back();
}

/// sqrt of the integral over (0, 1) of (Q1 - Q2)^2 by the midpoint rule,
/// applied separately between consecutive cumulative-mass breakpoints.
inline double mallows_quadrature(const std::vector<double>& e1, const std::vector<double>& m1,
                                 const std::vector<double>& e2, const std::vector<double>& m2,
                                 std::size_t nodes = 100000) {
    std::vector<double> brk{0.0, 1.0};
    for (const auto* m : {&m1, &m2}) {
        const double total = std::accumulate(m->begin(), m->end(), 0.0);
        double acc = 0.0;
        for (double w : *m) brk.push_back(acc += w / total);
    }
    std::sort(brk.begin(), brk.end());
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double lo = brk[i], hi = std::min(brk[i + 1], 1.0);
        if (hi <= lo) continue;
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(nodes * (hi - lo)));
        const double h = (hi - lo) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = lo + (static_cast<double>(k) + 0.5) * h;
            const double g = hist_quantile(e1, m1, t) - hist_quantile(e2, m2, t);
            integral += g * g * h;
        }
    }
    return std::sqrt(integral);
}

/// Law of the number of successes, by enumerating all 2^d outcomes.
inline std::vector<double> poisson_binomial_enumerate(const std::vector<double>& q) {
    const std::size_t d = q.size();
    std::vector<double> law(d + 1, 0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        double p = 1.0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < d; ++i) {
            if (mask >> i & 1U) {
                p *= q[i];
                ++k;
            } else {
                p *= 1.0 - q[i];
            }
        }
        law[k] += p;
    }
    return law;
}

/// Random measure on min(atoms, 2^d) distinct points of {0,1}^d.
inline DiscreteMeasure random_cube_measure(std::size_t d, std::size_t atoms, projstat::Rng& rng) {
    std::uniform_int_distribution<std::size_t> cell(0, (std::size_t{1} << d) - 1);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::map<std::size_t, double> chosen;
    atoms = std::min(atoms, std::size_t{1} << d);
    while (chosen.size() < atoms) chosen[cell(rng)] = w(rng);
    std::vector<Point> pts;
    std::vector<double> ws;
    double total = 0.0;
    for (const auto& [c, wt] : chosen) total += wt;
    for (const auto& [c, wt] : chosen) {
        Point x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(c >> i & 1U);
        pts.push_back(x);
        ws.push_back(wt / total);
    }
    return DiscreteMeasure::from_atoms(pts, ws);
}

/// Random measure with `atoms` points of Z^d inside [-range, range]^d.
inline DiscreteMeasure random_lattice_measure(std::size_t d, std::size_t atoms, int range,
                                              projstat::Rng& rng) {
    std::uniform_int_distribution<int> coord(-range, range);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::map<Point, double> chosen;
    while (chosen.size() < atoms) {
        Point x(d);
        for (auto& v : x) v = coord(rng);
        chosen[x] = w(rng);
    }
    std::vector<Point> pts;
    std::vector<double> ws;
    double total = 0.0;
    for (const auto& [x, wt] : chosen) total += wt;
    for (const auto& [x, wt] : chosen) {
        pts.push_back(x);
        ws.push_back(wt / total);
    }
    return DiscreteMeasure::from_atoms(pts, ws);
}

// Pearson r with its nonparametric standard error, from the influence values
// x*y - r (x^2 + y^2) / 2 of the standardized coordinates.
inline std::pair<double, double> correlation_with_se(const projstat::Sample& s, std::size_t i, std::size_t j) {
    const double n = static_cast<double>(s.size());
    double mi = 0, mj = 0;
    for (const auto& r : s.rows) {
        mi += r[i] / n;
        mj += r[j] / n;
    }
    double sij = 0, sii = 0, sjj = 0;
    for (const auto& r : s.rows) {
        sij += (r[i] - mi) * (r[j] - mj);
        sii += (r[i] - mi) * (r[i] - mi);
        sjj += (r[j] - mj) * (r[j] - mj);
    }
    const double r = sij / std::sqrt(sii * sjj), si = std::sqrt(sii / n), sj = std::sqrt(sjj / n);
    double m1 = 0, m2 = 0;
    for (const auto& row : s.rows) {
        const double x = (row[i] - mi) / si, y = (row[j] - mj) / sj;
        const double psi = x * y - r * (x * x + y * y) / 2;
        m1 += psi / n;
        m2 += psi * psi / n;
    }
    return {r, std::sqrt((m2 - m1 * m1) / n)};
}

}  // namespace oracle
