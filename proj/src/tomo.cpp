#include "projstat/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "projstat/error.hpp"

namespace projstat::tomo {

namespace {

std::vector<Circle> base_circles(double mean_radius) {
    std::vector<Circle> c;
    for (GridPoint centre : {GridPoint{2, 2}, GridPoint{-2, 2}, GridPoint{2, -2},
                             GridPoint{-2, -2}, GridPoint{0, 0}})
        c.push_back({centre, mean_radius, 0.1});
    return c;
}

std::vector<double> offsets_of(const PointSet& f, const Direction& u) {
    std::vector<double> out;
    out.reserve(f.size());
    for (const auto& p : f.points) out.push_back(offset(p, u));
    return out;
}

// Histogram with the given edges, widening the outer edges if needed so that
// every offset is covered.
Histogram covering_histogram(const PointSet& f, const Direction& u, std::vector<double> edges) {
    const auto v = offsets_of(f, u);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    edges.front() = std::min(edges.front(), *lo);
    edges.back() = std::max(edges.back(), *hi);
    return xray_histogram(f, u, edges);
}

}  // namespace

PhantomConfig scenario_base() {
    PhantomConfig cfg;
    cfg.circles = base_circles(1.0);
    return cfg;
}

PhantomConfig scenario1_extra_circle() {
    PhantomConfig cfg = scenario_base();
    cfg.circles.push_back({{0, 2}, 0.5, 0.1});
    return cfg;
}

PhantomConfig scenario2_larger_circles() {
    PhantomConfig cfg;
    cfg.circles = base_circles(1.2);
    return cfg;
}

double offset(const GridPoint& p, const Direction& u) {
    if (u.dim() != 2) throw std::invalid_argument("tomography directions must be 2-D");
    return -u[1] * p[0] + u[0] * p[1];
}

std::vector<std::size_t> xray(const PointSet& f, const Direction& u,
                              const std::vector<double>& offsets, double tol) {
    std::vector<std::size_t> counts(offsets.size(), 0);
    for (const auto& p : f.points) {
        const double s = offset(p, u);
        for (std::size_t k = 0; k < offsets.size(); ++k)
            if (std::abs(s - offsets[k]) <= tol) ++counts[k];
    }
    return counts;
}

Histogram xray_histogram(const PointSet& f, const Direction& u,
                         const std::vector<double>& bin_edges) {
    if (f.points.empty()) throw std::invalid_argument("point set is empty");
    if (bin_edges.size() < 2) throw std::invalid_argument("need at least one bin");
    std::vector<double> counts(bin_edges.size() - 1, 0.0);
    for (const auto& p : f.points) {
        const double s = offset(p, u);
        if (s < bin_edges.front() || s > bin_edges.back())
            throw DataError("projected offset " + std::to_string(s) + " lies outside bins [" +
                            std::to_string(bin_edges.front()) + ", " +
                            std::to_string(bin_edges.back()) + "]");
        auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), s);
        std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin());
        bin = bin == 0 ? 0 : std::min(bin - 1, counts.size() - 1);
        counts[bin] += 1.0;
    }
    return Histogram(bin_edges, std::move(counts));
}

PointSet generate_phantom(const PhantomConfig& cfg, Rng& rng) {
    if (!(cfg.spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (!(cfg.upper[0] > cfg.lower[0] && cfg.upper[1] > cfg.lower[1]))
        throw std::invalid_argument("empty bounding box");
    std::vector<double> radii;
    for (const auto& c : cfg.circles) {
        if (!(c.mean_radius > 0.0) || !(c.sd_radius >= 0.0))
            throw std::invalid_argument("circle needs mean_radius > 0 and sd_radius >= 0");
        double r = c.mean_radius;
        if (c.sd_radius > 0.0) {
            std::normal_distribution<double> normal(c.mean_radius, c.sd_radius);
            do r = normal(rng);
            while (!(r > 0.0));
        }
        radii.push_back(r);
    }

    const double h = cfg.spacing;
    const auto nx = static_cast<long>(std::floor((cfg.upper[0] - cfg.lower[0]) / h + 1e-9));
    const auto ny = static_cast<long>(std::floor((cfg.upper[1] - cfg.lower[1]) / h + 1e-9));
    PointSet out;
    out.spacing = h;
    for (long i = 0; i <= nx; ++i) {
        for (long j = 0; j <= ny; ++j) {
            const GridPoint p{cfg.lower[0] + static_cast<double>(i) * h,
                              cfg.lower[1] + static_cast<double>(j) * h};
            for (std::size_t c = 0; c < cfg.circles.size(); ++c) {
                const double dist = std::hypot(p[0] - cfg.circles[c].center[0],
                                               p[1] - cfg.circles[c].center[1]);
                const bool hit = cfg.filled ? dist <= radii[c] + h / 2
                                            : std::abs(dist - radii[c]) <= h / 2;
                if (hit) {
                    out.points.push_back(p);
                    break;
                }
            }
        }
    }
    if (out.points.empty()) throw DataError("phantom has no grid points");
    return out;
}

TomoModel fit_tomo(const std::vector<PointSet>& images, const std::vector<int>& labels,
                   std::vector<Direction> directions, std::size_t bins, std::size_t r) {
    if (images.size() != labels.size())
        throw std::invalid_argument("one label per training image required");
    if (images.empty()) throw std::invalid_argument("no training images");
    for (int l : labels)
        if (l != 0 && l != 1) throw std::invalid_argument("tomography labels must be 0 or 1");
    if (r % 2 == 0) throw std::invalid_argument("neighbour count must be odd");
    if (r >= images.size())
        throw std::invalid_argument("neighbour count " + std::to_string(r) +
                                    " must be below the training size " +
                                    std::to_string(images.size()));
    if (directions.empty()) throw std::invalid_argument("at least one direction is required");
    if (bins < 1) throw std::invalid_argument("need at least one bin");

    TomoModel m;
    m.labels = labels;
    m.neighbours = r;
    for (const auto& u : directions) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& img : images)
            for (const auto& p : img.points) {
                const double s = offset(p, u);
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
        const double width = std::max((hi - lo) / static_cast<double>(bins), 1e-6);
        // One extra bin on each side absorbs test offsets just outside the pool.
        std::vector<double> edges(bins + 3);
        for (std::size_t k = 0; k < edges.size(); ++k)
            edges[k] = lo - width + width * static_cast<double>(k);
        std::vector<Histogram> hs;
        hs.reserve(images.size());
        for (const auto& img : images) hs.push_back(xray_histogram(img, u, edges));
        m.edges.push_back(std::move(edges));
        m.histograms.push_back(std::move(hs));
    }
    m.directions = std::move(directions);
    return m;
}

std::vector<int> tomo_votes(const TomoModel& model, const PointSet& f) {
    std::vector<int> votes;
    votes.reserve(model.directions.size());
    const std::size_t n = model.labels.size();
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < model.directions.size(); ++j) {
        const Histogram h = covering_histogram(f, model.directions[j], model.edges[j]);
        for (std::size_t i = 0; i < n; ++i) dist[i] = mallows_l2_histogram(h, model.histograms[j][i]);
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(model.neighbours),
                          order.end(), [&](std::size_t a, std::size_t b) {
                              return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                          });
        std::size_t ones = 0;
        for (std::size_t k = 0; k < model.neighbours; ++k) ones += model.labels[order[k]] == 1;
        votes.push_back(2 * ones > model.neighbours ? 1 : 0);
    }
    return votes;
}

int tomo_predict(const TomoModel& model, const PointSet& f) {
    const auto votes = tomo_votes(model, f);
    const double mean = std::accumulate(votes.begin(), votes.end(), 0.0) /
                        static_cast<double>(votes.size());
    return mean < 0.5 ? 0 : 1;
}

}  // namespace projstat::tomo
