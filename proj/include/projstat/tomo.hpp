#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "projstat/measures.hpp"
#include "projstat/projections.hpp"
#include "projstat/rng.hpp"

namespace projstat::tomo {

using GridPoint = std::array<double, 2>;

/// Finite set of grid points in the plane (a binary image).
struct PointSet {
    std::vector<GridPoint> points;
    double spacing = 0.05;

    std::size_t size() const { return points.size(); }
};

struct Circle {
    GridPoint center;
    double mean_radius;
    double sd_radius;
};

struct PhantomConfig {
    std::vector<Circle> circles;
    double spacing = 0.05;
    GridPoint lower{-3.5, -3.5};
    GridPoint upper{3.5, 3.5};
    /// Outlines of one grid cell thickness; filled disks when true.
    bool filled = false;
};

/// Five unit circles centred at (+-2, +-2) and (0, 0), radius sd 0.1.
PhantomConfig scenario_base();
/// scenario_base() plus a circle of mean radius 1/2 centred at (0, 2).
PhantomConfig scenario1_extra_circle();
/// The five circles of scenario_base() with mean radius 1.2.
PhantomConfig scenario2_larger_circles();

/// Signed offset <p, u_perp> with u_perp = (-u2, u1).
double offset(const GridPoint& p, const Direction& u);

/// Number of points of F on the line at each signed offset (within +-tol).
std::vector<std::size_t> xray(const PointSet& f, const Direction& u,
                              const std::vector<double>& offsets, double tol);

/// Normalized histogram of offsets over [e_j, e_j+1) bins (last bin closed).
/// Throws DataError if an offset falls outside the edges.
Histogram xray_histogram(const PointSet& f, const Direction& u,
                         const std::vector<double>& bin_edges);

/// Draws one radius per circle (Normal, redrawn until positive) and keeps
/// every grid point within half a cell of some circle (or inside it when
/// filled). Throws DataError if nothing lands on the grid.
PointSet generate_phantom(const PhantomConfig& cfg, Rng& rng);

struct TomoModel {
    std::vector<Direction> directions;
    /// edges[j]: shared bin edges for direction j.
    std::vector<std::vector<double>> edges;
    /// histograms[j][i]: training image i on direction j.
    std::vector<std::vector<Histogram>> histograms;
    std::vector<int> labels;
    std::size_t neighbours = 21;
};

inline constexpr std::size_t kDefaultBins = 30;

/// Stores the histograms of every training image on every direction. Shared
/// edges per direction span the training offsets (padded by one bin width on
/// each side). Requires binary labels, odd r, and r < n.
TomoModel fit_tomo(const std::vector<PointSet>& images, const std::vector<int>& labels,
                   std::vector<Direction> directions, std::size_t bins = kDefaultBins,
                   std::size_t r = 21);

/// Per-direction r-nearest-neighbour votes (0 or 1).
std::vector<int> tomo_votes(const TomoModel& model, const PointSet& f);

/// 0 iff the mean per-direction vote is below 1/2.
int tomo_predict(const TomoModel& model, const PointSet& f);

}  // namespace projstat::tomo
