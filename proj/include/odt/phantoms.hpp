#pragma once

#include <vector>

#include "odt/image.hpp"

namespace odt {

/// Disc center in (signed) pixel coordinates of the Cartesian grid.
struct PixelCoord {
    double m = 0.0;
    double n = 0.0;
};

/// Bundle of discs of equal radius (pixels), value delta_n inside, 0 outside.
/// A pixel belongs to a disc iff its center lies inside; discs must stay
/// strictly inside the FoV interior so the frontier constraint is feasible.
RimImage make_fibers(const CartesianGrid& grid, const std::vector<PixelCoord>& centers,
                     double radius_px, double delta_n);

/// Single homogeneous disc.
RimImage make_ball(const CartesianGrid& grid, PixelCoord center, double radius_px,
                   double delta_n);

/// Standard 10-ellipse Shepp-Logan head phantom rescaled to [0, delta_n_scale].
RimImage make_shepp_logan(const CartesianGrid& grid, double delta_n_scale);

/// Default fiber layout: a central fiber plus rings of 3 and 6, scaled to the
/// grid (radius n0/32 pixels, ring radii 3 and 6 times that).
std::vector<PixelCoord> default_fiber_centers(const CartesianGrid& grid);
double default_fiber_radius(const CartesianGrid& grid);

/// Ball settings used throughout the experiments: center (154,154) in 1-based
/// matrix coordinates of a 256 grid and radius 60 px, both scaled to n0.
PixelCoord default_ball_center(const CartesianGrid& grid);
double default_ball_radius(const CartesianGrid& grid);

inline constexpr double kFibersDeltaN = 12.1e-3;
inline constexpr double kBallDeltaN = 2.8e-3;

}  // namespace odt
