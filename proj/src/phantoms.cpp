#include "odt/phantoms.hpp"

#include <array>
#include <cmath>

namespace odt {

namespace {

// Disc must stay strictly inside int Omega so that no covered pixel lies on
// the frontier.
void check_disc_inside(const CartesianGrid& grid, const PixelCoord& c, double r) {
    const double lo = -grid.n0 / 2 + 1;
    const double hi = grid.n0 / 2 - 2;
    if (c.m - r < lo || c.m + r > hi || c.n - r < lo || c.n + r > hi)
        throw std::invalid_argument("phantom disc touches the FoV frontier");
}

void paint_disc(RimImage& img, const PixelCoord& c, double r, double delta_n) {
    const int half = img.grid.n0 / 2;
    const int m_lo = std::max(-half, (int)std::floor(c.m - r));
    const int m_hi = std::min(half - 1, (int)std::ceil(c.m + r));
    const int n_lo = std::max(-half, (int)std::floor(c.n - r));
    const int n_hi = std::min(half - 1, (int)std::ceil(c.n + r));
    for (int n = n_lo; n <= n_hi; ++n)
        for (int m = m_lo; m <= m_hi; ++m) {
            const double dm = m - c.m, dn = n - c.n;
            if (dm * dm + dn * dn <= r * r) img(m, n) = delta_n;
        }
}

}  // namespace

RimImage make_fibers(const CartesianGrid& grid, const std::vector<PixelCoord>& centers,
                     double radius_px, double delta_n) {
    if (!(radius_px > 0.0)) throw std::invalid_argument("make_fibers: radius must be positive");
    for (size_t i = 0; i < centers.size(); ++i) {
        check_disc_inside(grid, centers[i], radius_px);
        for (size_t j = i + 1; j < centers.size(); ++j) {
            const double dm = centers[i].m - centers[j].m;
            const double dn = centers[i].n - centers[j].n;
            if (std::sqrt(dm * dm + dn * dn) < 2.0 * radius_px)
                throw std::invalid_argument("make_fibers: discs overlap");
        }
    }
    RimImage img = RimImage::zero(grid);
    for (const auto& c : centers) paint_disc(img, c, radius_px, delta_n);
    return img;
}

RimImage make_ball(const CartesianGrid& grid, PixelCoord center, double radius_px,
                   double delta_n) {
    if (!(radius_px > 0.0)) throw std::invalid_argument("make_ball: radius must be positive");
    check_disc_inside(grid, center, radius_px);
    RimImage img = RimImage::zero(grid);
    paint_disc(img, center, radius_px, delta_n);
    return img;
}

namespace {

struct Ellipse {
    double x0, y0, a, b, phi_deg, value;
};

// Canonical Shepp-Logan ellipse table on [-1,1]^2.
constexpr std::array<Ellipse, 10> kSheppLogan = {{
    {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
    {0.0, -0.0184, 0.6624, 0.8740, 0.0, -0.98},
    {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
    {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
}};

}  // namespace

RimImage make_shepp_logan(const CartesianGrid& grid, double delta_n_scale) {
    RimImage img = RimImage::zero(grid);
    const int half = grid.n0 / 2;
    const double scale = 2.0 / grid.n0;
    for (int n = -half; n < half; ++n) {
        for (int m = -half; m < half; ++m) {
            const double x = m * scale, y = n * scale;
            double v = 0.0;
            for (const auto& e : kSheppLogan) {
                const double phi = e.phi_deg * kPi / 180.0;
                const double ct = std::cos(phi), st = std::sin(phi);
                const double dx = x - e.x0, dy = y - e.y0;
                const double xr = ct * dx + st * dy;
                const double yr = -st * dx + ct * dy;
                if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) v += e.value;
            }
            img(m, n) = v;
        }
    }
    const double vmin = img.values.minCoeff();
    const double vmax = img.values.maxCoeff();
    if (vmax > vmin)
        img.values = (img.values.array() - vmin) / (vmax - vmin) * delta_n_scale;
    else
        img.values.setZero();
    return img;
}

std::vector<PixelCoord> default_fiber_centers(const CartesianGrid& grid) {
    const double r = default_fiber_radius(grid);
    std::vector<PixelCoord> centers;
    centers.push_back({0.0, 0.0});
    for (int k = 0; k < 3; ++k) {
        const double a = kPi / 2.0 + k * 2.0 * kPi / 3.0;
        centers.push_back({3.0 * r * std::cos(a), 3.0 * r * std::sin(a)});
    }
    for (int k = 0; k < 6; ++k) {
        const double a = k * kPi / 3.0;
        centers.push_back({6.0 * r * std::cos(a), 6.0 * r * std::sin(a)});
    }
    return centers;
}

double default_fiber_radius(const CartesianGrid& grid) { return grid.n0 / 32.0; }

PixelCoord default_ball_center(const CartesianGrid& grid) {
    // Pixel (154,154) in 1-based matrix coordinates of a 256 grid maps to
    // signed coordinate 154 - 1 - 128 = 25; scale with the grid side.
    const double c = 25.0 * grid.n0 / 256.0;
    return {c, c};
}

double default_ball_radius(const CartesianGrid& grid) { return 60.0 * grid.n0 / 256.0; }

}  // namespace odt
