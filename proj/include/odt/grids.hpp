#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "odt/errors.hpp"

namespace odt {

inline constexpr double kPi = 3.14159265358979323846;

/// Square spatial sampling grid C_N of n0 x n0 pixels with pitch delta_r.
///
/// Pixel coordinates are r_{m,n} = (m*delta_r, n*delta_r) for
/// -n0/2 <= m,n < n0/2. Vectorized storage is row-major in (n, m):
/// index = (n + n0/2)*n0 + (m + n0/2), i.e. m varies fastest.
struct CartesianGrid {
    int n0 = 0;
    double delta_r = 0.0;

    static CartesianGrid create(int n0, double delta_r);

    int size() const { return n0 * n0; }

    int index(int m, int n) const;
    std::pair<int, int> coords(int index) const;  // returns (m, n)

    double x(int m) const { return m * delta_r; }
    double y(int n) const { return n * delta_r; }

    /// True if at least one of the two coordinates equals -n0/2 or n0/2-1.
    bool on_boundary(int m, int n) const {
        const int lo = -n0 / 2, hi = n0 / 2 - 1;
        return m == lo || m == hi || n == lo || n == hi;
    }

    /// Index set of the FoV frontier; has exactly 4*n0 - 4 members.
    std::vector<int> boundary_indices() const;
    std::vector<int> interior_indices() const;

    /// Half side length of the FoV, n0/2 * delta_r.
    double half_extent() const { return 0.5 * n0 * delta_r; }
};

/// Signed regular polar measurement grid P_M.
///
/// tau_s = s*delta_tau for -n_tau/2 <= s < n_tau/2 and theta_t = t*pi/n_theta
/// for 0 <= t < n_theta. Vectorized storage is angle-major:
/// index = t*n_tau + (s + n_tau/2).
struct PolarGrid {
    int n_tau = 0;
    int n_theta = 0;
    double delta_tau = 0.0;

    static PolarGrid create(int n_tau, int n_theta, double delta_tau);

    int size() const { return n_tau * n_theta; }
    double delta_theta() const { return kPi / n_theta; }

    double tau(int s) const { return s * delta_tau; }
    double theta(int t) const { return t * delta_theta(); }

    int index(int s, int t) const;
    std::pair<int, int> coords(int index) const;  // returns (s, t)
};

/// Signed polar frequency grid, same shape as the measurement grid, with
/// radial spacing delta_omega = 1/(n_tau*delta_tau).
///
/// Full-grid storage matches PolarGrid (angle-major, s' + n_tau/2 within a
/// slice). The half grid keeps 0 <= s' < n_tau/2 in the same angle-major
/// order: half_index = t*(n_tau/2) + s'.
struct FrequencyPolarGrid {
    int n_tau = 0;
    int n_theta = 0;
    double delta_tau = 0.0;

    static FrequencyPolarGrid create(int n_tau, int n_theta, double delta_tau);
    static FrequencyPolarGrid from_polar(const PolarGrid& polar) {
        return create(polar.n_tau, polar.n_theta, polar.delta_tau);
    }
    PolarGrid to_polar() const { return PolarGrid::create(n_tau, n_theta, delta_tau); }

    int size() const { return n_tau * n_theta; }
    int half_size() const { return size() / 2; }
    double delta_theta() const { return kPi / n_theta; }
    double delta_omega() const { return 1.0 / (n_tau * delta_tau); }

    double omega(int sp) const { return sp * delta_omega(); }
    double theta(int t) const { return t * delta_theta(); }

    /// Unit normal p_theta = (-sin theta, cos theta) of angle slot t.
    std::pair<double, double> direction(int t) const {
        const double th = theta(t);
        return {-std::sin(th), std::cos(th)};
    }

    int index(int sp, int t) const;
    std::pair<int, int> coords(int index) const;  // returns (s', t)

    int half_index(int sp, int t) const;
    std::pair<int, int> half_coords(int half_index) const;
};

/// Measurement grid paired to a spatial grid under the matching-FoV
/// convention delta_tau*n_tau = delta_r*n0.
PolarGrid matched_polar_grid(const CartesianGrid& cart, int n_tau, int n_theta);

/// True when the polar FoV matches the Cartesian FoV to within `rel_tol`.
bool fov_compatible(const CartesianGrid& cart, const PolarGrid& polar, double rel_tol = 0.5);

}  // namespace odt
