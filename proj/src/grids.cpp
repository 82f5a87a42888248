#include "odt/grids.hpp"

namespace odt {

CartesianGrid CartesianGrid::create(int n0, double delta_r) {
    if (n0 < 2 || n0 % 2 != 0)
        throw std::invalid_argument("CartesianGrid: n0 must be even and >= 2");
    if (!(delta_r > 0.0))
        throw std::invalid_argument("CartesianGrid: delta_r must be positive");
    return CartesianGrid{n0, delta_r};
}

int CartesianGrid::index(int m, int n) const {
    const int half = n0 / 2;
    if (m < -half || m >= half || n < -half || n >= half)
        throw std::invalid_argument("CartesianGrid::index: coordinate out of range");
    return (n + half) * n0 + (m + half);
}

std::pair<int, int> CartesianGrid::coords(int index) const {
    if (index < 0 || index >= size())
        throw std::invalid_argument("CartesianGrid::coords: index out of range");
    const int half = n0 / 2;
    return {index % n0 - half, index / n0 - half};
}

std::vector<int> CartesianGrid::boundary_indices() const {
    std::vector<int> out;
    out.reserve(4 * n0 - 4);
    const int half = n0 / 2;
    for (int n = -half; n < half; ++n)
        for (int m = -half; m < half; ++m)
            if (on_boundary(m, n)) out.push_back(index(m, n));
    return out;
}

std::vector<int> CartesianGrid::interior_indices() const {
    std::vector<int> out;
    out.reserve(size() - (4 * n0 - 4));
    const int half = n0 / 2;
    for (int n = -half; n < half; ++n)
        for (int m = -half; m < half; ++m)
            if (!on_boundary(m, n)) out.push_back(index(m, n));
    return out;
}

PolarGrid PolarGrid::create(int n_tau, int n_theta, double delta_tau) {
    if (n_tau < 2 || n_tau % 2 != 0)
        throw std::invalid_argument("PolarGrid: n_tau must be even and >= 2");
    if (n_theta < 1)
        throw std::invalid_argument("PolarGrid: n_theta must be positive");
    if (!(delta_tau > 0.0))
        throw std::invalid_argument("PolarGrid: delta_tau must be positive");
    return PolarGrid{n_tau, n_theta, delta_tau};
}

int PolarGrid::index(int s, int t) const {
    const int half = n_tau / 2;
    if (s < -half || s >= half || t < 0 || t >= n_theta)
        throw std::invalid_argument("PolarGrid::index: coordinate out of range");
    return t * n_tau + (s + half);
}

std::pair<int, int> PolarGrid::coords(int index) const {
    if (index < 0 || index >= size())
        throw std::invalid_argument("PolarGrid::coords: index out of range");
    return {index % n_tau - n_tau / 2, index / n_tau};
}

FrequencyPolarGrid FrequencyPolarGrid::create(int n_tau, int n_theta, double delta_tau) {
    PolarGrid::create(n_tau, n_theta, delta_tau);  // same shape preconditions
    return FrequencyPolarGrid{n_tau, n_theta, delta_tau};
}

int FrequencyPolarGrid::index(int sp, int t) const {
    const int half = n_tau / 2;
    if (sp < -half || sp >= half || t < 0 || t >= n_theta)
        throw std::invalid_argument("FrequencyPolarGrid::index: coordinate out of range");
    return t * n_tau + (sp + half);
}

std::pair<int, int> FrequencyPolarGrid::coords(int index) const {
    if (index < 0 || index >= size())
        throw std::invalid_argument("FrequencyPolarGrid::coords: index out of range");
    return {index % n_tau - n_tau / 2, index / n_tau};
}

int FrequencyPolarGrid::half_index(int sp, int t) const {
    const int half = n_tau / 2;
    if (sp < 0 || sp >= half || t < 0 || t >= n_theta)
        throw std::invalid_argument("FrequencyPolarGrid::half_index: coordinate out of range");
    return t * half + sp;
}

std::pair<int, int> FrequencyPolarGrid::half_coords(int half_index) const {
    if (half_index < 0 || half_index >= half_size())
        throw std::invalid_argument("FrequencyPolarGrid::half_coords: index out of range");
    const int half = n_tau / 2;
    return {half_index % half, half_index / half};
}

PolarGrid matched_polar_grid(const CartesianGrid& cart, int n_tau, int n_theta) {
    if (n_tau < 2 || n_tau % 2 != 0)
        throw std::invalid_argument("matched_polar_grid: n_tau must be even and >= 2");
    return PolarGrid::create(n_tau, n_theta, cart.delta_r * cart.n0 / n_tau);
}

bool fov_compatible(const CartesianGrid& cart, const PolarGrid& polar, double rel_tol) {
    const double fov_c = cart.n0 * cart.delta_r;
    const double fov_p = polar.n_tau * polar.delta_tau;
    return std::abs(fov_p - fov_c) <= rel_tol * fov_c;
}

}  // namespace odt
