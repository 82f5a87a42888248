#pragma once

#include <Eigen/Dense>

#include "odt/grids.hpp"

namespace odt {

using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Refractive-index map offset from the reference index n_r, vectorized on a
/// Cartesian grid in canonical order.
struct RimImage {
    CartesianGrid grid;
    Vector values;

    RimImage() = default;
    RimImage(const CartesianGrid& g, Vector v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("RimImage: value length does not match grid");
    }
    static RimImage zero(const CartesianGrid& g) { return {g, Vector::Zero(g.size())}; }

    double operator()(int m, int n) const { return values[grid.index(m, n)]; }
    double& operator()(int m, int n) { return values[grid.index(m, n)]; }
};

/// Deflection sines Delta(tau_s, theta_t) on a signed polar grid.
struct Sinogram {
    PolarGrid grid;
    Vector values;

    Sinogram() = default;
    Sinogram(const PolarGrid& g, Vector v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("Sinogram: value length does not match grid");
    }
    static Sinogram zero(const PolarGrid& g) { return {g, Vector::Zero(g.size())}; }

    double operator()(int s, int t) const { return values[grid.index(s, t)]; }
    double& operator()(int s, int t) { return values[grid.index(s, t)]; }
};

/// Real-packed frequency deflectometric measurements: the first M/2 entries
/// are real parts on the half grid, the last M/2 the imaginary parts, both in
/// canonical half-grid order.
struct FdmVector {
    FrequencyPolarGrid grid;
    Vector values;

    FdmVector() = default;
    FdmVector(const FrequencyPolarGrid& g, Vector v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("FdmVector: value length does not match grid");
    }
    static FdmVector zero(const FrequencyPolarGrid& g) { return {g, Vector::Zero(g.size())}; }
};

}  // namespace odt
