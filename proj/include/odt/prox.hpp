#pragma once

#include <functional>
#include <vector>

#include "odt/image.hpp"

namespace odt {

/// Forward-difference gradient pair (d1, d2) of an image, one value per pixel.
/// d1 differences along the first coordinate (m), d2 along the second (n);
/// the difference is zero at the far boundary.
struct GradientField {
    Vector d1;
    Vector d2;

    GradientField() = default;
    GradientField(Vector a, Vector b) : d1(std::move(a)), d2(std::move(b)) {
        if (d1.size() != d2.size())
            throw std::invalid_argument("GradientField: component size mismatch");
    }
    static GradientField zero(int n) { return {Vector::Zero(n), Vector::Zero(n)}; }
    int size() const { return static_cast<int>(d1.size()); }
};

GradientField grad(const Vector& image, const CartesianGrid& grid);

/// Exact negative adjoint of grad: <grad(x), p> = <x, -div(p)>.
Vector div(const GradientField& field, const CartesianGrid& grid);

/// ||grad(image)||_{2,1}, the isotropic total variation seminorm.
double tv_norm(const Vector& image, const CartesianGrid& grid);

/// Pixelwise projection onto {q : ||q||_{2,inf} <= 1}; the prox of the TV
/// conjugate, independent of the dual stepsize.
GradientField project_dual_ball(const GradientField& field);

/// Projection onto the fidelity ball {v : ||v - y|| <= eps}.
Vector project_fidelity_ball(const Vector& v, const Vector& y, double eps);

/// prox of nu*F2^star via the Moreau identity, where F2 is the indicator of
/// the fidelity ball: result = s - nu * proj_ball(s/nu).
Vector prox_fidelity_conjugate(const Vector& s, const Vector& y, double eps, double nu);

/// Projection onto P0 = {u >= 0 on int Omega, u = 0 on the frontier}.
Vector project_positive_zero_border(const Vector& x, const CartesianGrid& grid);

/// prox of mu*||.||_2 (block soft threshold of the whole vector).
Vector prox_l2_norm(const Vector& x, double mu);

/// Product-space prox of G = sum of bisector indicators + H(x1): every output
/// block equals prox_{(mu/p) H} of the blockwise mean.
std::vector<Vector> prox_product_g(const std::vector<Vector>& zetas, double mu,
                                   const std::function<Vector(const Vector&, double)>& prox_h);

}  // namespace odt
