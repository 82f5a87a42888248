#include "odt/prox.hpp"

#include <cmath>

namespace odt {

GradientField grad(const Vector& image, const CartesianGrid& grid) {
    const int n0 = grid.n0;
    if (image.size() != grid.size()) throw std::invalid_argument("grad: size mismatch");
    GradientField g = GradientField::zero(grid.size());
    for (int row = 0; row < n0; ++row) {
        const int base = row * n0;
        for (int col = 0; col < n0; ++col) {
            const int i = base + col;
            if (col < n0 - 1) g.d1[i] = image[i + 1] - image[i];
            if (row < n0 - 1) g.d2[i] = image[i + n0] - image[i];
        }
    }
    return g;
}

Vector div(const GradientField& field, const CartesianGrid& grid) {
    const int n0 = grid.n0;
    if (field.size() != grid.size()) throw std::invalid_argument("div: size mismatch");
    Vector out = Vector::Zero(grid.size());
    for (int row = 0; row < n0; ++row) {
        const int base = row * n0;
        for (int col = 0; col < n0; ++col) {
            const int i = base + col;
            double v = 0.0;
            if (col < n0 - 1) v += field.d1[i];
            if (col > 0) v -= field.d1[i - 1];
            if (row < n0 - 1) v += field.d2[i];
            if (row > 0) v -= field.d2[i - n0];
            out[i] = v;
        }
    }
    return out;
}

double tv_norm(const Vector& image, const CartesianGrid& grid) {
    const GradientField g = grad(image, grid);
    return (g.d1.array().square() + g.d2.array().square()).sqrt().sum();
}

GradientField project_dual_ball(const GradientField& field) {
    GradientField out = field;
    for (int i = 0; i < out.size(); ++i) {
        const double mag = std::hypot(out.d1[i], out.d2[i]);
        if (mag > 1.0) {
            out.d1[i] /= mag;
            out.d2[i] /= mag;
        }
    }
    return out;
}

Vector project_fidelity_ball(const Vector& v, const Vector& y, double eps) {
    if (v.size() != y.size()) throw std::invalid_argument("project_fidelity_ball: size mismatch");
    if (eps < 0.0) throw std::invalid_argument("project_fidelity_ball: eps must be >= 0");
    const double dist = (v - y).norm();
    if (dist <= eps) return v;
    if (dist == 0.0) return y;
    return y + (v - y) * (eps / dist);
}

Vector prox_fidelity_conjugate(const Vector& s, const Vector& y, double eps, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("prox_fidelity_conjugate: nu must be positive");
    return s - nu * project_fidelity_ball(s / nu, y, eps);
}

Vector project_positive_zero_border(const Vector& x, const CartesianGrid& grid) {
    const int n0 = grid.n0;
    if (x.size() != grid.size())
        throw std::invalid_argument("project_positive_zero_border: size mismatch");
    Vector out(x.size());
    for (int row = 0; row < n0; ++row) {
        const int base = row * n0;
        const bool edge_row = (row == 0 || row == n0 - 1);
        for (int col = 0; col < n0; ++col) {
            const int i = base + col;
            if (edge_row || col == 0 || col == n0 - 1)
                out[i] = 0.0;
            else
                out[i] = x[i] > 0.0 ? x[i] : 0.0;
        }
    }
    return out;
}

Vector prox_l2_norm(const Vector& x, double mu) {
    if (mu < 0.0) throw std::invalid_argument("prox_l2_norm: mu must be >= 0");
    const double norm = x.norm();
    if (norm <= mu) return Vector::Zero(x.size());
    return x * (1.0 - mu / norm);
}

std::vector<Vector> prox_product_g(const std::vector<Vector>& zetas, double mu,
                                   const std::function<Vector(const Vector&, double)>& prox_h) {
    if (zetas.empty()) throw std::invalid_argument("prox_product_g: needs p >= 1 blocks");
    const auto p = zetas.size();
    Vector mean = zetas[0];
    for (size_t j = 1; j < p; ++j) {
        if (zetas[j].size() != mean.size())
            throw std::invalid_argument("prox_product_g: block length mismatch");
        mean += zetas[j];
    }
    mean /= static_cast<double>(p);
    const Vector common = prox_h(mean, mu / static_cast<double>(p));
    return std::vector<Vector>(p, common);
}

}  // namespace odt
