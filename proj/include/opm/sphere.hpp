#ifndef OPM_SPHERE_HPP
#define OPM_SPHERE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "opm/kernels.hpp"

namespace opm {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);
Vec scaled(const Vec& v, double s);
Vec normalized(const Vec& v);

// Direction on S^{n-1}; the constructor checks |norm - 1| <= 1e-12 and n >= 2.
class UnitVector {
public:
    explicit UnitVector(Vec coords);
    static UnitVector axis(std::size_t n, std::size_t k, double sign = 1.0);
    static UnitVector normalize(Vec v);  // rescales, then constructs

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const Vec& coords() const { return coords_; }

private:
    Vec coords_;
};

double dot(const UnitVector& a, const UnitVector& b);
double dot(const UnitVector& a, const Vec& b);

// Orthogonal n x n matrix, row-major. Validated to T T^t = I within 1e-10.
class Rotation {
public:
    Rotation(std::size_t n, std::vector<double> row_major);
    static Rotation identity(std::size_t n);

    std::size_t dim() const { return n_; }
    double entry(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }

    Vec apply(const Vec& v) const;            // T v
    Vec apply_transpose(const Vec& v) const;  // T^t v
    UnitVector apply(const UnitVector& u) const;
    UnitVector apply_transpose(const UnitVector& u) const;

    const std::vector<double>& row_major() const { return m_; }

private:
    std::size_t n_ = 0;
    std::vector<double> m_;
};

// Orthogonal T with T^t a = b (equivalently T b = a), built by completing
// {a} and {b} to orthonormal bases.
Rotation rotation_sending(const UnitVector& a, const UnitVector& b);

// Weighted node set for integration against the spherical measure du.
// Built once, immutable afterwards; safe to share across threads.
class QuadratureRule {
public:
    QuadratureRule(std::size_t dimension, std::vector<UnitVector> nodes,
                   std::vector<double> weights);

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<UnitVector>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const UnitVector& node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    double weight_sum() const { return weight_sum_; }

    // Node coordinates as a SoA block (node j = point j), for the batched
    // support/radial kernels.
    const kernels::PointBlock& node_block() const { return block_; }

private:
    std::size_t dim_;
    std::vector<UnitVector> nodes_;
    std::vector<double> weights_;
    double weight_sum_ = 0.0;
    kernels::PointBlock block_;
};

// Surface area of S^{n-1}, i.e. n V(B^n).
double sphere_surface_area(std::size_t n);
// Volume of the unit ball B^n.
double unit_ball_volume(std::size_t n);

// Product rule over the general spherical coordinates u = (v sinθ, cosθ):
// uniform nodes on S^1 at the base, Gauss-Legendre in θ per level with the
// (sinθ)^(n-2) factor folded into the weights. The θ nodes are placed in two
// panels [0,π/2] and [π/2,π] so integrands with an equatorial kink (cones,
// hemisphere indicators) still converge spectrally.
QuadratureRule product_rule(std::size_t n, std::size_t resolution);

// Default resolution per the catalog scale: 48 per angular factor for n<=3,
// 24 for n>=4.
std::size_t default_resolution(std::size_t n);
const QuadratureRule& default_rule(std::size_t n);

double integrate(const QuadratureRule& rule, const std::function<double(const UnitVector&)>& f);
// Σ w_i values_i for precomputed node values.
double integrate_values(const QuadratureRule& rule, const std::vector<double>& values);

// Gauss-Legendre nodes/weights on [-1,1], by Newton iteration on P_k.
void gauss_legendre(std::size_t k, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace opm

#endif
