#ifndef OPM_BODIES_HPP
#define OPM_BODIES_HPP

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "opm/sphere.hpp"

namespace opm {

struct VertexSet {
    std::vector<Vec> vertices;
};

// One atom per active facet: the outer normal and its (n-1)-dimensional area.
struct SurfaceAreaMeasure {
    std::vector<UnitVector> normals;
    std::vector<double> areas;
    std::vector<double> offsets;  // h_P at the atom normal (= z_i)
};

// P(z) = ∩ { x : <x, u_i> <= z_i }. Vertices are enumerated eagerly at
// construction; all evaluations afterwards are pure and thread-safe.
class HPolytope {
public:
    HPolytope(std::vector<UnitVector> normals, std::vector<double> offsets);

    std::size_t dim() const { return dim_; }
    std::size_t facet_count() const { return normals_.size(); }
    const std::vector<UnitVector>& normals() const { return normals_; }
    const std::vector<double>& offsets() const { return offsets_; }

    const VertexSet& vertices() const { return vertices_; }

    double support(const UnitVector& u) const;        // h_P(u)
    double support(const Vec& direction) const;       // max over vertices, any vector
    double polar_support(const UnitVector& u) const;  // h_{P°}(u) = max_i <u,u_i>_+/z_i
    double radial(const UnitVector& u) const;         // ρ_P(u)  = 1/h_{P°}(u)
    double polar_radial(const UnitVector& u) const;   // ρ_{P°}(u) = 1/h_P(u)

    HPolytope scaled(double s) const;

    // n in {2,3} only. Atoms with zero area (inactive facets) are dropped.
    SurfaceAreaMeasure surface_area_measure() const;
    double volume() const;  // (1/n) Σ area_i z_i
    double surface_area() const;

    // H-representation of P° = conv{ u_i / z_i }: one facet per vertex of P.
    HPolytope polar() const;

    const kernels::PointBlock& vertex_block() const { return vertex_block_; }

private:
    std::size_t dim_;
    std::vector<UnitVector> normals_;
    std::vector<double> offsets_;
    VertexSet vertices_;
    kernels::PointBlock vertex_block_;          // for support()
    kernels::PointBlock scaled_normal_block_;   // u_i/z_i, for polar_support()
    void build_blocks();
};

double hausdorff_distance(const HPolytope& p, const HPolytope& q, const QuadratureRule& rule);

// min over probe directions v of max_i <v, u_i>; positive iff the normals
// escape every closed hemisphere (probed, not proven).
double hemisphere_margin(const std::vector<UnitVector>& directions);

struct BallBody {
    double radius;
};
struct EllipsoidBody {
    Vec semiaxes;
    std::optional<Rotation> orientation;  // body = T * diag(a) * B^n
};
// Cone with apex height 1/inv_apex_height on `axis` and base radius
// 1/inv_base_radius in the equatorial hyperplane; radial function
// 1/(R sinθ + r cosθ) above the equator and 0 below. Radial-only.
struct ConeBody {
    double inv_base_radius;   // R
    double inv_apex_height;   // r
    UnitVector axis;
};
struct PolytopeBody {
    std::shared_ptr<const HPolytope> p;
};
struct PolarPolytopeBody {
    std::shared_ptr<const HPolytope> p;
};
struct ScaledBody;
struct SupportAverageBody {
    std::shared_ptr<const HPolytope> p;
    std::shared_ptr<const HPolytope> q;
};

class StarBody;

struct ScaledBody {
    std::shared_ptr<const StarBody> inner;
    double factor;
};

// Star-shaped catalog body with radial (always) and support (convex kinds
// with the origin interior; Cone is radial-only) evaluation.
class StarBody {
public:
    using Payload = std::variant<BallBody, EllipsoidBody, ConeBody, PolytopeBody,
                                 PolarPolytopeBody, ScaledBody, SupportAverageBody>;

    static StarBody ball(std::size_t dim, double radius);
    static StarBody ellipsoid(Vec semiaxes, std::optional<Rotation> orientation = {});
    static StarBody cone(std::size_t dim, double inv_base_radius, double inv_apex_height,
                         std::optional<UnitVector> axis = {});
    static StarBody polytope(HPolytope p);
    static StarBody polar_polytope(HPolytope p);
    static StarBody scaled(StarBody body, double factor);
    static StarBody support_average(HPolytope p, HPolytope q);

    std::size_t dim() const { return dim_; }
    const Payload& payload() const { return payload_; }

    double radial(const UnitVector& u) const;
    bool has_support() const;
    double support(const UnitVector& u) const;
    double polar_radial(const UnitVector& u) const { return 1.0 / support(u); }

    // ρ evaluated at every node of the rule; batched kernels where possible.
    std::vector<double> radial_profile(const QuadratureRule& rule) const;
    std::vector<double> support_profile(const QuadratureRule& rule) const;

private:
    StarBody(std::size_t dim, Payload payload) : dim_(dim), payload_(std::move(payload)) {}
    std::size_t dim_;
    Payload payload_;
};

// Cross-polytope-style regular approximations used around the test suite.
HPolytope cube_polytope(std::size_t n, double half_side);
HPolytope regular_polygon(std::size_t sides, double apothem);  // n = 2

}  // namespace opm

#endif
