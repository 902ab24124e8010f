#include "opm/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "opm/errors.hpp"

namespace opm {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr double kVertexDedup = 1e-8;

// Solves A x = b for a small n x n system by Gaussian elimination with
// partial pivoting. Returns false when the system is (near) singular.
bool solve_small(std::vector<double> a, Vec b, Vec& x) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < 1e-10) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / a[col * n + col];
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
        x[r] = s / a[r * n + r];
    }
    return true;
}

const QuadratureRule& probe_rule(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, product_rule(n, 16)).first;
    return it->second;
}

}  // namespace

double hemisphere_margin(const std::vector<UnitVector>& directions) {
    if (directions.empty()) throw SchemaError("hemisphere_margin: no directions");
    std::size_t n = directions.front().dim();
    auto max_over = [&](const Vec& v) {
        double best = -std::numeric_limits<double>::infinity();
        for (const UnitVector& u : directions) best = std::max(best, dot(u, v));
        return best;
    };
    double margin = std::numeric_limits<double>::infinity();
    for (const UnitVector& probe : probe_rule(n).nodes())
        margin = std::min(margin, max_over(probe.coords()));
    for (const UnitVector& u : directions) {
        margin = std::min(margin, max_over(u.coords()));
        margin = std::min(margin, max_over(scaled(u.coords(), -1.0)));
    }
    return margin;
}

HPolytope::HPolytope(std::vector<UnitVector> normals, std::vector<double> offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (normals_.empty() || normals_.size() != offsets_.size())
        throw SchemaError("HPolytope: normals/offsets mismatch");
    dim_ = normals_.front().dim();
    for (const UnitVector& u : normals_)
        if (u.dim() != dim_) throw SchemaError("HPolytope: mixed dimensions");
    for (double z : offsets_)
        if (!(z > 0.0)) throw SchemaError("HPolytope: offsets must be positive");
    if (normals_.size() < dim_ + 1)
        throw SchemaError("HPolytope: needs at least n+1 facets");
    if (hemisphere_margin(normals_) <= 1e-12)
        throw SchemaError("HPolytope: normals are concentrated on a closed hemisphere");

    // Enumerate all n-subsets of facets and keep feasible intersections.
    const std::size_t m = normals_.size(), n = dim_;
    double subsets = 1.0;
    for (std::size_t i = 0; i < n; ++i) subsets *= double(m - i) / double(i + 1);
    if (subsets > 5e5) throw SchemaError("HPolytope: facet count too large for enumeration");

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<double> a(n * n);
    Vec b(n), x;
    auto feasible = [&](const Vec& v) {
        for (std::size_t i = 0; i < m; ++i)
            if (dot(normals_[i], v) > offsets_[i] + kFeasibilitySlack) return false;
        return true;
    };
    while (true) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) a[r * n + c] = normals_[idx[r]][c];
            b[r] = offsets_[idx[r]];
        }
        if (solve_small(a, b, x) && feasible(x)) {
            bool dup = false;
            for (const Vec& v : vertices_.vertices) {
                double d2 = 0.0;
                for (std::size_t c = 0; c < n; ++c) d2 += (v[c] - x[c]) * (v[c] - x[c]);
                if (d2 < kVertexDedup * kVertexDedup) {
                    dup = true;
                    break;
                }
            }
            if (!dup) vertices_.vertices.push_back(x);
        }
        // next combination
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == m - n + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (vertices_.vertices.empty())
        throw SchemaError("HPolytope: no vertices found (degenerate intersection)");
    build_blocks();
}

void HPolytope::build_blocks() {
    const std::size_t n = dim_;
    vertex_block_ = kernels::PointBlock(n, vertices_.vertices.size());
    for (std::size_t j = 0; j < vertices_.vertices.size(); ++j)
        for (std::size_t d = 0; d < n; ++d) vertex_block_.set(j, d, vertices_.vertices[j][d]);
    vertex_block_.finalize();
    scaled_normal_block_ = kernels::PointBlock(n, normals_.size());
    for (std::size_t i = 0; i < normals_.size(); ++i)
        for (std::size_t d = 0; d < n; ++d)
            scaled_normal_block_.set(i, d, normals_[i][d] / offsets_[i]);
    scaled_normal_block_.finalize();
}

double HPolytope::support(const UnitVector& u) const {
    return kernels::max_dot(vertex_block_, u.coords().data());
}

double HPolytope::support(const Vec& direction) const {
    return kernels::max_dot(vertex_block_, direction.data());
}

double HPolytope::polar_support(const UnitVector& u) const {
    return kernels::max_dot(scaled_normal_block_, u.coords().data());
}

double HPolytope::radial(const UnitVector& u) const { return 1.0 / polar_support(u); }

double HPolytope::polar_radial(const UnitVector& u) const { return 1.0 / support(u); }

HPolytope HPolytope::scaled(double s) const {
    if (!(s > 0.0)) throw SchemaError("HPolytope::scaled: factor must be positive");
    HPolytope out(*this);
    for (double& z : out.offsets_) z *= s;
    for (Vec& v : out.vertices_.vertices)
        for (double& c : v) c *= s;
    out.build_blocks();
    return out;
}

SurfaceAreaMeasure HPolytope::surface_area_measure() const {
    if (dim_ != 2 && dim_ != 3)
        throw SchemaError("surface_area_measure: implemented for n in {2,3}");
    SurfaceAreaMeasure sam;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
        std::vector<const Vec*> active;
        for (const Vec& v : vertices_.vertices)
            if (dot(normals_[i], v) >= offsets_[i] - kFeasibilitySlack) active.push_back(&v);
        if (active.size() < dim_) continue;  // inactive facet
        double area = 0.0;
        if (dim_ == 2) {
            // Length along the facet's tangent direction.
            Vec t = {-normals_[i][1], normals_[i][0]};
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const Vec* v : active) {
                double p = dot(t, *v);
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
            area = hi - lo;
        } else {
            // Shoelace in an in-plane orthonormal frame after angular sorting.
            Vec u = normals_[i].coords();
            Vec t1 = std::abs(u[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
            double p = dot(t1, u);
            for (std::size_t d = 0; d < 3; ++d) t1[d] -= p * u[d];
            t1 = normalized(t1);
            Vec t2 = {u[1] * t1[2] - u[2] * t1[1], u[2] * t1[0] - u[0] * t1[2],
                      u[0] * t1[1] - u[1] * t1[0]};
            struct Pt {
                double a, b, ang;
            };
            std::vector<Pt> pts;
            double ca = 0.0, cb = 0.0;
            for (const Vec* v : active) {
                double a = dot(t1, *v), b = dot(t2, *v);
                pts.push_back({a, b, 0.0});
                ca += a;
                cb += b;
            }
            ca /= double(pts.size());
            cb /= double(pts.size());
            for (Pt& q : pts) q.ang = std::atan2(q.b - cb, q.a - ca);
            std::sort(pts.begin(), pts.end(), [](const Pt& x, const Pt& y) { return x.ang < y.ang; });
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const Pt& p0 = pts[k];
                const Pt& p1 = pts[(k + 1) % pts.size()];
                area += p0.a * p1.b - p1.a * p0.b;
            }
            area = 0.5 * std::abs(area);
        }
        if (area > 1e-12) {
            sam.normals.push_back(normals_[i]);
            sam.areas.push_back(area);
            sam.offsets.push_back(offsets_[i]);
        }
    }
    return sam;
}

double HPolytope::volume() const {
    SurfaceAreaMeasure sam = surface_area_measure();
    double v = 0.0;
    for (std::size_t i = 0; i < sam.areas.size(); ++i) v += sam.areas[i] * sam.offsets[i];
    return v / double(dim_);
}

double HPolytope::surface_area() const {
    SurfaceAreaMeasure sam = surface_area_measure();
    double s = 0.0;
    for (double a : sam.areas) s += a;
    return s;
}

HPolytope HPolytope::polar() const {
    std::vector<UnitVector> normals;
    std::vector<double> offsets;
    for (const Vec& v : vertices_.vertices) {
        double len = norm(v);
        if (!(len > 0.0)) throw NumericError("polar: vertex at origin");
        normals.push_back(UnitVector::normalize(v));
        offsets.push_back(1.0 / len);
    }
    return HPolytope(std::move(normals), std::move(offsets));
}

double hausdorff_distance(const HPolytope& p, const HPolytope& q, const QuadratureRule& rule) {
    if (p.dim() != q.dim() || p.dim() != rule.dimension())
        throw SchemaError("hausdorff_distance: dimension mismatch");
    double best = 0.0;
    for (const UnitVector& u : rule.nodes())
        best = std::max(best, std::abs(p.support(u) - q.support(u)));
    return best;
}

StarBody StarBody::ball(std::size_t dim, double radius) {
    if (!(radius > 0.0)) throw SchemaError("ball: radius must be positive");
    if (dim < 2) throw SchemaError("ball: dimension must be >= 2");
    return StarBody(dim, BallBody{radius});
}

StarBody StarBody::ellipsoid(Vec semiaxes, std::optional<Rotation> orientation) {
    if (semiaxes.size() < 2) throw SchemaError("ellipsoid: dimension must be >= 2");
    for (double a : semiaxes)
        if (!(a > 0.0)) throw SchemaError("ellipsoid: semiaxes must be positive");
    if (orientation && orientation->dim() != semiaxes.size())
        throw SchemaError("ellipsoid: rotation dimension mismatch");
    std::size_t n = semiaxes.size();
    return StarBody(n, EllipsoidBody{std::move(semiaxes), std::move(orientation)});
}

StarBody StarBody::cone(std::size_t dim, double inv_base_radius, double inv_apex_height,
                        std::optional<UnitVector> axis) {
    if (!(inv_base_radius > 0.0) || !(inv_apex_height > 0.0))
        throw SchemaError("cone: parameters must be positive");
    UnitVector ax = axis ? *axis : UnitVector::axis(dim, dim - 1);
    if (ax.dim() != dim) throw SchemaError("cone: axis dimension mismatch");
    return StarBody(dim, ConeBody{inv_base_radius, inv_apex_height, std::move(ax)});
}

StarBody StarBody::polytope(HPolytope p) {
    std::size_t n = p.dim();
    return StarBody(n, PolytopeBody{std::make_shared<const HPolytope>(std::move(p))});
}

StarBody StarBody::polar_polytope(HPolytope p) {
    std::size_t n = p.dim();
    return StarBody(n, PolarPolytopeBody{std::make_shared<const HPolytope>(std::move(p))});
}

StarBody StarBody::scaled(StarBody body, double factor) {
    if (!(factor > 0.0)) throw SchemaError("scaled: factor must be positive");
    std::size_t n = body.dim();
    return StarBody(n, ScaledBody{std::make_shared<const StarBody>(std::move(body)), factor});
}

StarBody StarBody::support_average(HPolytope p, HPolytope q) {
    if (p.dim() != q.dim()) throw SchemaError("support_average: dimension mismatch");
    std::size_t n = p.dim();
    return StarBody(n, SupportAverageBody{std::make_shared<const HPolytope>(std::move(p)),
                                          std::make_shared<const HPolytope>(std::move(q))});
}

double StarBody::radial(const UnitVector& u) const {
    return std::visit(
        [&](const auto& body) -> double {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, BallBody>) {
                return body.radius;
            } else if constexpr (std::is_same_v<T, EllipsoidBody>) {
                Vec c = body.orientation ? body.orientation->apply_transpose(u.coords())
                                         : u.coords();
                double s = 0.0;
                for (std::size_t d = 0; d < c.size(); ++d)
                    s += (c[d] / body.semiaxes[d]) * (c[d] / body.semiaxes[d]);
                return 1.0 / std::sqrt(s);
            } else if constexpr (std::is_same_v<T, ConeBody>) {
                double ct = dot(body.axis, u);
                if (ct < 0.0) return 0.0;
                ct = std::min(ct, 1.0);
                double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                return 1.0 / (body.inv_base_radius * st + body.inv_apex_height * ct);
            } else if constexpr (std::is_same_v<T, PolytopeBody>) {
                return body.p->radial(u);
            } else if constexpr (std::is_same_v<T, PolarPolytopeBody>) {
                return 1.0 / body.p->support(u);
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                return body.factor * body.inner->radial(u);
            } else {
                // SupportAverageBody: exact in the plane, where Minkowski
                // averaging introduces no facet normals outside the union.
                if (dim_ != 2)
                    throw SchemaError("support_average: radial implemented for n = 2 only");
                auto h = [&](const UnitVector& v) {
                    return 0.5 * (body.p->support(v) + body.q->support(v));
                };
                double best = std::numeric_limits<double>::infinity();
                for (const HPolytope* poly : {body.p.get(), body.q.get()})
                    for (const UnitVector& v : poly->normals()) {
                        double c = dot(v, u);
                        if (c > 1e-12) best = std::min(best, h(v) / c);
                    }
                return best;
            }
        },
        payload_);
}

bool StarBody::has_support() const {
    return !std::holds_alternative<ConeBody>(payload_) &&
           (!std::holds_alternative<ScaledBody>(payload_) ||
            std::get<ScaledBody>(payload_).inner->has_support());
}

double StarBody::support(const UnitVector& u) const {
    return std::visit(
        [&](const auto& body) -> double {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, BallBody>) {
                return body.radius;
            } else if constexpr (std::is_same_v<T, EllipsoidBody>) {
                Vec c = body.orientation ? body.orientation->apply_transpose(u.coords())
                                         : u.coords();
                double s = 0.0;
                for (std::size_t d = 0; d < c.size(); ++d)
                    s += (body.semiaxes[d] * c[d]) * (body.semiaxes[d] * c[d]);
                return std::sqrt(s);
            } else if constexpr (std::is_same_v<T, ConeBody>) {
                throw SchemaError("cone bodies are radial-only (no support function)");
            } else if constexpr (std::is_same_v<T, PolytopeBody>) {
                return body.p->support(u);
            } else if constexpr (std::is_same_v<T, PolarPolytopeBody>) {
                return body.p->polar_support(u);
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                return body.factor * body.inner->support(u);
            } else {
                return 0.5 * (body.p->support(u) + body.q->support(u));
            }
        },
        payload_);
}

std::vector<double> StarBody::radial_profile(const QuadratureRule& rule) const {
    std::vector<double> out(rule.size());
    if (const auto* poly = std::get_if<PolytopeBody>(&payload_)) {
        for (std::size_t i = 0; i < rule.size(); ++i)
            out[i] = poly->p->radial(rule.node(i));
        return out;
    }
    if (const auto* pp = std::get_if<PolarPolytopeBody>(&payload_)) {
        for (std::size_t i = 0; i < rule.size(); ++i)
            out[i] = 1.0 / pp->p->support(rule.node(i));
        return out;
    }
    if (const auto* sc = std::get_if<ScaledBody>(&payload_)) {
        out = sc->inner->radial_profile(rule);
        for (double& v : out) v *= sc->factor;
        return out;
    }
    for (std::size_t i = 0; i < rule.size(); ++i) out[i] = radial(rule.node(i));
    return out;
}

std::vector<double> StarBody::support_profile(const QuadratureRule& rule) const {
    std::vector<double> out(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) out[i] = support(rule.node(i));
    return out;
}

HPolytope cube_polytope(std::size_t n, double half_side) {
    std::vector<UnitVector> normals;
    std::vector<double> offsets;
    for (std::size_t d = 0; d < n; ++d) {
        normals.push_back(UnitVector::axis(n, d, 1.0));
        normals.push_back(UnitVector::axis(n, d, -1.0));
        offsets.push_back(half_side);
        offsets.push_back(half_side);
    }
    return HPolytope(std::move(normals), std::move(offsets));
}

HPolytope regular_polygon(std::size_t sides, double apothem) {
    std::vector<UnitVector> normals;
    std::vector<double> offsets(sides, apothem);
    for (std::size_t k = 0; k < sides; ++k) {
        double ang = 2.0 * std::numbers::pi * double(k) / double(sides);
        normals.push_back(UnitVector::normalize({std::cos(ang), std::sin(ang)}));
    }
    return HPolytope(std::move(normals), std::move(offsets));
}

}  // namespace opm
