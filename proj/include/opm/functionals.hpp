#ifndef OPM_FUNCTIONALS_HPP
#define OPM_FUNCTIONALS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "opm/bodies.hpp"
#include "opm/sphere.hpp"

namespace opm {

enum class MonotoneClass { Increasing, Decreasing, None };

// G : (0,∞) x S^{n-1} -> (0,∞), the integrand of the dual/general volumes.
// Class membership is declared by the caller and validated by sampling.
class GFunction {
public:
    using Fn = std::function<double(double, const UnitVector&)>;

    static GFunction power(double exponent, double scale);  // scale * t^exponent
    static GFunction power_sum(std::vector<std::pair<double, double>> exponent_scale);
    static GFunction custom(Fn f, MonotoneClass mono, bool convex_in_t,
                            std::optional<double> growth_exponent = {});

    double operator()(double t, const UnitVector& u) const { return f_(t, u); }
    MonotoneClass monotone_class() const { return mono_; }
    bool convex_in_t() const { return convex_; }
    std::optional<double> growth_exponent() const { return growth_q_; }
    // Set when G is exactly homogeneous: G(st,u) = s^degree G(t,u).
    std::optional<double> power_degree() const { return power_degree_; }

    // Sampled certificate for the declared class (positivity, monotonicity,
    // proxy limits at t = 1e-6 and 1e6). Throws SchemaError on violation.
    void validate(const QuadratureRule& probe) const;

private:
    GFunction(Fn f, MonotoneClass mono, bool convex, std::optional<double> growth_q,
              std::optional<double> degree)
        : f_(std::move(f)), mono_(mono), convex_(convex), growth_q_(growth_q),
          power_degree_(degree) {}
    Fn f_;
    MonotoneClass mono_;
    bool convex_;
    std::optional<double> growth_q_;
    std::optional<double> power_degree_;
};

enum class PhiClass { Increasing, Decreasing };

// φ : (0,∞) -> (0,∞) with φ(1) = 1; the objective transform.
class PhiFunction {
public:
    using Fn = std::function<double(double)>;

    static PhiFunction power(double exponent);  // t^exponent, exponent != 0
    static PhiFunction custom(Fn f, Fn inverse, PhiClass cls, bool convex);

    double operator()(double t) const { return f_(t); }
    double inverse(double y) const { return inv_(y); }
    PhiClass phi_class() const { return cls_; }
    bool convex() const { return convex_; }

    void validate() const;  // sampled class certificate; throws SchemaError

private:
    PhiFunction(Fn f, Fn inv, PhiClass cls, bool convex)
        : f_(std::move(f)), inv_(std::move(inv)), cls_(cls), convex_(convex) {}
    Fn f_;
    Fn inv_;
    PhiClass cls_;
    bool convex_;
};

// Finite Borel measure on S^{n-1}: discrete atoms or a density carried on a
// quadrature rule.
class BorelMeasure {
public:
    struct Atom {
        UnitVector direction;
        double weight;
    };

    static BorelMeasure discrete(std::vector<Atom> atoms);
    static BorelMeasure density(std::function<double(const UnitVector&)> f, QuadratureRule rule);

    std::size_t dim() const { return dim_; }
    bool is_discrete() const { return density_ == nullptr; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    double total_mass() const { return total_mass_; }
    double integrate(const std::function<double(const UnitVector&)>& f) const;
    // min over probe directions of ∫ <v,u>_+ dμ; > 0 iff μ escapes every
    // closed hemisphere (probed at atoms/nodes and their antipodes).
    double hemisphere_margin() const;
    void require_hemisphere_condition() const;  // throws SchemaError when it fails

private:
    BorelMeasure() = default;
    std::size_t dim_ = 0;
    std::vector<Atom> atoms_;  // discrete atoms, or node/weight*density pairs
    std::shared_ptr<const QuadratureRule> rule_;
    std::shared_ptr<const std::function<double(const UnitVector&)>> density_;
    double total_mass_ = 0.0;
};

struct GrowthCertificate {
    bool holds;
    double inf_estimate;
};

// Sampled inf of G(t,u)/t^q over t in [t_lo, 1e6] (log grid) and the rule's
// directions.
GrowthCertificate check_growth_condition(const GFunction& g, double q, double t_lo,
                                         std::size_t samples, const QuadratureRule& rule);

// Ṽ_G(K) = ∫ G(ρ_K(u), u) du.
double dual_volume(const GFunction& g, const StarBody& body, const QuadratureRule& rule);
double dual_volume_from_profile(const GFunction& g, const std::vector<double>& radial,
                                const QuadratureRule& rule);

// V̂_G(K): the unique η with ∫ G(ρ_K/η, u) du = 1, by bracketing bisection.
double homogeneous_dual_volume(const GFunction& g, const StarBody& body,
                               const QuadratureRule& rule);
double homogeneous_dual_volume_from_profile(const GFunction& g, const std::vector<double>& radial,
                                            const QuadratureRule& rule);

// V_G(P) = ∫ G(h_P, u) dS_P = Σ area_i G(z_i, u_i); n in {2,3}.
double general_volume(const GFunction& g, const HPolytope& p);
double general_volume(const GFunction& g, const SurfaceAreaMeasure& sam);

// V̄_G(P): (1/S) Σ area_i G(S z_i / V̄, u_i) = 1, by bisection; degree-n
// homogeneous.
double homogeneous_general_volume(const GFunction& g, const HPolytope& p);
double homogeneous_general_volume(const GFunction& g, const SurfaceAreaMeasure& sam);

// Orlicz norm: λ with (1/μ(S^{n-1})) ∫ φ(h/λ) dμ = 1.
double orlicz_norm(const std::function<double(const UnitVector&)>& h, const BorelMeasure& mu,
                   const PhiFunction& phi);
double orlicz_norm_from_values(const std::vector<double>& h, const std::vector<double>& masses,
                               const PhiFunction& phi);

// ∫ φ(h) dμ.
double objective_integral(const PhiFunction& phi, const std::function<double(const UnitVector&)>& h,
                          const BorelMeasure& mu);

enum class MixedVolumeVariant { Integral, Hat };

// Orlicz mixed volumes against the surface area measure of K:
//   Integral: (1/n) ∫ φ(h_L/h_K) h_K dS_K;  Hat: || h_L/h_K ||_{S_K, φ}.
double orlicz_mixed_volume(const HPolytope& k, const std::function<double(const UnitVector&)>& h_l,
                           const PhiFunction& phi, MixedVolumeVariant variant);

}  // namespace opm

#endif
