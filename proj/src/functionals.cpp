#include "opm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opm/errors.hpp"

namespace opm {

namespace {

constexpr double kRootTol = 1e-10;

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(llo + (lhi - llo) * double(i) / double(count - 1));
    return out;
}

// Finds the root of a continuous defect that is monotone in log-space, by
// expanding a bracket from `start` (at most 200 doublings each way) and then
// bisecting until |defect| <= tol.
double monotone_root(const std::function<double(double)>& defect, double start, double tol,
                     const char* what) {
    double lo = start, hi = start;
    double flo = defect(lo), fhi = flo;
    int guard = 0;
    while (flo * fhi > 0.0) {
        if (std::abs(flo) <= tol) return lo;
        if (std::abs(fhi) <= tol) return hi;
        if (++guard > 200) {
            std::ostringstream os;
            os << what << ": bracket expansion exhausted (defect " << flo << " at " << lo
               << ", " << fhi << " at " << hi << ")";
            throw NumericError(os.str());
        }
        lo *= 0.5;
        hi *= 2.0;
        flo = defect(lo);
        fhi = defect(hi);
    }
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;
    for (int it = 0; it < 2000; ++it) {
        double mid = std::sqrt(lo * hi);
        double fm = defect(mid);
        if (std::abs(fm) <= tol) return mid;
        // keep the sign change inside [lo, hi]
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if (hi - lo <= 1e-16 * hi) return std::sqrt(lo * hi);
    }
    std::ostringstream os;
    os << what << ": bisection failed to reach tolerance " << tol;
    throw NumericError(os.str());
}

}  // namespace

GFunction GFunction::power(double exponent, double scale) {
    if (exponent == 0.0) throw SchemaError("GFunction::power: exponent must be nonzero");
    if (!(scale > 0.0)) throw SchemaError("GFunction::power: scale must be positive");
    MonotoneClass mono = exponent > 0.0 ? MonotoneClass::Increasing : MonotoneClass::Decreasing;
    bool convex = exponent >= 1.0 || exponent < 0.0;
    return GFunction([exponent, scale](double t, const UnitVector&) { return scale * std::pow(t, exponent); },
                     mono, convex, exponent, exponent);
}

GFunction GFunction::power_sum(std::vector<std::pair<double, double>> terms) {
    if (terms.empty()) throw SchemaError("GFunction::power_sum: needs at least one term");
    bool all_pos = true, all_neg = true, convex = true;
    double min_exp = terms.front().first;
    for (auto& [q, s] : terms) {
        if (q == 0.0 || !(s > 0.0)) throw SchemaError("GFunction::power_sum: bad term");
        all_pos = all_pos && q > 0.0;
        all_neg = all_neg && q < 0.0;
        convex = convex && (q >= 1.0 || q < 0.0);
        min_exp = std::min(min_exp, q);
    }
    if (!all_pos && !all_neg)
        throw SchemaError("GFunction::power_sum: exponents must share a sign");
    MonotoneClass mono = all_pos ? MonotoneClass::Increasing : MonotoneClass::Decreasing;
    auto fn = [terms](double t, const UnitVector&) {
        double v = 0.0;
        for (const auto& [q, s] : terms) v += s * std::pow(t, q);
        return v;
    };
    std::optional<double> degree;
    if (terms.size() == 1) degree = terms.front().first;
    return GFunction(fn, mono, convex, min_exp, degree);
}

GFunction GFunction::custom(Fn f, MonotoneClass mono, bool convex_in_t,
                            std::optional<double> growth_exponent) {
    return GFunction(std::move(f), mono, convex_in_t, growth_exponent, std::nullopt);
}

void GFunction::validate(const QuadratureRule& probe) const {
    std::vector<double> ts = log_grid(1e-6, 1e6, 25);
    std::size_t stride = std::max<std::size_t>(1, probe.size() / 16);
    for (std::size_t i = 0; i < probe.size(); i += stride) {
        const UnitVector& u = probe.node(i);
        double prev = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            double v = f_(ts[k], u);
            if (!(v > 0.0) || !std::isfinite(v))
                throw SchemaError("GFunction: not strictly positive on the sample grid");
            if (k > 0 && mono_ == MonotoneClass::Increasing && !(v > prev))
                throw SchemaError("GFunction: declared increasing but not monotone on samples");
            if (k > 0 && mono_ == MonotoneClass::Decreasing && !(v < prev))
                throw SchemaError("GFunction: declared decreasing but not monotone on samples");
            prev = v;
        }
        double at1 = f_(1.0, u);
        if (mono_ == MonotoneClass::Increasing &&
            !(f_(1e-6, u) < 0.5 * at1 && f_(1e6, u) > 2.0 * at1))
            throw SchemaError("GFunction: sampled limits contradict the increasing class");
        if (mono_ == MonotoneClass::Decreasing &&
            !(f_(1e-6, u) > 2.0 * at1 && f_(1e6, u) < 0.5 * at1))
            throw SchemaError("GFunction: sampled limits contradict the decreasing class");
    }
}

PhiFunction PhiFunction::power(double exponent) {
    if (exponent == 0.0) throw SchemaError("PhiFunction::power: exponent must be nonzero");
    PhiClass cls = exponent > 0.0 ? PhiClass::Increasing : PhiClass::Decreasing;
    bool convex = exponent >= 1.0 || exponent < 0.0;
    return PhiFunction([exponent](double t) { return std::pow(t, exponent); },
                       [exponent](double y) { return std::pow(y, 1.0 / exponent); }, cls, convex);
}

PhiFunction PhiFunction::custom(Fn f, Fn inverse, PhiClass cls, bool convex) {
    return PhiFunction(std::move(f), std::move(inverse), cls, convex);
}

void PhiFunction::validate() const {
    if (std::abs(f_(1.0) - 1.0) > 1e-12) throw SchemaError("PhiFunction: phi(1) must equal 1");
    std::vector<double> ts = log_grid(1e-8, 1e8, 33);
    double prev = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        double v = f_(ts[k]);
        if (!(v > 0.0) || !std::isfinite(v))
            throw SchemaError("PhiFunction: not strictly positive on the sample grid");
        if (k > 0 && cls_ == PhiClass::Increasing && !(v > prev))
            throw SchemaError("PhiFunction: declared increasing but not monotone on samples");
        if (k > 0 && cls_ == PhiClass::Decreasing && !(v < prev))
            throw SchemaError("PhiFunction: declared decreasing but not monotone on samples");
        prev = v;
    }
    if (cls_ == PhiClass::Increasing && !(f_(1e-8) < 1e-3 && f_(1e8) > 1e3))
        throw SchemaError("PhiFunction: sampled limits contradict the increasing class");
    if (cls_ == PhiClass::Decreasing && !(f_(1e-8) > 1e3 && f_(1e8) < 1e-3))
        throw SchemaError("PhiFunction: sampled limits contradict the decreasing class");
    for (double t : log_grid(1e-4, 1e4, 17)) {
        double back = inv_(f_(t));
        if (std::abs(back - t) > 1e-10 * t)
            throw SchemaError("PhiFunction: inverse does not invert eval on the sample grid");
    }
}

BorelMeasure BorelMeasure::discrete(std::vector<Atom> atoms) {
    if (atoms.empty()) throw SchemaError("BorelMeasure: no atoms");
    BorelMeasure mu;
    mu.dim_ = atoms.front().direction.dim();
    for (const Atom& a : atoms) {
        if (a.direction.dim() != mu.dim_) throw SchemaError("BorelMeasure: mixed dimensions");
        if (!(a.weight > 0.0)) throw SchemaError("BorelMeasure: atom weights must be positive");
        mu.total_mass_ += a.weight;
    }
    mu.atoms_ = std::move(atoms);
    return mu;
}

BorelMeasure BorelMeasure::density(std::function<double(const UnitVector&)> f,
                                   QuadratureRule rule) {
    BorelMeasure mu;
    mu.dim_ = rule.dimension();
    mu.rule_ = std::make_shared<const QuadratureRule>(std::move(rule));
    mu.density_ = std::make_shared<const std::function<double(const UnitVector&)>>(std::move(f));
    for (std::size_t i = 0; i < mu.rule_->size(); ++i) {
        double d = (*mu.density_)(mu.rule_->node(i));
        if (!(d >= 0.0) || !std::isfinite(d))
            throw SchemaError("BorelMeasure: density must be finite and nonnegative");
        double w = mu.rule_->weight(i) * d;
        if (w > 0.0) {
            mu.atoms_.push_back({mu.rule_->node(i), w});
            mu.total_mass_ += w;
        }
    }
    if (!(mu.total_mass_ > 0.0)) throw SchemaError("BorelMeasure: zero total mass");
    return mu;
}

double BorelMeasure::integrate(const std::function<double(const UnitVector&)>& f) const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight * f(a.direction);
    return s;
}

double BorelMeasure::hemisphere_margin() const {
    double margin = std::numeric_limits<double>::infinity();
    auto positive_part_mass = [&](const Vec& v) {
        double s = 0.0;
        for (const Atom& a : atoms_) s += a.weight * std::max(0.0, dot(a.direction, v));
        return s;
    };
    for (const Atom& a : atoms_) {
        margin = std::min(margin, positive_part_mass(a.direction.coords()));
        margin = std::min(margin, positive_part_mass(scaled(a.direction.coords(), -1.0)));
    }
    return margin;
}

void BorelMeasure::require_hemisphere_condition() const {
    if (!(hemisphere_margin() > 1e-12))
        throw SchemaError("measure is concentrated on a closed hemisphere");
}

GrowthCertificate check_growth_condition(const GFunction& g, double q, double t_lo,
                                         std::size_t samples, const QuadratureRule& rule) {
    if (!(t_lo > 0.0)) throw SchemaError("check_growth_condition: t_lo must be positive");
    if (samples < 100) throw SchemaError("check_growth_condition: samples must be >= 100");
    double inf = std::numeric_limits<double>::infinity();
    std::size_t stride = std::max<std::size_t>(1, rule.size() / 64);
    for (double t : log_grid(t_lo, 1e6, samples)) {
        double tq = std::pow(t, q);
        for (std::size_t i = 0; i < rule.size(); i += stride)
            inf = std::min(inf, g(t, rule.node(i)) / tq);
    }
    return {inf > 1e-12, inf};
}

double dual_volume_from_profile(const GFunction& g, const std::vector<double>& radial,
                                const QuadratureRule& rule) {
    std::vector<double> values(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        double rho = radial[i];
        double v;
        if (rho > 0.0) {
            v = g(rho, rule.node(i));
        } else if (g.monotone_class() == MonotoneClass::Increasing) {
            v = 0.0;  // continuous extension G(0,u) = 0 of the increasing class
        } else {
            std::ostringstream os;
            os << "dual_volume: radial function vanishes at node " << i
               << " and G has no continuous extension to 0";
            throw NumericError(os.str());
        }
        if (!std::isfinite(v)) throw NumericError("dual_volume: non-finite integrand");
        values[i] = v;
    }
    return integrate_values(rule, values);
}

double dual_volume(const GFunction& g, const StarBody& body, const QuadratureRule& rule) {
    return dual_volume_from_profile(g, body.radial_profile(rule), rule);
}

double homogeneous_dual_volume_from_profile(const GFunction& g, const std::vector<double>& radial,
                                            const QuadratureRule& rule) {
    if (g.monotone_class() == MonotoneClass::None)
        throw SchemaError("homogeneous_dual_volume: G must be monotone");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double rho : radial) {
        if (!(rho > 0.0))
            throw NumericError("homogeneous_dual_volume: radial function must be positive");
        lo = std::min(lo, rho);
        hi = std::max(hi, rho);
    }
    auto defect = [&](double eta) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weight(i) * g(radial[i] / eta, rule.node(i));
        return s - 1.0;
    };
    return monotone_root(defect, std::sqrt(lo * hi), kRootTol, "homogeneous_dual_volume");
}

double homogeneous_dual_volume(const GFunction& g, const StarBody& body,
                               const QuadratureRule& rule) {
    return homogeneous_dual_volume_from_profile(g, body.radial_profile(rule), rule);
}

double general_volume(const GFunction& g, const SurfaceAreaMeasure& sam) {
    double s = 0.0;
    for (std::size_t i = 0; i < sam.areas.size(); ++i)
        s += sam.areas[i] * g(sam.offsets[i], sam.normals[i]);
    return s;
}

double general_volume(const GFunction& g, const HPolytope& p) {
    return general_volume(g, p.surface_area_measure());
}

double homogeneous_general_volume(const GFunction& g, const SurfaceAreaMeasure& sam) {
    if (g.monotone_class() == MonotoneClass::None)
        throw SchemaError("homogeneous_general_volume: G must be monotone");
    double surface = 0.0;
    for (double a : sam.areas) surface += a;
    auto defect = [&](double vbar) {
        double s = 0.0;
        for (std::size_t i = 0; i < sam.areas.size(); ++i)
            s += sam.areas[i] * g(surface * sam.offsets[i] / vbar, sam.normals[i]);
        return s / surface - 1.0;
    };
    return monotone_root(defect, surface, kRootTol, "homogeneous_general_volume");
}

double homogeneous_general_volume(const GFunction& g, const HPolytope& p) {
    return homogeneous_general_volume(g, p.surface_area_measure());
}

double orlicz_norm_from_values(const std::vector<double>& h, const std::vector<double>& masses,
                               const PhiFunction& phi) {
    if (h.empty() || h.size() != masses.size())
        throw SchemaError("orlicz_norm: value/mass mismatch");
    double total = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0)) throw NumericError("orlicz_norm: h must be positive on the support");
        total += masses[i];
        lo = std::min(lo, h[i]);
        hi = std::max(hi, h[i]);
    }
    if (hi - lo <= 1e-15 * hi) return lo;  // constant h: phi(1) = 1 gives lambda = h
    auto defect = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) s += masses[i] * phi(h[i] / lambda);
        return s / total - 1.0;
    };
    return monotone_root(defect, std::sqrt(lo * hi), kRootTol, "orlicz_norm");
}

double orlicz_norm(const std::function<double(const UnitVector&)>& h, const BorelMeasure& mu,
                   const PhiFunction& phi) {
    std::vector<double> values, masses;
    values.reserve(mu.atoms().size());
    masses.reserve(mu.atoms().size());
    for (const BorelMeasure::Atom& a : mu.atoms()) {
        values.push_back(h(a.direction));
        masses.push_back(a.weight);
    }
    return orlicz_norm_from_values(values, masses, phi);
}

double objective_integral(const PhiFunction& phi, const std::function<double(const UnitVector&)>& h,
                          const BorelMeasure& mu) {
    return mu.integrate([&](const UnitVector& u) {
        double v = h(u);
        if (!(v > 0.0)) throw NumericError("objective_integral: h must be positive on support");
        return phi(v);
    });
}

double orlicz_mixed_volume(const HPolytope& k, const std::function<double(const UnitVector&)>& h_l,
                           const PhiFunction& phi, MixedVolumeVariant variant) {
    SurfaceAreaMeasure sam = k.surface_area_measure();
    std::vector<double> ratio(sam.areas.size());
    for (std::size_t i = 0; i < sam.areas.size(); ++i) {
        double hl = h_l(sam.normals[i]);
        if (!(hl > 0.0)) throw NumericError("orlicz_mixed_volume: h_L must be positive");
        ratio[i] = hl / sam.offsets[i];
    }
    if (variant == MixedVolumeVariant::Hat) return orlicz_norm_from_values(ratio, sam.areas, phi);
    double s = 0.0;
    for (std::size_t i = 0; i < sam.areas.size(); ++i)
        s += sam.areas[i] * phi(ratio[i]) * sam.offsets[i];
    return s / double(k.dim());
}

}  // namespace opm
