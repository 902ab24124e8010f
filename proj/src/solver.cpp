#include "opm/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "opm/errors.hpp"

namespace opm {

namespace {

constexpr double kConstraintRelTol = 1e-8;

double splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return double((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
}

std::vector<double> polar_radial_profile(const HPolytope& p, const QuadratureRule& rule) {
    std::vector<double> out(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        out[i] = 1.0 / kernels::max_dot(p.vertex_block(), rule.node(i).coords().data());
    return out;
}

double monotone_scale_root(const std::function<double(double)>& defect, double tol,
                           const char* what) {
    double lo = 1.0, hi = 1.0, flo = defect(1.0), fhi = flo;
    int guard = 0;
    while (flo * fhi > 0.0) {
        if (std::abs(flo) <= tol) return lo;
        if (std::abs(fhi) <= tol) return hi;
        if (++guard > 200) throw NumericError(std::string(what) + ": scale bracket expansion failed"
                                              " (is G in its declared class?)");
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
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * hi) return std::sqrt(lo * hi);
    }
    throw NumericError(std::string(what) + ": scale bisection failed");
}

int thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ORLICZ_POLAR_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return int(std::min<long>(v, 64));
    }
    return int(hw);
}

}  // namespace

std::string family_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::Btilde: return "btilde";
        case FamilyTag::Bhat: return "bhat";
        case FamilyTag::Bgen: return "bgen";
        case FamilyTag::Bbar: return "bbar";
    }
    return "?";
}

FamilyTag family_from_name(const std::string& name) {
    if (name == "btilde") return FamilyTag::Btilde;
    if (name == "bhat") return FamilyTag::Bhat;
    if (name == "bgen") return FamilyTag::Bgen;
    if (name == "bbar") return FamilyTag::Bbar;
    throw SchemaError("unknown constraint family: " + name);
}

ConstraintFamily ConstraintFamily::make(FamilyTag tag, const GFunction& g,
                                        const QuadratureRule& rule) {
    std::vector<double> ones(rule.size(), 1.0);
    switch (tag) {
        case FamilyTag::Btilde:
            return {tag, dual_volume_from_profile(g, ones, rule)};
        case FamilyTag::Bhat:
            return {tag, homogeneous_dual_volume_from_profile(g, ones, rule)};
        case FamilyTag::Bgen:
            // S_{B^n} is the spherical measure and h = 1.
            return {tag, dual_volume_from_profile(g, ones, rule)};
        case FamilyTag::Bbar: {
            SurfaceAreaMeasure sam;
            sam.normals = rule.nodes();
            sam.areas = rule.weights();
            sam.offsets.assign(rule.size(), 1.0);
            return {tag, homogeneous_general_volume(g, sam)};
        }
    }
    throw SchemaError("bad family tag");
}

double family_value_of_polar(FamilyTag tag, const GFunction& g, const HPolytope& p,
                             const QuadratureRule& rule) {
    switch (tag) {
        case FamilyTag::Btilde:
            return dual_volume_from_profile(g, polar_radial_profile(p, rule), rule);
        case FamilyTag::Bhat:
            return homogeneous_dual_volume_from_profile(g, polar_radial_profile(p, rule), rule);
        case FamilyTag::Bgen:
            return general_volume(g, p.polar());
        case FamilyTag::Bbar:
            return homogeneous_general_volume(g, p.polar());
    }
    throw SchemaError("bad family tag");
}

namespace {

// Scale s with family((sP)°) = target. Uses (sP)° = P°/s throughout.
double normalize_scale_polytope(const HPolytope& p, const ConstraintFamily& family,
                                const GFunction& g, const QuadratureRule& rule) {
    const double target = family.target_value;
    const double tol = kConstraintRelTol * target;
    const std::size_t n = p.dim();
    switch (family.tag) {
        case FamilyTag::Btilde: {
            std::vector<double> rho = polar_radial_profile(p, rule);
            double value = dual_volume_from_profile(g, rho, rule);
            if (auto q = g.power_degree())
                return std::pow(value / target, 1.0 / *q);
            auto defect = [&](double s) {
                double acc = 0.0;
                for (std::size_t i = 0; i < rule.size(); ++i)
                    acc += rule.weight(i) * g(rho[i] / s, rule.node(i));
                return acc - target;
            };
            return monotone_scale_root(defect, tol, "normalize(btilde)");
        }
        case FamilyTag::Bhat: {
            double vhat = homogeneous_dual_volume_from_profile(g, polar_radial_profile(p, rule), rule);
            return vhat / target;
        }
        case FamilyTag::Bgen: {
            SurfaceAreaMeasure sam = p.polar().surface_area_measure();
            if (auto q = g.power_degree()) {
                double value = general_volume(g, sam);
                return std::pow(value / target, 1.0 / (double(n) - 1.0 + *q));
            }
            auto defect = [&](double s) {
                double acc = 0.0;
                double shrink = std::pow(s, 1.0 - double(n));
                for (std::size_t i = 0; i < sam.areas.size(); ++i)
                    acc += shrink * sam.areas[i] * g(sam.offsets[i] / s, sam.normals[i]);
                return acc - target;
            };
            return monotone_scale_root(defect, tol, "normalize(bgen)");
        }
        case FamilyTag::Bbar: {
            double vbar = homogeneous_general_volume(g, p.polar());
            return std::pow(vbar / target, 1.0 / double(n));
        }
    }
    throw SchemaError("bad family tag");
}

}  // namespace

NormalizeResult normalize_to_constraint(const HPolytope& p, const ConstraintFamily& family,
                                        const GFunction& g, const QuadratureRule& rule) {
    double s = normalize_scale_polytope(p, family, g, rule);
    return {s, p.scaled(s)};
}

double normalize_scale(const StarBody& body, const ConstraintFamily& family, const GFunction& g,
                       const QuadratureRule& rule) {
    if (const auto* poly = std::get_if<PolytopeBody>(&body.payload()))
        return normalize_scale_polytope(*poly->p, family, g, rule);
    if (family.tag == FamilyTag::Bgen || family.tag == FamilyTag::Bbar)
        throw SchemaError("normalize_scale: Bgen/Bbar families need a polytope body");
    if (!body.has_support())
        throw SchemaError("normalize_scale: body must have a support function");
    // ρ_{(sB)°} = 1 / (s h_B)
    std::vector<double> h = body.support_profile(rule);
    std::vector<double> rho(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) rho[i] = 1.0 / h[i];
    const double target = family.target_value;
    if (family.tag == FamilyTag::Bhat)
        return homogeneous_dual_volume_from_profile(g, rho, rule) / target;
    if (auto q = g.power_degree()) {
        double value = dual_volume_from_profile(g, rho, rule);
        return std::pow(value / target, 1.0 / *q);
    }
    auto defect = [&](double s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
            acc += rule.weight(i) * g(rho[i] / s, rule.node(i));
        return acc - target;
    };
    return monotone_scale_root(defect, kConstraintRelTol * target, "normalize(btilde)");
}

void ProblemSpec::validate() const {
    if (dimension < 2) throw SchemaError("ProblemSpec: dimension must be >= 2");
    if (!measure.is_discrete()) throw SchemaError("ProblemSpec: measure must be discrete");
    if (measure.dim() != dimension || rule.dimension() != dimension)
        throw SchemaError("ProblemSpec: dimension mismatch between measure/rule");
    if (measure.atoms().size() < dimension + 1)
        throw SchemaError("ProblemSpec: needs at least n+1 atoms");
    measure.require_hemisphere_condition();
    if (phi.phi_class() != PhiClass::Increasing)
        throw SchemaError("ProblemSpec: infimum problems need phi in the increasing class");
    phi.validate();
    g.validate(rule);
    if (petty_reference && petty_reference->dim() != dimension)
        throw SchemaError("ProblemSpec: petty reference dimension mismatch");

    const double n = double(dimension);
    double declared = g.growth_exponent().value_or(std::numeric_limits<double>::quiet_NaN());
    double q = n - 1.0;
    const char* need = "";
    switch (family) {
        case FamilyTag::Btilde:
        case FamilyTag::Bhat:
            if (g.monotone_class() != MonotoneClass::Increasing)
                throw SchemaError("ProblemSpec: Btilde/Bhat families need G increasing");
            q = (std::isfinite(declared) && declared >= n - 1.0) ? declared : n - 1.0;
            need = "q >= n-1";
            break;
        case FamilyTag::Bgen:
            q = (std::isfinite(declared) && declared > 1.0 - n && declared < 0.0)
                    ? declared
                    : 0.5 * (1.0 - n);
            need = "q in (1-n, 0)";
            break;
        case FamilyTag::Bbar:
            if (g.monotone_class() != MonotoneClass::Increasing)
                throw SchemaError("ProblemSpec: Bbar family needs G increasing");
            q = (std::isfinite(declared) && declared >= 1.0) ? declared : 1.0;
            need = "q >= 1";
            break;
    }
    GrowthCertificate cert = check_growth_condition(g, q, 1.0, 128, rule);
    if (!cert.holds) {
        std::ostringstream os;
        os << "ProblemSpec: G fails the growth condition for family " << family_name(family)
           << " (need inf G(t,u)/t^q > 0 with " << need << "; sampled inf " << cert.inf_estimate
           << " at q = " << q << ")";
        throw SchemaError(os.str());
    }
}

namespace {

struct Candidate {
    double objective = std::numeric_limits<double>::infinity();
    Vec z_snapped;  // support vector of P(z), before constraint scaling
    double scale = 1.0;
    bool valid = false;
};

struct Evaluator {
    const ProblemSpec& spec;
    ConstraintFamily family;
    std::vector<UnitVector> normals;
    std::vector<double> lambdas;
    std::vector<double> h_ref;  // h_K at atoms (Petty mode), else empty
    double z_max;
    double z_min;

    explicit Evaluator(const ProblemSpec& s)
        : spec(s), family(ConstraintFamily::make(s.family, s.g, s.rule)) {
        for (const BorelMeasure::Atom& a : s.measure.atoms()) {
            normals.push_back(a.direction);
            lambdas.push_back(a.weight);
        }
        double total = 0.0, lmin = std::numeric_limits<double>::infinity();
        for (double l : lambdas) {
            total += l;
            lmin = std::min(lmin, l);
        }
        z_max = spec.phi.inverse(total / lmin);
        if (!(z_max > 0.0) || !std::isfinite(z_max))
            throw NumericError("solve_discrete: degenerate search box");
        z_min = 1e-6 * z_max;
        if (spec.petty_reference)
            for (const UnitVector& u : normals) h_ref.push_back(spec.petty_reference->support(u));
    }

    // Pure given immutable spec; safe to call from concurrent starts.
    Candidate evaluate(Vec z) const {
        Candidate c;
        for (double& zi : z) zi = std::clamp(zi, z_min, z_max);
        HPolytope p(normals, z);
        Vec snapped(normals.size());
        for (std::size_t i = 0; i < normals.size(); ++i) snapped[i] = p.support(normals[i]);
        double s = normalize_scale_polytope(p, family, spec.g, spec.rule);

        std::vector<double> h(normals.size());
        for (std::size_t i = 0; i < normals.size(); ++i) h[i] = s * snapped[i];
        double obj;
        if (spec.petty_reference) {
            std::vector<double> ratio(h.size());
            for (std::size_t i = 0; i < h.size(); ++i) ratio[i] = h[i] / h_ref[i];
            if (spec.objective == ObjectiveKind::OrliczNorm) {
                obj = orlicz_norm_from_values(ratio, lambdas, spec.phi);
            } else {
                obj = 0.0;
                for (std::size_t i = 0; i < h.size(); ++i)
                    obj += lambdas[i] * spec.phi(ratio[i]) * h_ref[i];
                obj /= double(spec.dimension);
            }
        } else if (spec.objective == ObjectiveKind::OrliczNorm) {
            obj = orlicz_norm_from_values(h, lambdas, spec.phi);
        } else {
            obj = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) obj += lambdas[i] * spec.phi(h[i]);
        }
        c.objective = obj;
        c.z_snapped = std::move(snapped);
        c.scale = s;
        c.valid = true;
        return c;
    }
};

bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-12) return true;
        if (a[i] > b[i] + 1e-12) return false;
    }
    return false;
}

bool candidate_better(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.objective < b.objective - 1e-14 * (std::abs(b.objective) + 1.0)) return true;
    if (b.objective < a.objective - 1e-14 * (std::abs(a.objective) + 1.0)) return false;
    Vec az = a.z_snapped, bz = b.z_snapped;
    for (double& v : az) v *= a.scale;
    for (double& v : bz) v *= b.scale;
    return lex_less(az, bz);
}

struct StartResult {
    Candidate best;
    bool polished = false;
    bool exhausted = false;
};

// One Nelder-Mead descent followed by a per-coordinate golden-section polish.
// Each start owns its budget slice, so the outcome is independent of thread
// interleaving.
StartResult run_start(const Evaluator& ev, std::uint64_t seed, int start_index,
                      long start_budget) {
    const std::size_t m = ev.normals.size();
    std::uint64_t rng = seed ^ (0xa076'1d64'78bd'642fULL * std::uint64_t(start_index + 1));

    long used = 0;
    auto exhausted = [&]() { return used >= start_budget; };
    auto evaluate = [&](const Vec& z) {
        ++used;
        return ev.evaluate(z);
    };

    Vec base(m);
    for (double& v : base)
        v = std::exp(std::log(0.05 * ev.z_max) +
                     splitmix64(rng) * (std::log(0.9 * ev.z_max) - std::log(0.05 * ev.z_max)));

    StartResult out;
    const bool use_simplex = m <= 24;
    std::vector<Vec> xs;
    std::vector<Candidate> fs;
    if (use_simplex) {
        xs.push_back(base);
        for (std::size_t i = 0; i < m; ++i) {
            Vec v = base;
            v[i] = std::clamp(v[i] + 0.25 * ev.z_max * (0.5 + splitmix64(rng)), ev.z_min, ev.z_max);
            xs.push_back(v);
        }
        for (const Vec& x : xs) fs.push_back(evaluate(x));

        auto order = [&]() {
            std::vector<std::size_t> idx(xs.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return fs[a].objective < fs[b].objective; });
            std::vector<Vec> x2;
            std::vector<Candidate> f2;
            for (std::size_t i : idx) {
                x2.push_back(xs[i]);
                f2.push_back(fs[i]);
            }
            xs.swap(x2);
            fs.swap(f2);
        };

        for (long iter = 0; iter < 400 * long(m) && !exhausted(); ++iter) {
            order();
            double fbest = fs.front().objective, fworst = fs.back().objective;
            if (std::abs(fworst - fbest) <= 1e-10 * (std::abs(fbest) + 1e-12)) break;
            Vec centroid(m, 0.0);
            for (std::size_t j = 0; j + 1 < xs.size(); ++j)
                for (std::size_t i = 0; i < m; ++i) centroid[i] += xs[j][i];
            for (double& v : centroid) v /= double(m);

            auto blend = [&](double t) {
                Vec p(m);
                for (std::size_t i = 0; i < m; ++i)
                    p[i] = std::clamp(centroid[i] + t * (centroid[i] - xs.back()[i]), ev.z_min,
                                      ev.z_max);
                return p;
            };
            Vec xr = blend(1.0);
            Candidate fr = evaluate(xr);
            if (fr.objective < fs.front().objective) {
                Vec xe = blend(2.0);
                Candidate fe = evaluate(xe);
                if (fe.objective < fr.objective) {
                    xs.back() = xe;
                    fs.back() = fe;
                } else {
                    xs.back() = xr;
                    fs.back() = fr;
                }
            } else if (fr.objective < fs[xs.size() - 2].objective) {
                xs.back() = xr;
                fs.back() = fr;
            } else {
                bool outside = fr.objective < fs.back().objective;
                Vec xc = blend(outside ? 0.5 : -0.5);
                Candidate fc = evaluate(xc);
                if (fc.objective < std::min(fr.objective, fs.back().objective)) {
                    xs.back() = xc;
                    fs.back() = fc;
                } else {
                    for (std::size_t j = 1; j < xs.size(); ++j) {
                        for (std::size_t i = 0; i < m; ++i)
                            xs[j][i] = std::clamp(xs[0][i] + 0.5 * (xs[j][i] - xs[0][i]), ev.z_min,
                                                  ev.z_max);
                        fs[j] = evaluate(xs[j]);
                    }
                }
            }
        }
        order();
        out.best = fs.front();
        base = xs.front();
    } else {
        out.best = evaluate(base);
    }

    // Coordinate polish: golden-section per offset until the pass improves
    // the objective by less than 1e-9 relative.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    Vec z = out.best.z_snapped;
    Candidate cur = out.best;
    for (int pass = 0; pass < 60; ++pass) {
        if (exhausted()) break;
        double before = cur.objective;
        for (std::size_t i = 0; i < m && !exhausted(); ++i) {
            double center = z[i];
            double lo = std::max(ev.z_min, center * 0.25);
            double hi = std::min(ev.z_max, std::max(center * 4.0, ev.z_min * 8.0));
            double a = lo, b = hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            auto eval_at = [&](double zi) {
                Vec zz = z;
                zz[i] = zi;
                return evaluate(zz);
            };
            Candidate f1 = eval_at(x1), f2 = eval_at(x2);
            for (int it = 0; it < 60 && (b - a) > 1e-10 * ev.z_max; ++it) {
                if (f1.objective < f2.objective) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = eval_at(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = eval_at(x2);
                }
            }
            const Candidate& fb = f1.objective < f2.objective ? f1 : f2;
            if (fb.objective < cur.objective) {
                cur = fb;
                z = fb.z_snapped;
            }
        }
        if (before - cur.objective <= 1e-9 * (std::abs(before) + 1e-12)) {
            out.polished = true;
            break;
        }
    }
    out.best = cur;
    out.exhausted = exhausted();
    return out;
}

}  // namespace

Solution solve_discrete(const ProblemSpec& spec, int starts, long budget) {
    spec.validate();
    if (starts < 1) throw SchemaError("solve_discrete: starts must be >= 1");
    if (budget < starts) throw SchemaError("solve_discrete: budget smaller than start count");
    Evaluator ev(spec);
    const long start_budget = budget / starts;

    std::vector<StartResult> results(starts);
    std::atomic<int> next{0};
    int workers = std::min(starts, thread_cap());
    auto work = [&]() {
        for (int k = next.fetch_add(1); k < starts; k = next.fetch_add(1))
            results[k] = run_start(ev, spec.seed, k, start_budget);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    int best_idx = 0;
    for (int k = 1; k < starts; ++k)
        if (candidate_better(results[k].best, results[best_idx].best)) best_idx = k;
    const Candidate& best = results[best_idx].best;
    if (!best.valid) throw NumericError("solve_discrete: no valid candidate found");

    Vec z_star(best.z_snapped);
    for (double& v : z_star) v *= best.scale;
    HPolytope polytope(ev.normals, z_star);
    double value = family_value_of_polar(spec.family, spec.g, polytope, spec.rule);

    Solution sol{std::move(z_star), polytope, best.objective, 0.0, Vec{}, starts, false};
    sol.constraint_residual = (value - ev.family.target_value) / ev.family.target_value;
    sol.facial_defects.resize(ev.normals.size());
    for (std::size_t i = 0; i < ev.normals.size(); ++i)
        sol.facial_defects[i] = polytope.support(ev.normals[i]) - sol.z_star[i];
    sol.converged = results[best_idx].polished && !results[best_idx].exhausted;
    return sol;
}

OracleResult brute_force_oracle(const ProblemSpec& spec, std::size_t grid_per_axis,
                                OracleMode mode, std::size_t refine_levels) {
    spec.validate();
    if (grid_per_axis < 1) throw SchemaError("brute_force_oracle: empty grid");
    Evaluator ev(spec);
    const std::size_t m = ev.normals.size();

    Candidate best;
    Vec best_z;

    if (mode == OracleMode::EqualOffsets) {
        double lo = 1e-3 * ev.z_max, hi = ev.z_max;
        for (std::size_t level = 0; level < std::max<std::size_t>(1, refine_levels); ++level) {
            double best_c = 0.0;
            double best_obj = std::numeric_limits<double>::infinity();
            double step = std::log(hi / lo) / double(grid_per_axis - 1);
            for (std::size_t k = 0; k < grid_per_axis; ++k) {
                double c = std::exp(std::log(lo) + step * double(k));
                Vec z(m, c);
                Candidate cand = ev.evaluate(z);
                if (cand.objective < best_obj) {
                    best_obj = cand.objective;
                    best_c = c;
                }
                if (!best.valid || cand.objective < best.objective) {
                    best = cand;
                    best_z = z;
                }
            }
            lo = std::max(1e-6 * ev.z_max, best_c * std::exp(-step));
            hi = std::min(ev.z_max, best_c * std::exp(step));
        }
    } else {
        if (m > 5) throw SchemaError("brute_force_oracle: full grid limited to m <= 5 atoms");
        double lo = 1e-3 * ev.z_max, hi = ev.z_max;
        Vec lo_box(m, lo), hi_box(m, hi);
        for (std::size_t level = 0; level < std::max<std::size_t>(1, refine_levels); ++level) {
            std::vector<std::size_t> idx(m, 0);
            Vec steps(m);
            for (std::size_t i = 0; i < m; ++i)
                steps[i] = std::log(hi_box[i] / lo_box[i]) / double(grid_per_axis - 1);
            Candidate level_best;
            Vec level_z;
            while (true) {
                Vec z(m);
                for (std::size_t i = 0; i < m; ++i)
                    z[i] = std::exp(std::log(lo_box[i]) + steps[i] * double(idx[i]));
                Candidate c = ev.evaluate(z);
                if (!level_best.valid || c.objective < level_best.objective) {
                    level_best = c;
                    level_z = z;
                }
                std::size_t d = 0;
                while (d < m && ++idx[d] == grid_per_axis) idx[d++] = 0;
                if (d == m) break;
            }
            if (!best.valid || level_best.objective < best.objective) {
                best = level_best;
                best_z = level_z;
            }
            for (std::size_t i = 0; i < m; ++i) {
                lo_box[i] = std::max(1e-6 * ev.z_max, level_z[i] * std::exp(-steps[i]));
                hi_box[i] = std::min(ev.z_max, level_z[i] * std::exp(steps[i]));
            }
        }
    }
    return {best_z, best.objective};
}

std::vector<SweepRow> counterexample_sweep(const GFunction& g, const PhiFunction& phi,
                                           const BorelMeasure& mu, SweepMode mode,
                                           std::vector<double> epsilons,
                                           const QuadratureRule& rule) {
    if (g.monotone_class() != MonotoneClass::Increasing)
        throw SchemaError("counterexample_sweep: G must be in the increasing class");
    const std::size_t n = rule.dimension();
    GrowthCertificate cert =
        check_growth_condition(g, std::max(g.growth_exponent().value_or(double(n) - 1.0),
                                           double(n) - 1.0),
                               1.0, 128, rule);
    if (!cert.holds)
        throw SchemaError("counterexample_sweep: G fails the growth certificate");
    mu.require_hemisphere_condition();
    if (mode == SweepMode::InfDecreasing || mode == SweepMode::SupDecreasing) {
        if (phi.phi_class() != PhiClass::Decreasing)
            throw SchemaError("counterexample_sweep: this mode needs phi decreasing");
    } else if (phi.phi_class() != PhiClass::Increasing) {
        throw SchemaError("counterexample_sweep: sup_increasing needs phi increasing");
    }
    for (double e : epsilons)
        if (!(e > 0.0) || e > 1.0)
            throw SchemaError("counterexample_sweep: epsilon must lie in (0, 1]");
    if (mode == SweepMode::InfDecreasing)
        for (const BorelMeasure::Atom& a : mu.atoms())
            if (std::abs(a.direction[0]) <= 1e-12)
                throw SchemaError(
                    "counterexample_sweep: inf_decreasing needs all first coordinates nonzero");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<double>());

    std::optional<Rotation> orient;
    if (mode != SweepMode::InfDecreasing) {
        // T with T^t u_1 = e_1, i.e. the squashed axis follows the measure.
        orient = rotation_sending(mu.atoms().front().direction, UnitVector::axis(n, 0));
    }
    GFunction g_copy = g;
    std::vector<double> ones(rule.size(), 1.0);
    const double vhat_ball = homogeneous_dual_volume_from_profile(g_copy, ones, rule);

    std::vector<SweepRow> rows;
    for (double eps : epsilons) {
        Vec semi(n, 1.0), semi_polar(n, 1.0);
        if (mode == SweepMode::SupDecreasing) {
            semi[n - 1] = 1.0 / eps;       // L̄_ε = L̃_{1/ε}
            semi_polar[n - 1] = eps;
        } else {
            semi[n - 1] = eps;             // L_ε (or rotated L̃_ε)
            semi_polar[n - 1] = 1.0 / eps;
        }
        StarBody body = StarBody::ellipsoid(semi, orient);
        StarBody polar = StarBody::ellipsoid(semi_polar, orient);
        double f = vhat_ball / homogeneous_dual_volume(g_copy, polar, rule);
        double obj = 0.0;
        for (const BorelMeasure::Atom& a : mu.atoms())
            obj += a.weight * phi(body.support(a.direction) / f);
        rows.push_back({eps, f, obj});
    }
    return rows;
}

ContinuityResult continuity_experiment(const BorelMeasure& density,
                                       const std::vector<std::size_t>& sizes,
                                       const ProblemSpec& spec_template, int starts, long budget) {
    if (spec_template.dimension != 2)
        throw SchemaError("continuity_experiment: implemented for n = 2");
    if (sizes.empty()) throw SchemaError("continuity_experiment: no sizes");

    auto lump = [&](std::size_t m) {
        std::vector<double> lambdas(m, 0.0);
        for (const BorelMeasure::Atom& a : density.atoms()) {
            double ang = std::atan2(a.direction[1], a.direction[0]);
            double t = ang / (2.0 * std::numbers::pi) * double(m);
            long k = std::lround(t);
            std::size_t bin = std::size_t(((k % long(m)) + long(m)) % long(m));
            lambdas[bin] += a.weight;
        }
        std::vector<BorelMeasure::Atom> atoms;
        for (std::size_t k = 0; k < m; ++k) {
            if (!(lambdas[k] > 0.0)) continue;
            double ang = 2.0 * std::numbers::pi * double(k) / double(m);
            atoms.push_back({UnitVector::normalize({std::cos(ang), std::sin(ang)}), lambdas[k]});
        }
        return BorelMeasure::discrete(std::move(atoms));
    };

    auto solve_at = [&](std::size_t m) {
        ProblemSpec spec = spec_template;
        spec.measure = lump(m);
        spec.seed = spec_template.seed ^ (0x9e3779b97f4a7c15ULL * m);
        return solve_discrete(spec, starts, budget);
    };

    std::size_t ref_size = 2 * *std::max_element(sizes.begin(), sizes.end());
    Solution reference = solve_at(ref_size);

    ContinuityResult out;
    std::vector<Solution> sols;
    for (std::size_t m : sizes) {
        Solution s = solve_at(m);
        out.rows.push_back({m, s.objective_value,
                            hausdorff_distance(s.polytope, reference.polytope, spec_template.rule)});
        sols.push_back(std::move(s));
    }
    for (std::size_t i = 0; i + 1 < sols.size(); ++i) {
        out.value_deltas.push_back(
            std::abs(out.rows[i + 1].optimal_value - out.rows[i].optimal_value));
        out.hausdorff_deltas.push_back(
            hausdorff_distance(sols[i].polytope, sols[i + 1].polytope, spec_template.rule));
    }
    return out;
}

UniquenessReport uniqueness_probe(const ProblemSpec& spec, int starts, long budget) {
    if (starts < 1) throw SchemaError("uniqueness_probe: starts must be >= 1");
    UniquenessReport report{0.0, {}};
    for (int k = 0; k < starts; ++k) {
        ProblemSpec s = spec;
        s.seed = spec.seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(k + 1);
        report.solutions.push_back(solve_discrete(s, 1, budget));
    }
    for (std::size_t a = 0; a < report.solutions.size(); ++a)
        for (std::size_t b = a + 1; b < report.solutions.size(); ++b)
            report.dispersion = std::max(
                report.dispersion, hausdorff_distance(report.solutions[a].polytope,
                                                      report.solutions[b].polytope, spec.rule));
    return report;
}

}  // namespace opm
