#ifndef OPM_SOLVER_HPP
#define OPM_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opm/bodies.hpp"
#include "opm/functionals.hpp"

namespace opm {

enum class FamilyTag { Btilde, Bhat, Bgen, Bbar };

std::string family_name(FamilyTag tag);
FamilyTag family_from_name(const std::string& name);

// One of the four feasible-set definitions: bodies Q whose polar matches the
// unit ball under the family's functional. target_value is that functional
// evaluated on B^n.
struct ConstraintFamily {
    FamilyTag tag;
    double target_value;

    static ConstraintFamily make(FamilyTag tag, const GFunction& g, const QuadratureRule& rule);
};

// Functional of the family applied to P°, for P an H-polytope.
double family_value_of_polar(FamilyTag tag, const GFunction& g, const HPolytope& p,
                             const QuadratureRule& rule);

struct NormalizeResult {
    double scale;
    HPolytope scaled;
};

// Finds s with family((sP)°) = target within relative 1e-8. Btilde/Bgen use
// monotone bisection on s (closed form when G is an exact power); Bhat/Bbar
// use the degree-1 / degree-n homogeneity shortcuts.
NormalizeResult normalize_to_constraint(const HPolytope& p, const ConstraintFamily& family,
                                        const GFunction& g, const QuadratureRule& rule);
// Same, for support-capable catalog bodies (Btilde/Bhat only); returns the
// scale.
double normalize_scale(const StarBody& body, const ConstraintFamily& family, const GFunction& g,
                       const QuadratureRule& rule);

enum class ObjectiveKind { Integral, OrliczNorm };

struct ProblemSpec {
    std::size_t dimension = 0;
    BorelMeasure measure;                       // discrete atoms (u_i, λ_i)
    PhiFunction phi;
    GFunction g;
    FamilyTag family = FamilyTag::Btilde;
    ObjectiveKind objective = ObjectiveKind::Integral;
    std::optional<HPolytope> petty_reference;   // switches on Petty-body mode
    QuadratureRule rule;
    std::uint64_t seed = 0;

    // Hemisphere condition, phi class I, growth certificate per family.
    void validate() const;
};

struct Solution {
    Vec z_star;
    HPolytope polytope;
    double objective_value = 0.0;
    double constraint_residual = 0.0;  // relative to the family target
    Vec facial_defects;                // h_P(u_i) - z*_i, <= 0 by construction
    int starts_used = 0;
    bool converged = false;
};

// Multi-start Nelder-Mead with a per-coordinate golden-section polish over
// z in (0, z_max]^m, z_max = phi^{-1}(Σλ / min λ). Each candidate is mapped
// into the constraint family by normalize_to_constraint before the objective
// is evaluated.
Solution solve_discrete(const ProblemSpec& spec, int starts = 8, long budget = 20000);

enum class OracleMode { FullGrid, EqualOffsets };

struct OracleResult {
    Vec z_best;
    double objective_best;
};

// Grid-search ground truth, independent of solve_discrete. FullGrid spans
// (1e-3 z_max, z_max]^m log-spaced (m <= 5) and refines around the incumbent
// cell `refine_levels` times; EqualOffsets searches the symmetric 1-D family
// z = c·1.
OracleResult brute_force_oracle(const ProblemSpec& spec, std::size_t grid_per_axis,
                                OracleMode mode = OracleMode::FullGrid,
                                std::size_t refine_levels = 4);

enum class SweepMode { InfDecreasing, SupIncreasing, SupDecreasing };

struct SweepRow {
    double epsilon;
    double f_epsilon;   // V̂_G(B^n) / V̂_G(L°)
    double objective;   // Σ λ_i φ(h_Q(u_i)) on the feasible flattened body
};

// Unattainability sweeps over the flattening ellipsoids L_ε (and L̄_ε for the
// decreasing-φ supremum variant). Rows ordered by ε descending.
std::vector<SweepRow> counterexample_sweep(const GFunction& g, const PhiFunction& phi,
                                           const BorelMeasure& mu, SweepMode mode,
                                           std::vector<double> epsilons,
                                           const QuadratureRule& rule);

struct ContinuityRow {
    std::size_t size;
    double optimal_value;
    double hausdorff_to_reference;
};

struct ContinuityResult {
    std::vector<ContinuityRow> rows;
    std::vector<double> value_deltas;      // |v_{i+1} - v_i|
    std::vector<double> hausdorff_deltas;  // d_H(M_i, M_{i+1})
};

// Lumps the density measure onto `size` equispaced directions (n = 2), solves
// each instance, and solves a 2x-finest reference.
ContinuityResult continuity_experiment(const BorelMeasure& density,
                                       const std::vector<std::size_t>& sizes,
                                       const ProblemSpec& spec_template, int starts = 1,
                                       long budget = 20000);

struct UniquenessReport {
    double dispersion;  // max pairwise Hausdorff distance
    std::vector<Solution> solutions;
};

UniquenessReport uniqueness_probe(const ProblemSpec& spec, int starts, long budget = 20000);

}  // namespace opm

#endif
