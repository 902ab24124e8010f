#ifndef OPM_SERIALIZATION_HPP
#define OPM_SERIALIZATION_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "opm/bodies.hpp"
#include "opm/functionals.hpp"
#include "opm/solver.hpp"

namespace opm {

using json = nlohmann::json;

// All readers reject unknown keys (strict schemas).

json body_to_json(const StarBody& body);
StarBody body_from_json(const json& j);

json polytope_to_json(const HPolytope& p);
HPolytope polytope_from_json(const json& j, std::size_t expect_dim = 0);

// {"kind":"power","q":..,"scale":..} or {"kind":"power_sum","terms":[{"q","scale"},..]}
GFunction g_from_json(const json& j);
// {"kind":"power","p":..}
PhiFunction phi_from_json(const json& j);

BorelMeasure atoms_from_json(const json& j, std::size_t dim);

struct InstanceDoc {
    ProblemSpec spec;
    std::size_t resolution;
};

// Instance file: {dimension, atoms, phi, g, family, objective,
// petty_reference?, resolution?, seed?}. atoms may be omitted only in Petty
// mode, where the reference body's surface area measure is the default.
InstanceDoc instance_from_json(const json& j);

json solution_to_json(const Solution& sol);

std::uint64_t fnv1a64(const std::string& text);
// Seed derived from the canonicalized (sorted-key) instance document.
std::uint64_t instance_hash(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace opm

#endif
