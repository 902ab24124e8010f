#include "opm/serialization.hpp"

#include <fstream>
#include <set>

#include "opm/errors.hpp"

namespace opm {

namespace {

void require_object(const json& j, const char* what) {
    if (!j.is_object()) throw SchemaError(std::string(what) + ": expected a JSON object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw SchemaError(std::string(what) + ": unknown key \"" + it.key() + "\"");
}

const json& need(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string(what) + ": missing key \"" + key + "\"");
    return *it;
}

double need_number(const json& j, const char* key, const char* what) {
    const json& v = need(j, key, what);
    if (!v.is_number()) throw SchemaError(std::string(what) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

Vec vec_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string(what) + ": expected an array of numbers");
    Vec v;
    for (const json& x : j) {
        if (!x.is_number()) throw SchemaError(std::string(what) + ": expected numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

json vec_to_json(const Vec& v) { return json(v); }

Rotation rotation_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string(what) + ": rotation must be a matrix");
    std::size_t n = j.size();
    std::vector<double> m;
    for (const json& row : j) {
        Vec r = vec_from_json(row, what);
        if (r.size() != n) throw SchemaError(std::string(what) + ": rotation must be square");
        m.insert(m.end(), r.begin(), r.end());
    }
    return Rotation(n, std::move(m));
}

json rotation_to_json(const Rotation& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < t.dim(); ++k) row.push_back(t.entry(i, k));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

json polytope_to_json(const HPolytope& p) {
    json normals = json::array();
    for (const UnitVector& u : p.normals()) normals.push_back(vec_to_json(u.coords()));
    return json{{"normals", normals}, {"offsets", p.offsets()}};
}

HPolytope polytope_from_json(const json& j, std::size_t expect_dim) {
    require_object(j, "polytope");
    check_keys(j, {"normals", "offsets"}, "polytope");
    const json& jn = need(j, "normals", "polytope");
    const json& jz = need(j, "offsets", "polytope");
    if (!jn.is_array() || !jz.is_array() || jn.size() != jz.size())
        throw SchemaError("polytope: normals/offsets must be arrays of equal length");
    std::vector<UnitVector> normals;
    std::vector<double> offsets;
    for (const json& row : jn) normals.push_back(UnitVector(vec_from_json(row, "polytope normal")));
    for (const json& z : jz) offsets.push_back(z.get<double>());
    if (expect_dim && !normals.empty() && normals.front().dim() != expect_dim)
        throw SchemaError("polytope: dimension mismatch");
    return HPolytope(std::move(normals), std::move(offsets));
}

json body_to_json(const StarBody& body) {
    json params;
    std::string kind;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BallBody>) {
                kind = "ball";
                params = {{"radius", b.radius}};
            } else if constexpr (std::is_same_v<T, EllipsoidBody>) {
                kind = "ellipsoid";
                params = {{"semiaxes", b.semiaxes}};
                if (b.orientation) params["rotation"] = rotation_to_json(*b.orientation);
            } else if constexpr (std::is_same_v<T, ConeBody>) {
                kind = "cone";
                params = {{"inv_base_radius", b.inv_base_radius},
                          {"inv_apex_height", b.inv_apex_height},
                          {"axis", vec_to_json(b.axis.coords())}};
            } else if constexpr (std::is_same_v<T, PolytopeBody>) {
                kind = "polytope";
                params = polytope_to_json(*b.p);
            } else if constexpr (std::is_same_v<T, PolarPolytopeBody>) {
                kind = "polar_polytope";
                params = polytope_to_json(*b.p);
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                kind = "scaled";
                params = {{"factor", b.factor}, {"body", body_to_json(*b.inner)}};
            } else {
                kind = "support_average";
                params = {{"p", polytope_to_json(*b.p)}, {"q", polytope_to_json(*b.q)}};
            }
        },
        body.payload());
    return json{{"kind", kind}, {"dimension", body.dim()}, {"parameters", params}};
}

StarBody body_from_json(const json& j) {
    require_object(j, "body");
    check_keys(j, {"kind", "dimension", "parameters"}, "body");
    std::string kind = need(j, "kind", "body").get<std::string>();
    std::size_t dim = need(j, "dimension", "body").get<std::size_t>();
    const json& p = need(j, "parameters", "body");
    require_object(p, "body parameters");
    if (kind == "ball") {
        check_keys(p, {"radius"}, "ball");
        return StarBody::ball(dim, need_number(p, "radius", "ball"));
    }
    if (kind == "ellipsoid") {
        check_keys(p, {"semiaxes", "rotation"}, "ellipsoid");
        Vec semi = vec_from_json(need(p, "semiaxes", "ellipsoid"), "ellipsoid semiaxes");
        if (semi.size() != dim) throw SchemaError("ellipsoid: semiaxes/dimension mismatch");
        std::optional<Rotation> rot;
        if (p.contains("rotation")) rot = rotation_from_json(p["rotation"], "ellipsoid");
        return StarBody::ellipsoid(std::move(semi), std::move(rot));
    }
    if (kind == "cone") {
        check_keys(p, {"inv_base_radius", "inv_apex_height", "axis"}, "cone");
        std::optional<UnitVector> axis;
        if (p.contains("axis")) axis = UnitVector(vec_from_json(p["axis"], "cone axis"));
        return StarBody::cone(dim, need_number(p, "inv_base_radius", "cone"),
                              need_number(p, "inv_apex_height", "cone"), std::move(axis));
    }
    if (kind == "polytope") return StarBody::polytope(polytope_from_json(p, dim));
    if (kind == "polar_polytope") return StarBody::polar_polytope(polytope_from_json(p, dim));
    if (kind == "scaled") {
        check_keys(p, {"factor", "body"}, "scaled");
        return StarBody::scaled(body_from_json(need(p, "body", "scaled")),
                                need_number(p, "factor", "scaled"));
    }
    if (kind == "support_average") {
        check_keys(p, {"p", "q"}, "support_average");
        return StarBody::support_average(polytope_from_json(need(p, "p", "support_average"), dim),
                                         polytope_from_json(need(p, "q", "support_average"), dim));
    }
    throw SchemaError("body: unknown kind \"" + kind + "\"");
}

GFunction g_from_json(const json& j) {
    require_object(j, "g");
    std::string kind = need(j, "kind", "g").get<std::string>();
    if (kind == "power") {
        check_keys(j, {"kind", "q", "scale"}, "g");
        double scale = j.contains("scale") ? need_number(j, "scale", "g") : 1.0;
        return GFunction::power(need_number(j, "q", "g"), scale);
    }
    if (kind == "power_sum") {
        check_keys(j, {"kind", "terms"}, "g");
        const json& terms = need(j, "terms", "g");
        if (!terms.is_array() || terms.empty())
            throw SchemaError("g: power_sum needs a nonempty terms array");
        std::vector<std::pair<double, double>> ts;
        for (const json& t : terms) {
            require_object(t, "g term");
            check_keys(t, {"q", "scale"}, "g term");
            ts.emplace_back(need_number(t, "q", "g term"), need_number(t, "scale", "g term"));
        }
        return GFunction::power_sum(std::move(ts));
    }
    throw SchemaError("g: unknown kind \"" + kind + "\" (custom G is library-API only)");
}

PhiFunction phi_from_json(const json& j) {
    require_object(j, "phi");
    std::string kind = need(j, "kind", "phi").get<std::string>();
    if (kind == "power") {
        check_keys(j, {"kind", "p"}, "phi");
        return PhiFunction::power(need_number(j, "p", "phi"));
    }
    throw SchemaError("phi: unknown kind \"" + kind + "\" (custom phi is library-API only)");
}

BorelMeasure atoms_from_json(const json& j, std::size_t dim) {
    if (!j.is_array() || j.empty()) throw SchemaError("atoms: expected a nonempty array");
    std::vector<BorelMeasure::Atom> atoms;
    for (const json& a : j) {
        require_object(a, "atom");
        check_keys(a, {"u", "lambda"}, "atom");
        Vec u = vec_from_json(need(a, "u", "atom"), "atom direction");
        if (u.size() != dim) throw SchemaError("atom: direction/dimension mismatch");
        atoms.push_back({UnitVector(std::move(u)), need_number(a, "lambda", "atom")});
    }
    return BorelMeasure::discrete(std::move(atoms));
}

InstanceDoc instance_from_json(const json& j) {
    require_object(j, "instance");
    check_keys(j,
               {"dimension", "atoms", "phi", "g", "family", "objective", "petty_reference",
                "resolution", "seed"},
               "instance");
    std::size_t dim = need(j, "dimension", "instance").get<std::size_t>();
    if (dim < 2) throw SchemaError("instance: dimension must be >= 2");

    std::optional<HPolytope> petty;
    if (j.contains("petty_reference"))
        petty = polytope_from_json(j["petty_reference"], dim);

    BorelMeasure measure = [&]() {
        if (j.contains("atoms")) return atoms_from_json(j["atoms"], dim);
        if (!petty)
            throw SchemaError("instance: atoms are required unless petty_reference is given");
        SurfaceAreaMeasure sam = petty->surface_area_measure();
        std::vector<BorelMeasure::Atom> atoms;
        for (std::size_t i = 0; i < sam.areas.size(); ++i)
            atoms.push_back({sam.normals[i], sam.areas[i]});
        return BorelMeasure::discrete(std::move(atoms));
    }();

    std::string objective = need(j, "objective", "instance").get<std::string>();
    ObjectiveKind kind;
    if (objective == "integral")
        kind = ObjectiveKind::Integral;
    else if (objective == "orlicz_norm")
        kind = ObjectiveKind::OrliczNorm;
    else
        throw SchemaError("instance: objective must be \"integral\" or \"orlicz_norm\"");

    std::size_t resolution = default_resolution(dim);
    if (j.contains("resolution")) {
        resolution = j["resolution"].get<std::size_t>();
        if (resolution < 4) throw SchemaError("instance: resolution must be >= 4");
    }
    std::uint64_t seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : instance_hash(j);

    ProblemSpec spec{dim,
                     std::move(measure),
                     phi_from_json(need(j, "phi", "instance")),
                     g_from_json(need(j, "g", "instance")),
                     family_from_name(need(j, "family", "instance").get<std::string>()),
                     kind,
                     std::move(petty),
                     product_rule(dim, resolution),
                     seed};
    return {std::move(spec), resolution};
}

json solution_to_json(const Solution& sol) {
    return json{{"z_star", sol.z_star},
                {"polytope", polytope_to_json(sol.polytope)},
                {"objective_value", sol.objective_value},
                {"constraint_residual", sol.constraint_residual},
                {"facial_defects", sol.facial_defects},
                {"starts_used", sol.starts_used},
                {"converged", sol.converged}};
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t instance_hash(const json& j) { return fnv1a64(j.dump()); }

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace opm
