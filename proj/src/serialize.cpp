#include "normalfan/serialize.hpp"

#include "normalfan/errors.hpp"

#include <sstream>

namespace normalfan {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::size_t size_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ParseError(std::string("field '") + key + "' must be a nonnegative integer");
    return v.get<std::size_t>();
}

RMatrix matrix_from_json(const Json& j, std::size_t cols, const char* what) {
    if (!j.is_array())
        throw ParseError(std::string(what) + " must be an array of rows");
    std::vector<RVector> rows;
    for (const auto& r : j) {
        RVector v = vector_from_json(r);
        if (v.size() != cols)
            throw DimensionMismatch(std::string(what) + " row has " + std::to_string(v.size()) +
                                    " entries, expected " + std::to_string(cols));
        rows.push_back(std::move(v));
    }
    return RMatrix::from_rows(rows, cols);
}

Json index_list(const std::vector<std::size_t>& v) {
    Json out = Json::array();
    for (auto i : v)
        out.push_back(i);
    return out;
}

} // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const RVector& v) {
    Json out = Json::array();
    for (const auto& q : v)
        out.push_back(to_string(q));
    return out;
}

Json to_json(const std::vector<RVector>& rows) {
    Json out = Json::array();
    for (const auto& r : rows)
        out.push_back(to_json(r));
    return out;
}

Rational rational_from_json(const Json& j) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long>());
    throw ParseError("expected a rational as a string or an integer, got " + j.dump());
}

RVector vector_from_json(const Json& j) {
    if (!j.is_array())
        throw ParseError("expected an array of rationals, got " + j.dump());
    RVector v;
    for (const auto& e : j)
        v.push_back(rational_from_json(e));
    return v;
}

HPolyhedron polyhedron_from_json(const Json& j) {
    const std::size_t d = size_field(j, "d");
    RMatrix A = matrix_from_json(field(j, "A"), d, "A");
    RVector b = vector_from_json(field(j, "b"));
    if (!j.contains("eqs"))
        return make_polyhedron(A, b);
    const Json& eqs = j.at("eqs");
    RMatrix E = matrix_from_json(field(eqs, "A"), d, "eqs.A");
    RVector e = vector_from_json(field(eqs, "b"));
    return make_polyhedron(A, b, E, e);
}

Json to_json(const HPolyhedron& P) {
    Json out;
    out["d"] = P.ambient_dim();
    out["A"] = to_json(P.A().row_vectors());
    out["b"] = to_json(P.b());
    return out;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

Json to_json(const LinearSystem& s) {
    auto rows = [](const std::vector<Constraint>& cs) {
        Json out = Json::array();
        for (const auto& c : cs)
            out.push_back(Json{{"a", to_json(c.normal)}, {"b", to_json(c.rhs)}});
        return out;
    };
    Json out;
    out["dim"] = s.dim();
    out["ineqs"] = rows(s.inequalities());
    out["eqs"] = rows(s.equalities());
    return out;
}

Json face_json(const Face& F, std::size_t id) {
    Json out;
    out["id"] = id;
    out["active"] = index_list(F.active);
    out["dim"] = F.dim;
    out["witness"] = to_json(F.witness);
    return out;
}

Json to_json(const VCone& C) {
    Json out;
    out["generators"] = to_json(C.generators);
    out["lineality"] = to_json(C.lineality.vectors);
    return out;
}

Json to_json(const PhiReport& r) {
    Json out;
    out["point"] = to_json(r.point);
    out["phi"] = r.phi;
    Json terms = Json::array();
    for (const auto& t : r.terms)
        terms.push_back(Json{{"face", t.face}, {"dim", t.dim}, {"member", t.member}});
    out["terms"] = std::move(terms);
    return out;
}

Json to_json(const VerifyReport& r) {
    Json out;
    out["predicted"] = r.predicted;
    out["samples"] = r.samples;
    out["boundary_samples"] = r.boundary_samples;
    Json v = Json::array();
    for (const auto& x : r.violations)
        v.push_back(Json{{"point", to_json(x.point)}, {"report", to_json(x.report)}});
    out["violations"] = std::move(v);
    return out;
}

Json to_json(const LinealityDecomposition& dec) {
    Json out;
    out["lineality_dim"] = dec.U_basis.dim();
    out["U_basis"] = to_json(dec.U_basis.vectors);
    out["P0"] = to_json(dec.P0);
    out["p0_bounded"] = dec.p0_bounded;
    out["predicted_phi"] = dec.predicted_phi;
    return out;
}

Json to_json(const CoverWitness& w) {
    Json out;
    out["face"] = w.face;
    out["x"] = to_json(w.x);
    out["u"] = to_json(w.u);
    return out;
}

Json to_json(const Stratum& s) { return Json{{"g", s.g}, {"h", s.h}}; }

Json to_json(const LocalCone& lc) {
    Json out;
    out["g"] = lc.g;
    out["h"] = lc.h;
    out["base_point"] = to_json(lc.base_point);
    out["L3"] = to_json(lc.L3.vectors);
    out["Hstar"] = to_json(lc.star.polyhedron());
    Json origin = Json::array();
    for (long o : lc.row_origin) {
        if (o < 0)
            origin.push_back(nullptr);
        else
            origin.push_back(o);
    }
    out["row_origin"] = std::move(origin);
    Json faces = Json::array();
    for (const auto& [f, fs] : lc.face_map) {
        const Face& F = lc.star.face(fs);
        faces.push_back(Json{{"face", f}, {"star_face", fs}, {"star_active", index_list(F.active)}, {"star_dim", F.dim}});
    }
    out["face_map"] = std::move(faces);
    return out;
}

Json to_json(const GenSpec& spec) {
    Json out;
    out["seed"] = spec.seed;
    out["dim"] = spec.dim;
    out["n_constraints"] = spec.n_constraints;
    out["kind"] = to_string(spec.kind);
    if (spec.kind == InstanceKind::with_lineality) {
        out["lineality"] = spec.lineality;
        out["base"] = to_string(spec.base);
    }
    out["coefficient_bound"] = spec.coefficient_bound;
    return out;
}

GenSpec genspec_from_json(const Json& j) {
    GenSpec spec;
    const Json& seed = field(j, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        throw ParseError("field 'seed' must be a nonnegative integer");
    spec.seed = seed.get<std::uint64_t>();
    spec.dim = size_field(j, "dim");
    spec.n_constraints = size_field(j, "n_constraints");
    const Json& kind = field(j, "kind");
    if (!kind.is_string())
        throw ParseError("field 'kind' must be a string");
    spec.kind = parse_instance_kind(kind.get<std::string>());
    if (j.contains("lineality"))
        spec.lineality = size_field(j, "lineality");
    if (j.contains("base"))
        spec.base = parse_instance_kind(j.at("base").get<std::string>());
    if (j.contains("coefficient_bound"))
        spec.coefficient_bound = static_cast<int>(size_field(j, "coefficient_bound"));
    return spec;
}

RVector parse_point(const std::string& text) {
    RVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_rational(item));
    if (out.empty() || (!text.empty() && text.back() == ','))
        throw ParseError("malformed point literal '" + text + "'");
    return out;
}

} // namespace normalfan
