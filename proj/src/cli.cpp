#include "normalfan/cli.hpp"

#include "normalfan/errors.hpp"
#include "normalfan/harness.hpp"
#include "normalfan/identity.hpp"
#include "normalfan/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace normalfan {

namespace {

struct Options {
    std::string input;
    std::string point;
    std::string format = "json";
    std::size_t samples = 50;
    std::size_t per_pair = 2;
    std::uint64_t seed = 0;
    std::size_t g = 0;
    std::size_t h = 0;
    std::string kind = "polytope";
    std::string base = "polytope";
    std::size_t dim = 2;
    std::size_t constraints = 4;
    std::size_t lineality = 0;
    int bound = 8;
    std::string dir;
};

std::size_t max_dim() {
    const char* env = std::getenv("NORMALFAN_MAX_DIM");
    if (!env || !*env)
        return 8;
    try {
        long v = std::stol(env);
        if (v < 1)
            throw ParseError("NORMALFAN_MAX_DIM must be a positive integer");
        return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
        throw ParseError(std::string("NORMALFAN_MAX_DIM is not an integer: ") + env);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

HPolyhedron load_polyhedron(const std::string& path) {
    Json j = read_json_file(path);
    HPolyhedron P = polyhedron_from_json(j);
    if (P.ambient_dim() > max_dim())
        throw DimensionMismatch("dimension " + std::to_string(P.ambient_dim()) + " exceeds NORMALFAN_MAX_DIM=" +
                                std::to_string(max_dim()));
    return P;
}

RVector load_point(const Options& o, std::size_t d) {
    RVector x = parse_point(o.point);
    if (x.size() != d)
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, instance has dimension " +
                                std::to_string(d));
    return x;
}

std::size_t face_arg(const NormalFan& fan, std::size_t id, const char* name) {
    if (id >= fan.size())
        throw ParseError(std::string("--") + name + " " + std::to_string(id) + " is not a face id (lattice has " +
                         std::to_string(fan.size()) + " faces)");
    return id;
}

// Constant predicted by the generator class, used to cross-check corpus files.
int class_constant(const GenSpec& spec) {
    switch (spec.kind) {
    case InstanceKind::polytope: return 1;
    case InstanceKind::cone:
    case InstanceKind::line_free_unbounded: return 0;
    case InstanceKind::with_lineality:
        if (spec.base != InstanceKind::polytope && spec.lineality < spec.dim)
            return 0;
        return spec.lineality % 2 == 0 ? 1 : -1;
    }
    return 0;
}

struct Result {
    Json report;
    int code = exit_ok;
};

Result cmd_faces(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    Json faces = Json::array();
    for (std::size_t f = 0; f < fan.size(); ++f)
        faces.push_back(face_json(fan.face(f), f));
    Json out;
    out["d"] = fan.ambient_dim();
    out["dim"] = fan.polyhedron().dim();
    out["faces"] = std::move(faces);
    return {out};
}

Result cmd_normal_fan(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    Json cones = Json::array();
    for (std::size_t f = 0; f < fan.size(); ++f) {
        Json c = to_json(fan.cone(f));
        Json entry;
        entry["face"] = f;
        entry["dim"] = fan.face(f).dim;
        entry["generators"] = c["generators"];
        entry["lineality"] = c["lineality"];
        cones.push_back(std::move(entry));
    }
    return {Json{{"cones", std::move(cones)}}};
}

Result cmd_phi(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    return {to_json(phi_at(fan, load_point(o, fan.ambient_dim())))};
}

Result cmd_verify(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    VerifyOptions vo;
    vo.random_samples = o.samples;
    vo.seed = o.seed;
    vo.boundary_per_pair = o.per_pair;
    auto rep = verify_theorem(fan, vo);
    return {to_json(rep), rep.violations.empty() ? exit_ok : exit_violation};
}

Result cmd_euler(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    Json out;
    out["sum"] = euler_sum(fan);
    out["faces"] = fan.size();
    out["is_subspace"] = fan.size() == 1;
    return {out};
}

Result cmd_decompose(const Options& o) { return {to_json(decompose(load_polyhedron(o.input)))}; }

Result cmd_covering(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    Json out = to_json(covering_witness(fan, load_point(o, fan.ambient_dim())));
    return {out};
}

Result cmd_project(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    RVector y = load_point(o, fan.ambient_dim());
    return {Json{{"point", to_json(y)}, {"projection", to_json(project_onto(fan, y))}}};
}

Result cmd_psi(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    RVector y = load_point(o, fan.ambient_dim());
    return {Json{{"point", to_json(y)}, {"psi", to_json(psi(fan, y))}}};
}

Result cmd_degree(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    RVector z = load_point(o, fan.ambient_dim());
    auto deg = degree_at(fan, z);
    Json out;
    out["point"] = to_json(z);
    out["regular"] = deg.has_value();
    out["degree"] = deg ? Json(*deg) : Json(nullptr);
    out["phi"] = phi_at(fan, z).phi;
    return {out};
}

Result cmd_strata(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    RVector x = load_point(o, fan.ambient_dim());
    Json list = Json::array();
    for (const auto& s : strata_at(fan, x))
        list.push_back(to_json(s));
    return {Json{{"point", to_json(x)}, {"strata", std::move(list)}}};
}

Result cmd_localize(const Options& o) {
    NormalFan fan(load_polyhedron(o.input));
    return {to_json(localize(fan, face_arg(fan, o.g, "g"), face_arg(fan, o.h, "h")))};
}

Result cmd_gen(const Options& o) {
    GenSpec spec;
    spec.seed = o.seed;
    spec.dim = o.dim;
    spec.n_constraints = o.constraints;
    spec.kind = parse_instance_kind(o.kind);
    spec.lineality = o.lineality;
    spec.base = parse_instance_kind(o.base);
    spec.coefficient_bound = o.bound;
    if (spec.dim > max_dim())
        throw DimensionMismatch("dimension " + std::to_string(spec.dim) + " exceeds NORMALFAN_MAX_DIM=" +
                                std::to_string(max_dim()));
    Json out = to_json(gen_instance(spec));
    out["spec"] = to_json(spec);
    return {out};
}

Result cmd_verify_corpus(const Options& o) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(o.dir))
        if (e.is_regular_file() && e.path().extension() == ".json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());

    Json instances = Json::array();
    std::size_t bad = 0;
    for (const auto& path : files) {
        Json j = read_json_file(path.string());
        NormalFan fan(polyhedron_from_json(j));
        VerifyOptions vo;
        vo.random_samples = o.samples;
        vo.seed = o.seed;
        vo.boundary_per_pair = o.per_pair;
        auto rep = verify_theorem(fan, vo);
        Json entry;
        entry["file"] = path.filename().string();
        entry["predicted"] = rep.predicted;
        bool ok = rep.violations.empty();
        if (j.contains("spec")) {
            int expected = class_constant(genspec_from_json(j.at("spec")));
            entry["class_constant"] = expected;
            ok = ok && expected == rep.predicted;
        }
        entry["samples"] = rep.samples;
        entry["violations"] = rep.violations.size();
        entry["ok"] = ok;
        bad += !ok;
        instances.push_back(std::move(entry));
    }
    Json out;
    out["instances"] = std::move(instances);
    out["failed"] = bad;
    return {out, bad == 0 ? exit_ok : exit_violation};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Faces, normal cones and the signed cell sum phi_P of H-polyhedra, in exact arithmetic.",
                 "normalfan"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 1 identity violation found, 2 input or usage error.\n"
               "NORMALFAN_MAX_DIM caps the accepted dimension (default 8).");

    std::map<CLI::App*, std::function<Result(const Options&)>> handlers;
    auto sub = [&](const char* name, const char* help, std::function<Result(const Options&)> fn,
                   bool input = true) {
        CLI::App* s = app.add_subcommand(name, help);
        if (input)
            s->add_option("input", o.input, "polyhedron JSON file {\"d\",\"A\",\"b\",\"eqs\"?}")
                ->required()
                ->check(CLI::ExistingFile);
        s->add_option("--format", o.format, "json (compact) or pretty (indented)")
            ->check(CLI::IsMember({"json", "pretty"}));
        handlers[s] = std::move(fn);
        return s;
    };
    auto with_point = [&](CLI::App* s) {
        s->add_option("--point", o.point, "comma-separated rationals, e.g. 2,1/2")->required();
    };
    auto with_sampling = [&](CLI::App* s) {
        s->add_option("--samples", o.samples, "random points per instance")->capture_default_str();
        s->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
        s->add_option("--per-pair", o.per_pair, "boundary samples per face pair")->capture_default_str();
    };

    sub("faces", "face lattice, sorted by (dim, active set)", cmd_faces);
    sub("normal-fan", "normal cone of every face", cmd_normal_fan);
    with_point(sub("phi", "phi at a point, term by term", cmd_phi));
    with_sampling(sub("verify", "check phi against its predicted constant", cmd_verify));
    sub("euler", "alternating face count of a cone", cmd_euler);
    sub("decompose", "lineality space, P0 and the predicted constant", cmd_decompose);
    with_point(sub("covering", "face F with the point in relint F + N(P,F)", cmd_covering));
    with_point(sub("project", "nearest point of P", cmd_project));
    with_point(sub("psi", "reflection x - u of the covering split x + u", cmd_psi));
    with_point(sub("degree", "degree of Psi at a regular point", cmd_degree));
    with_point(sub("strata", "pairs (G,H) with the point in relint G - relint N(P,H)", cmd_strata));
    {
        auto* s = sub("localize", "localization cone H* of the pair (G,H)", cmd_localize);
        s->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
        s->add_option("--g", o.g, "face id of G")->required();
        s->add_option("--h", o.h, "face id of H")->required();
    }
    {
        auto* s = sub("gen", "generate a random instance", cmd_gen, false);
        s->add_option("--kind", o.kind, "polytope, cone, line_free_unbounded or with_lineality")
            ->capture_default_str();
        s->add_option("--dim", o.dim, "ambient dimension")->capture_default_str();
        s->add_option("--seed", o.seed, "generator seed")->capture_default_str();
        s->add_option("--constraints", o.constraints, "random rows")->capture_default_str();
        s->add_option("--lineality", o.lineality, "dim U_P for with_lineality")->capture_default_str();
        s->add_option("--base", o.base, "kind of the line-free part for with_lineality")->capture_default_str();
        s->add_option("--bound", o.bound, "coefficient bound")->capture_default_str();
    }
    {
        auto* s = sub("verify-corpus", "verify every <kind>-<seed>.json in a directory", cmd_verify_corpus, false);
        s->add_option("dir", o.dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
        with_sampling(s);
    }

    std::vector<std::string> argv_store{"normalfan"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_input_error;
    }

    for (auto& [s, fn] : handlers) {
        if (!s->parsed())
            continue;
        try {
            Result r = fn(o);
            out << (o.format == "pretty" ? r.report.dump(2) : r.report.dump()) << '\n';
            return r.code;
        } catch (const CoverViolation& e) {
            err << "normalfan: identity violation: " << e.what() << '\n';
            return exit_violation;
        } catch (const TheoremViolation& e) {
            err << "normalfan: identity violation: " << e.what() << '\n';
            return exit_violation;
        } catch (const Error& e) {
            err << "normalfan: " << e.what() << '\n';
            return exit_input_error;
        } catch (const nlohmann::json::exception& e) {
            err << "normalfan: malformed input: " << e.what() << '\n';
            return exit_input_error;
        }
    }
    return exit_input_error;
}

} // namespace normalfan
