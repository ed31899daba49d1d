#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "aperiodica/fixtures.hpp"
#include "aperiodica/verify.hpp"

namespace aperiodica::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { Ok = 0, Usage = 1, Fail = 2, Indeterminate = 3 };

struct RunConfig {
    std::string subcommand;
    std::string fixture;
    std::string input;
    std::filesystem::path out = ".";
    std::size_t points = 100000;
    std::uint64_t seed = 1;
    double precision = 1e-15;
    double svg_size = 0; // px width; 0 = 100 px per unit
    std::string format = "json";
    int max_n = 30;            // scan
    std::string mode;          // verify: primal | dual (default from the file)
    std::string backend = "chaos"; // rauzy: chaos | direct
    unsigned generations = 4;  // tile, dual
    std::string start = "L";   // tile
};

inline void validate(const RunConfig& c) {
    static const std::vector<std::string> subs{"analyze", "scan", "rauzy", "dual", "tile", "verify"};
    if (std::find(subs.begin(), subs.end(), c.subcommand) == subs.end()) throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + c.subcommand);
    if (c.subcommand != "scan" && c.fixture.empty() == c.input.empty())
        throw Error(ErrorCode::InvalidArgument, "give exactly one of --fixture and --input");
    if (c.format != "json" && c.format != "csv") throw Error(ErrorCode::InvalidArgument, "--format must be json or csv");
    if (!c.mode.empty() && c.mode != "primal" && c.mode != "dual") throw Error(ErrorCode::InvalidArgument, "--mode must be primal or dual");
    if (c.backend != "chaos" && c.backend != "direct") throw Error(ErrorCode::InvalidArgument, "--backend must be chaos or direct");
    if (c.points == 0) throw Error(ErrorCode::InvalidArgument, "--points must be positive");
    if (!(c.precision > 0)) throw Error(ErrorCode::InvalidArgument, "--precision must be positive");
    if (c.max_n < 2) throw Error(ErrorCode::InvalidArgument, "--max must be at least 2");
}

namespace detail {

inline SubstitutionFile load(const RunConfig& c) { return c.fixture.empty() ? load_substitution(c.input) : load_fixture(c.fixture); }

inline std::string with_out(const RunConfig& c, const std::string& file) {
    std::filesystem::create_directories(c.out);
    return (c.out / file).string();
}

template <typename Writer>
std::string write_file(const RunConfig& c, const std::string& file, Writer&& w) {
    const std::string path = with_out(c, file);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    w(os);
    return path;
}

inline SvgOptions svg_options(const RunConfig& c) {
    SvgOptions o;
    o.width = c.svg_size;
    return o;
}

inline Json matrix_json(const IntMatrix& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) r.push_back(a(i, j));
        rows.push_back(r);
    }
    return rows;
}

inline Json rules_json(const SymbolicSubstitution& s) {
    Json j = Json::object();
    for (std::size_t i = 0; i < s.size(); ++i) j[s.name(i)] = s.spell(s.rule(i));
    return j;
}

inline Json intervals_json(const std::vector<ExactInterval>& w, const std::vector<std::string>& types) {
    Json j = Json::array();
    for (std::size_t t = 0; t < w.size(); ++t)
        j.push_back({{"type", types[t]}, {"lo", w[t].lo.to_string()}, {"hi", w[t].hi.to_string()}, {"lo_value", w[t].lo_value()}, {"hi_value", w[t].hi_value()}});
    return j;
}

inline int analyze(const RunConfig& c, std::ostream& out) {
    const SubstitutionFile f = load(c);
    const IntMatrix a = matrix_of(f.sigma);
    Json j{{"schema", "aperiodica/v1"}, {"command", "analyze"}, {"name", f.name}, {"alphabet", f.sigma.alphabet()}, {"rules", rules_json(f.sigma)},
           {"matrix", matrix_json(a)}, {"primitive", is_primitive(a)}};
    if (!is_primitive(a)) {
        out << j.dump(2) << '\n';
        return Fail;
    }
    j["charpoly"] = poly::to_string(poly::characteristic_polynomial(a));
    const PFData pf = pf_data(a);
    j["minpoly"] = pf.minpoly.to_string();
    j["pf_value"] = pf.pf_value;
    const PisotClass pc = classify_pisot(pf.minpoly, c.precision);
    j["pisot_class"] = std::string(to_string(pc));
    Json conj = Json::array();
    for (const auto& r : pf.field->conjugates().roots()) conj.push_back({r.value.real(), r.value.imag()});
    j["conjugates"] = conj;
    j["frequencies"] = pf.frequencies;
    if (!f.is_geometric()) {
        j["dimension"] = f.dimension;
        if (f.volumes) {
            j["volumes"] = *f.volumes;
            j["density"] = density(*f.volumes, pf.frequencies);
        }
        out << j.dump(2) << '\n';
        return Ok;
    }
    const GeometricSubstitution g = to_geometric(f, c.precision);
    j["alphabet"] = g.sigma.alphabet();
    j["rules"] = rules_json(g.sigma);
    j["matrix"] = matrix_json(matrix_of(g.sigma));
    j["anchor"] = g.anchor == Anchor::Left ? "left" : "right";
    Json lengths = Json::object(), values = Json::object();
    std::vector<double> lv;
    for (std::size_t i = 0; i < g.size(); ++i) {
        lengths[g.sigma.name(i)] = g.lengths[i].to_string();
        values[g.sigma.name(i)] = g.lengths[i].value();
        lv.push_back(g.lengths[i].value());
    }
    j["lengths"] = lengths;
    j["length_values"] = values;
    const PFData gpf = pf_data(matrix_of(g.sigma));
    j["frequencies"] = gpf.frequencies;
    j["density"] = density(lv, gpf.frequencies);
    j["set_equations"] = derive_set_equations(g).equations();
    if (pc == PisotClass::PV) {
        const CutProjectScheme scheme(g.field);
        const auto ifs = star_equations(derive_set_equations(g), scheme);
        j["internal_dimension"] = ifs.dim();
        j["starred_equations"] = ifs.equations();
        j["contraction"] = ifs.contraction();
        j["bound_radius"] = ifs.bound_radius();
        j["det_lambda"] = scheme.lattice_determinant().exact;
    }
    out << j.dump(2) << '\n';
    return Ok;
}

inline int scan(const RunConfig& c, std::ostream& out) {
    const auto rows = scan_mn_family(c.max_n, c.precision);
    if (c.format == "csv") {
        out << "n,pf_value,degree,pisot_class,minpoly\n";
        char buf[32];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%.12f", r.pf_value);
            out << r.n << ',' << buf << ',' << r.degree << ',' << to_string(r.pisot_class) << ",\"" << r.minpoly << "\"\n";
        }
        return Ok;
    }
    Json j{{"schema", "aperiodica/v1"}, {"command", "scan"}, {"max", c.max_n}};
    Json arr = Json::array(), pv = Json::array();
    bool indeterminate = false;
    for (const auto& r : rows) {
        arr.push_back({{"n", r.n}, {"pf_value", r.pf_value}, {"degree", r.degree}, {"pisot_class", std::string(to_string(r.pisot_class))}, {"minpoly", r.minpoly}});
        if (r.pisot_class == PisotClass::PV) pv.push_back(r.n);
        indeterminate = indeterminate || r.pisot_class == PisotClass::Indeterminate;
    }
    j["rows"] = arr;
    j["pv"] = pv;
    out << j.dump(2) << '\n';
    return indeterminate ? Indeterminate : Ok;
}

inline int rauzy(const RunConfig& c, std::ostream& out) {
    const SubstitutionFile f = load(c);
    const GeometricSubstitution g = to_geometric(f, c.precision);
    const CutProjectScheme scheme(g.field);
    const auto ifs = star_equations(derive_set_equations(g), scheme);
    const PointCloud cloud = c.backend == "chaos" ? attractor_cloud(ifs, c.points, c.seed) : starred_endpoint_cloud(g, scheme.internal(), c.points, std::nullopt);
    Json files = Json::array();
    const std::string stem = f.name + "-rauzy";
    if (cloud.dim <= 2 && c.format == "json") files.push_back(write_file(c, stem + ".svg", [&](std::ostream& os) { write_cloud_svg(os, cloud, svg_options(c)); }));
    if (cloud.dim > 2 || c.format == "csv") files.push_back(write_file(c, stem + ".csv", [&](std::ostream& os) { write_cloud_csv(os, cloud, ifs.types()); }));
    Json counts = Json::object();
    for (std::size_t t = 0; t < ifs.types().size(); ++t) counts[ifs.types()[t]] = cloud.of_type(t).size();
    const double bound = ifs.bound_radius();
    Json j{{"schema", "aperiodica/v1"}, {"command", "rauzy"}, {"name", f.name}, {"backend", c.backend}, {"points", cloud.size()}, {"dim", cloud.dim},
           {"equations", ifs.equations()}, {"counts", counts}, {"bound_radius", bound}, {"max_norm", cloud.max_norm()},
           {"bounded", cloud.max_norm() <= bound}, {"files", files}};
    out << j.dump(2) << '\n';
    return cloud.max_norm() <= bound ? Ok : Fail;
}

inline int dual(const RunConfig& c, std::ostream& out) {
    const SubstitutionFile f = load(c);
    const GeometricSubstitution g = to_geometric(f, c.precision);
    const auto ifs = star_equations(derive_set_equations(g), CutProjectScheme(g.field));
    const DualSubstitution d = dualize(ifs);
    Json rules = Json::object(), control = Json::object();
    for (std::size_t t = 0; t < d.size(); ++t) {
        rules[d.types()[t]] = d.rule_string(t);
        control[d.types()[t]] = d.control_points()[t].to_string();
    }
    Json j{{"schema", "aperiodica/v1"}, {"command", "dual"}, {"name", f.name}, {"matrix", matrix_json(d.matrix())}, {"rules", rules}, {"control_points", control}};
    Json costar = Json::array();
    const auto co = costar_system(d);
    for (std::size_t t = 0; t < d.size(); ++t) costar.push_back(co.equation(t, "λ⁻¹"));
    j["costar_equations"] = costar;
    try {
        const auto w = dual_windows(d);
        j["windows"] = intervals_json(w, d.types());
        j["window_measure"] = union_length(w).to_string();
        j["window_measure_value"] = ::aperiodica::detail::abs_value(union_length(w), 0);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotInterval) throw;
        j["windows"] = nullptr;
    }
    std::vector<DualTile> seed = fixed_dual_tiles(d);
    if (seed.empty()) seed.push_back({0, FieldElement::zero(d.field())});
    const unsigned k = c.generations;
    const auto ps = generate_dual_pointset(d, seed, k, window_diameter(ifs));
    Json seedj = Json::array();
    for (const auto& t : seed) seedj.push_back({{"type", d.types()[t.type]}, {"translation", t.translation.to_string()}});
    j["seed"] = seedj;
    j["generations"] = k;
    j["tile_counts"] = ps.tile_counts;
    j["nested"] = ps.nested;
    j["delone"] = {{"probe_radius", ps.delone.probe_radius}, {"empty_radius", ps.delone.empty_radius}, {"threshold", ps.delone.threshold}, {"pass", ps.delone.pass}};
    const auto rep = dual_of_dual_check(g, g);
    j["dual_of_dual"] = {{"pass", rep.pass}, {"orientation", rep.orientation}, {"scale", rep.scale}, {"child_words", rep.child_words}, {"note", rep.note}};
    PointCloud cloud{d.space().dim(), {}, {}};
    for (const auto& t : ps.tiles) cloud.add(t.type, d.space().star(d.point(t)));
    Json files = Json::array();
    if (cloud.dim <= 2 && c.format == "json") files.push_back(write_file(c, f.name + "-dual.svg", [&](std::ostream& os) { write_cloud_svg(os, cloud, svg_options(c)); }));
    if (cloud.dim > 2 || c.format == "csv") files.push_back(write_file(c, f.name + "-dual.csv", [&](std::ostream& os) { write_cloud_csv(os, cloud, d.types()); }));
    j["files"] = files;
    out << j.dump(2) << '\n';
    return ps.nested && ps.delone.pass && rep.pass ? Ok : Fail;
}

inline int tile(const RunConfig& c, std::ostream& out) {
    const SubstitutionFile f = load(c);
    const GeometricSubstitution g = to_geometric(f, c.precision);
    const DualSubstitution d = dualize(star_equations(derive_set_equations(g), CutProjectScheme(g.field)));
    const auto proto = polygonal_prototiles(d);
    const auto it = std::find(d.types().begin(), d.types().end(), c.start);
    if (it == d.types().end()) throw Error(ErrorCode::InvalidArgument, "--start names no tile type");
    const std::size_t start = static_cast<std::size_t>(it - d.types().begin());
    const auto patch = substitute_patch(d, start, c.generations);
    const auto audit = audit_patch(patch, proto, d.space());
    const double expected = std::pow(d.lambda().value(), c.generations) * proto[start].area;
    Json areas = Json::object();
    for (const auto& p : proto) areas[p.name] = p.area;
    Json files = Json::array();
    const std::string stem = f.name + "-tiles-" + c.start + std::to_string(c.generations);
    files.push_back(write_file(c, stem + ".svg", [&](std::ostream& os) { write_patch_svg(os, patch, proto, d.space(), svg_options(c)); }));
    files.push_back(write_file(c, stem + ".csv", [&](std::ostream& os) { write_patch_csv(os, patch, proto, d.space()); }));
    const bool ok = audit.overlap_area < 1e-9 * audit.union_area && std::abs(audit.union_area - expected) < 1e-6 * expected && audit.boundary_gap_estimate < 1e-9;
    Json j{{"schema", "aperiodica/v1"},
           {"command", "tile"},
           {"name", f.name},
           {"start", c.start},
           {"generations", c.generations},
           {"prototile_areas", areas},
           {"tiles", audit.tiles},
           {"union_area", audit.union_area},
           {"expected_area", expected},
           {"overlap_area", audit.overlap_area},
           {"boundary_gap_estimate", audit.boundary_gap_estimate},
           {"boundary_loops", audit.boundary_loops},
           {"pass", ok},
           {"files", files}};
    out << j.dump(2) << '\n';
    return ok ? Ok : Fail;
}

inline int verify(const RunConfig& c, std::ostream& out) {
    const SubstitutionFile f = load(c);
    const std::string mode = !c.mode.empty() ? c.mode : f.mode.value_or("primal");
    const auto r = verify_model_set(to_geometric(f, c.precision), mode == "dual" ? VerifyMode::Dual : VerifyMode::Primal, f.name, c.seed);
    out << Json(r).dump(2) << '\n';
    if (r.verdict == "indeterminate") return Indeterminate;
    return r.pass ? Ok : Fail;
}

} // namespace detail

inline int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownLetter:
    case ErrorCode::MissingRule:
    case ErrorCode::InvalidArgument: return Usage;
    case ErrorCode::PrecisionUnreachable: return Indeterminate;
    default: return Fail;
    }
}

/// Executes one validated subcommand; JSON/CSV summaries go to `out`, diagnostics to `err`.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        validate(c);
        if (c.subcommand == "analyze") return detail::analyze(c, out);
        if (c.subcommand == "scan") return detail::scan(c, out);
        if (c.subcommand == "rauzy") return detail::rauzy(c, out);
        if (c.subcommand == "dual") return detail::dual(c, out);
        if (c.subcommand == "tile") return detail::tile(c, out);
        return detail::verify(c, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return Usage;
    }
}

/// Command-line entry point.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Substitution tilings, Rauzy windows and model-set checks", "aperiodica"};
    app.require_subcommand(1);
    RunConfig c;
    std::string out_dir = ".";
    auto common = [&](CLI::App* s, bool needs_input) {
        if (needs_input) {
            s->add_option("--fixture", c.fixture, "builtin fixture name");
            s->add_option("--input", c.input, "substitution file")->check(CLI::ExistingFile);
        }
        s->add_option("--out", out_dir, "output directory");
        s->add_option("--precision", c.precision, "root isolation precision");
        s->add_option("--format", c.format, "json or csv");
    };
    auto* analyze = app.add_subcommand("analyze", "matrix, PF data, PV class and set equations");
    common(analyze, true);
    auto* scan = app.add_subcommand("scan", "PV classification of M_n for n = 2..max");
    common(scan, false);
    scan->add_option("--max", c.max_n, "largest n");
    auto* rauzy = app.add_subcommand("rauzy", "point cloud of the window (Rauzy fractal)");
    common(rauzy, true);
    rauzy->add_option("--points", c.points, "number of points");
    rauzy->add_option("--seed", c.seed, "random seed");
    rauzy->add_option("--svg-size", c.svg_size, "SVG width in px");
    rauzy->add_option("--backend", c.backend, "chaos or direct");
    auto* dual = app.add_subcommand("dual", "dual substitution, dual windows and dual point set");
    common(dual, true);
    dual->add_option("--generations", c.generations, "substitution steps applied to the seed");
    dual->add_option("--svg-size", c.svg_size, "SVG width in px");
    auto* tile = app.add_subcommand("tile", "polygonal dual tiling patch with gap/overlap audit");
    common(tile, true);
    tile->add_option("--generations", c.generations, "substitution steps");
    tile->add_option("--start", c.start, "start prototile");
    tile->add_option("--svg-size", c.svg_size, "SVG width in px");
    auto* verify = app.add_subcommand("verify", "model-set verification report");
    common(verify, true);
    verify->add_option("--mode", c.mode, "primal or dual");
    verify->add_option("--seed", c.seed, "random seed for estimated windows");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    c.out = out_dir;
    return run(c, out, err);
}

} // namespace aperiodica::cli
