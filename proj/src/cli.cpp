#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sigma/artifact_io.hpp"
#include "sigma/errors.hpp"
#include "sigma/foliation_core.hpp"

namespace sigma {

namespace {

void setup_logging() {
    auto logger = spdlog::get("sigma");
    if (!logger) logger = spdlog::stderr_color_mt("sigma");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lv = std::getenv("SIGMA_LOG")) spdlog::set_level(spdlog::level::from_str(lv));
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, double> out;
    for (const auto& item : kv) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("param: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0') throw ValidationError("param: '" + key + "' is not a number");
        out[key] = v;
    }
    return out;
}

FoliatedSpec spec_from(const RunConfig& cfg) {
    auto params = cfg.params;
    if (cfg.preset != "catenoid3") params["n"] = cfg.n;
    return make_preset(cfg.preset, params);
}

// Writes to --out when given, otherwise stdout.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(cfg.out);
    if (!os) throw ValidationError("out: cannot open '" + cfg.out + "'");
    os << text;
    if (!os) throw NumericError("out: write failed for '" + cfg.out + "'");
}

// Reversing s takes (alpha, C, E) to (alpha + pi, -C, -E); orbits are
// reported for C >= 0.
HSParams flux_params(const RunConfig& cfg) {
    if (cfg.C < 0) spdlog::warn("C = {} normalized to {} by reversing s; levels are negated", cfg.C, -cfg.C);
    return HSParams(cfg.n, std::abs(cfg.C));
}

std::vector<double> flux_levels(const RunConfig& cfg, std::vector<double> E) {
    if (cfg.C < 0)
        for (double& e : E) e = -e;
    return E;
}

int run_eval(const RunConfig& cfg) {
    const FoliatedSpec spec = spec_from(cfg);
    Vec x(spec.n());
    if (cfg.x.empty()) {
        x.setZero();
        x(0) = 1;
    } else {
        if (static_cast<int>(cfg.x.size()) != spec.n()) throw ValidationError("x: wrong number of components");
        for (int i = 0; i < spec.n(); ++i) x(i) = cfg.x[i];
    }
    const FormulaVariant v = cfg.variant == "alternate" ? FormulaVariant::Alternate : FormulaVariant::Geometric;
    x = normalize_direction(x);
    const ComplexPoint l = eval_immersion(spec, cfg.s, x);
    const CurvatureData cd = mean_curvature_coeffs(spec, cfg.s, tangent_frame(x), v);
    const DeltaBetaBlocks db = delta_beta_poly_f(spec, cfg.s, x, v);
    nlohmann::ordered_json j;
    j["spec"] = spec.name();
    j["s"] = cfg.s;
    j["x"] = std::vector<double>(x.data(), x.data() + x.size());
    j["l_re"] = std::vector<double>(l.re.data(), l.re.data() + l.re.size());
    j["l_im"] = std::vector<double>(l.im.data(), l.im.data() + l.im.size());
    j["beta"] = lagrangian_angle(spec, cfg.s, x);
    j["a"] = cd.a;
    j["a_j"] = std::vector<double>(cd.aj.data(), cd.aj.data() + cd.aj.size());
    j["B"] = cd.B;
    j["f"] = db.f;
    j["delta_beta"] = db.delta_beta;
    j["variant"] = to_string(v);
    emit(cfg, j.dump(2) + "\n");
    return 0;
}

int run_verify(const RunConfig& cfg) {
    const FoliatedSpec spec = spec_from(cfg);
    const SamplePlan plan = make_sample_plan(spec.n(), spec.domain(), cfg.samples, cfg.seed);
    const auto checks = verify_spec(spec, plan);
    bool ok = true;
    for (const auto& c : checks) {
        spdlog::info("{}: sup {:.3e} (tol {:.1e}) {}", c.check, c.sup, c.tol, c.pass ? "ok" : "FAIL");
        ok = ok && c.pass;
    }
    emit(cfg, verification_json(spec.name(), checks));
    return ok ? 0 : 2;
}

int run_hs_solve(const RunConfig& cfg) {
    const auto norm = normalize_flux(cfg.n, cfg.C, {cfg.alpha0, cfg.r0});
    if (norm.reversed) spdlog::warn("C = {} normalized to {} by reversing s", cfg.C, norm.params.C);
    IntegratorOptions io;
    io.rtol = std::max(cfg.tol, 1e-14);
    const HSTrajectory t = integrate(norm.params, norm.state, 0.0, cfg.s_end, io);
    spdlog::info("termination {}, energy drift {:.3e}", to_string(t.termination()), t.max_energy_drift());
    std::ostringstream os;
    write_trajectory_csv(t, 4, os);
    emit(cfg, os.str());
    return 0;
}

int run_phase(const RunConfig& cfg) {
    const HSParams p = flux_params(cfg);
    std::vector<PhaseRow> rows;
    if (!cfg.table.empty()) {
        double lo = 0, hi = 0;
        int steps = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(cfg.table);
        if (!(is >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':')
            throw ValidationError("table: expected Emin:Emax:steps");
        if (cfg.C < 0) {
            const double t = lo;
            lo = -hi;
            hi = -t;
        }
        rows = phase_table(p, lo, hi, steps, cfg.bounded, cfg.crossings);
    }
    for (double E : flux_levels(cfg, cfg.energies)) {
        auto r = phase_table(p, E, E, 1, cfg.bounded, cfg.crossings);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (rows.empty()) throw ValidationError("E: give --E or --table");
    std::ostringstream os;
    write_phase_csv(rows, os);
    emit(cfg, os.str());
    return 0;
}

int run_mesh(const RunConfig& cfg) {
    const FoliatedSpec spec = spec_from(cfg);
    const Mesh m = cfg.points ? sample_points(spec, cfg.s_steps, cfg.sphere_steps)
                              : sample_mesh(spec, cfg.s_steps, cfg.sphere_steps, cfg.slice);
    const MeshFormat fmt = cfg.points ? MeshFormat::Csv : parse_mesh_format(cfg.format);
    write_mesh(m, cfg.out, fmt);
    spdlog::info("wrote {} vertices, {} faces to {}", m.vertices.size(), m.faces.size(), cfg.out);
    return 0;
}

int run_catalog(const RunConfig& cfg) {
    const HSParams p = flux_params(cfg);
    CatalogOptions opt;
    opt.phase.tol = std::max(cfg.tol, 1e-14);
    std::ostringstream os;
    write_catalog_csv(catalog_rows(p, opt), os);
    emit(cfg, os.str());
    return 0;
}

int run_portrait(const RunConfig& cfg) {
    const HSParams p = flux_params(cfg);
    std::ostringstream os;
    write_portrait_csv(phase_portrait_data(p, flux_levels(cfg, cfg.energies)), os);
    emit(cfg, os.str());
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    setup_logging();
    RunConfig cfg;
    std::vector<std::string> params;
    std::string x_list;

    CLI::App app{"Lagrangian submanifolds foliated by round spheres: evaluation, verification, orbits and phase"};
    app.set_config("--config", "", "file of key=value lines mirroring the flags");
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", cfg.seed, "seed for sample plans");
    app.add_option("--tol", cfg.tol, "integrator / quadrature tolerance");
    app.add_option("--out", cfg.out, "output file (stdout when omitted)");

    auto spec_opts = [&](CLI::App* sc) {
        sc->add_option("--preset", cfg.preset, "standard_circle | centered_circle | line | epicycloid | catenoid3");
        sc->add_option("--n", cfg.n, "dimension (>= 3)");
        sc->add_option("--param", params, "preset parameter key=value (repeatable)");
    };

    auto* eval = app.add_subcommand("eval", "closed forms at one point: l, beta, a, a_j, f");
    spec_opts(eval);
    eval->add_option("--s", cfg.s, "profile parameter");
    eval->add_option("--x", x_list, "sphere direction, comma separated");
    eval->add_option("--variant", cfg.variant, "geometric | alternate");

    auto* verify = app.add_subcommand("verify", "closed forms against finite-difference oracles (JSON report)");
    spec_opts(verify);
    verify->add_option("--samples", cfg.samples, "sample points");

    auto* hs = app.add_subcommand("hs", "equivariant Hamiltonian-stationary orbits");
    auto* solve = hs->add_subcommand("solve", "integrate one orbit and write s,alpha,r,E,k");
    hs->require_subcommand(1);
    solve->add_option("--n", cfg.n);
    solve->add_option("--C", cfg.C);
    solve->add_option("--alpha", cfg.alpha0);
    solve->add_option("--r", cfg.r0);
    solve->add_option("--s-end", cfg.s_end);

    auto* phase = app.add_subcommand("phase", "total variation of phase per energy level");
    phase->add_option("--n", cfg.n);
    phase->add_option("--C", cfg.C);
    phase->add_option("--E", cfg.energies, "energy level (repeatable)");
    phase->add_option("--table", cfg.table, "Emin:Emax:steps");
    phase->add_flag("--bounded", cfg.bounded, "use the bounded component for E0 < E < 0");
    phase->add_flag("--crossings", cfg.crossings, "also trace each orbit and count self-intersections");

    auto* mesh = app.add_subcommand("mesh", "sample the immersion into a mesh or point table");
    spec_opts(mesh);
    mesh->add_option("--s-steps", cfg.s_steps);
    mesh->add_option("--sphere-steps", cfg.sphere_steps);
    mesh->add_option("--format", cfg.format, "ply | csv");
    mesh->add_flag("--points", cfg.points, "point table over the whole sphere (any n)");
    mesh->add_flag("--slice", cfg.slice, "2-sphere slice mesh for n > 3");

    auto* catalog = app.add_subcommand("catalog", "one representative orbit per family");
    catalog->add_option("--n", cfg.n);
    catalog->add_option("--C", cfg.C);

    auto* portrait = app.add_subcommand("portrait", "level-set polylines of the first integral");
    portrait->add_option("--n", cfg.n);
    portrait->add_option("--C", cfg.C);
    portrait->add_option("--E", cfg.energies, "extra level (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        cfg.params = parse_params(params);
        if (!x_list.empty()) {
            std::stringstream ss(x_list);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.x.push_back(std::stod(item));
        }
        for (auto* sc : app.get_subcommands()) cfg.command = sc->get_name();
        cfg.validate();
        spdlog::debug("command {} seed {}", cfg.command, cfg.seed);
        if (eval->parsed()) return run_eval(cfg);
        if (verify->parsed()) return run_verify(cfg);
        if (solve->parsed()) return run_hs_solve(cfg);
        if (phase->parsed()) return run_phase(cfg);
        if (mesh->parsed()) return run_mesh(cfg);
        if (catalog->parsed()) return run_catalog(cfg);
        if (portrait->parsed()) return run_portrait(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number in --x\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace sigma
