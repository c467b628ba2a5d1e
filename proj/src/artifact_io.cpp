#include "sigma/artifact_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "sigma/errors.hpp"
#include "sigma/foliation_core.hpp"

namespace sigma {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> s_grid(const Interval& dom, int steps) {
    std::vector<double> out;
    if (steps == 1) return {0.5 * (dom.lo + dom.hi)};
    for (int i = 0; i < steps; ++i) out.push_back(i == steps - 1 ? dom.hi : dom.lo + dom.length() * i / (steps - 1));
    return out;
}

void push_vertex(Mesh& m, const FoliatedSpec& spec, double s, const Vec& x) {
    const auto flat = eval_immersion(spec, s, x).flat();
    std::vector<double> row(flat.data(), flat.data() + flat.size());
    m.vertices.push_back(std::move(row));
    m.s.push_back(s);
    double beta = std::numeric_limits<double>::quiet_NaN();
    try {
        beta = lagrangian_angle(spec, s, x);
    } catch (const UndefinedAngleError&) {
    }
    m.beta.push_back(beta);
}

double tri_area(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
    double uu = 0, vv = 0, uv = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double u = b[i] - a[i], v = c[i] - a[i];
        uu += u * u;
        vv += v * v;
        uv += u * v;
    }
    return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

}  // namespace

std::string fmt_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Mesh sample_mesh(const FoliatedSpec& spec, int s_steps, int sphere_steps, bool slice) {
    const int n = spec.n();
    if (n != 3 && !slice)
        throw ValidationError("mesh: triangulated output needs n = 3; for n > 3 export a point table or a 2-sphere slice");
    if (s_steps < 1) throw ValidationError("mesh: s_steps must be at least 1");
    if (sphere_steps < 3) throw ValidationError("mesh: sphere_steps must be at least 3");
    Mesh m;
    m.n = n;
    const int rings = sphere_steps - 1;
    const std::uint32_t per_leaf = static_cast<std::uint32_t>(sphere_steps * rings + 2);
    auto direction = [&](double th, double ps) {
        Vec x = Vec::Zero(n);
        x(0) = std::sin(th) * std::cos(ps);
        x(1) = std::sin(th) * std::sin(ps);
        x(2) = std::cos(th);
        return x;
    };
    for (double s : s_grid(spec.domain(), s_steps)) {
        const auto base = static_cast<std::uint32_t>(m.vertices.size());
        push_vertex(m, spec, s, direction(0.0, 0.0));
        for (int j = 1; j <= rings; ++j)
            for (int k = 0; k < sphere_steps; ++k)
                push_vertex(m, spec, s, direction(kPi * j / sphere_steps, 2 * kPi * k / sphere_steps));
        push_vertex(m, spec, s, direction(kPi, 0.0));

        auto ring = [&](int j, int k) { return base + 1 + static_cast<std::uint32_t>((j - 1) * sphere_steps + (k % sphere_steps)); };
        std::vector<std::array<std::uint32_t, 3>> leaf;
        for (int k = 0; k < sphere_steps; ++k) leaf.push_back({base, ring(1, k), ring(1, k + 1)});
        for (int j = 1; j < rings; ++j)
            for (int k = 0; k < sphere_steps; ++k) {
                leaf.push_back({ring(j, k), ring(j + 1, k), ring(j + 1, k + 1)});
                leaf.push_back({ring(j, k), ring(j + 1, k + 1), ring(j, k + 1)});
            }
        for (int k = 0; k < sphere_steps; ++k) leaf.push_back({ring(rings, k), base + per_leaf - 1, ring(rings, k + 1)});
        for (const auto& f : leaf)
            if (tri_area(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]) > 1e-14) m.faces.push_back(f);
    }
    return m;
}

Mesh sample_points(const FoliatedSpec& spec, int s_steps, int sphere_steps) {
    const int n = spec.n();
    if (s_steps < 1 || sphere_steps < 2) throw ValidationError("points: s_steps >= 1 and sphere_steps >= 2 required");
    Mesh m;
    m.n = n;
    // Angles theta_1..theta_{n-2} in (0, pi) at cell midpoints, psi in [0, 2 pi).
    std::vector<int> idx(n - 1, 0);
    std::vector<Vec> dirs;
    while (true) {
        Vec x(n);
        double sprod = 1;
        for (int a = 0; a < n - 2; ++a) {
            const double th = kPi * (idx[a] + 0.5) / sphere_steps;
            x(a) = sprod * std::cos(th);
            sprod *= std::sin(th);
        }
        const double ps = 2 * kPi * idx[n - 2] / sphere_steps;
        x(n - 2) = sprod * std::cos(ps);
        x(n - 1) = sprod * std::sin(ps);
        dirs.push_back(x);
        int a = n - 2;
        while (a >= 0 && ++idx[a] == sphere_steps) idx[a--] = 0;
        if (a < 0) break;
    }
    for (double s : s_grid(spec.domain(), s_steps))
        for (const auto& x : dirs) push_vertex(m, spec, s, x);
    return m;
}

MeshFormat parse_mesh_format(const std::string& s) {
    if (s == "ply" || s == "ply_ascii") return MeshFormat::PlyAscii;
    if (s == "csv") return MeshFormat::Csv;
    throw ValidationError("format: expected ply or csv, got '" + s + "'");
}

void write_mesh(const Mesh& mesh, std::ostream& os, MeshFormat fmt) {
    const int cols = 2 * mesh.n;
    if (fmt == MeshFormat::PlyAscii) {
        os << "ply\nformat ascii 1.0\n";
        os << "element vertex " << mesh.vertices.size() << "\n";
        for (int i = 1; i <= cols; ++i) os << "property float64 x" << i << "\n";
        os << "property float64 s\nproperty float64 beta\n";
        os << "element face " << mesh.faces.size() << "\n";
        os << "property list uchar uint vertex_indices\nend_header\n";
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            for (double c : mesh.vertices[v]) os << fmt_real(c) << ' ';
            os << fmt_real(mesh.s[v]) << ' ' << fmt_real(mesh.beta[v]) << '\n';
        }
        for (const auto& f : mesh.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        for (int i = 1; i <= cols; ++i) os << 'x' << i << ',';
        os << "s,beta\n";
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            for (double c : mesh.vertices[v]) os << fmt_real(c) << ',';
            os << fmt_real(mesh.s[v]) << ',' << fmt_real(mesh.beta[v]) << '\n';
        }
    }
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat fmt) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open '" + path.string() + "' for writing");
    write_mesh(mesh, os, fmt);
    os.flush();
    if (!os) throw NumericError("write failed for '" + path.string() + "'");
}

Mesh read_mesh_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("'" + path.string() + "': missing header");
    const auto cols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
    if (cols < 4 || (cols - 2) % 2) throw ValidationError("'" + path.string() + "': unexpected header");
    Mesh m;
    m.n = (cols - 2) / 2;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (static_cast<int>(vals.size()) != cols) throw ValidationError("'" + path.string() + "': ragged row");
        m.beta.push_back(vals.back());
        m.s.push_back(vals[cols - 2]);
        vals.resize(cols - 2);
        m.vertices.push_back(std::move(vals));
    }
    return m;
}

// ---------------------------------------------------------------------------

PortraitData phase_portrait_data(const HSParams& p, std::vector<double> E_levels, PortraitGrid grid) {
    if (!(p.C > 0)) throw ValidationError("phase portrait: C must be positive");
    const auto fp = fixed_points(p);
    if (grid.r_hi == 0) grid.r_hi = 2.5 * fp.state.r;
    if (!(grid.r_lo > 0 && grid.r_hi > grid.r_lo)) throw ValidationError("phase portrait: bad radius range");
    if (!(grid.alpha_hi > grid.alpha_lo)) throw ValidationError("phase portrait: bad alpha range");
    if (grid.alpha_steps < 3 || grid.r_steps < 3) throw ValidationError("phase portrait: grid too small");
    E_levels.push_back(fp.E0);
    E_levels.push_back(0.0);
    std::sort(E_levels.begin(), E_levels.end());
    E_levels.erase(std::unique(E_levels.begin(), E_levels.end()), E_levels.end());

    const int NA = grid.alpha_steps, NR = grid.r_steps;
    std::vector<double> al(NA), rr(NR);
    for (int i = 0; i < NA; ++i) al[i] = grid.alpha_lo + (grid.alpha_hi - grid.alpha_lo) * i / (NA - 1);
    for (int j = 0; j < NR; ++j) rr[j] = grid.r_lo + (grid.r_hi - grid.r_lo) * j / (NR - 1);
    // With a grid symmetric about pi/2 the sampled values are mirrored exactly.
    const bool mirror = std::abs(grid.alpha_lo + grid.alpha_hi - kPi) < 1e-12;
    std::vector<double> sn(NA);
    for (int i = 0; i < NA; ++i) sn[i] = (mirror && i > (NA - 1) / 2) ? sn[NA - 1 - i] : std::sin(al[i]);

    PortraitData out;
    out.grid = grid;
    for (int k = -4; k <= 4; ++k) {
        const double a = kPi / 2 + 2 * kPi * k;
        if (a >= grid.alpha_lo && a <= grid.alpha_hi && fp.state.r >= grid.r_lo && fp.state.r <= grid.r_hi)
            out.fixed_points.push_back({a, fp.state.r});
    }

    for (double E : E_levels) {
        std::vector<double> F(static_cast<std::size_t>(NA) * NR);
        auto at = [&](int i, int j) -> double& { return F[static_cast<std::size_t>(j) * NA + i]; };
        for (int j = 0; j < NR; ++j)
            for (int i = 0; i < NA; ++i) at(i, j) = 2 * std::pow(rr[j], p.n) * sn[i] - p.C * rr[j] * rr[j] - E;

        // Edge ids: horizontal (i,j)-(i+1,j) -> 2 (j NA + i), vertical (i,j)-(i,j+1) -> +1.
        auto hid = [&](int i, int j) { return 2L * (static_cast<long>(j) * NA + i); };
        auto vid = [&](int i, int j) { return 2L * (static_cast<long>(j) * NA + i) + 1; };
        std::unordered_map<long, std::array<double, 2>> point;
        auto edge_point = [&](long id) {
            auto it = point.find(id);
            if (it != point.end()) return id;
            const long base = id / 2;
            const int i = static_cast<int>(base % NA), j = static_cast<int>(base / NA);
            const bool vert = id % 2;
            const double f0 = at(i, j), f1 = vert ? at(i, j + 1) : at(i + 1, j);
            const double t = f0 / (f0 - f1);
            point[id] = vert ? std::array<double, 2>{al[i], rr[j] + t * (rr[j + 1] - rr[j])}
                             : std::array<double, 2>{al[i] + t * (al[i + 1] - al[i]), rr[j]};
            return id;
        };
        std::unordered_map<long, std::vector<long>> adj;
        auto seg = [&](long a, long b) {
            edge_point(a);
            edge_point(b);
            adj[a].push_back(b);
            adj[b].push_back(a);
        };
        for (int j = 0; j + 1 < NR; ++j)
            for (int i = 0; i + 1 < NA; ++i) {
                const double f00 = at(i, j), f10 = at(i + 1, j), f11 = at(i + 1, j + 1), f01 = at(i, j + 1);
                const int c = (f00 > 0) | ((f10 > 0) << 1) | ((f11 > 0) << 2) | ((f01 > 0) << 3);
                const long b = hid(i, j), r = vid(i + 1, j), t = hid(i, j + 1), l = vid(i, j);
                switch (c) {
                    case 0: case 15: break;
                    case 1: case 14: seg(l, b); break;
                    case 2: case 13: seg(b, r); break;
                    case 3: case 12: seg(l, r); break;
                    case 4: case 11: seg(r, t); break;
                    case 6: case 9: seg(b, t); break;
                    case 7: case 8: seg(l, t); break;
                    case 5: case 10: {
                        const bool centre = 0.25 * (f00 + f10 + f11 + f01) > 0;
                        if ((c == 5) == centre) {
                            seg(l, t);
                            seg(b, r);
                        } else {
                            seg(l, b);
                            seg(r, t);
                        }
                        break;
                    }
                }
            }
        // Walk chains, open ones from their endpoints first.
        ContourLevel lvl;
        lvl.E = E;
        std::unordered_map<long, bool> used;
        std::vector<long> keys;
        for (const auto& [k, v] : adj) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        auto walk = [&](long start) {
            std::vector<std::array<double, 2>> line;
            long prev = -1, cur = start;
            while (true) {
                used[cur] = true;
                line.push_back(point[cur]);
                long next = -1;
                for (long nb : adj[cur])
                    if (nb != prev && !used[nb]) {
                        next = nb;
                        break;
                    }
                if (next < 0) {
                    // close loops
                    for (long nb : adj[cur])
                        if (nb == start && nb != prev && line.size() > 2) line.push_back(point[start]);
                    break;
                }
                prev = cur;
                cur = next;
            }
            lvl.polylines.push_back(std::move(line));
        };
        for (long k : keys)
            if (adj[k].size() == 1 && !used[k]) walk(k);
        for (long k : keys)
            if (!used[k]) walk(k);
        out.levels.push_back(std::move(lvl));
    }
    return out;
}

void write_portrait_csv(const PortraitData& d, std::ostream& os) {
    os << "kind,E,polyline,alpha,r\n";
    for (const auto& fp : d.fixed_points) os << "fixed_point,,," << fmt_real(fp[0]) << ',' << fmt_real(fp[1]) << '\n';
    for (const auto& lvl : d.levels)
        for (std::size_t k = 0; k < lvl.polylines.size(); ++k)
            for (const auto& pt : lvl.polylines[k])
                os << "contour," << fmt_real(lvl.E) << ',' << k << ',' << fmt_real(pt[0]) << ',' << fmt_real(pt[1])
                   << '\n';
}

void write_trajectory_csv(const HSTrajectory& traj, int samples_per_step, std::ostream& os) {
    if (samples_per_step < 1) throw ValidationError("samples_per_step must be positive");
    const auto& p = traj.params();
    os << "s,alpha,r,E,k\n";
    auto row = [&](double s) {
        const HSState y = traj.state_at(s);
        os << fmt_real(s) << ',' << fmt_real(y.alpha) << ',' << fmt_real(y.r) << ',' << fmt_real(energy(y, p)) << ','
           << fmt_real(hs_curvature(y, p)) << '\n';
    };
    const auto& g = traj.grid();
    if (traj.single_point()) {
        row(g.front());
        return;
    }
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        for (int k = 0; k < samples_per_step; ++k) row(g[i] + (g[i + 1] - g[i]) * k / samples_per_step);
    row(g.back());
}

void write_curve_csv(const ProfileCurve& curve, int samples, std::ostream& os) {
    if (samples < 1) throw ValidationError("samples must be positive");
    const Interval d = curve.domain();
    os << "s,r,phi,alpha,k\n";
    for (double s : s_grid(d, samples)) {
        const ProfileState st = eval_profile(curve, s);
        os << fmt_real(s) << ',' << fmt_real(st.r) << ',' << fmt_real(st.phi) << ',' << fmt_real(st.alpha) << ','
           << fmt_real(st.k) << '\n';
    }
}

void write_phase_csv(const std::vector<PhaseRow>& rows, std::ostream& os) {
    os << "E,class,phi_total,phi_plus,phi_minus,divergent_flag,self_intersections\n";
    for (const auto& r : rows) {
        os << fmt_real(r.E) << ',' << r.klass << ',' << fmt_real(r.phi.value) << ','
           << (r.phi.plus ? fmt_real(*r.phi.plus) : "") << ',' << (r.phi.minus ? fmt_real(*r.phi.minus) : "") << ','
           << (r.phi.divergent ? 1 : 0) << ',';
        if (r.self_intersections >= 0) os << r.self_intersections;
        os << '\n';
    }
}

void write_catalog_csv(const std::vector<CatalogEntry>& rows, std::ostream& os) {
    os << "family,orbit,E,alpha0,r0,phi,divergent,embedded,self_intersections,closure\n";
    for (const auto& e : rows) {
        os << to_string(e.family) << ',' << to_string(e.tag) << (e.tag == EnergyTag::Critical ? (e.bounded ? "/bounded" : "/unbounded") : "")
           << ',' << fmt_real(e.E) << ',' << fmt_real(e.initial.alpha) << ',' << fmt_real(e.initial.r) << ','
           << fmt_real(e.phi.value) << ',' << (e.phi.divergent ? 1 : 0) << ','
           << (e.embedded ? (*e.embedded ? "true" : "false") : "unknown") << ',' << e.crossings.size() << ','
           << e.closure.describe() << '\n';
    }
}

std::string verification_json(const std::string& spec_name, const std::vector<CheckResult>& checks) {
    nlohmann::ordered_json j;
    j["spec"] = spec_name;
    bool all = true;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json w;
        w["s"] = c.witness.s;
        std::vector<double> x(c.witness.x.data(), c.witness.x.data() + c.witness.x.size());
        w["x"] = x;
        arr.push_back({{"check", c.check},
                       {"pass", c.pass},
                       {"sup", c.sup},
                       {"rms", c.rms},
                       {"tol", c.tol},
                       {"witness", w},
                       {"samples", c.samples},
                       {"skipped", c.skipped}});
        all = all && c.pass;
    }
    j["checks"] = arr;
    j["pass"] = all;
    return j.dump(2) + "\n";
}

void RunConfig::validate() const {
    if (n < 3) throw ValidationError("n: must be at least 3 (the sphere foliation needs n >= 3), got " + std::to_string(n));
    if (n > 9) throw ValidationError("n: at most 9 is supported");
    if (!std::isfinite(C)) throw ValidationError("C: must be finite");
    if (!(tol > 0 && tol < 1e-2)) throw ValidationError("tol: must lie in (0, 1e-2)");
    if (samples < 1) throw ValidationError("samples: must be positive");
    if (s_steps < 1) throw ValidationError("s_steps: must be positive");
    if (sphere_steps < 3) throw ValidationError("sphere_steps: must be at least 3");
    if (!(r0 > 0)) throw ValidationError("r0: must be positive");
    if (!x.empty() && static_cast<int>(x.size()) != n)
        throw ValidationError("x: expected " + std::to_string(n) + " components, got " + std::to_string(x.size()));
    if (variant != "geometric" && variant != "alternate") throw ValidationError("variant: expected geometric or alternate");
    if (format != "ply" && format != "csv") throw ValidationError("format: expected ply or csv");
    if (points && slice) throw ValidationError("points/slice: choose one");
    if (command == "mesh" && out.empty()) throw ValidationError("out: mesh output needs a path");
}

}  // namespace sigma
