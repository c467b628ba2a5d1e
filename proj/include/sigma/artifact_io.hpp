#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sigma/hs_dynamics.hpp"
#include "sigma/oracle_verify.hpp"
#include "sigma/phase_analysis.hpp"
#include "sigma/profile_curves.hpp"

namespace sigma {

struct Mesh {
    int n = 3;
    std::vector<std::vector<double>> vertices;  // 2n reals each: re then im
    std::vector<std::array<std::uint32_t, 3>> faces;
    std::vector<double> s, beta;
};

// n = 3: one UV sphere (sphere_steps longitudes, sphere_steps - 1 latitude
// rings plus two poles) per s value. With slice = true, n > 3 uses the same
// sphere inside span(e1, e2, e3).
Mesh sample_mesh(const FoliatedSpec& spec, int s_steps, int sphere_steps, bool slice = false);
// Faceless point table over a hyperspherical angle grid; any n.
Mesh sample_points(const FoliatedSpec& spec, int s_steps, int sphere_steps);

enum class MeshFormat { PlyAscii, Csv };
MeshFormat parse_mesh_format(const std::string& s);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat fmt);
void write_mesh(const Mesh& mesh, std::ostream& os, MeshFormat fmt);
// Vertices of a CSV written by write_mesh (faces are not stored in CSV).
Mesh read_mesh_csv(const std::filesystem::path& path);

// 17 significant digits.
std::string fmt_real(double v);

struct ContourLevel {
    double E = 0;
    std::vector<std::vector<std::array<double, 2>>> polylines;  // (alpha, r)
};
struct PortraitGrid {
    double alpha_lo = -1.5707963267948966, alpha_hi = 4.71238898038469;
    double r_lo = 0.02, r_hi = 0;  // r_hi = 0: 2.5 * rbar
    int alpha_steps = 401, r_steps = 300;
};
struct PortraitData {
    std::vector<ContourLevel> levels;
    std::vector<std::array<double, 2>> fixed_points;
    PortraitGrid grid;
};
// Marching squares on E(alpha, r) - level; E0 and 0 are always added.
PortraitData phase_portrait_data(const HSParams& p, std::vector<double> E_levels, PortraitGrid grid = {});

void write_portrait_csv(const PortraitData& d, std::ostream& os);
void write_trajectory_csv(const HSTrajectory& traj, int samples_per_step, std::ostream& os);
// Columns s,r,phi,alpha,k on a uniform grid including both ends.
void write_curve_csv(const ProfileCurve& curve, int samples, std::ostream& os);
void write_phase_csv(const std::vector<PhaseRow>& rows, std::ostream& os);
void write_catalog_csv(const std::vector<CatalogEntry>& rows, std::ostream& os);
std::string verification_json(const std::string& spec_name, const std::vector<CheckResult>& checks);

struct RunConfig {
    std::string command;
    std::string preset = "standard_circle";
    std::map<std::string, double> params;
    int n = 3;
    double C = 3.0;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    std::string out;
    // eval
    double s = 0.0;
    std::vector<double> x;
    std::string variant = "geometric";
    // verify
    int samples = 20;
    // hs solve
    double alpha0 = 1.5707963267948966, r0 = 1.0, s_end = 10.0;
    // phase
    std::vector<double> energies;
    std::string table;
    bool bounded = false;
    bool crossings = false;
    // mesh
    int s_steps = 16, sphere_steps = 16;
    std::string format = "ply";
    bool points = false, slice = false;

    // Throws ValidationError naming the offending field.
    void validate() const;
};

// Entry point of the command line tool; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace sigma
