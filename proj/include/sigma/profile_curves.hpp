#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sigma/hs_dynamics.hpp"
#include "sigma/linalg.hpp"
#include "sigma/quadrature.hpp"

namespace sigma {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double s) const { return s >= lo && s <= hi; }
    double length() const { return hi - lo; }
};

// Raw data of gamma(s) = r e^{i phi} up to second order; dk is the
// arclength derivative of the curvature when the curve knows it.
struct ProfileJet {
    double r = 0, phi = 0;
    double dr = 0, dphi = 0;
    double ddr = 0, ddphi = 0;
    std::optional<double> dk;
};

class ProfileCurve {
public:
    virtual ~ProfileCurve() = default;
    virtual Interval domain() const = 0;
    // No domain check; use eval_profile or FoliatedSpec for checked access.
    virtual ProfileJet jet(double s) const = 0;
    virtual std::string describe() const = 0;
};

struct ProfileState {
    double s = 0;
    double r = 0, phi = 0;
    double theta = 0, alpha = 0;
    double k = 0;
    double dr = 0, dphi = 0;
    double dalpha = 0;  // k - sin(alpha)/r
    std::optional<double> dk;
};

ProfileState eval_profile(const ProfileCurve& curve, double s);

struct ArclengthReport {
    double max_deviation = 0;
    double worst_s = 0;
    bool flagged = false;  // deviation above 1e-8
};
ArclengthReport check_arclength(const ProfileCurve& curve, int samples);

// Circle of radius rho centred at the origin traversed with phase rate
// omega, phi = phi0 + omega s. Unit speed iff rho * omega == 1.
class UniformCircleCurve final : public ProfileCurve {
public:
    UniformCircleCurve(double rho, double omega, double phi0, Interval dom);
    Interval domain() const override { return dom_; }
    ProfileJet jet(double s) const override;
    std::string describe() const override;

private:
    double rho_, omega_, phi0_;
    Interval dom_;
};

// gamma(s) = s e^{i phi0} on [0, L].
class RayCurve final : public ProfileCurve {
public:
    RayCurve(double phi0, double L);
    Interval domain() const override { return {0.0, L_}; }
    ProfileJet jet(double s) const override;
    std::string describe() const override;

private:
    double phi0_, L_;
};

// gamma(s) = c + i s written in polar form.
class CatenoidCurve final : public ProfileCurve {
public:
    CatenoidCurve(double c, double L);
    Interval domain() const override { return {-L_, L_}; }
    ProfileJet jet(double s) const override;
    std::string describe() const override;

private:
    double c_, L_;
};

// gamma(s) = gamma0 + int_0^s e^{i theta(t)} dt with theta a polynomial.
class TurningAngleCurve final : public ProfileCurve {
public:
    TurningAngleCurve(std::vector<double> theta_coeffs, std::complex<double> gamma0, Interval dom);
    Interval domain() const override { return dom_; }
    ProfileJet jet(double s) const override;
    std::string describe() const override;

private:
    double theta(double s, int derivative) const;
    std::vector<double> coeffs_;
    std::complex<double> gamma0_;
    Interval dom_;
    std::shared_ptr<const CumulativeQuadrature> chord_;
};

// Profile generated by an orbit of the equivariant system; derivatives come
// from the vector field at the interpolated state.
class TrajectoryCurve final : public ProfileCurve {
public:
    TrajectoryCurve(std::shared_ptr<const HSTrajectory> traj, double phi0);
    Interval domain() const override { return {traj_->s_lo(), traj_->s_hi()}; }
    ProfileJet jet(double s) const override;
    std::string describe() const override;
    const HSTrajectory& trajectory() const { return *traj_; }
    // s-integral of sin(alpha)/r from the trajectory start.
    double phase_advance(double s) const;

private:
    std::shared_ptr<const HSTrajectory> traj_;
    double phi0_;
    std::shared_ptr<const CumulativeQuadrature> phase_;
};

std::shared_ptr<const ProfileCurve> curve_from_hs_trajectory(std::shared_ptr<const HSTrajectory> traj,
                                                             double phi0);

struct CenterJet {
    Vec W, dW, ddW;
};

class CenterVelocity {
public:
    virtual ~CenterVelocity() = default;
    virtual int dim() const = 0;
    virtual CenterJet jet(double s) const = 0;
    virtual bool is_zero() const { return false; }
};

class ZeroCenter final : public CenterVelocity {
public:
    explicit ZeroCenter(int n) : n_(n) {}
    int dim() const override { return n_; }
    CenterJet jet(double s) const override;
    bool is_zero() const override { return true; }

private:
    int n_;
};

// W(s) = sum_k c_k s^k.
class PolynomialCenter final : public CenterVelocity {
public:
    explicit PolynomialCenter(std::vector<Vec> coeffs);
    int dim() const override { return static_cast<int>(coeffs_.front().size()); }
    CenterJet jet(double s) const override;
    bool is_zero() const override;

private:
    std::vector<Vec> coeffs_;
};

class FoliatedSpec {
public:
    FoliatedSpec(int n, std::shared_ptr<const ProfileCurve> curve, std::shared_ptr<const CenterVelocity> center,
                 double s0, std::string name = "custom");

    int n() const { return n_; }
    double s0() const { return s0_; }
    Interval domain() const { return curve_->domain(); }
    const ProfileCurve& curve() const { return *curve_; }
    const CenterVelocity& center() const { return *center_; }
    std::shared_ptr<const ProfileCurve> curve_ptr() const { return curve_; }
    std::shared_ptr<const CenterVelocity> center_ptr() const { return center_; }
    const std::string& name() const { return name_; }
    bool centered() const { return center_->is_zero(); }

    // V(s) = int_{s0}^{s} e^{i phi} W dt.
    ComplexPoint center_integral(double s) const;
    void require_in_domain(double s) const;

private:
    int n_;
    std::shared_ptr<const ProfileCurve> curve_;
    std::shared_ptr<const CenterVelocity> center_;
    double s0_;
    std::string name_;
    std::shared_ptr<const CumulativeQuadrature> V_;
};

FoliatedSpec standard_circle(int n);
FoliatedSpec centered_circle(int n, double rho);
FoliatedSpec line(int n, double phi0, double w, double L = 2.0);
FoliatedSpec epicycloid(int n, double rho, const Vec& b);
FoliatedSpec catenoid3(double C_geo, double L = 3.0);

// Named lookup used by the CLI. Recognised keys: n, rho, phi0, w, L, b, C_geo.
FoliatedSpec make_preset(const std::string& name, const std::map<std::string, double>& params);
std::vector<std::string> preset_names();

}  // namespace sigma
