#include "sigma/profile_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sigma/errors.hpp"

namespace sigma {

namespace {

constexpr double kPi = std::numbers::pi;

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

int dim_param(const std::map<std::string, double>& p, int fallback) {
    const double v = param(p, "n", fallback);
    if (v != std::floor(v)) throw ValidationError("preset parameter n must be an integer");
    return static_cast<int>(v);
}

}  // namespace

ProfileState eval_profile(const ProfileCurve& curve, double s) {
    const Interval d = curve.domain();
    if (!d.contains(s)) throw DomainError("eval_profile: s outside the curve domain");
    const ProfileJet j = curve.jet(s);
    if (!(j.r > 0)) throw SingularityError("eval_profile: curvature requested where r = 0");
    ProfileState st;
    st.s = s;
    st.r = j.r;
    st.phi = j.phi;
    st.dr = j.dr;
    st.dphi = j.dphi;
    // alpha = arg(dr + i r dphi); its derivative from the second-order data.
    const double x = j.dr, y = j.r * j.dphi;
    const double dx = j.ddr, dy = j.dr * j.dphi + j.r * j.ddphi;
    st.alpha = std::atan2(y, x);
    st.dalpha = (x * dy - y * dx) / (x * x + y * y);
    st.theta = st.phi + st.alpha;
    st.k = st.dalpha + j.dphi;
    st.dk = j.dk;
    return st;
}

ArclengthReport check_arclength(const ProfileCurve& curve, int samples) {
    if (samples < 2) throw ValidationError("check_arclength: need at least 2 samples");
    const Interval d = curve.domain();
    ArclengthReport rep;
    for (int i = 0; i < samples; ++i) {
        const double s = d.lo + d.length() * i / (samples - 1);
        const ProfileJet j = curve.jet(s);
        const double dev = std::abs(j.dr * j.dr + j.r * j.r * j.dphi * j.dphi - 1.0);
        if (i == 0 || dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst_s = s;
        }
    }
    rep.flagged = rep.max_deviation > 1e-8;
    return rep;
}

UniformCircleCurve::UniformCircleCurve(double rho, double omega, double phi0, Interval dom)
    : rho_(rho), omega_(omega), phi0_(phi0), dom_(dom) {
    if (!(rho > 0)) throw ValidationError("circle radius must be positive");
    if (!(dom.hi >= dom.lo)) throw ValidationError("empty domain");
}

ProfileJet UniformCircleCurve::jet(double s) const {
    ProfileJet j;
    j.r = rho_;
    j.phi = phi0_ + omega_ * s;
    j.dphi = omega_;
    j.dk = 0.0;
    return j;
}

std::string UniformCircleCurve::describe() const {
    std::ostringstream os;
    os << "circle(rho=" << rho_ << ", omega=" << omega_ << ")";
    return os.str();
}

RayCurve::RayCurve(double phi0, double L) : phi0_(phi0), L_(L) {
    if (!(L > 0)) throw ValidationError("line length must be positive");
}

ProfileJet RayCurve::jet(double s) const {
    ProfileJet j;
    j.r = s;
    j.phi = phi0_;
    j.dr = 1.0;
    j.dk = 0.0;
    return j;
}

std::string RayCurve::describe() const {
    std::ostringstream os;
    os << "ray(phi0=" << phi0_ << ")";
    return os.str();
}

CatenoidCurve::CatenoidCurve(double c, double L) : c_(c), L_(L) {
    if (!(c > 0)) throw ValidationError("catenoid3: C_geo must be positive");
    if (!(L > 0)) throw ValidationError("catenoid3: L must be positive");
}

ProfileJet CatenoidCurve::jet(double s) const {
    const double r2 = c_ * c_ + s * s;
    const double r = std::sqrt(r2);
    ProfileJet j;
    j.r = r;
    j.phi = std::atan2(s, c_);
    j.dr = s / r;
    j.dphi = c_ / r2;
    j.ddr = c_ * c_ / (r2 * r);
    j.ddphi = -2 * c_ * s / (r2 * r2);
    j.dk = 0.0;
    return j;
}

std::string CatenoidCurve::describe() const {
    std::ostringstream os;
    os << "catenoid(C_geo=" << c_ << ")";
    return os.str();
}

TurningAngleCurve::TurningAngleCurve(std::vector<double> theta_coeffs, std::complex<double> gamma0, Interval dom)
    : coeffs_(std::move(theta_coeffs)), gamma0_(gamma0), dom_(dom) {
    if (coeffs_.empty()) throw ValidationError("turning-angle curve needs at least one coefficient");
    if (!(dom.hi > dom.lo) || !dom.contains(0.0)) throw ValidationError("turning-angle curve domain must contain 0");
    auto f = [this](double t) {
        Vec v(2);
        const double th = theta(t, 0);
        v << std::cos(th), std::sin(th);
        return v;
    };
    std::vector<double> bp;
    const int cells = std::max(1, static_cast<int>(std::ceil(dom.length() / 0.25)));
    for (int i = 0; i <= cells; ++i) bp.push_back(dom.lo + dom.length() * i / cells);
    chord_ = std::make_shared<CumulativeQuadrature>(f, 2, bp, 0.0, 1e-14);
}

double TurningAngleCurve::theta(double s, int derivative) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > static_cast<std::size_t>(derivative);) {
        double c = coeffs_[i];
        for (int d = 0; d < derivative; ++d) c *= static_cast<double>(i - d);
        acc = acc * s + c;
    }
    return acc;
}

ProfileJet TurningAngleCurve::jet(double s) const {
    const Vec c = (*chord_)(s);
    const std::complex<double> g = gamma0_ + std::complex<double>(c(0), c(1));
    const double r = std::abs(g);
    if (!(r > 0)) throw SingularityError("turning-angle curve passes through the origin");
    // Continuous phase: the curve never winds by pi around 0 relative to gamma0 on its domain.
    const double phi = std::arg(gamma0_) + std::arg(g / gamma0_);
    const double th = theta(s, 0), k = theta(s, 1);
    const double alpha = th - phi;
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double dalpha = k - sa / r;
    ProfileJet j;
    j.r = r;
    j.phi = phi;
    j.dr = ca;
    j.dphi = sa / r;
    j.ddr = -sa * dalpha;
    j.ddphi = (ca * dalpha * r - sa * ca) / (r * r);
    j.dk = theta(s, 2);
    return j;
}

std::string TurningAngleCurve::describe() const { return "turning-angle polynomial curve"; }

TrajectoryCurve::TrajectoryCurve(std::shared_ptr<const HSTrajectory> traj, double phi0)
    : traj_(std::move(traj)), phi0_(phi0) {
    if (!traj_) throw ValidationError("curve_from_hs_trajectory: null trajectory");
    if (traj_->termination() == Termination::RadiusCollapse)
        throw SingularityError("curve_from_hs_trajectory: trajectory reaches r = 0");
    for (const auto& st : traj_->states())
        if (!(st.r > 0)) throw SingularityError("curve_from_hs_trajectory: non-positive radius");
    const HSTrajectory* t = traj_.get();
    auto f = [t](double s) {
        const HSState y = t->state_at(s);
        Vec v(1);
        v(0) = std::sin(y.alpha) / y.r;
        return v;
    };
    phase_ = std::make_shared<CumulativeQuadrature>(f, 1, traj_->grid(), traj_->s_start(), 1e-13);
}

double TrajectoryCurve::phase_advance(double s) const { return (*phase_)(s)(0); }

ProfileJet TrajectoryCurve::jet(double s) const {
    const HSState y = traj_->state_at(s);
    const HSParams& p = traj_->params();
    const double r = y.r, sa = std::sin(y.alpha), ca = std::cos(y.alpha);
    const double da = hs_rhs(y, p).dalpha;
    ProfileJet j;
    j.r = r;
    j.phi = phi0_ + phase_advance(s);
    j.dr = ca;
    j.dphi = sa / r;
    j.ddr = -sa * da;
    j.ddphi = (ca * da * r - sa * ca) / (r * r);
    j.dk = hs_curvature_rate(y, p);
    return j;
}

std::string TrajectoryCurve::describe() const {
    std::ostringstream os;
    os << "orbit(n=" << traj_->params().n << ", C=" << traj_->params().C << ")";
    return os.str();
}

std::shared_ptr<const ProfileCurve> curve_from_hs_trajectory(std::shared_ptr<const HSTrajectory> traj,
                                                             double phi0) {
    return std::make_shared<TrajectoryCurve>(std::move(traj), phi0);
}

CenterJet ZeroCenter::jet(double) const { return {Vec::Zero(n_), Vec::Zero(n_), Vec::Zero(n_)}; }

PolynomialCenter::PolynomialCenter(std::vector<Vec> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ValidationError("polynomial center needs coefficients");
    for (const auto& c : coeffs_)
        if (c.size() != coeffs_.front().size()) throw ValidationError("polynomial center: ragged coefficients");
}

CenterJet PolynomialCenter::jet(double s) const {
    const auto n = coeffs_.front().size();
    CenterJet j{Vec::Zero(n), Vec::Zero(n), Vec::Zero(n)};
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const double d = static_cast<double>(i);
        j.W = j.W * s + coeffs_[i];
        if (i >= 1) j.dW = j.dW * s + d * coeffs_[i];
        if (i >= 2) j.ddW = j.ddW * s + d * (d - 1) * coeffs_[i];
    }
    return j;
}

bool PolynomialCenter::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Vec& c) { return c.isZero(0.0); });
}

FoliatedSpec::FoliatedSpec(int n, std::shared_ptr<const ProfileCurve> curve,
                           std::shared_ptr<const CenterVelocity> center, double s0, std::string name)
    : n_(n), curve_(std::move(curve)), center_(std::move(center)), s0_(s0), name_(std::move(name)) {
    if (n_ <= 2) throw ValidationError("FoliatedSpec: n must be >= 3 (the construction needs n >= 3)");
    if (!curve_ || !center_) throw ValidationError("FoliatedSpec: missing curve or center");
    if (center_->dim() != n_) throw ValidationError("FoliatedSpec: center dimension differs from n");
    const Interval d = curve_->domain();
    if (!d.contains(s0_)) throw ValidationError("FoliatedSpec: s0 outside the domain");
    if (!center_->is_zero()) {
        const ProfileCurve* c = curve_.get();
        const CenterVelocity* w = center_.get();
        const int n2 = n_;
        auto f = [c, w, n2](double t) {
            const double phi = c->jet(t).phi;
            const Vec W = w->jet(t).W;
            Vec v(2 * n2);
            v << std::cos(phi) * W, std::sin(phi) * W;
            return v;
        };
        std::vector<double> bp;
        const int cells = std::max(1, static_cast<int>(std::ceil(d.length() / 0.5)));
        for (int i = 0; i <= cells; ++i) bp.push_back(d.lo + d.length() * i / cells);
        if (d.length() == 0) bp = {d.lo};
        V_ = std::make_shared<CumulativeQuadrature>(f, 2 * n_, bp, s0_, 1e-12);
    }
}

void FoliatedSpec::require_in_domain(double s) const {
    if (!domain().contains(s)) throw DomainError("s outside the spec domain");
}

ComplexPoint FoliatedSpec::center_integral(double s) const {
    require_in_domain(s);
    if (!V_) return ComplexPoint(n_);
    return ComplexPoint::from_flat((*V_)(s));
}

FoliatedSpec standard_circle(int n) {
    auto spec = centered_circle(n, 1.0);
    return FoliatedSpec(n, spec.curve_ptr(), spec.center_ptr(), 0.0, "standard_circle");
}

FoliatedSpec centered_circle(int n, double rho) {
    if (!(rho > 0)) throw ValidationError("centered_circle: rho must be positive");
    auto curve = std::make_shared<UniformCircleCurve>(rho, 1.0 / rho, 0.0, Interval{-2 * kPi * rho, 2 * kPi * rho});
    return FoliatedSpec(n, curve, std::make_shared<ZeroCenter>(n), 0.0, "centered_circle");
}

FoliatedSpec line(int n, double phi0, double w, double L) {
    auto curve = std::make_shared<RayCurve>(phi0, L);
    Vec W = Vec::Zero(n);
    W(0) = w;
    return FoliatedSpec(n, curve, std::make_shared<PolynomialCenter>(std::vector<Vec>{W}), 0.0, "line");
}

FoliatedSpec epicycloid(int n, double rho, const Vec& b) {
    if (!(rho > 0)) throw ValidationError("epicycloid: rho must be positive");
    if (b.size() != n) throw ValidationError("epicycloid: b must have n components");
    // Center moves with phase speed: W = phi' b, here phi' = 1/rho.
    auto curve = std::make_shared<UniformCircleCurve>(rho, 1.0 / rho, 0.0, Interval{-2 * kPi * rho, 2 * kPi * rho});
    return FoliatedSpec(n, curve, std::make_shared<PolynomialCenter>(std::vector<Vec>{b / rho}), 0.0, "epicycloid");
}

FoliatedSpec catenoid3(double C_geo, double L) {
    return FoliatedSpec(3, std::make_shared<CatenoidCurve>(C_geo, L), std::make_shared<ZeroCenter>(3), 0.0,
                        "catenoid3");
}

std::vector<std::string> preset_names() {
    return {"standard_circle", "centered_circle", "line", "epicycloid", "catenoid3"};
}

FoliatedSpec make_preset(const std::string& name, const std::map<std::string, double>& params) {
    static const std::map<std::string, std::vector<std::string>> allowed{
        {"standard_circle", {"n"}},
        {"centered_circle", {"n", "rho"}},
        {"line", {"n", "phi0", "w", "L"}},
        {"epicycloid", {"n", "rho", "b"}},
        {"catenoid3", {"C_geo", "L"}},
    };
    auto it = allowed.find(name);
    if (it == allowed.end()) throw ValidationError("unknown preset '" + name + "'");
    for (const auto& [k, v] : params)
        if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
            throw ValidationError("preset '" + name + "' does not take parameter '" + k + "'");
    if (name == "catenoid3") {
        if (params.count("n") && param(params, "n", 3) != 3) throw ValidationError("catenoid3 is fixed to n = 3");
        return catenoid3(param(params, "C_geo", 1.0), param(params, "L", 3.0));
    }
    const int n = dim_param(params, 3);
    if (n <= 2) throw ValidationError("n must be >= 3 (the construction needs n >= 3)");
    if (name == "standard_circle") return standard_circle(n);
    if (name == "centered_circle") return centered_circle(n, param(params, "rho", 1.0));
    if (name == "line") return line(n, param(params, "phi0", 0.0), param(params, "w", 0.0), param(params, "L", 2.0));
    Vec b = Vec::Zero(n);
    b(0) = param(params, "b", 0.5);
    return epicycloid(n, param(params, "rho", 1.0), b);
}

}  // namespace sigma
