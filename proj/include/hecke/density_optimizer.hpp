#pragma once

// Moment-method density bounds.
//
// Fix a direction phi and let x_v = Re(a_v e^{-i phi}).  With d the unknown
// limsup of the fourth moment over {x_v <= 0}, two candidate sets
//     S = {x^4 > (q4 - d) beta},   T = {x^3 >= alpha d^{5/4} (q8 - (q4-d)^2)^{-1/4}}
// must satisfy, whenever their upper densities are at most `cap`,
//     E1  (q4 - d)^2 (1 - beta (1 - cap))^2            <= q8 cap
//     E2  d^{5/2} (q8 - (q4-d)^2)^{-1/2} (1 - alpha)^2 <= q6 cap
// Choosing alpha so that S and T share one threshold (E3) and taking the
// worst d gives the boundary case where E1 and E2 both hold with equality.
// The lower bound on the third moment of T used here is imported, not
// derived, from an earlier moment-method argument.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moment_constants.hpp"

namespace hecke {

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Bound on the density of large |a_v|

/// 1 / (1 + (Q^2-1)^2 + (Q^4-3Q^2+1)^2), valid for Q >= 2.  Works for double
/// and for exact rationals.
template <class T>
T ks_bound(const T& Q) {
    if (Q < 2) throw std::domain_error("ks_bound: requires Q >= 2");
    const T q2 = Q * Q;
    const T b = q2 - 1;
    const T c = q2 * q2 - 3 * q2 + 1;
    return T(1) / (T(1) + b * b + c * c);
}

/// Bound from the isobaric sum with weights (a, b, c) on the trivial,
/// adjoint and omega^{-2} Sym^4 pieces.  By Cauchy-Schwarz the weights
/// (1, Q^2-1, Q^4-3Q^2+1) minimise it.
template <class T>
T ks_bound_general(const T& Q, const T& a, const T& b, const T& c) {
    if (Q < 2) throw std::domain_error("ks_bound_general: requires Q >= 2");
    if (a < 0 || b < 0 || c < 0) throw std::domain_error("ks_bound_general: weights must be nonnegative");
    const T q2 = Q * Q;
    const T denom = a + b * (q2 - 1) + c * (q2 * q2 - 3 * q2 + 1);
    if (denom == 0) throw std::domain_error("ks_bound_general: zero denominator");
    return (a * a + b * b + c * c) / (denom * denom);
}

/// The Q >= 2 with ks_bound(Q) = cap.
inline double min_Q_for_cap(double cap, double tol = 1e-13) {
    if (!(cap > 0.0) || cap > ks_bound(2.0)) throw std::domain_error("min_Q_for_cap: cap must lie in (0, 1/35]");
    double lo = 2.0;
    double hi = 3.0;
    while (ks_bound(hi) > cap) hi *= 2.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (ks_bound(mid) > cap)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Boundary system

struct MomentInputs {
    double q4 = 0.75;
    double q6 = 25.0 / 16.0;
    double q8 = 519.0 / 128.0;
};

struct BoundarySolution {
    double d = 0;
    double alpha = 0;
    double beta = 0;
    /// ((q4 - d) beta)^{1/4}
    double threshold = 0;
    /// (alpha d^{5/4} (q8 - (q4-d)^2)^{-1/4})^{1/3}; equals threshold by E3
    double threshold_t_form = 0;
    double cap = 0;
    /// E1 and E2 residuals (left minus right)
    std::array<double, 2> residuals{};
};

namespace detail {

struct BoundaryModel {
    MomentInputs q;
    double cap;

    double g(double d) const { return q.q8 - (q.q4 - d) * (q.q4 - d); }

    /// E1 with equality
    double beta(double d) const { return (1.0 - std::sqrt(q.q8 * cap) / (q.q4 - d)) / (1.0 - cap); }

    /// ((q4-d) beta)^{3/4} = alpha d^{5/4} g^{-1/4}
    double alpha(double d) const {
        const double t4 = (q.q4 - d) * beta(d);
        return std::pow(t4, 0.75) * std::pow(g(d), 0.25) / std::pow(d, 1.25);
    }

    double e1(double d, double b) const {
        const double x = (q.q4 - d) * (1.0 - b * (1.0 - cap));
        return x * x - q.q8 * cap;
    }

    double e2(double d, double a) const {
        return std::pow(d, 2.5) / std::sqrt(g(d)) * (1.0 - a) * (1.0 - a) - q.q6 * cap;
    }

    double residual(double d) const { return e2(d, alpha(d)); }

    /// Largest alpha for which E2 fails (so T must be dense); may be <= 0.
    double alpha_max(double d) const {
        return 1.0 - std::sqrt(q.q6 * cap * std::sqrt(g(d)) / std::pow(d, 2.5));
    }

    /// Open interval of d on which beta > 0 and g > 0.
    std::pair<double, double> domain() const {
        const double hi = q.q4 - std::sqrt(q.q8 * cap);
        const double lo = std::max(0.0, q.q4 - std::sqrt(q.q8));
        return {lo, hi};
    }
};

inline void validate_inputs(const MomentInputs& q, double cap) {
    if (!(cap > 0.0 && cap < 1.0)) throw std::domain_error("boundary system: cap must lie in (0, 1)");
    if (!(q.q4 > 0.0) || !(q.q8 > 0.0) || !(q.q6 > 0.0))
        throw std::domain_error("boundary system: q4, q6, q8 must be positive");
}

}  // namespace detail

/// Solve E1-E3 for the worst-case d.  The root is bracketed by scanning d
/// downward from the top of its admissible range (alpha runs from 0 up to 1
/// there), refined by bisection and polished with Newton steps.
inline BoundarySolution solve_boundary(const MomentInputs& q, double cap, double tol = 1e-9) {
    detail::validate_inputs(q, cap);
    const detail::BoundaryModel model{q, cap};
    const auto [lo, hi] = model.domain();
    if (!(hi > lo)) throw InfeasibleError("solve_boundary: no admissible d (q8 * cap too large for q4)");

    constexpr int scan_points = 4096;
    const double width = hi - lo;
    auto at = [&](int i) { return lo + width * static_cast<double>(i) / scan_points; };

    std::optional<std::pair<double, double>> bracket;
    double upper = at(scan_points) - width * 1e-12;
    double f_upper = model.residual(upper);
    for (int i = scan_points - 1; i >= 1; --i) {
        const double d = at(i);
        const double f = model.residual(d);
        if (!std::isfinite(f)) break;
        if ((f > 0) != (f_upper > 0)) {
            bracket = {d, upper};
            break;
        }
        upper = d;
        f_upper = f;
    }
    if (!bracket) throw InfeasibleError("solve_boundary: E2 never balances; no boundary case in (0, q4)");

    auto [a, b] = *bracket;
    double fa = model.residual(a);
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = model.residual(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    double d = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        const double h = 1e-7 * std::max(1.0, d);
        const double slope = (model.residual(d + h) - model.residual(d - h)) / (2 * h);
        if (slope == 0.0 || !std::isfinite(slope)) break;
        const double next = d - model.residual(d) / slope;
        if (!(next > lo && next < hi) || std::abs(model.residual(next)) >= std::abs(model.residual(d))) break;
        d = next;
    }

    BoundarySolution sol;
    sol.cap = cap;
    sol.d = d;
    sol.beta = model.beta(d);
    sol.alpha = model.alpha(d);
    sol.threshold = std::pow((q.q4 - d) * sol.beta, 0.25);
    sol.threshold_t_form = std::cbrt(sol.alpha * std::pow(d, 1.25) * std::pow(model.g(d), -0.25));
    sol.residuals = {model.e1(d, sol.beta), model.e2(d, sol.alpha)};

    if (!(sol.beta > 0.0 && sol.beta <= 1.0)) throw std::domain_error("solve_boundary: beta outside (0, 1]");
    if (!(sol.alpha > 0.0 && sol.alpha <= 1.0)) throw std::domain_error("solve_boundary: alpha outside (0, 1]");
    if (std::abs(sol.residuals[0]) > tol || std::abs(sol.residuals[1]) > tol)
        throw InfeasibleError("solve_boundary: residuals above tolerance");
    return sol;
}

struct ThresholdScan {
    /// d on the grid minimising the guaranteed threshold
    double argmin_d = 0;
    double min_threshold = 0;
    double grid_step = 0;
    /// at the minimiser only S can be forced dense (E2 never binds)
    bool s_only_regime = false;
    std::optional<double> solver_d;
    std::optional<double> solver_threshold;
    /// |argmin_d - solver_d| within two grid steps
    bool consistent = false;
};

/// For each d on a uniform grid in (0, q4), the best threshold forced by
/// either constraint alone is max(t_S(d), t_T(d)); the guarantee is the
/// minimum over d.
inline ThresholdScan threshold_scan(const MomentInputs& q, double cap, int grid) {
    detail::validate_inputs(q, cap);
    if (grid < 10) throw std::domain_error("threshold_scan: grid must be >= 10");
    const detail::BoundaryModel model{q, cap};

    ThresholdScan out;
    out.grid_step = q.q4 / grid;
    out.min_threshold = std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid; ++i) {
        const double d = out.grid_step * i;
        double t_s = 0.0;
        const double beta = model.beta(d);
        if (beta > 0.0) t_s = std::pow((q.q4 - d) * std::min(beta, 1.0), 0.25);
        double t_t = 0.0;
        if (model.g(d) > 0.0 && std::isfinite(q.q6)) {
            const double a = model.alpha_max(d);
            if (a > 0.0) t_t = std::cbrt(a * std::pow(d, 1.25) * std::pow(model.g(d), -0.25));
        }
        const double t = std::max(t_s, t_t);
        if (t < out.min_threshold) {
            out.min_threshold = t;
            out.argmin_d = d;
            out.s_only_regime = t_t == 0.0;
        }
    }
    try {
        const BoundarySolution sol = solve_boundary(q, cap);
        out.solver_d = sol.d;
        out.solver_threshold = sol.threshold;
        out.consistent = std::abs(sol.d - out.argmin_d) <= 2.0 * out.grid_step;
    } catch (const std::exception&) {
        out.consistent = false;
    }
    return out;
}

inline double sector_half_angle(double threshold, double Q) {
    if (!(Q > 0.0)) throw std::domain_error("sector_half_angle: Q must be positive");
    if (threshold < 0.0) throw std::domain_error("sector_half_angle: threshold must be nonnegative");
    if (threshold >= Q) throw std::domain_error("sector_half_angle: threshold must be below Q");
    return std::acos(threshold / Q);
}

// ---------------------------------------------------------------------------
// Ray arrangements for low-order central characters

/// Eigenvalue arguments are forced onto {k pi / r}.
struct RayArrangement {
    int r = 0;
    std::vector<double> rays;
};

inline RayArrangement argument_lines(int r) {
    if (r < 2) throw std::domain_error("argument_lines: r must be >= 2");
    RayArrangement out;
    out.r = r;
    for (int k = 0; k < 2 * r; ++k) out.rays.push_back(k * std::numbers::pi / r);
    return out;
}

/// Wrap to (-pi, pi].
inline double wrap_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    x = std::fmod(x, two_pi);
    if (x <= -std::numbers::pi) x += two_pi;
    if (x > std::numbers::pi) x -= two_pi;
    return x;
}

/// Canonical angle in [0, 2 pi).
inline double canonical_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    x = std::fmod(x, two_pi);
    if (x < 0) x += two_pi;
    return x >= two_pi ? 0.0 : x;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline

struct PipelineConfig {
    /// density cap for the S/T sets; ties the threshold to Q via ks_bound
    double cap = 1.0 / 234.0;
    /// For r <= 5 the rays make Q irrelevant and any positive density
    /// suffices, so a much smaller cap is used.
    double low_order_cap = 1e-6;
    /// r = 2 splits on cos(4 phi) against this value
    double r2_branch_cos = -0.785;
    double tol = 1e-9;
};

struct BranchResult {
    std::string label;
    std::string condition;
    double q4 = 0;
    double threshold = 0;
    /// lower bound on |a_v| implied by the ray geometry, when one is needed
    std::optional<double> abs_bound;
};

struct SectorResult {
    int r = 0;
    double threshold = 0;
    double Q = 0;
    double half_angle = 0;
    double cap = 0;
    MomentInputs inputs;
    BoundarySolution boundary;
    /// r = 2 only: one entry per cos(4 phi) branch
    std::vector<BranchResult> branches;
};

/// Smallest distance from a direction phi in the r = 2 low branch
/// {cos 4 phi < c} to the nearest ray k pi / 2.
inline double r2_branch_min_ray_distance(double branch_cos) { return std::acos(branch_cos) / 4.0; }

inline SectorResult theorem_pipeline(int r, const PipelineConfig& cfg = {}) {
    const MomentBounds bounds = moment_bounds(r);
    SectorResult out;
    out.r = r;
    out.cap = r >= 6 ? cfg.cap : cfg.low_order_cap;

    MomentInputs in{bounds.q4.coefficient(0).get_d(), bounds.q6_upper.get_d(), bounds.q8_pipeline.get_d()};
    if (r == 2) {
        // q4(phi) = (3 + cos 4 phi)/4: worst case on each side of the branch cut
        const double c4 = bounds.q4.coefficient(4).get_d();
        const double q4_high = in.q4 + c4 * cfg.r2_branch_cos;
        const double q4_low = in.q4 - c4;
        const MomentInputs high{q4_high, in.q6, in.q8};
        const MomentInputs low{q4_low, in.q6, in.q8};
        const BoundarySolution sh = solve_boundary(high, out.cap, cfg.tol);
        const BoundarySolution sl = solve_boundary(low, out.cap, cfg.tol);
        BranchResult bh{"cos4phi-high", "cos(4φ) >= " + std::to_string(cfg.r2_branch_cos), q4_high, sh.threshold,
                        std::nullopt};
        BranchResult bl{"cos4phi-low", "cos(4φ) < " + std::to_string(cfg.r2_branch_cos), q4_low, sl.threshold,
                        sl.threshold / std::cos(r2_branch_min_ray_distance(cfg.r2_branch_cos))};
        out.branches = {bh, bl};
        in = high;
        out.boundary = sh;
    } else {
        out.boundary = solve_boundary(in, out.cap, cfg.tol);
    }
    out.inputs = in;
    out.threshold = out.boundary.threshold;
    out.Q = min_Q_for_cap(out.cap);
    out.half_angle = sector_half_angle(out.threshold, out.Q);
    return out;
}

/// Threshold that applies in direction phi (branch-dependent for r = 2).
inline double threshold_at(const SectorResult& res, double phi, const PipelineConfig& cfg = {}) {
    if (res.branches.empty()) return res.threshold;
    return std::cos(4.0 * phi) >= cfg.r2_branch_cos ? res.branches[0].threshold : res.branches[1].threshold;
}

// ---------------------------------------------------------------------------
// Sector coverage for r <= 5

namespace detail {

constexpr double boundary_eps = 1e-12;

/// Rays strictly inside the open half-plane centred on phi.
inline std::vector<double> rays_in_half_plane(const RayArrangement& ra, double phi) {
    std::vector<double> out;
    for (double ray : ra.rays)
        if (std::abs(wrap_angle(ray - phi)) < std::numbers::pi / 2 - boundary_eps) out.push_back(ray);
    return out;
}

/// Smallest sector angle around `center` containing those rays (infimum;
/// the open sector must be strictly wider).
inline double covering_angle(const std::vector<double>& rays, double center) {
    double worst = 0.0;
    for (double ray : rays) worst = std::max(worst, std::abs(wrap_angle(ray - center)));
    return 2.0 * worst;
}

/// Directions where the set of rays inside the half-plane is constant on
/// each gap: the breakpoints ray +- pi/2 and the midpoints between them.
inline std::vector<double> critical_directions(const RayArrangement& ra) {
    std::vector<double> pts;
    for (double ray : ra.rays) {
        pts.push_back(canonical_angle(ray + std::numbers::pi / 2));
        pts.push_back(canonical_angle(ray - std::numbers::pi / 2));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              pts.end());
    std::vector<double> out = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double next = i + 1 < pts.size() ? pts[i + 1] : pts[0] + 2.0 * std::numbers::pi;
        out.push_back(canonical_angle(0.5 * (pts[i] + next)));
    }
    return out;
}

inline std::vector<double> candidate_directions(const RayArrangement& ra, double step) {
    std::vector<double> out = critical_directions(ra);
    const int n = static_cast<int>(std::ceil(2.0 * std::numbers::pi / step));
    for (int i = 0; i < n; ++i) out.push_back(i * step);
    return out;
}

}  // namespace detail

struct SectorCheck {
    bool ok = false;
    double phi_witness = 0;
    double threshold_used = 0;
};

/// Look for a direction phi whose open half-plane holds only rays that lie
/// inside the open sector (center - angle/2, center + angle/2).  Positive
/// density in {Re(a e^{-i phi}) > T} then lands in the sector.
inline SectorCheck low_order_sector_check(int r, double center, double angle, const PipelineConfig& cfg = {},
                                          double step = 1e-3) {
    if (r < 2 || r > 5) throw std::domain_error("low_order_sector_check: r must be in 2..5");
    if (!(angle > 0.0 && angle <= 2.0 * std::numbers::pi))
        throw std::domain_error("low_order_sector_check: angle must lie in (0, 2 pi]");
    const RayArrangement ra = argument_lines(r);
    const SectorResult res = theorem_pipeline(r, cfg);

    SectorCheck best;
    for (double phi : detail::candidate_directions(ra, step)) {
        const auto rays = detail::rays_in_half_plane(ra, phi);
        if (rays.empty() || !(detail::covering_angle(rays, center) < angle)) continue;
        const double t = threshold_at(res, phi, cfg);
        if (!best.ok || t > best.threshold_used) best = {true, phi, t};
    }
    return best;
}

/// Widest sector that must contain a positive upper density of eigenvalues,
/// whatever its orientation.
inline double min_guaranteed_sector(int r, const PipelineConfig& cfg = {}) {
    if (r < 2) throw std::domain_error("min_guaranteed_sector: r must be >= 2");
    if (r >= 6) return 2.0 * theorem_pipeline(r, cfg).half_angle;

    const RayArrangement ra = argument_lines(r);
    const auto directions = detail::candidate_directions(ra, 1e-2);
    std::vector<std::vector<double>> half_planes;
    for (double phi : directions) half_planes.push_back(detail::rays_in_half_plane(ra, phi));

    // centres: rays, midpoints between rays, and a uniform grid
    std::vector<double> centers;
    for (double ray : ra.rays) {
        centers.push_back(ray);
        centers.push_back(ray + std::numbers::pi / (2.0 * r));
    }
    for (int i = 0; i < 720; ++i) centers.push_back(i * std::numbers::pi / 360.0);

    double worst = 0.0;
    for (double c : centers) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& rays : half_planes)
            if (!rays.empty()) best = std::min(best, detail::covering_angle(rays, c));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace hecke
