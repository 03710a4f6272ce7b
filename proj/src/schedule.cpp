#include "tprice/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "tprice/error.hpp"

namespace tprice {

namespace {

constexpr int kPeakGrid = 4096;
constexpr int kMaxBisection = 200;
constexpr double kRootTolerance = 1e-12;

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

void require_share(double c) {
    if (!std::isfinite(c) || c < 0.0) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("contribution share c must be >= 0, got {}", c));
    }
}

// Rejects c beyond c_max + tolerance; pulls c in the boundary band down to c_max.
double clamp_to_feasible(double c, double c_max, Family family) {
    require_share(c);
    if (c > c_max + kBoundaryTolerance) {
        throw Error(ErrorCode::CExceedsFeasible,
                    fmt::format("c = {} exceeds c_max = {:.9f} for the {} curve; no fixed price can recover it "
                                "without cutting net marginal revenue",
                                c, c_max, to_string(family)));
    }
    if (c >= c_max * (1.0 - 4.0 * std::numeric_limits<double>::epsilon())) {
        return c_max;
    }
    return c;
}

double exponential_share(double x) { return x * (1.0 - x) * std::exp(1.0 - x); }

double exponential_peak_x() { return (3.0 - std::sqrt(5.0)) / 2.0; }

double h_of(const CalibratedCurve& curve, double x) { return x * curve.nmr(x * curve.q()) / curve.p(); }

}  // namespace

double solve_linear_x(double c) {
    c = clamp_to_feasible(c, 0.5, Family::Linear);
    return 0.5 + std::sqrt(std::max(0.0, 0.25 - 0.5 * c));
}

CubicRoots quadratic_roots(double c) {
    c = clamp_to_feasible(c, kInvSqrt3, Family::Quadratic);
    if (c == kInvSqrt3) {
        return {kInvSqrt3, -2.0 * kInvSqrt3, kInvSqrt3};
    }
    const double arg = std::clamp(-c * std::sqrt(3.0), -1.0, 1.0);
    const double theta = std::acos(arg);
    const double amp = 2.0 * kInvSqrt3;
    CubicRoots r{};
    r.x1 = std::min(1.0, amp * std::cos(theta / 3.0));
    r.x2 = amp * std::cos((theta + 2.0 * std::numbers::pi) / 3.0);
    r.x3 = -2.0 * c / (3.0 * r.x1 * r.x2) + 0.0;
    return r;
}

double solve_quadratic_x(double c) { return quadratic_roots(c).x1; }

double solve_exponential_x(double c) {
    c = clamp_to_feasible(c, closed_form_c_max(Family::Exponential), Family::Exponential);
    if (c == 0.0) {
        return 1.0;
    }
    // g(x) = x(1-x)e^(1-x) falls monotonically from c_max to 0 on [x*, 1].
    double lo = exponential_peak_x();
    double hi = 1.0;
    double x = std::clamp(1.0 - c, lo, hi);
    for (int it = 0; it < kMaxBisection; ++it) {
        const double r = exponential_share(x) - c;
        if (r == 0.0) {
            break;
        }
        if (r > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double slope = std::exp(1.0 - x) * (x * x - 3.0 * x + 1.0);
        double next = slope != 0.0 ? x - r / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon()) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

FeasibilityPeak feasibility_peak(const CalibratedCurve& curve) {
    int best = 1;
    double best_h = h_of(curve, 1.0 / kPeakGrid);
    for (int i = 2; i <= kPeakGrid; ++i) {
        const double h = h_of(curve, static_cast<double>(i) / kPeakGrid);
        if (h > best_h) {
            best_h = h;
            best = i;
        }
    }

    // Golden-section refinement on the neighbouring grid cells.
    double a = static_cast<double>(std::max(best - 1, 0)) / kPeakGrid;
    double b = static_cast<double>(std::min(best + 1, kPeakGrid)) / kPeakGrid;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double h1 = h_of(curve, x1);
    double h2 = h_of(curve, x2);
    for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
        if (h1 < h2) {
            a = x1;
            x1 = x2;
            h1 = h2;
            x2 = a + inv_phi * (b - a);
            h2 = h_of(curve, x2);
        } else {
            b = x2;
            x2 = x1;
            h2 = h1;
            x1 = b - inv_phi * (b - a);
            h1 = h_of(curve, x1);
        }
    }
    FeasibilityPeak peak{static_cast<double>(best) / kPeakGrid, best_h};
    for (double cand : {x1, x2}) {
        const double h = h_of(curve, cand);
        if (h > peak.c) {
            peak = {cand, h};
        }
    }
    return peak;
}

double solve_general_x(const CalibratedCurve& curve, double c) {
    const FeasibilityPeak peak = feasibility_peak(curve);
    c = clamp_to_feasible(c, peak.c, curve.family());
    if (c == 0.0) {
        return 1.0;
    }
    if (c >= peak.c) {
        return peak.x;
    }

    // The largest root lies right of the peak. Bracket it between the
    // rightmost grid point still at or above c and its right neighbour.
    double lo = peak.x;
    double hi = 1.0;
    for (int i = kPeakGrid - 1; i >= 1; --i) {
        const double xi = static_cast<double>(i) / kPeakGrid;
        if (xi <= peak.x) {
            hi = std::min(hi, static_cast<double>(i + 1) / kPeakGrid);
            break;
        }
        if (h_of(curve, xi) >= c) {
            lo = xi;
            hi = static_cast<double>(i + 1) / kPeakGrid;
            break;
        }
    }

    for (int it = 0; it < kMaxBisection && hi - lo > kRootTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h_of(curve, mid) >= c) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_x(const CalibratedCurve& curve, double c) {
    switch (curve.family()) {
        case Family::Linear: return solve_linear_x(c);
        case Family::Quadratic: return solve_quadratic_x(c);
        case Family::Exponential: return solve_exponential_x(c);
        case Family::Points: return solve_general_x(curve, c);
    }
    return solve_general_x(curve, c);
}

double closed_form_c_max(Family family) {
    switch (family) {
        case Family::Linear: return 0.5;
        case Family::Quadratic: return kInvSqrt3;
        case Family::Exponential: {
            static const double c_max = exponential_share(exponential_peak_x());
            return c_max;
        }
        case Family::Points: break;
    }
    throw Error(ErrorCode::InvalidArgument, "points curves have no closed-form c_max");
}

double max_feasible_c(const CalibratedCurve& curve) {
    if (curve.family() == Family::Points) {
        return feasibility_peak(curve).c;
    }
    return closed_form_c_max(curve.family());
}

double negotiation_share(const CalibratedCurve& curve, double x) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("covered proportion x must lie in (0, 1], got {}", x));
    }
    const double gap = 1.0 - x;
    switch (curve.family()) {
        case Family::Linear: return gap * gap;
        // 1 - 1.5x + 0.5x^3, factored to avoid cancellation near x = 1.
        case Family::Quadratic: return 0.5 * gap * gap * (2.0 + x);
        case Family::Exponential: return std::max(0.0, 1.0 - x * std::exp(gap));
        case Family::Points: break;
    }
    return 1.0 - x * curve.nar(x * curve.q()) / curve.p();
}

double transfer_price(double c, double p, double x) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("covered proportion x must lie in (0, 1], got {}", x));
    }
    return c * p / x;
}

double adjust_for_variable_cost(double c_real, double p, double vc_a) {
    require_share(c_real);
    if (!std::isfinite(vc_a) || vc_a < 0.0) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("variable cost must be >= 0, got {}", vc_a));
    }
    if (vc_a >= p) {
        throw Error(ErrorCode::VariableCostTooHigh,
                    fmt::format("variable cost {} is not below the optimum's net average revenue p = {}", vc_a, p));
    }
    if (vc_a == 0.0) {
        return c_real;
    }
    if (p * c_real < vc_a) {
        throw Error(ErrorCode::NegativeEffectiveContribution,
                    fmt::format("target contribution p * c_real = {} does not cover variable cost {}", p * c_real,
                                vc_a));
    }
    return (p * c_real - vc_a) / (p - vc_a);
}

Schedule solve_schedule(const ScheduleRequest& request) {
    const CalibratedCurve& curve = request.curve;
    if (!std::isfinite(request.c_real) || request.c_real < 0.0 || request.c_real >= 1.0) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("c_real must lie in [0, 1), got {}", request.c_real));
    }

    Schedule s;
    s.c_effective = adjust_for_variable_cost(request.c_real, curve.p(), request.vc_a);
    s.c_max = max_feasible_c(curve);
    if (s.c_effective > s.c_max + kBoundaryTolerance) {
        throw Error(ErrorCode::CExceedsFeasible,
                    fmt::format("effective c = {} exceeds c_max = {:.9f} for the {} curve", s.c_effective, s.c_max,
                                to_string(curve.family())));
    }
    s.at_feasibility_boundary = std::abs(s.c_effective - s.c_max) <= kBoundaryTolerance;

    s.x = solve_x(curve, s.c_effective);
    s.f = s.x * curve.q();
    s.t = transfer_price(s.c_effective, curve.p() - request.vc_a, s.x) + request.vc_a;
    s.n = negotiation_share(curve, s.x);
    s.n_adjusted = s.n * (1.0 - request.vc_a / curve.p());
    return s;
}

}  // namespace tprice
