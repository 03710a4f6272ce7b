#pragma once

#include "tprice/curve.hpp"

namespace tprice {

/// A target share within this distance of c_max is treated as the tangency
/// case: x is the peak of h and Schedule::at_feasibility_boundary is set.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Upper root of 2x(1 - x) = c for the linear NAR curve. Requires 0 <= c <= 0.5.
[[nodiscard]] double solve_linear_x(double c);

/// Upper root in (0, 1] of x^3 - x + 2c/3 = 0 (quadratic NAR curve), via
/// x = (2/sqrt 3) cos(arccos(-c sqrt 3) / 3). Requires 0 <= c < sqrt(1/3).
[[nodiscard]] double solve_quadratic_x(double c);

/// All three real roots of x^3 - x + 2c/3 = 0, ordered x2 < 0 <= x3 < x1 <= 1.
struct CubicRoots {
    double x1;
    double x2;
    double x3;
};

/// Trigonometric solution with Q = -1/3, R = -c/3, theta = arccos(R / sqrt(-Q^3)).
/// x3 is recovered from the product of the roots (-2c/3), which avoids the
/// cancellation the cosine form suffers for small c.
[[nodiscard]] CubicRoots quadratic_roots(double c);

/// Largest root of x(1 - x) e^(1 - x) = c (exponential NAR curve).
[[nodiscard]] double solve_exponential_x(double c);

/// Largest x in (0, 1] with h(x) = x * nmr(x q) / p = c, for any calibrated curve.
[[nodiscard]] double solve_general_x(const CalibratedCurve& curve, double c);

/// Family-appropriate solver: closed form for linear/quadratic/exponential,
/// solve_general_x for sampled curves.
[[nodiscard]] double solve_x(const CalibratedCurve& curve, double c);

/// Location and height of the peak of h(x) = x * nmr(x q) / p on (0, 1],
/// found by a 4096-point grid and golden-section refinement.
struct FeasibilityPeak {
    double x;
    double c;
};
[[nodiscard]] FeasibilityPeak feasibility_peak(const CalibratedCurve& curve);

/// c_max for the closed-form families (0.5, sqrt(1/3), x*(1 - x*)e^(1 - x*)).
[[nodiscard]] double closed_form_c_max(Family family);

/// Supremum of h on (0, 1]: analytic for closed forms, numeric for points.
[[nodiscard]] double max_feasible_c(const CalibratedCurve& curve);

/// Share of group contribution left to negotiation when the fixed price
/// covers x q: (1 - x)^2 linear, 1 - 1.5x + 0.5x^3 quadratic,
/// 1 - x e^(1 - x) exponential, otherwise 1 - x nar(x q) / p.
[[nodiscard]] double negotiation_share(const CalibratedCurve& curve, double x);

/// Cost-plus price c p / x.
[[nodiscard]] double transfer_price(double c, double p, double x);

/// Effective share once A's variable cost is netted out:
/// c = (p c_real - vc_a) / (p - vc_a).
[[nodiscard]] double adjust_for_variable_cost(double c_real, double p, double vc_a);

struct ScheduleRequest {
    double c_real;
    double vc_a;
    CalibratedCurve curve;
};

struct Schedule {
    double c_effective = 0.0;
    double x = 1.0;
    double f = 0.0;
    double t = 0.0;
    double n = 0.0;
    double n_adjusted = 0.0;
    double c_max = 0.0;
    bool at_feasibility_boundary = false;
};

/// Full pipeline: VC adjustment, x from the family solver, then
/// t = c (p - vc_a) / x + vc_a and n_adjusted = n (1 - vc_a / p).
[[nodiscard]] Schedule solve_schedule(const ScheduleRequest& request);

}  // namespace tprice
