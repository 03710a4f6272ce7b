#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "tprice/polynomial.hpp"

namespace tprice {

enum class Family { Linear, Quadratic, Exponential, Points };

[[nodiscard]] std::string_view to_string(Family family) noexcept;
[[nodiscard]] std::optional<Family> parse_family(std::string_view name) noexcept;

/// Closed-form curve given by its intercept/scale `a` and shape `b`:
///   linear       NAR(f) = a - b f
///   quadratic    NAR(f) = a - b f^2
///   exponential  NAR(f) = a exp(-f / b)
struct ScaleParams {
    double a;
    double b;
};

/// Closed-form curve given directly by its optimum (NAR p at output q).
struct OptimumParams {
    double p;
    double q;
};

struct CurveSpec {
    Family family;
    std::variant<ScaleParams, OptimumParams, std::vector<Sample>> params;

    static CurveSpec from_scale(Family family, double a, double b) { return {family, ScaleParams{a, b}}; }
    static CurveSpec from_optimum(Family family, double p, double q) { return {family, OptimumParams{p, q}}; }
    static CurveSpec from_points(std::vector<Sample> points) { return {Family::Points, std::move(points)}; }
};

/// Result of sampling NAR for positivity and monotonicity.
struct NarShape {
    bool positive = true;
    bool non_increasing = true;
    double min_nar = 0.0;
    double worst_increase = 0.0;  // largest step-to-step rise observed

    [[nodiscard]] bool ok() const noexcept { return positive && non_increasing; }
};

/// Samples `nar` at 256 points on (0, upper] and flags values <= 0 or any
/// rise larger than 1e-9 * reference.
[[nodiscard]] NarShape check_nar_shape(const std::function<double(double)>& nar, double upper, double reference);

/// A NAR curve normalised to its optimum: nmr(q) = 0 and nar(q) = p.
///
/// Closed forms are evaluated in dimensionless form p * g(f / q), so the
/// calibration identities hold exactly. Point-sampled curves carry their
/// barycentric interpolant and the symbolic NMR polynomial.
class CalibratedCurve {
public:
    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double q() const noexcept { return q_; }

    [[nodiscard]] double nar(double f) const noexcept;
    [[nodiscard]] double nmr(double f) const noexcept;

    [[nodiscard]] const NarShape& shape() const noexcept { return shape_; }

    /// Only set for Points curves.
    [[nodiscard]] const LagrangeInterpolant* interpolant() const noexcept {
        return sampled_ ? &sampled_->nar : nullptr;
    }

    /// Closed-form curve directly from its optimum; throws for Points.
    static CalibratedCurve closed_form(Family family, double p, double q);

private:
    friend CalibratedCurve calibrate(const CurveSpec& spec);

    struct Sampled {
        LagrangeInterpolant nar;
        Polynomial nmr;
    };

    CalibratedCurve(Family family, double p, double q, std::optional<Sampled> sampled);

    Family family_;
    double p_;
    double q_;
    std::optional<Sampled> sampled_;
    NarShape shape_;
};

/// Locates the optimum (p, q) of a curve.
///
/// Closed forms invert analytically (linear q = a/2b, p = a/2; quadratic
/// q = sqrt(a/3b), p = 2a/3; exponential q = b, p = a/e). Point samples are
/// interpolated, NMR is formed symbolically, and q is the last + to - sign
/// change of NMR on a 1024-point grid over (0, max f], refined by bisection.
///
/// Throws Error(InvalidCurve) for non-positive parameters,
/// Error(DuplicateAbscissa) and Error(NoOptimum) for unusable samples.
/// A failed NAR shape check is reported through shape(), not thrown.
[[nodiscard]] CalibratedCurve calibrate(const CurveSpec& spec);

}  // namespace tprice
