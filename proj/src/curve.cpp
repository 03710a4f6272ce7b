#include "tprice/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "tprice/error.hpp"

namespace tprice {

namespace {

constexpr int kShapeSamples = 256;
constexpr int kOptimumGrid = 1024;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

OptimumParams optimum_from_scale(Family family, ScaleParams s) {
    if (!positive_finite(s.a) || !positive_finite(s.b)) {
        throw Error(ErrorCode::InvalidCurve,
                    fmt::format("{} curve needs a > 0 and b > 0 (got a = {}, b = {})", to_string(family), s.a, s.b));
    }
    switch (family) {
        case Family::Linear: return {s.a / 2.0, s.a / (2.0 * s.b)};
        case Family::Quadratic: return {2.0 * s.a / 3.0, std::sqrt(s.a / (3.0 * s.b))};
        case Family::Exponential: return {s.a / std::numbers::e, s.b};
        case Family::Points: break;
    }
    throw Error(ErrorCode::InvalidCurve, "points curves have no scale parameters");
}

double last_nmr_zero(const Polynomial& nmr, double upper) {
    std::vector<double> grid(kOptimumGrid + 1);
    std::vector<double> vals(kOptimumGrid + 1);
    double magnitude = 0.0;
    for (int i = 1; i <= kOptimumGrid; ++i) {
        grid[i] = upper * static_cast<double>(i) / kOptimumGrid;
        vals[i] = nmr(grid[i]);
        magnitude = std::max(magnitude, std::abs(vals[i]));
    }
    const double zero_tol = 1e-12 * magnitude;

    for (int i = kOptimumGrid - 1; i >= 1; --i) {
        if (vals[i] > zero_tol && vals[i + 1] <= zero_tol) {
            double lo = grid[i];
            double hi = grid[i + 1];
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (nmr(mid) > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return std::abs(nmr(lo)) < std::abs(nmr(hi)) ? lo : hi;
        }
    }
    throw Error(ErrorCode::NoOptimum,
                fmt::format("net marginal revenue never turns negative on (0, {}]; the sampled curve has no "
                            "interior revenue maximum",
                            upper));
}

}  // namespace

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::Linear: return "linear";
        case Family::Quadratic: return "quadratic";
        case Family::Exponential: return "exponential";
        case Family::Points: return "points";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
    for (auto f : {Family::Linear, Family::Quadratic, Family::Exponential, Family::Points}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    return std::nullopt;
}

NarShape check_nar_shape(const std::function<double(double)>& nar, double upper, double reference) {
    NarShape shape;
    const double rise_tol = 1e-9 * std::abs(reference);
    double prev = 0.0;
    for (int i = 1; i <= kShapeSamples; ++i) {
        const double f = upper * static_cast<double>(i) / kShapeSamples;
        const double v = nar(f);
        if (i == 1 || v < shape.min_nar) {
            shape.min_nar = v;
        }
        if (!(v > 0.0)) {
            shape.positive = false;
        }
        if (i > 1) {
            const double rise = v - prev;
            shape.worst_increase = std::max(shape.worst_increase, rise);
            if (rise > rise_tol) {
                shape.non_increasing = false;
            }
        }
        prev = v;
    }
    return shape;
}

CalibratedCurve::CalibratedCurve(Family family, double p, double q, std::optional<Sampled> sampled)
    : family_(family), p_(p), q_(q), sampled_(std::move(sampled)) {
    shape_ = check_nar_shape([this](double f) { return nar(f); }, q_, p_);
}

CalibratedCurve CalibratedCurve::closed_form(Family family, double p, double q) {
    if (family == Family::Points) {
        throw Error(ErrorCode::InvalidCurve, "points curves must be calibrated from samples");
    }
    if (!positive_finite(p) || !positive_finite(q)) {
        throw Error(ErrorCode::InvalidCurve,
                    fmt::format("{} curve needs p > 0 and q > 0 (got p = {}, q = {})", to_string(family), p, q));
    }
    return CalibratedCurve(family, p, q, std::nullopt);
}

double CalibratedCurve::nar(double f) const noexcept {
    const double u = f / q_;
    switch (family_) {
        case Family::Linear: return p_ * (2.0 - u);
        case Family::Quadratic: return p_ * (1.5 - 0.5 * u * u);
        case Family::Exponential: return p_ * std::exp(1.0 - u);
        case Family::Points: return sampled_->nar(f);
    }
    return 0.0;
}

double CalibratedCurve::nmr(double f) const noexcept {
    const double u = f / q_;
    switch (family_) {
        case Family::Linear: return 2.0 * p_ * (1.0 - u);
        case Family::Quadratic: return 1.5 * p_ * (1.0 - u * u);
        case Family::Exponential: return p_ * std::exp(1.0 - u) * (1.0 - u);
        case Family::Points: return sampled_->nmr(f);
    }
    return 0.0;
}

CalibratedCurve calibrate(const CurveSpec& spec) {
    if (spec.family == Family::Points) {
        const auto* points = std::get_if<std::vector<Sample>>(&spec.params);
        if (points == nullptr) {
            throw Error(ErrorCode::InvalidCurve, "points curve needs a list of samples");
        }
        for (const auto& s : *points) {
            if (s.f < 0.0) {
                throw Error(ErrorCode::InvalidCurve, fmt::format("sample abscissa f = {} is negative", s.f));
            }
        }
        LagrangeInterpolant nar = lagrange_nar(*points);
        if (!(nar.max_abscissa() > 0.0)) {
            throw Error(ErrorCode::InvalidCurve, "samples need at least one positive abscissa");
        }
        Polynomial nmr = nmr_from_nar(nar.power_form());
        const double q = last_nmr_zero(nmr, nar.max_abscissa());
        const double p = nar(q);
        if (!(p > 0.0)) {
            throw Error(ErrorCode::InvalidCurve,
                        fmt::format("interpolated NAR at the optimum q = {} is {}, not positive", q, p));
        }
        return CalibratedCurve(Family::Points, p, q, CalibratedCurve::Sampled{std::move(nar), std::move(nmr)});
    }

    return std::visit(
        [&](const auto& params) -> CalibratedCurve {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, ScaleParams>) {
                const auto opt = optimum_from_scale(spec.family, params);
                return CalibratedCurve::closed_form(spec.family, opt.p, opt.q);
            } else if constexpr (std::is_same_v<T, OptimumParams>) {
                return CalibratedCurve::closed_form(spec.family, params.p, params.q);
            } else {
                throw Error(ErrorCode::InvalidCurve,
                            fmt::format("{} curve takes (a, b) or (p, q), not sample points", to_string(spec.family)));
            }
        },
        spec.params);
}

}  // namespace tprice
