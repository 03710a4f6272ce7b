#include "tprice/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tprice/error.hpp"

namespace tprice {

Polynomial::Polynomial(std::vector<double> scaled_coefficients, double scale)
    : coeffs_(std::move(scaled_coefficients)), scale_(scale) {
    if (coeffs_.empty()) {
        coeffs_.push_back(0.0);
    }
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("polynomial scale must be positive, got {}", scale_));
    }
}

double Polynomial::operator()(double f) const noexcept {
    const double u = f / scale_;
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * u + *it;
    }
    return acc;
}

double Polynomial::derivative(double f) const noexcept {
    const double u = f / scale_;
    double acc = 0.0;
    for (std::size_t i = coeffs_.size() - 1; i >= 1; --i) {
        acc = acc * u + static_cast<double>(i) * coeffs_[i];
    }
    return acc / scale_;
}

std::vector<double> Polynomial::coefficients() const {
    std::vector<double> out(coeffs_.size());
    double factor = 1.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        out[i] = coeffs_[i] / factor;
        factor *= scale_;
    }
    return out;
}

LagrangeInterpolant::LagrangeInterpolant(std::span<const Sample> points) {
    if (points.size() < kMinPoints || points.size() > kMaxPoints) {
        throw Error(ErrorCode::InvalidCurve,
                    fmt::format("interpolation needs between {} and {} points, got {}", kMinPoints, kMaxPoints,
                                points.size()));
    }
    double extent = 0.0;
    for (const auto& s : points) {
        if (!std::isfinite(s.f) || !std::isfinite(s.nar)) {
            throw Error(ErrorCode::InvalidCurve, "sample points must be finite");
        }
        extent = std::max(extent, std::abs(s.f));
        max_abscissa_ = std::max(max_abscissa_, s.f);
    }
    scale_ = extent > 0.0 ? extent : 1.0;

    nodes_.reserve(points.size());
    values_.reserve(points.size());
    for (const auto& s : points) {
        nodes_.push_back(s.f / scale_);
        values_.push_back(s.nar);
    }

    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(nodes_[i] - nodes_[j]) <= 1e-12) {
                throw Error(ErrorCode::DuplicateAbscissa,
                            fmt::format("abscissa f = {} appears more than once", points[i].f));
            }
        }
    }

    weights_.assign(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j) {
                weights_[j] /= nodes_[j] - nodes_[k];
            }
        }
    }
}

double LagrangeInterpolant::operator()(double f) const noexcept {
    const double u = f / scale_;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double diff = u - nodes_[j];
        if (diff == 0.0) {
            return values_[j];
        }
        const double term = weights_[j] / diff;
        num += term * values_[j];
        den += term;
    }
    return num / den;
}

Polynomial LagrangeInterpolant::power_form() const {
    const std::size_t n = nodes_.size();

    // Newton divided differences, in place.
    std::vector<double> dd = values_;
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes_[i] - nodes_[i - level]);
        }
    }

    // Expand the nested Newton form from the innermost factor outwards.
    std::vector<double> coeffs{dd[n - 1]};
    for (std::size_t k = n - 1; k-- > 0;) {
        std::vector<double> next(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] -= nodes_[k] * coeffs[i];
        }
        next[0] += dd[k];
        coeffs = std::move(next);
    }
    return Polynomial(std::move(coeffs), scale_);
}

LagrangeInterpolant lagrange_nar(std::span<const Sample> points) { return LagrangeInterpolant(points); }

Polynomial nmr_from_nar(const Polynomial& nar) {
    std::vector<double> coeffs = nar.scaled_coefficients();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        coeffs[i] *= static_cast<double>(i + 1);
    }
    return Polynomial(std::move(coeffs), nar.scale());
}

}  // namespace tprice
