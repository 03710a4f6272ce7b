#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tprice {

/// One sampled point of a net-average-revenue curve.
struct Sample {
    double f;    // output quantity
    double nar;  // net average revenue at f
};

/// Power-basis polynomial stored in the scaled variable u = f / scale.
///
/// Keeping the coefficients in u (scale = largest abscissa) avoids the
/// conditioning loss of raw monomials when f is in the thousands. Note that
/// d(f * P(f))/df maps the u-coefficient d_i to (i + 1) * d_i for any scale,
/// so net marginal revenue is formed without changing variables.
class Polynomial {
public:
    explicit Polynomial(std::vector<double> scaled_coefficients, double scale = 1.0);

    [[nodiscard]] double operator()(double f) const noexcept;

    /// Derivative with respect to f.
    [[nodiscard]] double derivative(double f) const noexcept;

    [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] const std::vector<double>& scaled_coefficients() const noexcept { return coeffs_; }

    /// Coefficients c_i of sum c_i f^i (lowest order first).
    [[nodiscard]] std::vector<double> coefficients() const;

private:
    std::vector<double> coeffs_;
    double scale_;
};

/// Interpolating polynomial through k+1 samples, evaluated with the
/// barycentric formula.
class LagrangeInterpolant {
public:
    static constexpr std::size_t kMinPoints = 3;
    static constexpr std::size_t kMaxPoints = 13;

    /// Throws Error(DuplicateAbscissa) for coincident abscissae and
    /// Error(InvalidCurve) for a point count outside [3, 13] or non-finite data.
    explicit LagrangeInterpolant(std::span<const Sample> points);

    [[nodiscard]] double operator()(double f) const noexcept;

    [[nodiscard]] std::size_t degree() const noexcept { return nodes_.size() - 1; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double max_abscissa() const noexcept { return max_abscissa_; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    /// The same polynomial expanded into the power basis (via Newton
    /// divided differences on the scaled nodes).
    [[nodiscard]] Polynomial power_form() const;

private:
    std::vector<double> nodes_;    // scaled abscissae f / scale_
    std::vector<double> values_;
    std::vector<double> weights_;  // barycentric weights on the scaled nodes
    double scale_ = 1.0;
    double max_abscissa_ = 0.0;
};

[[nodiscard]] LagrangeInterpolant lagrange_nar(std::span<const Sample> points);

/// Net marginal revenue d(f * nar(f))/df of a polynomial NAR curve.
[[nodiscard]] Polynomial nmr_from_nar(const Polynomial& nar);

}  // namespace tprice
