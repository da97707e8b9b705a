#pragma once

#include <cstddef>
#include <vector>

namespace glstat {

/// Polynomial sum_k coefficients[k] * t^k on the closed interval [lo, hi].
struct PolynomialPiece {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> coefficients;
};

/**
 * @brief The continuous weight J(t) of a GL-statistic.
 *
 * J is piecewise polynomial on [0, 1] and zero outside the union of its
 * pieces, so every integral of J has a closed form. Pieces are sorted and
 * may touch but not overlap; at a shared endpoint the left piece wins.
 */
class WeightFunctionJ {
public:
    enum class Kind { zero, constant, linear, piecewise_polynomial };

    static WeightFunctionJ zero();
    static WeightFunctionJ constant(double value, double lo = 0.0, double hi = 1.0);
    static WeightFunctionJ linear(double intercept, double slope, double lo = 0.0, double hi = 1.0);
    static WeightFunctionJ piecewise(std::vector<PolynomialPiece> pieces);

    /// J(t) = 4n/(n-1) t - 2n/(n-1) on [0, 1]: turns the identity kernel into
    /// Gini's mean difference for a sample of size n.
    static WeightFunctionJ gini_order_statistic(std::size_t n);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<PolynomialPiece>& pieces() const noexcept { return pieces_; }
    [[nodiscard]] bool is_zero() const noexcept { return pieces_.empty(); }

    [[nodiscard]] double operator()(double t) const noexcept;
    /// Integral of J over [lo, hi], 0 <= lo <= hi <= 1. Throws std::invalid_argument otherwise.
    [[nodiscard]] double integral(double lo, double hi) const;
    /// sup |J| over its support, evaluated on a fine grid plus the piece endpoints.
    [[nodiscard]] double sup_abs() const noexcept;

private:
    WeightFunctionJ(Kind kind, std::vector<PolynomialPiece> pieces);

    Kind kind_;
    std::vector<PolynomialPiece> pieces_;
};

[[nodiscard]] double j_integral(const WeightFunctionJ& weight, double lo, double hi);

}  // namespace glstat
