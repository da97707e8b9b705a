#include "glstat/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace glstat {

namespace {

double horner(const std::vector<double>& c, double t) noexcept {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

// Antiderivative sum_k c_k t^(k+1) / (k+1), vanishing at 0.
double primitive(const std::vector<double>& c, double t) noexcept {
    double acc = 0.0;
    for (std::size_t k = c.size(); k > 0; --k) {
        acc = acc * t + c[k - 1] / static_cast<double>(k);
    }
    return acc * t;
}

}  // namespace

WeightFunctionJ::WeightFunctionJ(Kind kind, std::vector<PolynomialPiece> pieces)
    : kind_(kind), pieces_(std::move(pieces)) {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!(p.lo >= 0.0 && p.lo < p.hi && p.hi <= 1.0)) {
            throw std::invalid_argument("J piece support must satisfy 0 <= lo < hi <= 1");
        }
        if (p.coefficients.empty()) {
            throw std::invalid_argument("J piece needs at least one coefficient");
        }
        for (double c : p.coefficients) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("J coefficients must be finite");
            }
        }
        if (i > 0 && p.lo < pieces_[i - 1].hi) {
            throw std::invalid_argument("J pieces must be sorted and non-overlapping");
        }
    }
}

WeightFunctionJ WeightFunctionJ::zero() {
    return WeightFunctionJ(Kind::zero, {});
}

WeightFunctionJ WeightFunctionJ::constant(double value, double lo, double hi) {
    if (value == 0.0) {
        return zero();
    }
    return WeightFunctionJ(Kind::constant, {{lo, hi, {value}}});
}

WeightFunctionJ WeightFunctionJ::linear(double intercept, double slope, double lo, double hi) {
    return WeightFunctionJ(Kind::linear, {{lo, hi, {intercept, slope}}});
}

WeightFunctionJ WeightFunctionJ::piecewise(std::vector<PolynomialPiece> pieces) {
    if (pieces.empty()) {
        return zero();
    }
    return WeightFunctionJ(Kind::piecewise_polynomial, std::move(pieces));
}

WeightFunctionJ WeightFunctionJ::gini_order_statistic(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("order-statistic Gini weight needs n >= 2");
    }
    const double nd = static_cast<double>(n);
    return linear(-2.0 * nd / (nd - 1.0), 4.0 * nd / (nd - 1.0));
}

double WeightFunctionJ::operator()(double t) const noexcept {
    for (const auto& p : pieces_) {
        if (t >= p.lo && t <= p.hi) {
            return horner(p.coefficients, t);
        }
    }
    return 0.0;
}

double WeightFunctionJ::integral(double lo, double hi) const {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
        throw std::invalid_argument("J integral bounds must satisfy 0 <= lo <= hi <= 1");
    }
    double acc = 0.0;
    for (const auto& p : pieces_) {
        const double a = std::max(lo, p.lo);
        const double b = std::min(hi, p.hi);
        if (a < b) {
            acc += primitive(p.coefficients, b) - primitive(p.coefficients, a);
        }
    }
    return acc;
}

double WeightFunctionJ::sup_abs() const noexcept {
    double best = 0.0;
    for (const auto& p : pieces_) {
        constexpr int kGrid = 1024;
        for (int i = 0; i <= kGrid; ++i) {
            const double t = p.lo + (p.hi - p.lo) * static_cast<double>(i) / kGrid;
            best = std::max(best, std::abs(horner(p.coefficients, t)));
        }
    }
    return best;
}

double j_integral(const WeightFunctionJ& weight, double lo, double hi) {
    return weight.integral(lo, hi);
}

}  // namespace glstat
