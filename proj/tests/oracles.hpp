#pragma once

// Independent brute-force evaluations used as test oracles. Nothing here calls
// the library's enumeration, projection or influence code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using Kernel = std::function<double(const std::vector<double>&)>;

inline double abs_diff(const std::vector<double>& a) { return std::abs(a[0] - a[1]); }

inline double min_pair(const std::vector<double>& a) {
    double best = std::abs(a[0] - a[1]);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            best = std::min(best, std::abs(a[i] - a[j]));
        }
    }
    return best;
}

inline void tuples(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            f(idx);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

inline std::vector<double> all_kernel_values(const std::vector<double>& xs, std::size_t m, const Kernel& h) {
    std::vector<double> out;
    tuples(xs.size(), m, [&](const std::vector<std::size_t>& idx) {
        std::vector<double> args;
        for (auto i : idx) {
            args.push_back(xs[i]);
        }
        out.push_back(h(args));
    });
    return out;
}

/// Projection of phi(h) at x: partial sum over (m-1)-tuples with x in front minus
/// the full sum over m-tuples, each divided by the count or by n^(m-1), n^m.
inline double projection(const std::vector<double>& xs, std::size_t m, double x, const Kernel& h,
                         const std::function<double(double)>& phi, bool literal) {
    const std::size_t n = xs.size();
    double partial = 0.0;
    double partial_count = 0.0;
    tuples(n, m - 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<double> args{x};
        for (auto i : idx) {
            args.push_back(xs[i]);
        }
        partial += phi(h(args));
        partial_count += 1.0;
    });
    double full = 0.0;
    double full_count = 0.0;
    tuples(n, m, [&](const std::vector<std::size_t>& idx) {
        std::vector<double> args;
        for (auto i : idx) {
            args.push_back(xs[i]);
        }
        full += phi(h(args));
        full_count += 1.0;
    });
    if (literal) {
        return partial / std::pow(double(n), double(m - 1)) - full / std::pow(double(n), double(m));
    }
    return partial / partial_count - full / full_count;
}

inline double g1(const std::vector<double>& xs, std::size_t m, double x, const Kernel& h, bool literal) {
    return projection(xs, m, x, h, [](double v) { return v; }, literal);
}

struct Discrete {
    double a;
    double xi;       ///< plug-in quantile
    double p;
    double density;  ///< plug-in density at xi
};

/// Plug-in influence kernel at kernel value v:
///   -int (1[v <= y] - H(y)) J(H(y)) dy + sum_i a_i (p_i - 1[v <= xi_i]) / density_i,
/// with H the step cdf of `values`. The integrand is constant between consecutive
/// breakpoints, so midpoint evaluation on each segment is exact.
inline double influence(const std::vector<double>& values, const std::function<double(double)>& J,
                        const std::vector<Discrete>& discrete, double v) {
    std::vector<double> pts(values.begin(), values.end());
    pts.push_back(v);
    std::sort(pts.begin(), pts.end());
    const auto H = [&](double y) {
        double c = 0.0;
        for (double w : values) {
            c += w <= y ? 1.0 : 0.0;
        }
        return c / static_cast<double>(values.size());
    };
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double lo = pts[k];
        const double hi = pts[k + 1];
        if (hi <= lo) {
            continue;
        }
        const double mid = 0.5 * (lo + hi);
        const double h = H(mid);
        const double ind = v <= mid ? 1.0 : 0.0;
        integral += (ind - h) * J(h) * (hi - lo);
    }
    double result = -integral;
    for (const auto& d : discrete) {
        result += d.a * (d.p - (v <= d.xi ? 1.0 : 0.0)) / d.density;
    }
    return result;
}

inline double lrv(const std::vector<double>& g, double bandwidth) {
    const std::size_t n = g.size();
    double total = 0.0;
    for (long r = -static_cast<long>(n) + 1; r < static_cast<long>(n); ++r) {
        const double t = std::abs(static_cast<double>(r)) / bandwidth;
        const double w = t <= 1.0 ? 1.0 - t : 0.0;
        double rho = 0.0;
        const std::size_t lag = static_cast<std::size_t>(std::abs(r));
        for (std::size_t i = 0; i + lag < n; ++i) {
            rho += g[i] * g[i + lag];
        }
        total += w * rho / static_cast<double>(n);
    }
    return total;
}

}  // namespace oracle
