#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bolza {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }

/// Requested accuracy could not be reached; carries the best value found.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

inline void require_dimension(ConstSpan v, int dim, const char* what) {
    if (static_cast<int>(v.size()) != dim)
        throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                    std::to_string(dim) + ", got " +
                                    std::to_string(v.size()));
}

inline double dot(ConstSpan a, ConstSpan b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(ConstSpan a) { return std::sqrt(dot(a, a)); }

/// Golden-section maximization of a concave (unimodal) function on [lo, hi].
/// Runs a fixed iteration budget; the bracket shrinks by ~0.618 per step, so
/// 80 iterations leave a bracket below 1e-16 of the initial width.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iters = 80) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && b - a > 0.0; ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, int iters = 80) {
    auto neg = [&](double u) { return -f(u); };
    auto [arg, val] = golden_max(neg, lo, hi, iters);
    return {arg, -val};
}

/// Multi-round scan-and-shrink minimization on [lo, hi].  Handles functions
/// that are only piecewise unimodal (step potentials, indicator costs): each
/// round scans `points` samples, then shrinks the interval to a bracket
/// around the incumbent.  The value is exact at the returned argument.
template <typename F>
std::pair<double, double> scan_refine_min(F&& f, double lo, double hi,
                                          int points = 33, int rounds = 8) {
    double best_arg = lo, best_val = f(lo);
    double a = lo, b = hi;
    for (int r = 0; r < rounds; ++r) {
        double step = (b - a) / (points - 1);
        if (step <= 0.0) break;
        double round_arg = best_arg, round_val = best_val;
        for (int i = 0; i < points; ++i) {
            double u = a + i * step;
            double v = f(u);
            if (v < round_val || (v == round_val && std::abs(u) < std::abs(round_arg))) {
                round_val = v;
                round_arg = u;
            }
        }
        best_arg = round_arg;
        best_val = round_val;
        a = std::max(lo, best_arg - 1.5 * step);
        b = std::min(hi, best_arg + 1.5 * step);
    }
    return {best_arg, best_val};
}

/// Van der Corput radical inverse; basis for the low-discrepancy test-point
/// sequences used by the verifier.
inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

}  // namespace bolza
