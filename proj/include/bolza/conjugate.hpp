#pragma once

#include "bolza/problem.hpp"

namespace bolza {

struct ConjugateQuery {
    Vec x;
    Vec p;
    double tolerance = 1e-9;
};

struct ConjugateResult {
    double value = 0.0;
    Vec argmax;
    double search_radius = 0.0;
    double grid_step = 0.0;  // final bracket width of the refinement
};

namespace detail {

/// Certified search radius: for |u| >= R the objective <p,u> - L(x,u) is
/// dominated by the u = 0 candidate, because Theta(u) >= (|p|+1)|u| beyond
/// radius_for_slope(|p|+1) forces <p,u> - L <= -|u|.
inline double conjugate_search_radius(const Problem& pb, ConstSpan x, ConstSpan p) {
    const double pnorm = norm2(p);
    const double r0 = pb.kinetic.radius_for_slope(pnorm + 1.0);
    const double l0 = pb.lagrangian(x, Vec(x.size(), 0.0));
    return std::max(r0, l0) + 1.0;
}

inline int golden_iters_for(double width, double slope_bound, double tolerance) {
    // width * 0.618^n * slope_bound <= tolerance/2
    double target = 0.5 * tolerance / std::max(slope_bound, 1e-300);
    if (width <= target) return 1;
    int n = static_cast<int>(std::ceil(std::log(target / width) / std::log(0.618))) + 2;
    return std::clamp(n, 8, 200);
}

}  // namespace detail

/// H(x,p) = sup_u { <p,u> - L(x,u) } within query.tolerance.  The sup is
/// restricted to a certified compact ball; inside it the objective is concave
/// (L convex in u), so golden-section / coordinate refinement applies.
/// Ties in the argmax resolve toward the smallest |u|.
inline ConjugateResult hamiltonian(const Problem& pb, const ConjugateQuery& q) {
    require_dimension(q.x, pb.dimension, "hamiltonian: x");
    require_dimension(q.p, pb.dimension, "hamiltonian: p");
    if (!(q.tolerance > 0.0)) throw std::invalid_argument("hamiltonian: tolerance must be > 0");

    const int n = pb.dimension;
    const double R = detail::conjugate_search_radius(pb, q.x, q.p);
    const double slope = norm2(q.p) + pb.kinetic.slope_bound(R) + 1.0;

    ConjugateResult res;
    res.search_radius = R;
    res.argmax = Vec(n, 0.0);
    res.value = -pb.lagrangian(q.x, res.argmax);

    auto objective = [&](ConstSpan u) { return dot(q.p, u) - pb.lagrangian(q.x, u); };

    if (n == 1) {
        const int iters = detail::golden_iters_for(2.0 * R, slope, q.tolerance);
        auto f = [&](double u) {
            Vec uu = {u};
            return objective(uu);
        };
        auto [arg, val] = golden_max(f, -R, R, iters);
        res.grid_step = 2.0 * R * std::pow(0.618, iters);
        if (val > res.value + 1e-15 * (1.0 + std::abs(val))) {
            res.value = val;
            res.argmax[0] = arg;
        }
        if (res.grid_step * slope > q.tolerance)
            throw accuracy_error("hamiltonian: tolerance unattainable at maximum depth", res.value);
        return res;
    }

    // n >= 2: coordinate ascent on the concave objective over the box.
    Vec u(n, 0.0);
    double best = objective(u);
    const int iters = detail::golden_iters_for(2.0 * R, slope, q.tolerance);
    double width = 2.0 * R;
    for (int round = 0; round < 80; ++round) {
        double prev = best;
        for (int axis = 0; axis < n; ++axis) {
            auto f = [&](double ua) {
                Vec w = u;
                w[axis] = ua;
                return objective(w);
            };
            auto [arg, val] = golden_max(f, -R, R, iters);
            if (val > best) {
                best = val;
                u[axis] = arg;
            }
        }
        width *= 0.5;
        if (best - prev < 0.25 * q.tolerance && round >= 2) break;
    }
    res.grid_step = 2.0 * R * std::pow(0.618, iters);
    if (best > res.value + 1e-15 * (1.0 + std::abs(best))) {
        res.value = best;
        res.argmax = u;
    }
    return res;
}

/// Batched 1-d conjugation over an ascending costate grid.  The argmax of a
/// convex conjugate is nondecreasing in p, so each search reuses the previous
/// argmax as its lower bracket.
inline std::vector<ConjugateResult> conjugate_table_1d(const Problem& pb, ConstSpan x,
                                                       ConstSpan p_grid, double tolerance) {
    if (pb.dimension != 1) throw std::invalid_argument("conjugate_table_1d: requires n == 1");
    require_dimension(x, 1, "conjugate_table_1d: x");
    if (!(tolerance > 0.0)) throw std::invalid_argument("conjugate_table_1d: tolerance must be > 0");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (p_grid[i] < p_grid[i - 1])
            throw std::invalid_argument("conjugate_table_1d: p_grid must be ascending");

    std::vector<ConjugateResult> out;
    out.reserve(p_grid.size());
    double lo_bracket = -kInf;
    for (double p : p_grid) {
        Vec pv = {p};
        const double R = detail::conjugate_search_radius(pb, x, pv);
        const double lo = std::min(std::max(-R, lo_bracket), R);
        const double slope = std::abs(p) + pb.kinetic.slope_bound(R) + 1.0;
        const int iters = detail::golden_iters_for(R - lo, slope, tolerance);
        auto f = [&](double u) {
            Vec uu = {u};
            return p * u - pb.lagrangian(x, uu);
        };
        ConjugateResult res;
        res.search_radius = R;
        res.argmax = Vec{0.0};
        if (0.0 >= lo) {
            res.value = -pb.lagrangian(x, res.argmax);
        } else {
            res.value = -kInf;
        }
        auto [arg, val] = golden_max(f, lo, R, iters);
        res.grid_step = (R - lo) * std::pow(0.618, iters);
        if (val > res.value + 1e-15 * (1.0 + std::abs(val))) {
            res.value = val;
            res.argmax[0] = arg;
        }
        // Monotone argmax: clamp out sub-tolerance regressions.
        if (!out.empty() && res.argmax[0] < out.back().argmax[0])
            res.argmax[0] = out.back().argmax[0];
        lo_bracket = res.argmax[0] - res.grid_step;
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace bolza
