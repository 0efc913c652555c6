#pragma once

#include <random>

#include "bolza/problem.hpp"

namespace bolza {

/// Piecewise-linear arc on [0, t] with uniform knot spacing.  Velocity is
/// constant on each segment, so only the state argument of L needs
/// quadrature (trapezoid at the two knots).
struct Trajectory {
    Vec knot_times;                   // ascending, knot_times[0] == 0
    std::vector<Vec> knot_states;     // one state per knot
    double running_cost = 0.0;        // integral of L along the arc
    double total_cost = 0.0;          // running_cost + phi(endpoint); may be +inf

    int dimension() const { return knot_states.empty() ? 0 : static_cast<int>(knot_states[0].size()); }
    double final_time() const { return knot_times.empty() ? 0.0 : knot_times.back(); }

    Vec state_at(double s) const {
        const auto& ts = knot_times;
        if (s <= ts.front()) return knot_states.front();
        if (s >= ts.back()) return knot_states.back();
        auto it = std::upper_bound(ts.begin(), ts.end(), s);
        std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
        double w = (s - ts[i]) / (ts[i + 1] - ts[i]);
        Vec out(knot_states[i].size());
        for (std::size_t a = 0; a < out.size(); ++a)
            out[a] = (1.0 - w) * knot_states[i][a] + w * knot_states[i + 1][a];
        return out;
    }

    /// Segment velocity at time s (undefined exactly at knots; the segment
    /// containing s from the left is used).
    Vec velocity_at(double s) const {
        const auto& ts = knot_times;
        std::size_t i;
        if (s <= ts.front())
            i = 0;
        else if (s >= ts.back())
            i = ts.size() - 2;
        else
            i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), s) - ts.begin()) - 1;
        double ds = ts[i + 1] - ts[i];
        Vec out(knot_states[i].size());
        for (std::size_t a = 0; a < out.size(); ++a)
            out[a] = (knot_states[i + 1][a] - knot_states[i][a]) / ds;
        return out;
    }
};

struct MinimizationOptions {
    int knot_count = 17;               // knots including both endpoints; >= 2
    int restarts = 9;
    double velocity_bound = 8.0;       // initial endpoint search box: |y(t)-x| <= bound*t
    double refinement_tolerance = 1e-7;
    std::uint64_t seed = 0;
};

struct BolzaSolution {
    double value = kInf;
    Trajectory trajectory;
};

namespace detail {

/// Trapezoid cost of the segment from a to b over time ds.
inline double segment_cost(const Problem& pb, ConstSpan a, ConstSpan b, double ds) {
    const std::size_t n = a.size();
    Vec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = (b[i] - a[i]) / ds;
    return 0.5 * ds * (pb.lagrangian(a, u) + pb.lagrangian(b, u));
}

inline double arc_running_cost(const Problem& pb, const std::vector<Vec>& knots, double ds) {
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        c += segment_cost(pb, knots[i], knots[i + 1], ds);
    return c;
}

/// Block-coordinate descent over the knots of a uniform piecewise-linear arc.
/// Each scalar section is minimized by a bracketing scan followed by golden
/// refinement; the scan rides over potential jumps and indicator edges that
/// break unimodality.
inline double optimize_arc(const Problem& pb, std::vector<Vec>& knots, double ds,
                           bool pinned_end, const MinimizationOptions& opts) {
    const int K = static_cast<int>(knots.size());
    const int n = static_cast<int>(knots[0].size());
    const double pad = 2.0 * opts.velocity_bound * ds;

    auto local_cost = [&](int i) {
        double c = segment_cost(pb, knots[i - 1], knots[i], ds);
        if (i + 1 < K) c += segment_cost(pb, knots[i], knots[i + 1], ds);
        if (i == K - 1 && !pinned_end) c += pb.terminal_cost(knots[i]);
        return c;
    };

    double total = arc_running_cost(pb, knots, ds);
    if (!pinned_end) total += pb.terminal_cost(knots[K - 1]);

    const int last_free = pinned_end ? K - 2 : K - 1;
    const int max_sweeps = 60 + 2 * K * K;
    const double stop_tol = 0.01 * opts.refinement_tolerance;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double improved = 0.0;
        for (int i = 1; i <= last_free; ++i) {
            for (int axis = 0; axis < n; ++axis) {
                double before = local_cost(i);
                if (!is_finite(before)) before = kInf;
                double lo = knots[i - 1][axis], hi = knots[i - 1][axis];
                if (i + 1 < K) {
                    lo = std::min(lo, knots[i + 1][axis]);
                    hi = std::max(hi, knots[i + 1][axis]);
                }
                lo = std::min(lo, knots[i][axis]) - pad;
                hi = std::max(hi, knots[i][axis]) + pad;
                auto section = [&](double v) {
                    knots[i][axis] = v;
                    return local_cost(i);
                };
                const double keep = knots[i][axis];
                // Bracket with a coarse scan, then golden-refine around the
                // best bracket.
                const int scan_n = 17;
                double best_v = keep, best_c = before;
                double step = (hi - lo) / (scan_n - 1);
                for (int s = 0; s < scan_n; ++s) {
                    double v = lo + s * step;
                    double c = section(v);
                    if (c < best_c) {
                        best_c = c;
                        best_v = v;
                    }
                }
                auto [gv, gc] = golden_min(section, std::max(lo, best_v - step),
                                           std::min(hi, best_v + step), 48);
                if (gc < best_c) {
                    best_c = gc;
                    best_v = gv;
                }
                knots[i][axis] = best_v;
                if (is_finite(before) && is_finite(best_c))
                    improved += before - best_c;
                else if (!is_finite(before) && is_finite(best_c))
                    improved += 1.0;
                if (best_c >= before) knots[i][axis] = keep;  // no regression
            }
        }
        if (improved < stop_tol && sweep >= 2) break;
    }

    total = arc_running_cost(pb, knots, ds);
    if (!pinned_end) total += pb.terminal_cost(knots[K - 1]);
    return total;
}

inline bool lex_less(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (a[i][j] < b[i][j]) return true;
            if (a[i][j] > b[i][j]) return false;
        }
    return false;
}

inline BolzaSolution run_multistart(const Problem& pb, double t, ConstSpan x,
                                    const std::optional<Vec>& pinned_end,
                                    const MinimizationOptions& opts) {
    if (!(t > 0.0)) throw std::invalid_argument("minimize_bolza: t must be > 0");
    require_dimension(x, pb.dimension, "minimize_bolza: x");
    if (opts.knot_count < 2) throw std::invalid_argument("minimize_bolza: knot_count must be >= 2");

    const int K = opts.knot_count;
    const int n = pb.dimension;
    const double ds = t / (K - 1);
    std::mt19937_64 rng(opts.seed);

    std::vector<std::vector<Vec>> starts;
    const Vec x0(x.begin(), x.end());
    auto straight = [&](const Vec& target) {
        std::vector<Vec> ks(K, Vec(n));
        for (int i = 0; i < K; ++i) {
            double w = static_cast<double>(i) / (K - 1);
            for (int a = 0; a < n; ++a) ks[i][a] = (1.0 - w) * x0[a] + w * target[a];
        }
        return ks;
    };

    if (!pinned_end) {
        // Straight lines to a grid of candidate endpoints in the velocity box.
        const int m = std::max(opts.restarts, 1);
        for (int r = 0; r < m; ++r) {
            Vec target = x0;
            if (n == 1) {
                double frac = (m == 1) ? 0.0 : -1.0 + 2.0 * r / (m - 1);
                target[0] += opts.velocity_bound * t * frac;
            } else if (r > 0) {
                std::uniform_real_distribution<double> un(-1.0, 1.0);
                for (int a = 0; a < n; ++a) target[a] += opts.velocity_bound * t * un(rng);
            }
            starts.push_back(straight(target));
        }
    } else {
        // Straight chord plus tent-bowed variants; the bow lets descent
        // discover paths that detour through cheaper regions.
        const int m = std::max(opts.restarts, 1);
        for (int r = 0; r < m; ++r) {
            auto ks = straight(*pinned_end);
            if (r > 0 && K > 2) {
                double amp = opts.velocity_bound * t * (-1.0 + 2.0 * (r - 1) / std::max(m - 2, 1));
                std::uniform_real_distribution<double> un(-1.0, 1.0);
                for (int i = 1; i + 1 < K; ++i) {
                    double tent = 1.0 - std::abs(2.0 * i / (K - 1.0) - 1.0);
                    if (n == 1)
                        ks[i][0] += 0.5 * amp * tent;
                    else
                        for (int a = 0; a < n; ++a) ks[i][a] += 0.5 * amp * tent * un(rng);
                }
            }
            starts.push_back(std::move(ks));
        }
    }

    double best_cost = kInf;
    std::vector<Vec> best_knots;
    for (auto& ks : starts) {
        if (pinned_end) ks.back() = *pinned_end;
        double c = optimize_arc(pb, ks, ds, pinned_end.has_value(), opts);
        bool better = false;
        if (c < best_cost - 1e-12 * (1.0 + std::abs(c)))
            better = true;
        else if (std::abs(c - best_cost) <= 1e-12 * (1.0 + std::abs(c)) && !best_knots.empty() &&
                 lex_less(ks, best_knots))
            better = true;
        else if (best_knots.empty() && is_finite(c))
            better = true;
        if (better) {
            best_cost = c;
            best_knots = ks;
        }
    }
    if (best_knots.empty()) best_knots = starts.front();  // all restarts infeasible

    BolzaSolution sol;
    sol.trajectory.knot_times.resize(K);
    for (int i = 0; i < K; ++i) sol.trajectory.knot_times[i] = i * ds;
    sol.trajectory.knot_times.back() = t;
    sol.trajectory.knot_states = std::move(best_knots);
    sol.trajectory.running_cost = arc_running_cost(pb, sol.trajectory.knot_states, ds);
    sol.trajectory.total_cost = sol.trajectory.running_cost;
    if (!pinned_end) sol.trajectory.total_cost += pb.terminal_cost(sol.trajectory.knot_states.back());
    sol.value = sol.trajectory.total_cost;
    return sol;
}

}  // namespace detail

/// Direct minimization of the Bolza functional over piecewise-linear arcs
/// starting at x.  The returned value is a certified upper bound on V(t,x);
/// an infeasible run (indicator terminal cost unreachable at this
/// resolution) reports value = +inf rather than throwing.
inline BolzaSolution minimize_bolza(const Problem& pb, double t, ConstSpan x,
                                    const MinimizationOptions& opts = {}) {
    return detail::run_multistart(pb, t, x, std::nullopt, opts);
}

/// Two-point variant: both endpoints pinned, no terminal cost.  Used for the
/// inner problems of the short-horizon running-cost density estimator.
inline BolzaSolution minimize_bolza_pinned(const Problem& pb, double t, ConstSpan x_start,
                                           ConstSpan x_end, const MinimizationOptions& opts = {}) {
    require_dimension(x_end, pb.dimension, "minimize_bolza_pinned: x_end");
    return detail::run_multistart(pb, t, x_start, Vec(x_end.begin(), x_end.end()), opts);
}

/// |V(t,x) - V(t-h, y(h)) - integral of L over [0,h]| for a supplied value
/// oracle; zero along exact minimizers of an exact oracle.
inline double dpp_residual(const Problem& pb,
                           const std::function<double(double, ConstSpan)>& value_at,
                           const Trajectory& traj, double h) {
    const double t = traj.final_time();
    if (!(h > 0.0) || h > t + 1e-12) throw std::invalid_argument("dpp_residual: need 0 < h <= t");
    h = std::min(h, t);

    double head = 0.0;  // cost over [0, h]
    const auto& ts = traj.knot_times;
    for (std::size_t i = 0; i + 1 < ts.size() && ts[i] < h; ++i) {
        double s1 = std::min(ts[i + 1], h);
        Vec a = traj.state_at(ts[i]);
        Vec b = traj.state_at(s1);
        head += detail::segment_cost(pb, a, b, s1 - ts[i]);
    }

    double v_full = value_at(t, Vec(traj.knot_states.front()));
    Vec yh = traj.state_at(h);
    double v_tail = value_at(t - h, yh);
    if (!is_finite(v_full) || !is_finite(v_tail)) return kInf;
    return std::abs(v_full - v_tail - head);
}

/// Difference quotients |y(h) - y(0)|/h for each step size; bounded for
/// minimizers of locally bounded problems.
inline std::vector<std::pair<double, double>> difference_quotients(const Trajectory& traj,
                                                                   ConstSpan h_values) {
    std::vector<std::pair<double, double>> out;
    const Vec y0 = traj.knot_states.front();
    for (double h : h_values) {
        if (h <= 0.0 || h > traj.final_time() + 1e-12) continue;
        Vec yh = traj.state_at(h);
        double d = 0.0;
        for (std::size_t a = 0; a < y0.size(); ++a) d += (yh[a] - y0[a]) * (yh[a] - y0[a]);
        out.emplace_back(h, std::sqrt(d) / h);
    }
    return out;
}

}  // namespace bolza
