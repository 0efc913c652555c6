#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "bolza/common.hpp"

namespace bolza {

enum class ContinuityClass {
    Continuous,
    LowerSemicontinuousLocallyBounded,
    LowerSemicontinuous,
};

inline std::string to_string(ContinuityClass c) {
    switch (c) {
        case ContinuityClass::Continuous: return "continuous";
        case ContinuityClass::LowerSemicontinuousLocallyBounded: return "lsc_locally_bounded";
        case ContinuityClass::LowerSemicontinuous: return "lsc";
    }
    return "?";
}

/// Kinetic part of a catalog Lagrangian: coeff * |u|^power with power > 1.
/// All certified bounds (coercivity radii, conjugate argmins, slope bounds)
/// come from this closed form.
struct KineticForm {
    double power = 2.0;
    double coeff = 0.5;

    double operator()(ConstSpan u) const {
        return coeff * std::pow(norm2(u), power);
    }
    double at_speed(double s) const { return coeff * std::pow(std::abs(s), power); }

    /// Smallest R with coeff*R^power >= slope*R for all |u| >= R.
    double radius_for_slope(double slope) const {
        if (slope <= 0.0) return 0.0;
        return std::pow(slope / coeff, 1.0 / (power - 1.0));
    }

    /// Bound on |d/du coeff|u|^power| for |u| <= R.
    double slope_bound(double R) const {
        return coeff * power * std::pow(std::abs(R), power - 1.0);
    }

    /// argmin_u { coeff|u|^power + s*u } over scalar u (closed form).
    double argmin_linear(double s) const {
        if (s == 0.0) return 0.0;
        double mag = std::pow(std::abs(s) / (coeff * power), 1.0 / (power - 1.0));
        return s > 0.0 ? -mag : mag;
    }
};

/// An autonomous Bolza problem instance.  The catalog is a closed parametric
/// family (power kinetic term + additive lsc potential + quadratic/indicator
/// terminal cost), so every certified bound below is analytic per family.
/// Instances are immutable after construction and safe to share across
/// threads.
struct Problem {
    int dimension = 1;
    std::string name;
    ContinuityClass continuity_class = ContinuityClass::Continuous;

    /// L(x,u), nonnegative, convex in u.  Equals kinetic(u) + potential(x)
    /// for every catalog entry.
    std::function<double(ConstSpan x, ConstSpan u)> lagrangian;
    /// phi(x); may return +inf (indicator terminal costs).
    std::function<double(ConstSpan x)> terminal_cost;
    /// Coercivity witness Theta(u) with L(x,u) >= Theta(u) and superlinear
    /// growth.  For the catalog this is the kinetic part itself.
    std::function<double(ConstSpan u)> coercivity;

    KineticForm kinetic;
    std::function<double(ConstSpan x)> potential;  // x-part; zero when x_independent
    bool x_independent = true;
    double potential_oscillation = 0.0;  // sup - inf of the potential
    double potential_bound = 0.0;        // sup of the potential (catalog potentials are >= 0)
    double lipschitz_in_x = 0.0;         // Lipschitz constant of L in x (inf-regularized problems: k)
    Vec terminal_finite_point;           // declared point with phi < +inf
    double jensen_constant = 8.0;        // loose budget constant used by trajectory diagnostics
};

/// Catalog entry: a problem plus optional closed-form oracles.
struct CatalogEntry {
    Problem problem;
    std::function<double(double t, ConstSpan x)> known_value_function;  // may be empty
    std::string value_provenance;
    std::function<double(ConstSpan x, ConstSpan p)> known_hamiltonian;  // may be empty
    std::string hamiltonian_provenance;
};

// ---------------------------------------------------------------------------
// Operations

inline double eval_lagrangian(const Problem& pb, ConstSpan x, ConstSpan u) {
    require_dimension(x, pb.dimension, "eval_lagrangian: x");
    require_dimension(u, pb.dimension, "eval_lagrangian: u");
    return pb.lagrangian(x, u);
}

inline double eval_terminal(const Problem& pb, ConstSpan x) {
    require_dimension(x, pb.dimension, "eval_terminal: x");
    return pb.terminal_cost(x);
}

/// Radius R such that Theta(u) >= slope*|u| for all |u| >= R, certified by
/// the family's closed form; monotone in slope.
inline double coercivity_radius(const Problem& pb, double slope) {
    if (slope < 0.0) throw std::invalid_argument("coercivity_radius: slope must be >= 0");
    return pb.kinetic.radius_for_slope(slope);
}

namespace detail {

/// inf over z in B(center, radius) of g(z) + k*|center - z|, by coordinate
/// scan-and-shrink.  Includes z = center exactly, which keeps the result
/// <= g(center).
inline double inf_regularize(const std::function<double(ConstSpan)>& g, ConstSpan center,
                             double k, double radius) {
    const int n = static_cast<int>(center.size());
    Vec z(center.begin(), center.end());
    double best = g(z);
    if (radius <= 0.0) return best;
    if (n == 1) {
        auto obj = [&](double zz) {
            Vec w = {zz};
            return g(w) + k * std::abs(center[0] - zz);
        };
        auto [arg, val] = scan_refine_min(obj, center[0] - radius, center[0] + radius, 33, 8);
        (void)arg;
        return std::min(best, val);
    }
    // Coordinate scan-and-shrink rounds for n >= 2.
    for (int round = 0; round < 4; ++round) {
        for (int axis = 0; axis < n; ++axis) {
            auto obj = [&](double zz) {
                Vec w = z;
                w[axis] = zz;
                double d = 0.0;
                for (int a = 0; a < n; ++a) d += (center[a] - w[a]) * (center[a] - w[a]);
                return g(w) + k * std::sqrt(d);
            };
            auto [arg, val] = scan_refine_min(obj, center[axis] - radius, center[axis] + radius, 17, 6);
            if (val < best) {
                best = val;
                z[axis] = arg;
            }
        }
    }
    return best;
}

}  // namespace detail

/// Continuous monotone approximation: returns a problem whose Lagrangian is
/// L_k(x,u) = inf_z { L(z,u) + k|x-z| }.  For the additive catalog the inf
/// acts on the potential alone, so Theta <= L_k <= L and L_k <= L_{k+1}
/// hold by construction.  The z-search is confined to a ball of radius
/// 2*oscillation/k: beyond it the penalty exceeds any possible gain.
inline Problem approximate_continuous(const Problem& pb, int k) {
    if (k <= 0) throw std::invalid_argument("approximate_continuous: k must be positive");
    if (!std::isfinite(pb.potential_oscillation))
        throw std::invalid_argument("approximate_continuous: problem lacks a bounded oscillation witness");
    Problem out = pb;
    out.name = pb.name + "#k" + std::to_string(k);
    out.continuity_class = ContinuityClass::Continuous;
    out.lipschitz_in_x = static_cast<double>(k);
    const double radius = 2.0 * pb.potential_oscillation / static_cast<double>(k);
    const double kk = static_cast<double>(k);
    auto base_potential = pb.potential;
    auto pot_k = [base_potential, kk, radius](ConstSpan x) {
        return detail::inf_regularize(base_potential, x, kk, radius);
    };
    out.potential = pot_k;
    auto kin = pb.kinetic;
    out.lagrangian = [kin, pot_k](ConstSpan x, ConstSpan u) { return kin(u) + pot_k(x); };
    out.x_independent = pb.x_independent;
    return out;
}

// ---------------------------------------------------------------------------
// Catalog construction

namespace detail {

struct ProblemParams {
    std::string name;
    int dimension = 1;
    double kinetic_power = 2.0;
    double kinetic_coeff = 0.5;  // config convention: 1/power
    std::string potential_kind = "none";
    Vec potential_params;
    std::string terminal_kind = "zero";
    Vec terminal_params;
    ContinuityClass continuity_class = ContinuityClass::Continuous;
};

inline Problem make_problem(const ProblemParams& pp) {
    Problem pb;
    pb.name = pp.name;
    pb.dimension = pp.dimension;
    pb.continuity_class = pp.continuity_class;
    pb.kinetic = KineticForm{pp.kinetic_power, pp.kinetic_coeff};
    const KineticForm kin = pb.kinetic;
    pb.coercivity = [kin](ConstSpan u) { return kin(u); };

    if (pp.potential_kind == "none") {
        pb.potential = [](ConstSpan) { return 0.0; };
        pb.x_independent = true;
        pb.potential_oscillation = 0.0;
        pb.potential_bound = 0.0;
        pb.lipschitz_in_x = 0.0;
    } else if (pp.potential_kind == "step") {
        if (pp.potential_params.size() != 2)
            throw std::invalid_argument("step potential needs params: threshold height");
        const double threshold = pp.potential_params[0];
        const double height = pp.potential_params[1];
        if (height < 0.0) throw std::invalid_argument("step potential height must be >= 0");
        pb.potential = [threshold, height](ConstSpan x) {
            return x[0] > threshold ? height : 0.0;
        };
        pb.x_independent = false;
        pb.potential_oscillation = height;
        pb.potential_bound = height;
        pb.lipschitz_in_x = kInf;  // discontinuous
    } else {
        throw std::invalid_argument("unknown potential_kind: " + pp.potential_kind);
    }

    auto pot = pb.potential;
    pb.lagrangian = [kin, pot](ConstSpan x, ConstSpan u) { return kin(u) + pot(x); };

    const int n = pp.dimension;
    if (pp.terminal_kind == "zero") {
        pb.terminal_cost = [](ConstSpan) { return 0.0; };
        pb.terminal_finite_point = Vec(n, 0.0);
    } else if (pp.terminal_kind == "quadratic") {
        // params: center (n values), weight
        if (pp.terminal_params.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("quadratic terminal needs params: center... weight");
        Vec center(pp.terminal_params.begin(), pp.terminal_params.begin() + n);
        const double weight = pp.terminal_params[n];
        if (weight < 0.0) throw std::invalid_argument("quadratic terminal weight must be >= 0");
        pb.terminal_cost = [center, weight](ConstSpan x) {
            double d = 0.0;
            for (std::size_t i = 0; i < center.size(); ++i)
                d += (x[i] - center[i]) * (x[i] - center[i]);
            return weight * d;
        };
        pb.terminal_finite_point = center;
    } else if (pp.terminal_kind == "ball") {
        // params: center (n values), radius; indicator of B(center, radius)
        if (pp.terminal_params.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("ball terminal needs params: center... radius");
        Vec center(pp.terminal_params.begin(), pp.terminal_params.begin() + n);
        const double radius = pp.terminal_params[n];
        if (radius <= 0.0) throw std::invalid_argument("ball terminal radius must be > 0");
        pb.terminal_cost = [center, radius](ConstSpan x) {
            double d = 0.0;
            for (std::size_t i = 0; i < center.size(); ++i)
                d += (x[i] - center[i]) * (x[i] - center[i]);
            return std::sqrt(d) <= radius ? 0.0 : kInf;
        };
        pb.terminal_finite_point = center;
    } else {
        throw std::invalid_argument("unknown terminal_kind: " + pp.terminal_kind);
    }
    return pb;
}

}  // namespace detail

/// Built-in catalog.  Closed-form oracles carry a provenance note.
inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;

        {
            detail::ProblemParams pp;
            pp.name = "quadratic_zero";
            pp.terminal_kind = "zero";
            CatalogEntry e;
            e.problem = detail::make_problem(pp);
            e.known_value_function = [](double, ConstSpan) { return 0.0; };
            e.value_provenance = "closed form: V == 0 (zero terminal cost, idle arc is optimal)";
            e.known_hamiltonian = [](ConstSpan, ConstSpan p) { return 0.5 * dot(p, p); };
            e.hamiltonian_provenance = "closed form: conjugate of u^2/2";
            v.push_back(std::move(e));
        }
        {
            detail::ProblemParams pp;
            pp.name = "quadratic_terminal";
            pp.terminal_kind = "quadratic";
            pp.terminal_params = {0.0, 1.0};
            CatalogEntry e;
            e.problem = detail::make_problem(pp);
            e.known_value_function = [](double t, ConstSpan x) {
                return dot(x, x) / (1.0 + 2.0 * t);
            };
            e.value_provenance = "closed form: endpoint minimization of (y-x)^2/(2t) + y^2";
            e.known_hamiltonian = [](ConstSpan, ConstSpan p) { return 0.5 * dot(p, p); };
            e.hamiltonian_provenance = "closed form: conjugate of u^2/2";
            v.push_back(std::move(e));
        }
        {
            detail::ProblemParams pp;
            pp.name = "step_potential";
            pp.potential_kind = "step";
            pp.potential_params = {0.0, 1.0};
            pp.terminal_kind = "quadratic";
            pp.terminal_params = {-1.0, 1.0};
            pp.continuity_class = ContinuityClass::LowerSemicontinuousLocallyBounded;
            CatalogEntry e;
            e.problem = detail::make_problem(pp);
            e.known_hamiltonian = [](ConstSpan x, ConstSpan p) {
                return 0.5 * dot(p, p) - (x[0] > 0.0 ? 1.0 : 0.0);
            };
            e.hamiltonian_provenance = "closed form: conjugate of u^2/2 shifted by the step";
            v.push_back(std::move(e));
        }
        {
            detail::ProblemParams pp;
            pp.name = "lagrange_ball";
            pp.terminal_kind = "ball";
            pp.terminal_params = {0.0, 0.1};
            CatalogEntry e;
            e.problem = detail::make_problem(pp);
            e.known_hamiltonian = [](ConstSpan, ConstSpan p) { return 0.5 * dot(p, p); };
            e.hamiltonian_provenance = "closed form: conjugate of u^2/2";
            v.push_back(std::move(e));
        }
        return v;
    }();
    return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog())
        if (e.problem.name == name) return e;
    throw std::invalid_argument("no catalog entry named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config file format: flat "key = value" lines, UTF-8.  Keys: name,
// dimension, kinetic_power, potential_kind, potential_params, terminal_kind,
// terminal_params, continuity_class.  Unknown keys are errors.

inline Problem parse_problem_config(const std::string& text) {
    static const std::vector<std::string> known = {
        "name", "dimension", "kinetic_power", "potential_kind", "potential_params",
        "terminal_kind", "terminal_params", "continuity_class"};
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (kv.count(key))
            throw std::runtime_error("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    for (const char* req : {"name", "dimension", "kinetic_power", "terminal_kind", "continuity_class"})
        if (!kv.count(req)) throw std::runtime_error(std::string("config: missing required key '") + req + "'");

    auto parse_list = [](const std::string& s) {
        Vec out;
        std::istringstream ss(s);
        std::string tok;
        while (ss >> tok) {
            if (!tok.empty() && tok.back() == ',') tok.pop_back();
            out.push_back(std::stod(tok));
        }
        return out;
    };

    detail::ProblemParams pp;
    pp.name = kv["name"];
    pp.dimension = std::stoi(kv["dimension"]);
    if (pp.dimension <= 0) throw std::runtime_error("config: dimension must be positive");
    pp.kinetic_power = std::stod(kv["kinetic_power"]);
    if (pp.kinetic_power <= 1.0) throw std::runtime_error("config: kinetic_power must exceed 1");
    pp.kinetic_coeff = 1.0 / pp.kinetic_power;
    if (kv.count("potential_kind")) pp.potential_kind = kv["potential_kind"];
    if (kv.count("potential_params")) pp.potential_params = parse_list(kv["potential_params"]);
    pp.terminal_kind = kv["terminal_kind"];
    if (kv.count("terminal_params")) pp.terminal_params = parse_list(kv["terminal_params"]);
    const std::string cc = kv["continuity_class"];
    if (cc == "continuous")
        pp.continuity_class = ContinuityClass::Continuous;
    else if (cc == "lsc_locally_bounded")
        pp.continuity_class = ContinuityClass::LowerSemicontinuousLocallyBounded;
    else if (cc == "lsc")
        pp.continuity_class = ContinuityClass::LowerSemicontinuous;
    else
        throw std::runtime_error("config: unknown continuity_class '" + cc + "'");
    return detail::make_problem(pp);
}

inline Problem load_problem_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_config(ss.str());
}

/// Resolve a CLI --problem argument: catalog name first, then config path.
inline Problem resolve_problem(const std::string& spec) {
    for (const auto& e : catalog())
        if (e.problem.name == spec) return e.problem;
    return load_problem_config(spec);
}

}  // namespace bolza
