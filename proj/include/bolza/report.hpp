#pragma once

#include "bolza/common.hpp"

namespace bolza {

/// One inequality check at one location.  For <=-type checks the margin is
/// rhs - lhs, so a pass has margin >= -tolerance.
struct PointRecord {
    Vec location;  // (t, x...) or whatever the test samples
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string test_name;
    std::vector<PointRecord> points;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;

    void add(Vec location, double lhs, double rhs, bool ok) {
        PointRecord r;
        r.location = std::move(location);
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = rhs - lhs;
        r.pass = ok;
        points.push_back(std::move(r));
    }

    /// pass <=> every point's verdict is pass (vacuous over an empty set).
    void finalize() {
        pass = true;
        for (const auto& p : points) pass = pass && p.pass;
    }

    void note(const std::string& s) {
        if (!notes.empty()) notes += "; ";
        notes += s;
    }
};

}  // namespace bolza
