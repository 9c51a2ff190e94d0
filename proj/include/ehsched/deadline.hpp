#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehsched/multihop.hpp"
#include "ehsched/rate.hpp"

namespace ehsched {

// Maximum deliverable data for deadline `t`. Nondecreasing in t; continuous
// when the last hop's rate law grows sublinearly.
inline double throughput_at(const Scenario& sc, double t) {
    if (!(t > 0.0)) return 0.0;
    return solve_throughput(sc.with_deadline(t), {.minimize_upstream_energy = false})
        .delivered;
}

struct DeadlineQuery {
    Scenario scenario;       // deadline field ignored; curves must cover t_max
    double target_bits = 0.0;
    double t_max = 0.0;
    double time_tolerance = 0.0;  // 0 means 1e-4 * t_max
};

struct CompletionResult {
    double t_off = 0.0;
    MultiHopSolution solution;
    std::vector<std::string> warnings;
};

// Completion-time minimization: bisection for the smallest deadline whose
// throughput reaches the target, then the offline policy at that deadline.
inline CompletionResult min_completion_time(const DeadlineQuery& q) {
    if (!(q.target_bits > 0.0))
        throw std::invalid_argument("min_completion_time: target must be positive");
    if (!(q.t_max > 0.0))
        throw std::invalid_argument("min_completion_time: horizon cap must be positive");

    CompletionResult res;
    for (const auto& r : q.scenario.rates) {
        const auto rep = check_rate_law(r);
        if (!rep.sublinear_growth)
            res.warnings.push_back("rate law '" + r.name() +
                                   "' is not sublinear; throughput may be discontinuous "
                                   "and bisection can overshoot the true completion time");
    }

    const double reachable = throughput_at(q.scenario, q.t_max);
    const double tol_bits = 1e-9 * std::max(1.0, q.target_bits);
    if (reachable + tol_bits < q.target_bits)
        throw std::runtime_error("min_completion_time: target unreachable within horizon cap");

    double lo = 0.0, hi = q.t_max;
    const double tol_t = q.time_tolerance > 0.0 ? q.time_tolerance : 1e-4 * q.t_max;
    for (int it = 0; it < 40 && hi - lo > tol_t; ++it) {
        const double mid = 0.5 * (lo + hi);
        (throughput_at(q.scenario, mid) >= q.target_bits ? hi : lo) = mid;
    }
    res.t_off = hi;
    res.solution = solve_throughput(q.scenario.with_deadline(hi));
    return res;
}

}  // namespace ehsched
