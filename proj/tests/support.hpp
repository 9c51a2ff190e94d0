#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ehsched/ehsched.hpp"

namespace ehsched::testing {

inline std::mt19937 make_rng(unsigned seed) { return std::mt19937(seed); }

// Convex nondecreasing cumulative curve from 0 to `total` on `grid`:
// nondecreasing slopes drawn at random and sorted.
inline std::vector<double> random_convex_data(std::mt19937& rng,
                                              const std::vector<double>& grid,
                                              double total) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> slopes(grid.size() - 1);
    for (auto& s : slopes) s = u(rng);
    std::sort(slopes.begin(), slopes.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        area += slopes[i] * (grid[i + 1] - grid[i]);
    std::vector<double> v(grid.size(), 0.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        v[i + 1] = v[i] + slopes[i] * (grid[i + 1] - grid[i]) * total / area;
    v.back() = total;
    return v;
}

// Monotone curve below `upper` with the same endpoints: pointwise minimum of
// the upper curve and a random monotone path to the same total.
inline std::vector<double> random_monotone_below(std::mt19937& rng,
                                                 const std::vector<double>& upper) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(upper.size());
    w.front() = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) w[i] = w[i - 1] + u(rng);
    const double scale = upper.back() / w.back();
    std::vector<double> v(upper.size());
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = std::min(upper[i], w[i] * scale);
    v.back() = upper.back();
    return v;
}

// Feasible-by-construction schedule: per-cell powers clipped so both causality
// constraints hold at every grid instant. `base` scales a reference power
// profile; extra uniform noise keeps samples spread out.
inline Schedule random_feasible_schedule(std::mt19937& rng, const PiecewiseCurve& energy,
                                         const PiecewiseCurve& data, const RateFunction& r,
                                         const std::vector<double>& grid,
                                         const std::vector<double>& reference_power,
                                         double scale_lo = 0.0, double scale_hi = 2.0) {
    std::uniform_real_distribution<double> u(scale_lo, scale_hi);
    const double factor = u(rng);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    Schedule s = Schedule::zero(grid);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dt = grid[i + 1] - grid[i];
        double p = reference_power.empty() ? u(rng) : factor * jitter(rng) * reference_power[i];
        const double e_room = (energy.value(grid[i + 1]) - s.energy_tx[i]) / dt;
        const double b_room = (data.value(grid[i + 1]) - s.data_tx[i]) / dt;
        p = std::min(p, e_room);
        p = std::min(p, r.inverse(std::max(0.0, b_room)));
        p = std::max(0.0, p);
        s.power[i] = p;
        s.energy_tx[i + 1] = s.energy_tx[i] + p * dt;
        s.data_tx[i + 1] = s.data_tx[i] + r.rate(p) * dt;
    }
    return s;
}

inline Scenario remark1_scenario(std::size_t cells = 4000) {
    Scenario sc;
    sc.name = "remark1";
    sc.deadline = 1.0;
    sc.cells = cells;
    sc.nodes = {{"source",
                 PiecewiseCurve({PolyTerm{5.0, 3, 1.0}, PolyTerm{5.0, 0, 0.0}}, sc.deadline)}};
    sc.arrival = PiecewiseCurve::buffered(1e4, sc.deadline);
    sc.rates = {RateFunction::shannon()};
    return sc;
}

}  // namespace ehsched::testing
