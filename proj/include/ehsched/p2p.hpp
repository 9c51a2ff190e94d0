#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ehsched/curve.hpp"
#include "ehsched/rate.hpp"
#include "ehsched/schedule.hpp"

namespace ehsched {

// Offline point-to-point kernel. At each instant the optimal power is the
// smaller of two envelope slopes looking forward to the deadline:
//
//   p(t0) = min{ r^{-1}( inf_{t0<x<=T} (B(x) - B_tx(t0)) / (x - t0) ),
//                        inf_{t0<x<=T} (E(x) - E_tx(t0)) / (x - t0) }
//
// applied cell by cell in a forward sweep over the grid, freezing the power at
// the cell-start value. The sweep keeps both causality constraints tight at
// every grid instant, which makes the result throughput-maximal and
// energy-minimal among maximizers in the grid limit.
inline Schedule solve_p2p_on_grid(const PiecewiseCurve& energy, const PiecewiseCurve& data,
                                  const RateFunction& r, std::vector<double> grid) {
    const std::size_t n = grid.size();
    if (n < 2) throw std::invalid_argument("solve_p2p: grid needs at least one cell");
    std::vector<double> ev(n), bv(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev[i] = energy.value(grid[i]);
        bv[i] = data.value(grid[i]);
    }

    std::vector<double> p(n - 1, 0.0), etx(n, 0.0), btx(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t0 = grid[i];
        double inf_e = std::numeric_limits<double>::infinity();
        double inf_b = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double inv_dt = 1.0 / (grid[j] - t0);
            inf_e = std::min(inf_e, (ev[j] - etx[i]) * inv_dt);
            inf_b = std::min(inf_b, (bv[j] - btx[i]) * inv_dt);
        }
        const double power = std::max(0.0, std::min(r.inverse(std::max(0.0, inf_b)), inf_e));
        const double dt = grid[i + 1] - t0;
        p[i] = power;
        etx[i + 1] = etx[i] + power * dt;
        btx[i + 1] = btx[i] + r.rate(power) * dt;
    }

    Schedule s;
    s.t = std::move(grid);
    s.power = std::move(p);
    s.energy_tx = std::move(etx);
    s.data_tx = std::move(btx);
    return s;
}

inline Schedule solve_p2p(const PiecewiseCurve& energy, const PiecewiseCurve& data,
                          const RateFunction& r, double deadline, std::size_t cells = 4000) {
    if (!(deadline > 0.0)) throw std::invalid_argument("solve_p2p: deadline must be positive");
    auto breaks = energy.breakpoints();
    for (double b : data.breakpoints()) breaks.push_back(b);
    return solve_p2p_on_grid(energy, data, r, make_grid(deadline, cells, breaks));
}

}  // namespace ehsched
