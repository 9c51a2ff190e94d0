#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ehsched/curve.hpp"
#include "ehsched/rate.hpp"

namespace ehsched {

// One node's transmission plan on a time grid. Power is constant within each
// grid cell; the cumulative curves are sampled at the grid instants, so
// energy_tx[i] = sum p_j * dt_j and data_tx[i] = sum r(p_j) * dt_j over j < i.
struct Schedule {
    std::vector<double> t;
    std::vector<double> power;      // size t.size() - 1
    std::vector<double> energy_tx;  // size t.size(), energy_tx[0] = 0
    std::vector<double> data_tx;    // size t.size(), data_tx[0] = 0

    double horizon() const { return t.back(); }
    double delivered() const { return data_tx.back(); }
    double energy_used() const { return energy_tx.back(); }

    static Schedule zero(std::vector<double> grid) {
        Schedule s;
        s.power.assign(grid.size() - 1, 0.0);
        s.energy_tx.assign(grid.size(), 0.0);
        s.data_tx.assign(grid.size(), 0.0);
        s.t = std::move(grid);
        return s;
    }

    // Rebuild the cumulative curves from the power cells.
    static Schedule from_power(std::vector<double> grid, std::vector<double> p,
                               const RateFunction& r) {
        if (p.size() + 1 != grid.size())
            throw std::invalid_argument("schedule: power cells must match grid");
        Schedule s;
        s.energy_tx.assign(grid.size(), 0.0);
        s.data_tx.assign(grid.size(), 0.0);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double dt = grid[i + 1] - grid[i];
            s.energy_tx[i + 1] = s.energy_tx[i] + p[i] * dt;
            s.data_tx[i + 1] = s.data_tx[i] + r.rate(p[i]) * dt;
        }
        s.t = std::move(grid);
        s.power = std::move(p);
        return s;
    }

    // Schedule whose transmitted data curve matches the given cumulative
    // samples; power per cell recovered through the inverse rate law.
    static Schedule from_data_curve(std::vector<double> grid, const std::vector<double>& data,
                                    const RateFunction& r) {
        if (data.size() != grid.size())
            throw std::invalid_argument("schedule: data samples must match grid");
        Schedule s;
        s.power.assign(grid.size() - 1, 0.0);
        s.energy_tx.assign(grid.size(), 0.0);
        s.data_tx = data;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double dt = grid[i + 1] - grid[i];
            const double slope = (data[i + 1] - data[i]) / dt;
            if (slope < -1e-9 * std::max(1.0, std::abs(data[i])))
                throw std::invalid_argument("schedule: decreasing data curve");
            s.power[i] = r.inverse(std::max(0.0, slope));
            s.energy_tx[i + 1] = s.energy_tx[i] + s.power[i] * dt;
        }
        s.t = std::move(grid);
        return s;
    }
};

struct FeasibilityReport {
    double max_energy_violation = 0.0;  // max over grid of energy_tx - E
    double max_data_violation = 0.0;    // max over grid of data_tx - B
    double energy_tol = 0.0;
    double data_tol = 0.0;
    bool pass = false;
};

// Causality check against the availability curves, sampled on the schedule's
// own grid. Tolerance scales with the curve magnitudes.
inline FeasibilityReport check_feasible(const Schedule& s, const PiecewiseCurve& energy,
                                        const PiecewiseCurve& data) {
    FeasibilityReport rep;
    double escale = 1.0, dscale = 1.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        const double ev = energy.value(s.t[i]);
        const double dv = data.value(s.t[i]);
        escale = std::max(escale, std::abs(ev));
        dscale = std::max(dscale, std::abs(dv));
        rep.max_energy_violation = std::max(rep.max_energy_violation, s.energy_tx[i] - ev);
        rep.max_data_violation = std::max(rep.max_data_violation, s.data_tx[i] - dv);
    }
    rep.energy_tol = 1e-6 * escale;
    rep.data_tol = 1e-6 * dscale;
    rep.pass = rep.max_energy_violation <= rep.energy_tol &&
               rep.max_data_violation <= rep.data_tol;
    return rep;
}

// Energy needed to realize a cumulative data curve: sum of r^{-1}(slope) * dt
// over the grid cells.
inline double energy_of_data_curve(const std::vector<double>& t,
                                   const std::vector<double>& data,
                                   const RateFunction& r) {
    if (t.size() != data.size() || t.size() < 2)
        throw std::invalid_argument("energy_of_data_curve: bad sample vectors");
    double scale = 1.0;
    for (double v : data) scale = std::max(scale, std::abs(v));
    double energy = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double dt = t[i + 1] - t[i];
        const double slope = (data[i + 1] - data[i]) / dt;
        if (slope < -1e-9 * scale)
            throw std::invalid_argument("energy_of_data_curve: decreasing data curve");
        energy += r.inverse(std::max(0.0, slope)) * dt;
    }
    return energy;
}

inline double energy_of_data_curve(const PiecewiseCurve& c, const RateFunction& r,
                                   std::size_t cells = 4000) {
    const auto g = c.grid(cells);
    return energy_of_data_curve(g, c.sample(g), r);
}

}  // namespace ehsched
