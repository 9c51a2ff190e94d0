#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ehsched/multihop.hpp"
#include "ehsched/rate.hpp"

namespace ehsched {

// Tiny slotted instance for exhaustive verification. Availability vectors are
// cumulative amounts usable through the end of each slot, sampled
// conservatively at slot starts.
struct SlottedInstance {
    double slot_len = 0.0;
    std::vector<double> source_energy;  // size n_slots
    std::vector<double> relay_energy;   // empty for single-hop instances
    std::vector<double> source_data;    // size n_slots
    std::vector<double> power_grid;     // sorted ascending, includes 0

    std::size_t n_slots() const { return source_energy.size(); }

    void check_limits() const {
        if (n_slots() == 0 || n_slots() > 6)
            throw std::invalid_argument("oracle: instance too large (slots must be 1..6)");
        if (power_grid.empty() || power_grid.size() > 12)
            throw std::invalid_argument("oracle: instance too large (power grid must be 1..12)");
        if (!relay_energy.empty() && relay_energy.size() != n_slots())
            throw std::invalid_argument("oracle: relay energy vector length mismatch");
        if (source_data.size() != n_slots())
            throw std::invalid_argument("oracle: data vector length mismatch");
    }
};

inline SlottedInstance slot_from_scenario(const Scenario& sc, std::size_t n_slots,
                                          std::vector<double> power_grid) {
    if (sc.nodes.size() > 2)
        throw std::invalid_argument("oracle: only single- and two-hop scenarios supported");
    SlottedInstance inst;
    inst.slot_len = sc.deadline / static_cast<double>(n_slots);
    std::sort(power_grid.begin(), power_grid.end());
    inst.power_grid = std::move(power_grid);
    for (std::size_t i = 0; i < n_slots; ++i) {
        const double t = static_cast<double>(i) * inst.slot_len;
        inst.source_energy.push_back(sc.nodes[0].harvest.value(t));
        if (sc.nodes.size() == 2) inst.relay_energy.push_back(sc.nodes[1].harvest.value(t));
        inst.source_data.push_back(sc.arrival.value(t));
    }
    inst.check_limits();
    return inst;
}

namespace detail {

inline double oracle_tol(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

// Best delivered amount for one node given cumulative energy/data caps, by
// depth-first search over the power grid, highest power first, with an
// optimistic-tail bound. `tail[i]` is the most data slots i.. could add.
struct NodeSearch {
    const SlottedInstance& inst;
    const std::vector<double>& energy_avail;
    const std::vector<double>& data_avail;
    const RateFunction& rate;
    std::vector<double> tail;

    double best = -1.0;
    double best_energy = 0.0;
    std::vector<double> best_vec, cur_vec;

    NodeSearch(const SlottedInstance& in, const std::vector<double>& ea,
               const std::vector<double>& da, const RateFunction& r)
        : inst(in), energy_avail(ea), data_avail(da), rate(r) {
        const double top = rate.rate(inst.power_grid.back()) * inst.slot_len;
        tail.assign(inst.n_slots() + 1, 0.0);
        for (std::size_t i = inst.n_slots(); i-- > 0;) tail[i] = tail[i + 1] + top;
        cur_vec.assign(inst.n_slots(), 0.0);
        best_vec = cur_vec;
    }

    void run() { dfs(0, 0.0, 0.0); }

    void dfs(std::size_t slot, double e_used, double d_sent) {
        if (slot == inst.n_slots()) {
            const double tol = oracle_tol(best);
            if (d_sent > best + tol ||
                (d_sent > best - tol && e_used < best_energy - tol)) {
                if (d_sent > best) best = d_sent;
                best_energy = e_used;
                best_vec = cur_vec;
            }
            return;
        }
        if (d_sent + tail[slot] < best - oracle_tol(best)) return;
        const double dt = inst.slot_len;
        const double etol = oracle_tol(energy_avail.back());
        const double dtol = oracle_tol(data_avail.back());
        for (std::size_t pi = inst.power_grid.size(); pi-- > 0;) {
            const double p = inst.power_grid[pi];
            const double e2 = e_used + p * dt;
            if (e2 > energy_avail[slot] + etol) continue;
            const double d2 = d_sent + rate.rate(p) * dt;
            if (d2 > data_avail[slot] + dtol) continue;
            cur_vec[slot] = p;
            dfs(slot + 1, e2, d2);
        }
        cur_vec[slot] = 0.0;
    }
};

}  // namespace detail

struct SingleHopOracleResult {
    double delivered = 0.0;
    std::vector<double> powers;
    double min_energy = 0.0;  // minimum spend among throughput maximizers
};

inline SingleHopOracleResult brute_force_single_hop(const SlottedInstance& inst,
                                                    const RateFunction& r) {
    inst.check_limits();
    detail::NodeSearch search(inst, inst.source_energy, inst.source_data, r);
    search.run();
    return {search.best, search.best_vec, search.best_energy};
}

struct TwoHopOracleResult {
    double delivered = 0.0;
    std::vector<double> source_powers;
    std::vector<double> relay_powers;
    double min_source_energy = 0.0;  // among policies achieving `delivered`
};

// Exhaustive two-hop search: every feasible source vector is expanded, the
// relay is solved against the resulting arrival data, and the best pair
// maximizes delivered data, breaking ties toward minimum source energy.
inline TwoHopOracleResult brute_force_two_hop(const SlottedInstance& inst,
                                              const RateFunction& r_sr,
                                              const RateFunction& r_rd) {
    inst.check_limits();
    if (inst.relay_energy.empty())
        throw std::invalid_argument("oracle: two-hop search needs relay energy");

    TwoHopOracleResult best;
    best.delivered = -1.0;
    const std::size_t n = inst.n_slots();
    std::vector<double> svec(n, 0.0), arrival(n, 0.0);

    // Recursive source enumeration; each complete source vector triggers a
    // bounded relay search against its arrival curve.
    auto dfs = [&](auto&& self, std::size_t slot, double e_used, double d_sent) -> void {
        if (slot == n) {
            detail::NodeSearch relay(inst, inst.relay_energy, arrival, r_rd);
            relay.run();
            const double tol = detail::oracle_tol(best.delivered);
            const bool better = relay.best > best.delivered + tol;
            const bool tied_cheaper = relay.best > best.delivered - tol &&
                                      e_used < best.min_source_energy - tol;
            if (better || tied_cheaper) {
                if (relay.best > best.delivered) best.delivered = relay.best;
                best.source_powers = svec;
                best.relay_powers = relay.best_vec;
                best.min_source_energy = e_used;
            }
            return;
        }
        const double dt = inst.slot_len;
        const double etol = detail::oracle_tol(inst.source_energy.back());
        const double dtol = detail::oracle_tol(inst.source_data.back());
        for (std::size_t pi = inst.power_grid.size(); pi-- > 0;) {
            const double p = inst.power_grid[pi];
            const double e2 = e_used + p * dt;
            if (e2 > inst.source_energy[slot] + etol) continue;
            const double d2 = d_sent + r_sr.rate(p) * dt;
            if (d2 > inst.source_data[slot] + dtol) continue;
            svec[slot] = p;
            arrival[slot] = d2;
            self(self, slot + 1, e2, d2);
        }
        svec[slot] = 0.0;
    };
    dfs(dfs, 0, 0.0, 0.0);
    return best;
}

}  // namespace ehsched
