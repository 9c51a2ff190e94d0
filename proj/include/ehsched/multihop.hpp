#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ehsched/curve.hpp"
#include "ehsched/p2p.hpp"
#include "ehsched/rate.hpp"
#include "ehsched/schedule.hpp"

namespace ehsched {

struct NodeSpec {
    std::string name;
    PiecewiseCurve harvest;  // E_i(t)
};

// Full problem instance. `nodes` lists the transmitting nodes in chain order
// (source first); the receiver is implicit. rates[i] is the law of the hop
// leaving node i. `arrival` is the source's arrived-data curve B_s(t).
struct Scenario {
    std::string name;
    std::vector<NodeSpec> nodes;
    PiecewiseCurve arrival;
    std::vector<RateFunction> rates;
    double deadline = 0.0;
    std::size_t cells = 4000;
    double epsilon = 0.0;  // 0 means the default 1e-5 * deadline

    std::size_t hop_count() const { return nodes.size(); }

    double effective_epsilon() const {
        return epsilon > 0.0 ? epsilon : 1e-5 * deadline;
    }

    Scenario with_deadline(double t) const {
        Scenario sc = *this;
        sc.deadline = t;
        return sc;
    }

    void validate() const {
        if (nodes.empty()) throw std::invalid_argument("scenario: needs at least one hop");
        if (rates.size() != nodes.size())
            throw std::invalid_argument("scenario: one rate law per transmitting node");
        if (!(deadline > 0.0)) throw std::invalid_argument("scenario: deadline must be positive");
        if (cells < 2) throw std::invalid_argument("scenario: grid too coarse");
        for (const auto& node : nodes) {
            if (node.harvest.domain_end() + 1e-12 < deadline)
                throw std::invalid_argument("scenario: harvest curve domain shorter than deadline");
            node.harvest.validate();
        }
        if (arrival.domain_end() + 1e-12 < deadline)
            throw std::invalid_argument("scenario: arrival curve domain shorter than deadline");
        arrival.validate();
    }

    // Shared grid for all hops: uniform cells unioned with every curve's
    // breakpoints, so propagated transmitted curves stay exact at grid points.
    std::vector<double> grid() const {
        std::vector<double> breaks = arrival.breakpoints();
        for (const auto& node : nodes)
            for (double b : node.harvest.breakpoints()) breaks.push_back(b);
        return make_grid(deadline, cells, breaks);
    }
};

struct MultiHopSolution {
    std::vector<Schedule> schedules;               // one per transmitting node
    std::vector<std::optional<TangentLine>> tangents;  // set for energy-minimized nodes
    double delivered = 0.0;                        // data at the receiver by T

    std::vector<double> node_energy() const {
        std::vector<double> e;
        e.reserve(schedules.size());
        for (const auto& s : schedules) e.push_back(s.energy_used());
        return e;
    }
};

struct SolveOptions {
    // Run the backward tangent pass that minimizes utilized energy at every
    // node upstream of the last hop, keeping the delivered data unchanged.
    bool minimize_upstream_energy = true;
};

// Energy-minimal replacement for a hop's throughput-optimal schedule when only
// `delivered_total` of it is actually consumed downstream: follow the optimal
// transmitted curve until the tangent touch instant, then ride the tangent
// line into (T, delivered_total).
inline std::pair<Schedule, TangentLine> minimize_source_energy(const Schedule& upstream,
                                                               double delivered_total,
                                                               const RateFunction& r) {
    double scale = std::max(1.0, std::abs(upstream.delivered()));
    if (delivered_total > upstream.delivered() + 1e-9 * scale)
        throw std::invalid_argument("minimize_source_energy: target exceeds achievable data");

    const auto uniform = make_grid(upstream.horizon(), upstream.t.size() - 1);
    std::vector<double> uv(uniform.size());
    for (std::size_t i = 0; i < uniform.size(); ++i) {
        // Linear interpolation of the schedule's transmitted data curve.
        const auto& t = upstream.t;
        auto it = std::lower_bound(t.begin(), t.end(), uniform[i]);
        std::size_t j = static_cast<std::size_t>(it - t.begin());
        if (j == 0) {
            uv[i] = upstream.data_tx[0];
        } else if (j >= t.size()) {
            uv[i] = upstream.data_tx.back();
        } else {
            const double w = (uniform[i] - t[j - 1]) / (t[j] - t[j - 1]);
            uv[i] = upstream.data_tx[j - 1] + w * (upstream.data_tx[j] - upstream.data_tx[j - 1]);
        }
    }
    require_convex(uv, 1e-9);

    const TangentLine line = tangent_from_grid(upstream.t, upstream.data_tx, delivered_total);
    std::vector<double> hat(upstream.t.size());
    for (std::size_t i = 0; i < upstream.t.size(); ++i) {
        hat[i] = upstream.t[i] <= line.touch_time ? upstream.data_tx[i]
                                                  : line.at(upstream.t[i]);
    }
    return {Schedule::from_data_curve(upstream.t, hat, r), line};
}

// Offline optimum for the whole chain. Forward pass: solve each hop as a
// point-to-point problem, feeding the transmitted data curve onward as the
// next node's arrival curve. Backward pass: one reverse sweep of tangent-line
// energy minimization anchored at what the downstream node actually sends.
inline MultiHopSolution solve_throughput(const Scenario& sc, const SolveOptions& opts = {}) {
    sc.validate();
    const auto grid = sc.grid();

    MultiHopSolution sol;
    sol.schedules.reserve(sc.nodes.size());
    sol.tangents.assign(sc.nodes.size(), std::nullopt);

    PiecewiseCurve incoming = sc.arrival;
    for (std::size_t i = 0; i < sc.nodes.size(); ++i) {
        Schedule s = solve_p2p_on_grid(sc.nodes[i].harvest, incoming, sc.rates[i], grid);
        if (i + 1 < sc.nodes.size())
            incoming = PiecewiseCurve::from_samples(s.t, s.data_tx, sc.deadline);
        sol.schedules.push_back(std::move(s));
    }
    sol.delivered = sol.schedules.back().delivered();

    if (opts.minimize_upstream_energy && sc.nodes.size() > 1) {
        double downstream_total = sol.delivered;
        for (std::size_t i = sc.nodes.size() - 1; i-- > 0;) {
            auto [hat, line] =
                minimize_source_energy(sol.schedules[i], downstream_total, sc.rates[i]);
            sol.schedules[i] = std::move(hat);
            sol.tangents[i] = line;
            downstream_total = sol.schedules[i].delivered();
        }
    }
    return sol;
}

}  // namespace ehsched
