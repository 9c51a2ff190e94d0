#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ehsched/multihop.hpp"
#include "ehsched/rate.hpp"
#include "ehsched/schedule.hpp"

namespace ehsched {

// Curve view handed to the online runner: evaluation past the current instant
// throws, so a causal policy cannot read the future even by accident.
class CausalCurveView {
public:
    explicit CausalCurveView(const PiecewiseCurve& c) : curve_(&c) {}

    void advance(double t) { now_ = std::max(now_, t); }
    double now() const { return now_; }

    double value(double t) const {
        if (t > now_ + 1e-12 * std::max(1.0, curve_->domain_end()))
            throw std::logic_error("causal view: evaluation beyond current time");
        return curve_->value(t);
    }

private:
    const PiecewiseCurve* curve_;
    double now_ = 0.0;
};

// Source rule: drain whichever of remaining data / remaining energy binds
// first at a fixed rate over the time left.
inline double source_power(double data_rem, double energy_rem, double ttg_eps,
                           const RateFunction& r) {
    const double by_data = r.inverse(std::max(0.0, data_rem) / ttg_eps);
    const double by_energy = std::max(0.0, energy_rem) / ttg_eps;
    return std::min(by_data, by_energy);
}

enum class OnlineBranch { data_remaining, arrival, energy };

// Relay rule: data can come from the backlog or from what the upstream node
// is sending right now, so the data-limited rate is the larger of the two;
// energy still caps the result.
inline double relay_power(double data_rem, double energy_rem, double ttg_eps,
                          double p_upstream, const RateFunction& r_up,
                          const RateFunction& r_down,
                          OnlineBranch* active = nullptr) {
    const double backlog = r_down.inverse(std::max(0.0, data_rem) / ttg_eps);
    const double arrival = r_down.inverse(r_up.rate(p_upstream));
    const double by_energy = std::max(0.0, energy_rem) / ttg_eps;
    const double by_data = std::max(backlog, arrival);
    if (active) {
        if (by_energy < by_data) *active = OnlineBranch::energy;
        else if (arrival > backlog) *active = OnlineBranch::arrival;
        else *active = OnlineBranch::data_remaining;
    }
    return std::min(by_data, by_energy);
}

enum class OnlineVariant { proposed, benchmark };

struct OnlineResult {
    std::vector<Schedule> schedules;            // one per transmitting node
    std::vector<std::vector<double>> switches;  // per relay: branch switch instants
    double delivered = 0.0;
};

// Causal forward simulation of the whole chain; powers recomputed every grid
// step. The benchmark variant applies the source rule at the relays as well
// (no arrival branch).
inline OnlineResult run_online(const Scenario& sc, double epsilon, OnlineVariant variant) {
    sc.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("run_online: epsilon must be positive");
    const auto grid = sc.grid();
    const std::size_t n_nodes = sc.nodes.size();
    const std::size_t n = grid.size();
    const double T = sc.deadline;

    std::vector<CausalCurveView> harvest;
    harvest.reserve(n_nodes);
    for (const auto& node : sc.nodes) harvest.emplace_back(node.harvest);
    CausalCurveView arrival(sc.arrival);

    OnlineResult res;
    res.schedules.assign(n_nodes, Schedule::zero(grid));
    res.switches.assign(n_nodes, {});
    std::vector<OnlineBranch> last_branch(n_nodes, OnlineBranch::data_remaining);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t = grid[i];
        const double dt = grid[i + 1] - t;
        const double ttg = T - t + epsilon;
        arrival.advance(t);
        for (auto& view : harvest) view.advance(t);

        double p_upstream = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            Schedule& s = res.schedules[k];
            const double sent_to_k =
                k == 0 ? arrival.value(t) : res.schedules[k - 1].data_tx[i];
            const double data_rem = sent_to_k - s.data_tx[i];
            const double energy_rem = harvest[k].value(t) - s.energy_tx[i];

            double p = 0.0;
            if (k == 0 || variant == OnlineVariant::benchmark) {
                p = source_power(data_rem, energy_rem, ttg, sc.rates[k]);
            } else {
                OnlineBranch branch;
                p = relay_power(data_rem, energy_rem, ttg, p_upstream, sc.rates[k - 1],
                                sc.rates[k], &branch);
                if (i > 0 && branch != last_branch[k]) res.switches[k].push_back(t);
                last_branch[k] = branch;
            }
            s.power[i] = p;
            s.energy_tx[i + 1] = s.energy_tx[i] + p * dt;
            s.data_tx[i + 1] = s.data_tx[i] + sc.rates[k].rate(p) * dt;
            p_upstream = p;
        }
    }
    res.delivered = res.schedules.back().delivered();
    return res;
}

}  // namespace ehsched
