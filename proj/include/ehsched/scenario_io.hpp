#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ehsched/multihop.hpp"
#include "ehsched/online.hpp"

namespace ehsched {

using nlohmann::json;

// Scenario file problem with an optional 1-based line anchor (set for
// syntax-level failures).
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                      : std::move(msg)),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Round through the fixed 12-significant-digit text form so summaries carry
// the same precision as the CSV tables.
inline double round12(double v) { return std::stod(fmt12(v)); }

// ---------------------------------------------------------------------------
// Curve and rate-law (de)serialization
// ---------------------------------------------------------------------------

inline json term_to_json(const CurveTerm& term) {
    json j;
    if (const auto* p = std::get_if<PolyTerm>(&term)) {
        j = {{"kind", "poly"}, {"c", p->c}, {"k", p->k}, {"shift", p->shift}};
    } else if (const auto* e = std::get_if<ExpTerm>(&term)) {
        j = {{"kind", "exp"}, {"c", e->c}, {"a", e->a}, {"k", e->k}};
    } else if (const auto* s = std::get_if<StepTerm>(&term)) {
        j = {{"kind", "step"}, {"amount", s->amount}, {"at", s->at}};
    } else {
        const auto& pts = std::get<PwlTerm>(term).points;
        json arr = json::array();
        for (const auto& [t, v] : pts) arr.push_back({t, v});
        j = {{"kind", "pwl"}, {"points", arr}};
    }
    return j;
}

inline CurveTerm term_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        throw ScenarioError(where + ": curve term needs a \"kind\"");
    const std::string kind = j.at("kind");
    try {
        if (kind == "poly")
            return PolyTerm{j.at("c").get<double>(), j.at("k").get<int>(),
                            j.value("shift", 0.0)};
        if (kind == "exp")
            return ExpTerm{j.at("c").get<double>(), j.at("a").get<double>(),
                           j.value("k", 1)};
        if (kind == "step")
            return StepTerm{j.at("amount").get<double>(), j.at("at").get<double>()};
        if (kind == "pwl") {
            PwlTerm pwl;
            for (const auto& pt : j.at("points"))
                pwl.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
            return pwl;
        }
    } catch (const json::exception& e) {
        throw ScenarioError(where + ": bad term parameters (" + e.what() + ")");
    }
    throw ScenarioError(where + ": unknown term kind \"" + kind + "\"");
}

inline PiecewiseCurve curve_from_json(const json& j, double domain_end,
                                      const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ScenarioError(where + ": curve must be a non-empty list of terms");
    std::vector<CurveTerm> terms;
    for (std::size_t i = 0; i < j.size(); ++i)
        terms.push_back(term_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    try {
        PiecewiseCurve c(std::move(terms), domain_end);
        c.validate();
        return c;
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(where + ": " + e.what());
    }
}

inline json curve_to_json(const PiecewiseCurve& c) {
    json arr = json::array();
    for (const auto& term : c.terms()) arr.push_back(term_to_json(term));
    return arr;
}

inline RateFunction rate_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("name"))
        throw ScenarioError(where + ": rate law needs a \"name\"");
    const std::string name = j.at("name");
    if (name == "shannon") return RateFunction::shannon();
    if (name == "linear") return RateFunction::linear();
    if (name == "sqrt") return RateFunction::sqrt_law();
    if (name == "custom") {
        if (!j.contains("points"))
            throw ScenarioError(where + ": custom rate law needs \"points\"");
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : j.at("points"))
            pts.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        try {
            return RateFunction::custom(std::move(pts));
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(where + ": " + e.what());
        }
    }
    throw ScenarioError(where + ": unknown rate law \"" + name + "\"");
}

inline json rate_to_json(const RateFunction& r) {
    json j = {{"name", r.name()}};
    if (!r.custom_points().empty()) {
        json arr = json::array();
        for (const auto& [p, v] : r.custom_points()) arr.push_back({p, v});
        j["points"] = arr;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

inline Scenario scenario_from_json(const json& j, double horizon_override = 0.0) {
    Scenario sc;
    try {
        sc.name = j.value("name", "scenario");
        sc.deadline = j.at("deadline").get<double>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("missing or bad \"deadline\" (") + e.what() + ")");
    }
    if (!(sc.deadline > 0.0)) throw ScenarioError("\"deadline\" must be positive");
    const double horizon = std::max(sc.deadline, horizon_override);

    if (j.contains("dt")) {
        const double dt = j.at("dt").get<double>();
        if (!(dt > 0.0) || dt > sc.deadline) throw ScenarioError("\"dt\" must be in (0, deadline]");
        sc.cells = static_cast<std::size_t>(std::max(2.0, std::round(sc.deadline / dt)));
    }
    if (j.contains("epsilon")) {
        sc.epsilon = j.at("epsilon").get<double>();
        if (!(sc.epsilon > 0.0)) throw ScenarioError("\"epsilon\" must be positive");
    }

    if (!j.contains("nodes") || !j.at("nodes").is_array() || j.at("nodes").empty())
        throw ScenarioError("\"nodes\" must list at least the source node");
    const auto& nodes = j.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "]";
        if (!nodes[i].contains("harvest"))
            throw ScenarioError(where + ": missing \"harvest\" curve");
        NodeSpec node;
        node.name = nodes[i].value("name", "node" + std::to_string(i));
        node.harvest = curve_from_json(nodes[i].at("harvest"), horizon, where + ".harvest");
        sc.nodes.push_back(std::move(node));
    }

    if (!j.contains("arrival"))
        throw ScenarioError("missing \"arrival\" curve for the source");
    sc.arrival = curve_from_json(j.at("arrival"), horizon, "arrival");

    if (!j.contains("hops") || !j.at("hops").is_array())
        throw ScenarioError("\"hops\" must list one rate law per transmitting node");
    const auto& hops = j.at("hops");
    if (hops.size() != sc.nodes.size())
        throw ScenarioError("\"hops\" length must equal \"nodes\" length (got " +
                            std::to_string(hops.size()) + " hops for " +
                            std::to_string(sc.nodes.size()) + " nodes)");
    for (std::size_t i = 0; i < hops.size(); ++i) {
        const std::string where = "hops[" + std::to_string(i) + "]";
        if (!hops[i].contains("rate")) throw ScenarioError(where + ": missing \"rate\"");
        sc.rates.push_back(rate_from_json(hops[i].at("rate"), where + ".rate"));
    }
    sc.validate();
    return sc;
}

inline Scenario load_scenario(const std::string& path, double horizon_override = 0.0) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ScenarioError(std::string("invalid scenario file: ") + e.what(), line);
    }
    return scenario_from_json(j, horizon_override);
}

inline json scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["deadline"] = sc.deadline;
    j["dt"] = sc.deadline / static_cast<double>(sc.cells);
    if (sc.epsilon > 0.0) j["epsilon"] = sc.epsilon;
    j["nodes"] = json::array();
    for (const auto& node : sc.nodes)
        j["nodes"].push_back({{"name", node.name}, {"harvest", curve_to_json(node.harvest)}});
    j["arrival"] = curve_to_json(sc.arrival);
    j["hops"] = json::array();
    for (const auto& r : sc.rates) j["hops"].push_back({{"rate", rate_to_json(r)}});
    return j;
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ScenarioError("cannot write scenario file: " + path);
    out << scenario_to_json(sc).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Builtin paper scenarios
// ---------------------------------------------------------------------------

inline Scenario builtin_scenario(const std::string& id) {
    const auto poly = [](double c, int k, double shift = 0.0) {
        return CurveTerm{PolyTerm{c, k, shift}};
    };
    Scenario sc;
    sc.rates = {RateFunction::shannon(), RateFunction::shannon()};
    if (id == "ex1") {
        sc.name = "ex1";
        sc.deadline = 0.6;
        sc.nodes = {{"source", PiecewiseCurve({poly(100.0, 2), poly(1.0, 0)}, sc.deadline)},
                    {"relay", PiecewiseCurve({CurveTerm{ExpTerm{0.5, 7.0, 1}}, poly(-0.5, 0)},
                                             sc.deadline)}};
        sc.arrival = PiecewiseCurve({poly(10.0, 2), poly(0.1, 0)}, sc.deadline);
    } else if (id == "ex2") {
        sc.name = "ex2";
        sc.deadline = 1.9;
        sc.nodes = {{"source", PiecewiseCurve({poly(3.5, 5, 1.0), poly(3.5, 0)}, sc.deadline)},
                    {"relay", PiecewiseCurve({poly(0.45, 4)}, sc.deadline)}};
        sc.arrival = PiecewiseCurve({poly(2.0, 5, 1.0), poly(2.0, 0)}, sc.deadline);
    } else if (id == "ex3") {
        sc.name = "ex3";
        sc.deadline = 2.0;
        sc.epsilon = 1e-5;
        sc.nodes = {{"source", PiecewiseCurve({poly(80.0, 3, 1.0), poly(80.0, 0)}, sc.deadline)},
                    {"relay", PiecewiseCurve({CurveTerm{ExpTerm{1.0, 1.0, 3}}}, sc.deadline)}};
        sc.arrival = PiecewiseCurve({poly(3.5, 3, 1.0), poly(3.5, 0)}, sc.deadline);
    } else {
        throw ScenarioError("unknown builtin scenario \"" + id + "\" (expected ex1|ex2|ex3)");
    }
    sc.validate();
    return sc;
}

// ---------------------------------------------------------------------------
// Result emission
// ---------------------------------------------------------------------------

// Time-series table: one row per grid instant with per-node power, transmitted
// energy/data, sampled input curves, and the source arrival curve.
inline void write_timeseries(std::ostream& out, const Scenario& sc,
                             const std::vector<Schedule>& schedules) {
    const std::size_t k = schedules.size();
    out << "t";
    for (std::size_t j = 0; j < k; ++j) out << ",p_node" << j;
    for (std::size_t j = 0; j < k; ++j) out << ",E_tx_node" << j;
    for (std::size_t j = 0; j < k; ++j) out << ",B_tx_node" << j;
    for (std::size_t j = 0; j < k; ++j) out << ",E_in_node" << j;
    out << ",B_in_source\n";
    const auto& t = schedules.front().t;
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << fmt12(t[i]);
        for (const auto& s : schedules)
            out << "," << fmt12(s.power[std::min(i, s.power.size() - 1)]);
        for (const auto& s : schedules) out << "," << fmt12(s.energy_tx[i]);
        for (const auto& s : schedules) out << "," << fmt12(s.data_tx[i]);
        for (std::size_t j = 0; j < k; ++j)
            out << "," << fmt12(sc.nodes[j].harvest.value(t[i]));
        out << "," << fmt12(sc.arrival.value(t[i])) << "\n";
    }
}

// Three-way comparison of delivered-data curves (offline vs the two online
// variants) plus the last node's spent energy for each online variant.
inline void write_compare(std::ostream& out, const MultiHopSolution& offline,
                          const OnlineResult& proposed, const OnlineResult& benchmark) {
    out << "t,B_out_offline,B_out_online_proposed,B_out_online_benchmark,"
           "E_last_online_proposed,E_last_online_benchmark\n";
    const auto& t = offline.schedules.back().t;
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << fmt12(t[i]) << "," << fmt12(offline.schedules.back().data_tx[i]) << ","
            << fmt12(proposed.schedules.back().data_tx[i]) << ","
            << fmt12(benchmark.schedules.back().data_tx[i]) << ","
            << fmt12(proposed.schedules.back().energy_tx[i]) << ","
            << fmt12(benchmark.schedules.back().energy_tx[i]) << "\n";
    }
}

inline json summary_json(const Scenario& sc, const MultiHopSolution& sol) {
    json j;
    j["scenario"] = sc.name;
    j["deadline_s"] = round12(sc.deadline);
    j["delivered_bits"] = round12(sol.delivered);
    json energy = json::array();
    for (double e : sol.node_energy()) energy.push_back(round12(e));
    j["node_energy_J"] = energy;
    json tangents = json::array();
    for (std::size_t i = 0; i < sol.tangents.size(); ++i)
        if (sol.tangents[i])
            tangents.push_back({{"node", i},
                                {"slope", round12(sol.tangents[i]->slope)},
                                {"intercept", round12(sol.tangents[i]->intercept)},
                                {"touch_time", round12(sol.tangents[i]->touch_time)}});
    j["tangents"] = tangents;
    return j;
}

inline json summary_json(const Scenario& sc, const OnlineResult& res, double epsilon,
                         const std::string& variant) {
    json j;
    j["scenario"] = sc.name;
    j["deadline_s"] = round12(sc.deadline);
    j["variant"] = variant;
    j["epsilon_s"] = round12(epsilon);
    j["delivered_bits"] = round12(res.delivered);
    json energy = json::array();
    for (const auto& s : res.schedules) energy.push_back(round12(s.energy_used()));
    j["node_energy_J"] = energy;
    json switches = json::array();
    for (std::size_t k = 0; k < res.switches.size(); ++k) {
        if (res.switches[k].empty()) continue;
        json arr = json::array();
        for (double t : res.switches[k]) arr.push_back(round12(t));
        switches.push_back({{"node", k}, {"instants", arr}});
    }
    j["switch_instants"] = switches;
    return j;
}

}  // namespace ehsched
