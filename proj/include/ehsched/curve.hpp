#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ehsched {

// Cumulative curves (harvested energy, arrived data, transmitted data) are
// sums of elementary terms evaluated on [0, domain_end]. Step terms are the
// only source of discontinuities and are right-continuous: an amount that
// arrives at time `at` is usable from `at` on.

struct PolyTerm {
    double c = 0.0;
    int k = 0;
    double shift = 0.0;  // c * (t - shift)^k
};

struct ExpTerm {
    double c = 0.0;
    double a = 0.0;
    int k = 1;  // c * exp(a * t^k)
};

struct StepTerm {
    double amount = 0.0;
    double at = 0.0;  // amount * [t >= at]
};

struct PwlTerm {
    // Knots with strictly increasing times; linear in between, clamped to the
    // first/last value outside the knot range.
    std::vector<std::pair<double, double>> points;
};

using CurveTerm = std::variant<PolyTerm, ExpTerm, StepTerm, PwlTerm>;

inline double eval_term(const CurveTerm& term, double t) {
    if (const auto* p = std::get_if<PolyTerm>(&term)) {
        if (p->k == 0) return p->c;
        return p->c * std::pow(t - p->shift, p->k);
    }
    if (const auto* e = std::get_if<ExpTerm>(&term)) {
        const double arg = (e->k == 1) ? e->a * t : e->a * std::pow(t, e->k);
        return e->c * std::exp(arg);
    }
    if (const auto* s = std::get_if<StepTerm>(&term)) {
        return t >= s->at ? s->amount : 0.0;
    }
    const auto& pts = std::get<PwlTerm>(term).points;
    if (pts.empty()) return 0.0;
    if (t <= pts.front().first) return pts.front().second;
    if (t >= pts.back().first) return pts.back().second;
    auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                               [](double x, const auto& pt) { return x < pt.first; });
    auto lo = hi - 1;
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

// Uniform grid over [0, horizon] with `cells` intervals, unioned with the
// given extra instants (curve breakpoints). Sorted, deduplicated.
inline std::vector<double> make_grid(double horizon, std::size_t cells,
                                     const std::vector<double>& extra = {}) {
    if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
    if (cells == 0) throw std::invalid_argument("grid needs at least one cell");
    std::vector<double> g;
    g.reserve(cells + 1 + extra.size());
    for (std::size_t i = 0; i <= cells; ++i)
        g.push_back(horizon * static_cast<double>(i) / static_cast<double>(cells));
    for (double b : extra)
        if (b > 0.0 && b < horizon) g.push_back(b);
    std::sort(g.begin(), g.end());
    const double eps = horizon * 1e-12;
    g.erase(std::unique(g.begin(), g.end(),
                        [eps](double a, double b) { return b - a <= eps; }),
            g.end());
    g.front() = 0.0;
    g.back() = horizon;
    return g;
}

class PiecewiseCurve {
public:
    PiecewiseCurve() = default;

    PiecewiseCurve(std::vector<CurveTerm> terms, double domain_end)
        : terms_(std::move(terms)), domain_end_(domain_end) {
        if (!(domain_end_ > 0.0))
            throw std::invalid_argument("curve domain end must be positive");
        for (const auto& term : terms_) {
            if (const auto* s = std::get_if<StepTerm>(&term)) {
                if (s->amount < 0.0)
                    throw std::invalid_argument("step amounts must be nonnegative");
                breakpoints_.push_back(s->at);
            } else if (const auto* p = std::get_if<PwlTerm>(&term)) {
                for (std::size_t i = 1; i < p->points.size(); ++i)
                    if (!(p->points[i].first > p->points[i - 1].first))
                        throw std::invalid_argument("pwl knots must have increasing times");
                for (const auto& pt : p->points) breakpoints_.push_back(pt.first);
            }
        }
        std::sort(breakpoints_.begin(), breakpoints_.end());
        breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                           breakpoints_.end());
    }

    static PiecewiseCurve constant(double v, double domain_end) {
        return PiecewiseCurve({PolyTerm{v, 0, 0.0}}, domain_end);
    }

    // All of `amount` present from t = 0 (classical buffered special case).
    static PiecewiseCurve buffered(double amount, double domain_end) {
        return PiecewiseCurve({StepTerm{amount, 0.0}}, domain_end);
    }

    static PiecewiseCurve from_samples(std::vector<double> t, std::vector<double> v,
                                       double domain_end) {
        if (t.size() != v.size() || t.size() < 2)
            throw std::invalid_argument("from_samples needs matching vectors, size >= 2");
        PwlTerm pwl;
        pwl.points.reserve(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) pwl.points.emplace_back(t[i], v[i]);
        return PiecewiseCurve({CurveTerm{std::move(pwl)}}, domain_end);
    }

    double value(double t) const {
        const double slack = 1e-9 * std::max(1.0, domain_end_);
        if (t < -slack || t > domain_end_ + slack)
            throw std::domain_error("curve evaluated outside [0, domain_end]");
        double sum = 0.0;
        for (const auto& term : terms_) sum += eval_term(term, t);
        return sum;
    }

    double domain_end() const { return domain_end_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<CurveTerm>& terms() const { return terms_; }

    std::vector<double> grid(std::size_t cells) const {
        return make_grid(domain_end_, cells, breakpoints_);
    }

    std::vector<double> sample(const std::vector<double>& times) const {
        std::vector<double> v(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) v[i] = value(times[i]);
        return v;
    }

    // Load-time invariant check: nondecreasing on the sampling grid and
    // nonnegative at the origin.
    void validate(std::size_t cells = 4096) const {
        const auto g = grid(cells);
        const auto v = sample(g);
        double scale = 1.0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        const double tol = 1e-9 * scale;
        if (v.front() < -tol)
            throw std::invalid_argument("curve is negative at t = 0");
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1] - tol)
                throw std::invalid_argument("curve is decreasing near t = " +
                                            std::to_string(g[i]));
    }

private:
    std::vector<CurveTerm> terms_;
    double domain_end_ = 0.0;
    std::vector<double> breakpoints_;
};

struct InfRatioResult {
    double value = 0.0;
    double at = 0.0;  // first minimizing candidate
};

// inf over candidate instants x in (t0, horizon] of (vals[x] - base)/(x - t0),
// candidates being grid points from index `from` on. Negative ratios are kept.
inline InfRatioResult inf_ratio_sampled(const std::vector<double>& t,
                                        const std::vector<double>& vals,
                                        std::size_t from, double t0, double base) {
    if (from >= t.size())
        throw std::invalid_argument("inf_ratio: empty candidate interval");
    double best = std::numeric_limits<double>::infinity();
    double best_at = t[from];
    for (std::size_t j = from; j < t.size(); ++j) {
        const double ratio = (vals[j] - base) / (t[j] - t0);
        if (ratio < best) {
            best = ratio;
            best_at = t[j];
        }
    }
    return {best, best_at};
}

inline InfRatioResult inf_ratio(const PiecewiseCurve& c, double t0, double base,
                                double horizon, std::size_t cells = 4000) {
    if (!(t0 < horizon))
        throw std::invalid_argument("inf_ratio: empty interval, need t0 < horizon");
    const auto g = make_grid(horizon, cells, c.breakpoints());
    const auto v = c.sample(g);
    const double eps = horizon * 1e-12;
    std::size_t from = 0;
    while (from < g.size() && g[from] <= t0 + eps) ++from;
    return inf_ratio_sampled(g, v, from, t0, base);
}

struct TangentLine {
    double slope = 0.0;
    double intercept = 0.0;
    double touch_time = 0.0;  // largest instant where the line meets the curve

    double at(double t) const { return slope * t + intercept; }
};

// Line through (T, D) tangent from below to a convex nondecreasing sampled
// curve; `touch_time` is the last contact instant. D must not exceed v.back().
inline TangentLine tangent_from_grid(const std::vector<double>& t,
                                     const std::vector<double>& v, double target) {
    if (t.size() < 2 || t.size() != v.size())
        throw std::invalid_argument("tangent: need at least two samples");
    const std::size_t n = t.size() - 1;
    const double horizon = t[n];
    double scale = 1.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    const double tol = 1e-9 * scale;
    if (target > v[n] + tol)
        throw std::invalid_argument("tangent: anchor above the curve endpoint");

    if (std::abs(target - v[n]) <= tol) {
        // Anchor on the curve: terminal tangent, contact at the endpoint.
        const double slope = (v[n] - v[n - 1]) / (t[n] - t[n - 1]);
        return {slope, target - slope * horizon, horizon};
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double m = (target - v[i]) / (horizon - t[i]);
        if (m > best) best = m;
    }
    TangentLine line{best, target - best * horizon, 0.0};
    for (std::size_t i = 0; i <= n; ++i) {
        const double diff = v[i] - line.at(t[i]);
        if (diff <= tol) line.touch_time = t[i];
    }
    return line;
}

// Sampled convexity test: nonnegative second differences on a uniform grid.
inline void require_convex(const std::vector<double>& uniform_vals, double tol_scale) {
    double scale = 1.0;
    for (double x : uniform_vals) scale = std::max(scale, std::abs(x));
    const double tol = tol_scale * scale;
    for (std::size_t i = 1; i + 1 < uniform_vals.size(); ++i) {
        const double dd = uniform_vals[i + 1] - 2.0 * uniform_vals[i] + uniform_vals[i - 1];
        if (dd < -tol)
            throw std::invalid_argument("curve is not convex (negative second difference)");
    }
}

inline TangentLine tangent_from_point(const PiecewiseCurve& c, double horizon,
                                      double target, std::size_t cells = 4000) {
    const auto uniform = make_grid(horizon, cells);
    const auto uv = c.sample(uniform);
    require_convex(uv, 1e-9);
    const auto g = make_grid(horizon, cells, c.breakpoints());
    return tangent_from_grid(g, c.sample(g), target);
}

// Staircase restriction: amounts become available only at epoch starts, so the
// result never exceeds the input and matches it at each epoch start.
inline PiecewiseCurve discretize(const PiecewiseCurve& c, std::size_t epochs) {
    if (epochs == 0) throw std::invalid_argument("discretize: epochs must be >= 1");
    const double T = c.domain_end();
    const double len = T / static_cast<double>(epochs);
    std::vector<CurveTerm> steps;
    steps.reserve(epochs);
    double prev = c.value(0.0);
    steps.push_back(StepTerm{prev, 0.0});
    for (std::size_t i = 1; i < epochs; ++i) {
        const double at = static_cast<double>(i) * len;
        const double val = c.value(at);
        steps.push_back(StepTerm{std::max(0.0, val - prev), at});
        prev = val;
    }
    return PiecewiseCurve(std::move(steps), T);
}

}  // namespace ehsched
