#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ehsched {

// Rate-vs-power law for one hop: r(0) = 0, strictly increasing, concave,
// unbounded. Builtins carry analytic inverses; custom monotone laws invert by
// bisection.
class RateFunction {
public:
    RateFunction() = default;
    RateFunction(std::string name, std::function<double(double)> fwd,
                 std::function<double(double)> inv)
        : name_(std::move(name)), fwd_(std::move(fwd)), inv_(std::move(inv)) {}

    double rate(double power) const { return fwd_(power); }
    double inverse(double rate) const { return inv_(rate); }
    const std::string& name() const { return name_; }

    static RateFunction shannon() {
        return RateFunction(
            "shannon", [](double p) { return std::log2(1.0 + p); },
            [](double x) { return std::exp2(x) - 1.0; });
    }

    static RateFunction linear() {
        return RateFunction(
            "linear", [](double p) { return p; }, [](double x) { return x; });
    }

    static RateFunction sqrt_law() {
        return RateFunction(
            "sqrt", [](double p) { return std::sqrt(p); },
            [](double x) { return x * x; });
    }

    // Monotone piecewise-linear law through the given (power, rate) points,
    // extended past the last point with the final segment slope. Inverse by
    // monotone bisection.
    static RateFunction custom(std::vector<std::pair<double, double>> points) {
        if (points.size() < 2)
            throw std::invalid_argument("custom rate law needs at least two points");
        std::sort(points.begin(), points.end());
        if (points.front().first != 0.0 || points.front().second != 0.0)
            throw std::invalid_argument("custom rate law must start at (0, 0)");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i].first > points[i - 1].first) ||
                !(points[i].second > points[i - 1].second))
                throw std::invalid_argument("custom rate law must be strictly increasing");
        auto fwd = [pts = points](double p) {
            if (p <= 0.0) return 0.0;
            std::size_t i = 1;
            while (i + 1 < pts.size() && p > pts[i].first) ++i;
            const auto& a = pts[i - 1];
            const auto& b = pts[i];
            const double slope = (b.second - a.second) / (b.first - a.first);
            return a.second + slope * (p - a.first);
        };
        auto inv = [fwd](double x) {
            if (x <= 0.0) return 0.0;
            double hi = 1.0;
            while (fwd(hi) < x) {
                hi *= 2.0;
                if (hi > 1e300) return hi;
            }
            double lo = 0.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (fwd(mid) >= x ? hi : lo) = mid;
            }
            return hi;
        };
        RateFunction rf("custom", std::move(fwd), std::move(inv));
        rf.custom_points_ = std::move(points);
        return rf;
    }

    // Knots of a custom law; empty for builtins.
    const std::vector<std::pair<double, double>>& custom_points() const {
        return custom_points_;
    }

private:
    std::string name_;
    std::function<double(double)> fwd_;
    std::function<double(double)> inv_;
    std::vector<std::pair<double, double>> custom_points_;
};

struct RateLawReport {
    bool zero_at_zero = false;
    bool increasing = false;
    bool concave = false;
    bool inverse_consistent = false;
    bool unbounded = false;
    // lim r(p)/p = 0; the completion-time results need this.
    bool sublinear_growth = false;

    bool core_ok() const {
        return zero_at_zero && increasing && concave && inverse_consistent && unbounded;
    }
};

inline RateLawReport check_rate_law(const RateFunction& rf, double power_span = 50.0) {
    RateLawReport rep;
    rep.zero_at_zero = std::abs(rf.rate(0.0)) <= 1e-12;

    const int n = 200;
    std::vector<double> ps(n + 1);
    for (int i = 0; i <= n; ++i) ps[i] = power_span * i / n;

    rep.increasing = true;
    for (int i = 1; i <= n; ++i)
        if (!(rf.rate(ps[i]) > rf.rate(ps[i - 1]))) rep.increasing = false;

    rep.concave = true;
    const double ctol = 1e-9 * std::max(1.0, rf.rate(power_span));
    for (double lam : {0.25, 0.5, 0.75})
        for (int i = 0; i <= n; i += 5)
            for (int j = i + 5; j <= n; j += 5) {
                const double mid = lam * ps[i] + (1.0 - lam) * ps[j];
                if (rf.rate(mid) < lam * rf.rate(ps[i]) + (1.0 - lam) * rf.rate(ps[j]) - ctol)
                    rep.concave = false;
            }

    rep.inverse_consistent = true;
    for (int i = 1; i <= n; ++i) {
        const double x = rf.rate(ps[i]);
        if (std::abs(rf.rate(rf.inverse(x)) - x) > 1e-10 * std::max(1.0, std::abs(x)))
            rep.inverse_consistent = false;
        const double p = ps[i];
        if (std::abs(rf.inverse(rf.rate(p)) - p) > 1e-10 * std::max(1.0, p))
            rep.inverse_consistent = false;
    }

    // Coarse log grid: rates must keep growing, and r(p)/p must collapse for a
    // sublinear law.
    const double p0 = 1.0, p1 = 1e4, p2 = 1e8;
    rep.unbounded = rf.rate(p2) > rf.rate(p1) && rf.rate(p1) > rf.rate(p0);
    rep.sublinear_growth = rf.rate(p2) / p2 <= 1e-3 * (rf.rate(p0) / p0);
    return rep;
}

}  // namespace ehsched
