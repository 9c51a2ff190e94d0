#include <catch2/catch_amalgamated.hpp>

#include "ehsched/curve.hpp"
#include "support.hpp"

using namespace ehsched;
using Catch::Approx;

TEST_CASE("polynomial curve evaluation") {
    PiecewiseCurve c({PolyTerm{100.0, 2, 0.0}, PolyTerm{1.0, 0, 0.0}}, 0.6);
    CHECK(c.value(0.6) == Approx(37.0));
    CHECK(c.value(0.0) == Approx(1.0));  // constant offset at the origin
    CHECK_THROWS_AS(c.value(0.7), std::domain_error);
    CHECK_THROWS_AS(c.value(-0.1), std::domain_error);
}

TEST_CASE("step terms are right-continuous") {
    PiecewiseCurve c({StepTerm{2.0, 1.0}}, 2.0);
    CHECK(c.value(0.5) == 0.0);
    CHECK(c.value(1.0) == 2.0);
    CHECK(c.value(1.5) == 2.0);
    CHECK(c.breakpoints() == std::vector<double>{1.0});
}

TEST_CASE("pwl term interpolates and clamps") {
    PiecewiseCurve c({PwlTerm{{{0.0, 0.0}, {1.0, 2.0}, {3.0, 4.0}}}}, 5.0);
    CHECK(c.value(0.5) == Approx(1.0));
    CHECK(c.value(2.0) == Approx(3.0));
    CHECK(c.value(4.0) == Approx(4.0));  // held past the last knot
}

TEST_CASE("curve validation rejects bad curves") {
    PiecewiseCurve decreasing({PolyTerm{-1.0, 1, 0.0}, PolyTerm{1.0, 0, 0.0}}, 1.0);
    CHECK_THROWS_AS(decreasing.validate(), std::invalid_argument);
    PiecewiseCurve negative_start({PolyTerm{1.0, 1, 0.0}, PolyTerm{-0.5, 0, 0.0}}, 1.0);
    CHECK_THROWS_AS(negative_start.validate(), std::invalid_argument);
    CHECK_NOTHROW(PiecewiseCurve({ExpTerm{0.5, 7.0, 1}, PolyTerm{-0.5, 0, 0.0}}, 0.6).validate());
}

TEST_CASE("make_grid unions breakpoints") {
    const auto g = make_grid(1.0, 10, {0.15, 0.5, 1.5});
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(std::find(g.begin(), g.end(), 0.15) != g.end());
    CHECK(std::is_sorted(g.begin(), g.end()));
    // 0.5 is already a uniform point; 1.5 lies outside
    CHECK(g.size() == 12);
}

TEST_CASE("inf_ratio on elementary curves") {
    PiecewiseCurve ident({PolyTerm{1.0, 1, 0.0}}, 1.0);
    auto r = inf_ratio(ident, 0.0, 0.0, 1.0);
    CHECK(r.value == Approx(1.0));

    PiecewiseCurve quad({PolyTerm{1.0, 2, 0.0}, PolyTerm{1.0, 0, 0.0}}, 2.0);
    r = inf_ratio(quad, 0.0, 0.0, 2.0);
    CHECK(r.value == Approx(2.0));
    CHECK(r.at == Approx(1.0).margin(1e-3));

    CHECK_THROWS_AS(inf_ratio(ident, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("inf_ratio matches a dense brute-force scan") {
    // Oracle: scan of (0.45 x^4 - 0.01)/(x - 0.5) over (0.5, 1.9] at 1e-5 steps.
    PiecewiseCurve c({PolyTerm{0.45, 4, 0.0}}, 1.9);
    const auto r = inf_ratio(c, 0.5, 0.01, 1.9, 8000);
    CHECK(r.value == Approx(0.4678125948).epsilon(1e-5));
    CHECK(r.at == Approx(0.638170).margin(1e-3));

    // Self-consistency under a 10x finer grid.
    const auto fine = inf_ratio(c, 0.5, 0.01, 1.9, 80000);
    CHECK(fine.value == Approx(r.value).epsilon(1e-6));
}

TEST_CASE("tangent line through an exterior anchor") {
    PiecewiseCurve c({PolyTerm{1.0, 2, 0.0}}, 2.0);
    const auto line = tangent_from_point(c, 2.0, 3.0);
    // Tangency discriminant m^2 - 8m + 12 = 0 with the touch point inside [0,2].
    CHECK(line.slope == Approx(2.0).margin(1e-6));
    CHECK(line.intercept == Approx(-1.0).margin(1e-6));
    CHECK(line.touch_time == Approx(1.0).margin(1e-3));
    CHECK(line.at(2.0) == Approx(3.0));
}

TEST_CASE("tangent degenerate anchors") {
    PiecewiseCurve lin({PolyTerm{1.0, 1, 0.0}}, 1.0);
    auto line = tangent_from_point(lin, 1.0, 1.0);
    CHECK(line.slope == Approx(1.0));
    CHECK(line.touch_time == Approx(1.0));

    PiecewiseCurve quad({PolyTerm{1.0, 2, 0.0}}, 1.0);
    line = tangent_from_point(quad, 1.0, 1.0);  // anchor on the curve
    CHECK(line.touch_time == Approx(1.0));
    CHECK(line.slope == Approx(2.0).margin(1e-3));

    CHECK_THROWS_AS(tangent_from_point(quad, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("tangent rejects non-convex curves") {
    PiecewiseCurve concave({PwlTerm{{{0.0, 0.0}, {0.5, 0.9}, {1.0, 1.0}}}}, 1.0);
    CHECK_THROWS_AS(tangent_from_point(concave, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("tangent stays below random convex curves") {
    auto rng = ehsched::testing::make_rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const auto grid = make_grid(1.0, 200);
        const auto v = ehsched::testing::random_convex_data(rng, grid, 3.0);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        const double target = u(rng) * v.back();
        const auto line = tangent_from_grid(grid, v, target);
        CHECK(line.at(1.0) == Approx(target));
        bool touched = false;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(line.at(grid[i]) <= v[i] + 1e-9 * (1.0 + v.back()));
            if (std::abs(line.at(grid[i]) - v[i]) <= 1e-9 * (1.0 + v.back())) touched = true;
        }
        CHECK(touched);
    }
}

TEST_CASE("discretize produces epoch staircases") {
    PiecewiseCurve ident({PolyTerm{1.0, 1, 0.0}}, 1.0);

    const auto one = discretize(ident, 1);
    CHECK(one.value(0.0) == 0.0);
    CHECK(one.value(0.99) == 0.0);

    const auto two = discretize(ident, 2);
    CHECK(two.value(0.25) == 0.0);
    CHECK(two.value(0.5) == Approx(0.5));
    CHECK(two.value(0.99) == Approx(0.5));

    CHECK_THROWS_AS(discretize(ident, 0), std::invalid_argument);
}

TEST_CASE("discretize lower-bounds the curve and agrees at epoch starts") {
    PiecewiseCurve c({PolyTerm{100.0, 2, 0.0}, PolyTerm{1.0, 0, 0.0}}, 0.6);
    for (std::size_t epochs : {2, 3, 5, 8}) {
        const auto d = discretize(c, epochs);
        const auto g = d.grid(600);
        for (double t : g) CHECK(d.value(t) <= c.value(t) + 1e-12);
        for (std::size_t i = 0; i < epochs; ++i) {
            const double start = 0.6 * static_cast<double>(i) / epochs;
            CHECK(d.value(start) == Approx(c.value(start)));
        }
        CHECK_NOTHROW(d.validate());
    }
}

TEST_CASE("loaded curves are nondecreasing on their grid") {
    const std::vector<PiecewiseCurve> curves = {
        PiecewiseCurve({PolyTerm{3.5, 5, 1.0}, PolyTerm{3.5, 0, 0.0}}, 1.9),
        PiecewiseCurve({ExpTerm{1.0, 1.0, 3}}, 2.0),
        PiecewiseCurve({StepTerm{1.0, 0.0}, StepTerm{2.0, 0.7}, PolyTerm{0.5, 1, 0.0}}, 2.0),
    };
    for (const auto& c : curves) {
        const auto g = c.grid(1000);
        const auto v = c.sample(g);
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1] - 1e-12);
    }
}
