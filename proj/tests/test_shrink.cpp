#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "deltastrip/functionals.hpp"
#include "deltastrip/shrink.hpp"
#include "deltastrip/soliton1d.hpp"

using namespace deltastrip;
using std::numbers::pi;

namespace {

std::vector<SweepRecord> flags(std::initializer_list<std::pair<double, bool>> rows) {
    std::vector<SweepRecord> out;
    for (auto [L, yi] : rows) {
        SweepRecord r;
        r.L = L;
        r.y_independent = yi;
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_SUITE("shrink") {
    TEST_CASE("geometric widths") {
        const std::vector<double> w = geometric_widths(0.0625, 2.0, 6);
        REQUIRE(w.size() == 6);
        CHECK(w.front() == doctest::Approx(0.0625));
        CHECK(w.back() == doctest::Approx(2.0));
        for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] / w[k - 1] == doctest::Approx(2.0));
        CHECK_THROWS_AS(geometric_widths(1.0, 0.5, 3), Error);
    }

    TEST_CASE("L* bisection on a flag pattern") {
        const double truth = 2.37;
        int calls = 0;
        const WidthClassifier classify = [&](double L) {
            ++calls;
            return L < truth;
        };
        const LStarEstimate e =
            estimate_L_star(flags({{1, true}, {2, true}, {3, false}, {4, false}}), classify, 1e-2);
        CHECK(e.lo >= 2.0);
        CHECK(e.hi <= 3.0);
        CHECK(e.hi - e.lo < 1e-2);
        CHECK(e.lo <= truth);
        CHECK(e.hi >= truth);
        CHECK(e.estimate > e.lo);
        CHECK(e.estimate < e.hi);
        CHECK(e.evaluations == calls);
        CHECK(calls == 7);
    }

    TEST_CASE("L* without a switch is an error") {
        const WidthClassifier never = [](double) -> bool { throw std::logic_error("not called"); };
        CHECK_THROWS_AS(estimate_L_star(flags({{1, true}, {2, true}, {3, true}}), never), Error);
        CHECK_THROWS_AS(estimate_L_star(flags({{1, false}, {2, false}}), never), Error);
        CHECK_THROWS_AS(estimate_L_star({}, never), Error);
    }

    TEST_CASE("fixed-profile quotient") {
        CHECK(fixed_profile_quotient(3.0) == doctest::Approx(8 * pi * pi).epsilon(1e-12));
        // Independent check of the quotient for another exponent.
        const double p = 2.0;
        auto f = [](double y) { return std::sqrt(2.0) * std::abs(std::cos(2 * pi * y)); };
        const double num = 4 * pi * pi;
        const double den = testing::simpson([&](double y) { return std::pow(f(y), p + 1); }, 0, 1, 40000) - 1.0;
        CHECK(fixed_profile_quotient(p) == doctest::Approx(num / den).epsilon(1e-8));
    }

    TEST_CASE("L** bound closed forms") {
        for (double m : {0.5, 1.0, 2.0}) {
            const LStarStarBound b = l_star_star_bound(m, 0.0, 3.0, false);
            CHECK(b.bound_fixed == doctest::Approx(192 * pi * pi / (m * m)).epsilon(1e-8));
            CHECK(b.sqrt_bound_fixed == doctest::Approx(std::sqrt(192.0) * pi / m).epsilon(1e-8));
        }
        const double m = 1.3;
        const LStarStarBound b = l_star_star_bound(m, -1.0, 3.0, false);
        const Soliton1D s = Soliton1D::make(omega_of_mass(m, -1.0, 3.0), -1.0, 3.0);
        CHECK(b.bound_fixed == doctest::Approx(16 * pi * pi * m / potential_of(s)).epsilon(1e-10));
        CHECK(b.quotient_fixed == doctest::Approx(8 * pi * pi).epsilon(1e-10));
    }

    TEST_CASE("optimized bound never exceeds the fixed one") {
        for (auto [m, gamma, p] : {std::tuple{1.0, 0.0, 3.0}, {1.0, -1.0, 2.5}, {0.7, -0.5, 2.0}}) {
            const LStarStarBound b = l_star_star_bound(m, gamma, p, true);
            CHECK(b.quotient_optimized <= b.quotient_fixed);
            CHECK(b.bound_optimized <= b.bound_fixed);
            CHECK(b.quotient_optimized > 0.0);
        }
        const LStarStarBound b = l_star_star_bound(1.0, 0.0, 3.0, true);
        CHECK(b.quotient_optimized == doctest::Approx(pi * pi / 4).epsilon(1e-3));
    }

    TEST_CASE("mirrored decomposition identity") {
        std::mt19937_64 rng(4);
        const StripGrid g = StripGrid::make(16.0, 129, 9);
        ProblemParams pp;
        pp.gamma = 0.0;
        pp.L = 0.8;
        for (int t = 0; t < 5; ++t) {
            const Field psi = enforce_symmetry(testing::random_smooth_field(g, rng, true));
            const double I0 = evaluate(psi, pp).nehari;
            for (int s : {1, 5, 17, 32}) {
                const FunctionalReport plus = evaluate(mirrored_shift(psi, s), pp);
                const FunctionalReport minus = evaluate(mirrored_shift(psi, -s), pp);
                CHECK(std::abs(plus.nehari + minus.nehari - 2 * I0) < 1e-12 * (plus.scale + minus.scale));
            }
        }
        CHECK_THROWS_AS(mirrored_shift(Field(g), 100), Error);
    }

    TEST_CASE("gamma* on a coarse grid") {
        const StripGrid g = StripGrid::make(16.0, 129, 5);
        const GammaStarResult r = gamma_star(1.0, 1.0, 3.0, g, MinimizeConfig{});
        CHECK(r.psi_converged);
        CHECK(r.gamma_star > 0.0);
        CHECK(r.gamma_star < 2.0);
        CHECK(r.identity_residual < 1e-12);
        CHECK(r.I_minus < 0.0);
        CHECK(r.I_plus > 0.0);
        ProblemParams pp;
        pp.gamma = 0.0;
        for (int s : {1, 4, 16}) {
            CHECK(evaluate(mirrored_shift(r.psi, s), pp).nehari > 0.0);
            CHECK(evaluate(mirrored_shift(r.psi, -s), pp).nehari < 0.0);
        }
    }

    TEST_CASE("short sweep") {
        SweepConfig cfg;
        cfg.nx = 129;
        cfg.ny = 5;
        cfg.jobs = 2;
        const SweepResult res = sweep_L(cfg, {1.0, 0.5, 0.25});
        REQUIRE(res.records.size() == 3);
        for (const SweepRecord& r : res.records) {
            CHECK(r.converged);
            CHECK(r.energy <= res.e1d + 1e-8);
            CHECK(r.recovered_omega > 0.25);
            CHECK(r.y_independent);
        }
        CHECK(res.records[0].cold_checked);
        CHECK(res.records[1].cold_checked);
        CHECK(res.records[2].cold_checked);
        CHECK(res.records[0].cold_energy == doctest::Approx(res.records[0].energy).epsilon(1e-8));
        CHECK(std::abs(res.e1d - res.e1d_analytic) < 5e-3);
    }

    TEST_CASE("warm-started energies do not increase with L") {
        SweepConfig cfg;
        cfg.nx = 129;
        cfg.ny = 9;
        cfg.cold_sentinels = 0;
        cfg.gamma = -0.5;
        cfg.p = 2.5;
        cfg.mass = 1.0;
        // Wide strips, where minimizers pick up transverse structure.
        const SweepResult res = sweep_L(cfg, {2.0, 4.0, 8.0, 12.0});
        for (std::size_t k = 1; k < res.records.size(); ++k) {
            CHECK(res.records[k].energy <= res.records[k - 1].energy + 1e-10);
        }
    }
}
