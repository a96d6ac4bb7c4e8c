#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "dbm/aero.hpp"
#include "dbm/param.hpp"
#include "dbm/xfoil.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace dbm;
using aero::FlowCondition;
using aero::Polar;
using aero::PolarRow;
using aero::ScanSchedule;

namespace {

Polar make_polar(std::initializer_list<PolarRow> rows) {
    Polar p;
    p.rows = rows;
    return p;
}

// evaluator with canned convergence behavior, for exercising the scan logic
class ScriptedEvaluator final : public aero::PolarEvaluator {
public:
    explicit ScriptedEvaluator(bool converge = true) : converge_(converge) {}
    const std::string& name() const override {
        static const std::string n = "scripted";
        return n;
    }
    std::vector<PolarRow> sweep(const geometry::CollocatedAirfoil&, const FlowCondition&,
                                const std::vector<double>& alphas) const override {
        ++sweeps;
        std::vector<PolarRow> rows;
        for (double a : alphas) {
            double cl = 0.1 * (a + 3.0) / (1.0 + std::exp((a - 12.0) / 1.5));
            rows.push_back({a, cl, 0.01 + 0.001 * a * a / 50.0, converge_});
        }
        return rows;
    }
    mutable int sweeps = 0;

private:
    bool converge_;
};

class ShortChangedEvaluator final : public aero::PolarEvaluator {
public:
    const std::string& name() const override {
        static const std::string n = "short";
        return n;
    }
    std::vector<PolarRow> sweep(const geometry::CollocatedAirfoil&, const FlowCondition&,
                                const std::vector<double>& alphas) const override {
        std::vector<PolarRow> rows;
        for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
            rows.push_back({alphas[i], 0.5, 0.01, true});
        return rows;
    }
};

} // namespace

TEST_CASE("flow and schedule validation") {
    FlowCondition flow;
    REQUIRE_NOTHROW(flow.validate());
    flow.reynolds = 0.0;
    REQUIRE_THROWS_AS(flow.validate(), ContractError);
    flow = {};
    flow.mach = 1.0;
    REQUIRE_THROWS_AS(flow.validate(), ContractError);
    flow = {};
    flow.n_crit = -1.0;
    REQUIRE_THROWS_AS(flow.validate(), ContractError);

    ScanSchedule s;
    REQUIRE_NOTHROW(s.validate());
    s.alpha_lo = 5.0;
    s.alpha_hi = 5.0;
    REQUIRE_THROWS_AS(s.validate(), ContractError);
    s = {};
    s.fine_step = 2.0; // coarser than rough
    REQUIRE_THROWS_AS(s.validate(), ContractError);
    s = {};
    s.rough_step = 0.0;
    REQUIRE_THROWS_AS(s.validate(), ContractError);
}

TEST_CASE("cld_max picks the best converged ratio, ties to the smaller angle") {
    auto p = make_polar({{0.0, 0.5, 0.010, true},
                         {1.0, 0.8, 0.010, true},
                         {2.0, 0.9, 0.020, true}});
    auto best = aero::cld_max(p);
    REQUIRE(best.value == Catch::Approx(80.0));
    REQUIRE(best.alpha == 1.0);

    SECTION("exact tie resolves to the smaller alpha") {
        auto tie = make_polar({{0.0, 0.4, 0.010, true},
                               {3.0, 1.0, 0.020, true},
                               {5.0, 0.25, 0.005, true}});
        REQUIRE(aero::cld_max(tie).alpha == 3.0);
    }
    SECTION("non-converged rows are invisible") {
        auto mixed = make_polar({{0.0, 0.5, 0.010, true},
                                 {1.0, 99.0, 0.001, false},
                                 {2.0, 0.6, 0.010, true}});
        REQUIRE(aero::cld_max(mixed).alpha == 2.0);
    }
    SECTION("non-positive drag on a converged row is an evaluation failure") {
        auto bad = make_polar({{0.0, 0.5, 0.0, true}});
        REQUIRE_THROWS_AS(aero::cld_max(bad), EvaluationError);
    }
    SECTION("all rows unconverged is an evaluation failure") {
        auto none = make_polar({{0.0, 0.5, 0.01, false}});
        REQUIRE_THROWS_AS(aero::cld_max(none), EvaluationError);
    }
}

TEST_CASE("stall angle semantics on hand polars") {
    SECTION("plain interior peak") {
        auto p = make_polar({{0.0, 0.2, 0.01, true},
                             {1.0, 0.5, 0.01, true},
                             {2.0, 0.8, 0.01, true},
                             {3.0, 0.6, 0.01, true},
                             {4.0, 0.4, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 2.0);
        REQUIRE_FALSE(s.censored);
    }
    SECTION("plateau resolves to its first angle") {
        auto p = make_polar({{0.0, 0.2, 0.01, true},
                             {1.0, 0.8, 0.01, true},
                             {2.0, 0.8, 0.01, true},
                             {3.0, 0.6, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 1.0);
        REQUIRE_FALSE(s.censored);
    }
    SECTION("plateau with a higher right neighbor is not a maximum") {
        auto p = make_polar({{0.0, 0.2, 0.01, true},
                             {1.0, 0.8, 0.01, true},
                             {2.0, 0.8, 0.01, true},
                             {3.0, 0.9, 0.01, true},
                             {4.0, 0.3, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 3.0);
        REQUIRE_FALSE(s.censored);
    }
    SECTION("monotone rise to the scan edge is censored at the edge") {
        auto p = make_polar({{0.0, 0.2, 0.01, true},
                             {1.0, 0.5, 0.01, true},
                             {2.0, 0.8, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 2.0);
        REQUIRE(s.censored);
    }
    SECTION("plateau touching the scan edge proves nothing and is censored") {
        auto p = make_polar({{0.0, 0.2, 0.01, true},
                             {1.0, 0.8, 0.01, true},
                             {2.0, 0.8, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 2.0);
        REQUIRE(s.censored);
    }
    SECTION("peaks at negative alpha do not count") {
        auto p = make_polar({{-3.0, 0.5, 0.01, true},
                             {-2.0, 0.9, 0.01, true},
                             {-1.0, 0.3, 0.01, true},
                             {0.0, 0.4, 0.01, true},
                             {1.0, 0.5, 0.01, true},
                             {2.0, 0.45, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 1.0);
        REQUIRE_FALSE(s.censored);
    }
    SECTION("a flat run straddling zero stalls at its first non-negative angle") {
        auto p = make_polar({{-2.0, 0.4, 0.01, true},
                             {-1.0, 0.7, 0.01, true},
                             {0.0, 0.7, 0.01, true},
                             {1.0, 0.5, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 0.0);
        REQUIRE_FALSE(s.censored);
    }
    SECTION("neighbor logic runs over converged rows only") {
        auto p = make_polar({{0.0, 0.5, 0.01, true},
                             {1.0, 9.0, 0.01, false},
                             {2.0, 0.8, 0.01, true},
                             {3.0, 9.0, 0.01, false},
                             {4.0, 0.6, 0.01, true}});
        auto s = aero::stall_angle(p);
        REQUIRE(s.alpha == 2.0);
        REQUIRE_FALSE(s.censored);
    }
}

TEST_CASE("adaptive polar scan") {
    auto grid = geometry::CollocationGrid::make(100);
    auto shape = param::naca4(grid, 0.02, 0.4, 0.12);
    ScanSchedule sched;

    SECTION("rough lattice is contained and fine rows appear near both loci") {
        ScriptedEvaluator eval;
        auto polar = aero::evaluate_polar(shape, {}, sched, eval);
        REQUIRE(eval.sweeps == 2);
        // rows ascend strictly
        for (std::size_t i = 0; i + 1 < polar.rows.size(); ++i)
            REQUIRE(polar.rows[i].alpha < polar.rows[i + 1].alpha);
        // full rough lattice present
        for (double a = -5.0; a <= 25.0; a += 1.0) {
            bool found = false;
            for (const auto& r : polar.rows)
                if (r.alpha == a) found = true;
            REQUIRE(found);
        }
        // quarter-degree refinement around the efficiency peak
        auto peak = aero::cld_max(polar);
        std::size_t near = 0;
        for (const auto& r : polar.rows)
            if (std::abs(r.alpha - peak.alpha) <= 1.0) ++near;
        REQUIRE(near >= 7); // 1-degree lattice alone would give 3
    }
    SECTION("two runs produce identical polars") {
        aero::SyntheticEvaluator eval;
        auto a = aero::evaluate_polar(shape, {}, sched, eval);
        auto b = aero::evaluate_polar(shape, {}, sched, eval);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            REQUIRE(a.rows[i].alpha == b.rows[i].alpha);
            REQUIRE(a.rows[i].cl == b.rows[i].cl);
            REQUIRE(a.rows[i].cd == b.rows[i].cd);
        }
    }
    SECTION("a fully unconverged scan raises an evaluation error") {
        ScriptedEvaluator eval(false);
        REQUIRE_THROWS_AS(aero::evaluate_polar(shape, {}, sched, eval), EvaluationError);
    }
    SECTION("row-count mismatch from the evaluator is a contract violation") {
        ShortChangedEvaluator eval;
        REQUIRE_THROWS_AS(aero::evaluate_polar(shape, {}, sched, eval), ContractError);
    }
}

TEST_CASE("shape feature extraction") {
    auto grid = geometry::CollocationGrid::make(400);

    SECTION("symmetric section: zero camber, thickness near nominal") {
        auto foil = param::naca4(grid, 0.0, 0.0, 0.12);
        auto ft = aero::extract_features(foil);
        REQUIRE(ft.camber == 0.0);
        REQUIRE(ft.thickness == Catch::Approx(0.12).epsilon(0.02));
        REQUIRE(ft.bluntness > 0.3);
        REQUIRE(ft.bluntness <= 1.0);
    }
    SECTION("cambered section reports the camber-line peak") {
        auto foil = param::naca4(grid, 0.02, 0.4, 0.12);
        auto ft = aero::extract_features(foil);
        REQUIRE(ft.camber == Catch::Approx(0.02).epsilon(0.01));
    }
    SECTION("thicker section is blunter and thicker") {
        auto thin = aero::extract_features(param::naca4(grid, 0.0, 0.0, 0.06));
        auto thick = aero::extract_features(param::naca4(grid, 0.0, 0.0, 0.21));
        REQUIRE(thick.thickness > thin.thickness);
    }
}

TEST_CASE("surrogate lift model shape") {
    auto grid = geometry::CollocationGrid::make(400);
    aero::SyntheticEvaluator eval;

    SECTION("symmetric foil lifts zero at zero incidence") {
        auto foil = param::naca4(grid, 0.0, 0.0, 0.12);
        auto rows = eval.sweep(foil, {}, {0.0});
        REQUIRE(rows[0].cl == 0.0);
        REQUIRE(rows[0].cd > 0.0);
    }
    SECTION("lift curve has exactly one interior maximum") {
        auto foil = param::naca4(grid, 0.02, 0.4, 0.12);
        std::vector<double> alphas;
        for (double a = -5.0; a <= 25.0 + 1e-9; a += 0.05) alphas.push_back(a);
        auto rows = eval.sweep(foil, {}, alphas);
        int maxima = 0;
        for (std::size_t i = 1; i + 1 < rows.size(); ++i)
            if (rows[i].cl > rows[i - 1].cl && rows[i].cl > rows[i + 1].cl) ++maxima;
        REQUIRE(maxima == 1);
    }
    SECTION("camber shifts the zero-lift angle negative") {
        auto sym = param::naca4(grid, 0.0, 0.0, 0.12);
        auto cam = param::naca4(grid, 0.04, 0.4, 0.12);
        auto rs = eval.sweep(sym, {}, {0.0});
        auto rc = eval.sweep(cam, {}, {0.0});
        REQUIRE(rc[0].cl > rs[0].cl);
    }
    SECTION("the efficiency/stall-margin trade-off points the right way") {
        ScanSchedule sched;
        auto slender = param::naca4(grid, 0.0, 0.0, 0.09);
        auto stout = param::naca4(grid, 0.0, 0.0, 0.21);
        auto obj_slender = aero::objectives(slender, {}, sched, eval);
        auto obj_stout = aero::objectives(stout, {}, sched, eval);
        REQUIRE_FALSE(obj_slender.failed);
        REQUIRE_FALSE(obj_stout.failed);
        REQUIRE(obj_slender.cld_max > obj_stout.cld_max);
        REQUIRE(obj_stout.delta_alpha > obj_slender.delta_alpha);

        // same story with camber held fixed
        auto cam_thin = aero::objectives(param::naca4(grid, 0.04, 0.4, 0.09), {}, sched, eval);
        auto cam_thick = aero::objectives(param::naca4(grid, 0.04, 0.4, 0.21), {}, sched, eval);
        REQUIRE(cam_thin.cld_max > cam_thick.cld_max);
        REQUIRE(cam_thick.delta_alpha > cam_thin.delta_alpha);
    }
}

TEST_CASE("objective extraction and failure collapse") {
    auto grid = geometry::CollocationGrid::make(200);
    auto foil = param::naca4(grid, 0.02, 0.4, 0.12);
    ScanSchedule sched;

    SECTION("healthy shape yields finite positive objectives") {
        aero::SyntheticEvaluator eval;
        auto obj = aero::objectives(foil, {}, sched, eval);
        REQUIRE_FALSE(obj.failed);
        REQUIRE(obj.cld_max > 0.0);
        REQUIRE(obj.delta_alpha > 0.0);
        REQUIRE(obj.alpha_stall > obj.alpha_at_cld_max);
    }
    SECTION("evaluation failure collapses to the zero pair") {
        ScriptedEvaluator eval(false);
        auto obj = aero::objectives(foil, {}, sched, eval);
        REQUIRE(obj.failed);
        REQUIRE(obj.cld_max == 0.0);
        REQUIRE(obj.delta_alpha == 0.0);
    }
    SECTION("stall margin clamps at zero when stall precedes the peak") {
        auto p = make_polar({{0.0, 0.9, 0.05, true},
                             {1.0, 0.8, 0.05, true},
                             {2.0, 0.7, 0.002, true}});
        auto obj = aero::objectives_from_polar(p);
        REQUIRE(obj.alpha_at_cld_max == 2.0);
        REQUIRE(obj.alpha_stall == 0.0);
        REQUIRE(obj.delta_alpha == 0.0);
    }
}

TEST_CASE("weight-vector objectives bridge") {
    auto grid = geometry::CollocationGrid::make(128);
    morphing::BaselineSet baselines;
    baselines.add(param::naca4(grid, 0.0, 0.0, 0.12, "naca0012"));
    baselines.add(param::naca4(grid, 0.02, 0.4, 0.12, "naca2412"));
    baselines.add(param::naca4(grid, 0.0, 0.0, 0.21, "naca0021"));
    aero::SyntheticEvaluator eval;
    ScanSchedule sched;

    SECTION("one-hot weights reproduce the baseline objectives exactly") {
        std::vector<double> w = {0.0, 1.0, 0.0};
        auto via_weights = aero::objectives_for_weights(baselines, w, morphing::MorphMode::blend,
                                                        {}, {}, sched, eval);
        auto direct = aero::objectives(baselines.at(1), {}, sched, eval);
        REQUIRE(via_weights.cld_max == direct.cld_max);
        REQUIRE(via_weights.delta_alpha == direct.delta_alpha);
    }
    SECTION("degenerate weight sums score as failed designs") {
        std::vector<double> w = {0.5, -0.5, 0.0};
        auto obj = aero::objectives_for_weights(baselines, w, morphing::MorphMode::blend, {}, {},
                                                sched, eval);
        REQUIRE(obj.failed);
        REQUIRE(obj.cld_max == 0.0);
    }
}

TEST_CASE("panel redistribution") {
    auto grid = geometry::CollocationGrid::make(400);
    auto foil = geometry::to_raw(param::naca4(grid, 0.02, 0.4, 0.12));

    SECTION("endpoints survive exactly and the count is as asked") {
        auto re = xfoil::repanel(foil, 200);
        REQUIRE(re.points.size() == 201);
        REQUIRE(re.points.front().x == foil.points.front().x);
        REQUIRE(re.points.front().y == foil.points.front().y);
        REQUIRE(re.points.back().x == foil.points.back().x);
        REQUIRE(re.points.back().y == foil.points.back().y);
    }
    SECTION("resampled outline stays close to the source shape") {
        auto re = xfoil::repanel(foil, 200);
        auto back = geometry::collocate(geometry::normalize_chord(re), grid);
        REQUIRE(geometry::mean_absolute_error(back, param::naca4(grid, 0.02, 0.4, 0.12)) < 1e-3);
    }
    SECTION("curvature weighting concentrates points near the nose") {
        auto flat = xfoil::repanel(foil, 120, 0.0);
        auto curved = xfoil::repanel(foil, 120, 4.0);
        auto count_nose = [](const geometry::RawAirfoil& f) {
            std::size_t n = 0;
            for (const auto& p : f.points)
                if (p.x < 0.1) ++n;
            return n;
        };
        REQUIRE(count_nose(curved) > count_nose(flat));
    }
    SECTION("degenerate inputs are rejected") {
        geometry::RawAirfoil tiny{"t", {{1.0, 0.0}, {0.0, 0.0}}};
        REQUIRE_THROWS_AS(xfoil::repanel(tiny, 100), ContractError);
        REQUIRE_THROWS_AS(xfoil::repanel(foil, 4), ContractError);
        geometry::RawAirfoil dup{"d", {{1.0, 0.0}, {0.5, 0.1}, {0.5, 0.1}, {0.0, 0.0}}};
        REQUIRE_THROWS_AS(xfoil::repanel(dup, 100), DegenerateInputError);
    }
}

TEST_CASE("solver scripting and polar parsing") {
    SECTION("script carries the flow setup and one ALFA per angle") {
        FlowCondition flow;
        flow.reynolds = 2.5e5;
        flow.n_crit = 7.0;
        auto s = xfoil::build_script("/tmp/foo.dat", "/tmp/polar.txt", flow, {0.0, 1.5, 3.0});
        REQUIRE(s.find("LOAD /tmp/foo.dat") != std::string::npos);
        REQUIRE(s.find("VISC 250000") != std::string::npos);
        REQUIRE(s.find("N 7") != std::string::npos);
        REQUIRE(s.find("/tmp/polar.txt") != std::string::npos);
        REQUIRE(s.find("ALFA 1.5000") != std::string::npos);
        REQUIRE(s.find("MACH") == std::string::npos);
        std::size_t count = 0, pos = 0;
        while ((pos = s.find("ALFA", pos)) != std::string::npos) {
            ++count;
            pos += 4;
        }
        REQUIRE(count == 3);

        flow.mach = 0.3;
        auto s2 = xfoil::build_script("a", "b", flow, {0.0});
        REQUIRE(s2.find("MACH 0.3000") != std::string::npos);
    }
    SECTION("polar file parsing keeps clean rows only") {
        std::string text =
            "  XFOIL Version 6.99\n"
            "  Calculated polar for: test foil\n"
            "  xtrf = 1.000\n"
            "  ------------------------------------------------------------\n"
            "  alpha     CL       CD      CDp      CM    Top_Xtr Bot_Xtr\n"
            "  ------- -------- -------- -------- ------- ------- -------\n"
            "   0.000  0.2410  0.00525  0.00123 -0.0521  0.7412  0.9913\n"
            "   1.000  0.3520  0.00544  0.00131 -0.0524  0.7123  0.9858\n"
            "   2.000  0.4610  0.00900  0.00950 -0.0530  0.6800  0.9800\n"
            "   3.000  0.5600 -0.00100  0.00010 -0.0533  0.6500  0.9750\n"
            "   4.000  0.6700  0.00620  0.00160 -0.0540  0.6100  0.9700\n";
        auto rows = xfoil::parse_polar_file(text);
        REQUIRE(rows.size() == 3); // the cdp>=cd and cd<0 rows are dropped
        REQUIRE(rows[0].alpha == 0.0);
        REQUIRE(rows[0].cl == Catch::Approx(0.2410));
        REQUIRE(rows[0].cd == Catch::Approx(0.00525));
        REQUIRE(rows[2].alpha == 4.0);
    }
    SECTION("alignment marks missing angles unconverged") {
        std::vector<xfoil::ParsedPolarRow> parsed = {{0.0, 0.2, 0.01, 0.001},
                                                     {2.0, 0.4, 0.01, 0.001}};
        auto rows = xfoil::align_rows({0.0, 1.0, 2.0}, parsed);
        REQUIRE(rows.size() == 3);
        REQUIRE(rows[0].converged);
        REQUIRE_FALSE(rows[1].converged);
        REQUIRE(rows[2].converged);
        REQUIRE(rows[2].cl == 0.4);
    }
}

TEST_CASE("solver binary discovery") {
    const char* saved = std::getenv(xfoil::k_env_binary);
    std::string saved_value = saved ? saved : "";

    SECTION("explicit env var pointing nowhere disables discovery") {
        ::setenv(xfoil::k_env_binary, "/nonexistent/xfoil", 1);
        REQUIRE_FALSE(xfoil::find_binary().has_value());
        REQUIRE_THROWS_AS(xfoil::XfoilEvaluator{}, ConfigError);
        try {
            xfoil::XfoilEvaluator ev;
        } catch (const ConfigError& e) {
            REQUIRE(std::string(e.what()).find(xfoil::k_env_binary) != std::string::npos);
        }
    }
    SECTION("env var naming an executable wins over PATH search") {
        ::setenv(xfoil::k_env_binary, "/bin/sh", 1);
        auto found = xfoil::find_binary();
        REQUIRE(found.has_value());
        REQUIRE(*found == "/bin/sh");
    }

    if (saved)
        ::setenv(xfoil::k_env_binary, saved_value.c_str(), 1);
    else
        ::unsetenv(xfoil::k_env_binary);
}
