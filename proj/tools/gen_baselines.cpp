// Generates the shipped airfoil corpus: 25 morphing baselines and 20
// reconstruction targets, written as plain Selig coordinate files plus a
// manifest per directory. Shapes are analytic (4-digit sections and a few
// classical families: flat-bottom, reflexed, biconvex, aft-loaded) sampled
// on a cosine distribution, so the corpus is reproducible from this tool
// alone. Several targets sit deliberately outside the baselines' convex
// hull (thicker, thinner, or more cambered than anything in the basis) to
// exercise extrapolation.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"
#include "dbm/param.hpp"
#include "dbm/util.hpp"

namespace fs = std::filesystem;
using dbm::geometry::CollocationGrid;

namespace {

struct Shape {
    std::string name;
    // full upper/lower surface heights as functions of x in [0, 1]
    std::function<double(double)> upper;
    std::function<double(double)> lower;
};

Shape naca(int m_digit, int p_digit, int tt) {
    double m = m_digit / 100.0;
    double p = p_digit / 10.0;
    double t = tt / 100.0;
    char name[16];
    std::snprintf(name, sizeof name, "naca%d%d%02d", m_digit, p_digit, tt);
    auto up = [m, p, t](double x) {
        return dbm::param::naca4_camber(m, p, x) + dbm::param::naca4_thickness(t, x);
    };
    auto lo = [m, p, t](double x) {
        return dbm::param::naca4_camber(m, p, x) - dbm::param::naca4_thickness(t, x);
    };
    return {name, up, lo};
}

// flat lower surface, all the thickness on top
Shape flatbottom(int tt) {
    double t = tt / 100.0;
    auto up = [t](double x) { return 2.0 * dbm::param::naca4_thickness(t, x); };
    auto lo = [](double) { return 0.0; };
    return {"flatbottom" + std::to_string(tt), up, lo};
}

// reflexed camber line: positive forward, negative toward the trailing edge
Shape reflexed(int tt, double camber_coeff) {
    double t = tt / 100.0;
    auto c = [camber_coeff](double x) { return camber_coeff * x * (1.0 - x) * (1.0 - 1.9 * x); };
    auto up = [c, t](double x) { return c(x) + dbm::param::naca4_thickness(t, x); };
    auto lo = [c, t](double x) { return c(x) - dbm::param::naca4_thickness(t, x); };
    return {"reflex" + std::to_string(tt), up, lo};
}

// strongly fore-cambered section
Shape seagull(int tt, double camber_coeff) {
    double t = tt / 100.0;
    auto c = [camber_coeff](double x) { return camber_coeff * std::sqrt(x) * (1.0 - x); };
    auto up = [c, t](double x) { return c(x) + dbm::param::naca4_thickness(t, x); };
    auto lo = [c, t](double x) { return c(x) - dbm::param::naca4_thickness(t, x); };
    return {"seagull" + std::to_string(tt), up, lo};
}

// circular-arc biconvex section with a sharp nose
Shape biconvex(int tt) {
    double half = tt / 200.0;
    auto up = [half](double x) { return half * std::sin(M_PI * x); };
    auto lo = [half](double x) { return -half * std::sin(M_PI * x); };
    return {"biconvex" + std::to_string(tt), up, lo};
}

// camber peak pushed aft
Shape aftcamber(int tt, double camber_coeff) {
    double t = tt / 100.0;
    auto c = [camber_coeff](double x) { return camber_coeff * 6.75 * x * x * (1.0 - x); };
    auto up = [c, t](double x) { return c(x) + dbm::param::naca4_thickness(t, x); };
    auto lo = [c, t](double x) { return c(x) - dbm::param::naca4_thickness(t, x); };
    return {"aftcamber" + std::to_string(tt), up, lo};
}

std::string render_selig(const Shape& s, int per_surface) {
    std::string out = s.name + "\n";
    char buf[64];
    auto emit = [&](double x, double y) {
        std::snprintf(buf, sizeof buf, " %.7f %.7f\n", x, y);
        out += buf;
    };
    // upper surface TE -> LE, then lower LE -> TE, LE shared point not repeated
    for (int k = 0; k <= per_surface; ++k) {
        double x = 0.5 * (1.0 + std::cos(M_PI * k / per_surface));
        emit(x, s.upper(x));
    }
    for (int k = 1; k <= per_surface; ++k) {
        double x = 0.5 * (1.0 - std::cos(M_PI * k / per_surface));
        emit(x, s.lower(x));
    }
    return out;
}

int write_set(const fs::path& dir, const std::vector<Shape>& shapes, int per_surface) {
    fs::create_directories(dir);
    nlohmann::json manifest = nlohmann::json::array();
    int failures = 0;
    for (const auto& s : shapes) {
        std::string fname = s.name + ".dat";
        dbm::write_text_file((dir / fname).string(), render_selig(s, per_surface));
        manifest.push_back({{"name", s.name}, {"path", fname}});

        // verify the file survives the ingestion pipeline at both grids
        try {
            auto raw = dbm::geometry::load_airfoil((dir / fname).string());
            for (int f : {400, 4000}) {
                auto grid = CollocationGrid::make(f);
                auto coll = dbm::geometry::collocate(dbm::geometry::normalize_chord(raw), grid);
                auto hits = dbm::geometry::find_intersections(coll);
                if (!hits.empty()) {
                    std::fprintf(stderr, "%s: %zu self-intersections at F=%d\n", s.name.c_str(),
                                 hits.size(), f);
                    ++failures;
                }
            }
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s: %s\n", s.name.c_str(), e.what());
            ++failures;
        }
    }
    dbm::write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    std::printf("%s: %zu shapes, %d problems\n", dir.string().c_str(), shapes.size(), failures);
    return failures;
}

} // namespace

int main(int argc, char** argv) {
    fs::path root = argc > 1 ? argv[1] : "data";

    std::vector<Shape> baselines = {
        naca(0, 0, 12), // the canonical symmetric section leads the set
        naca(0, 0, 6),
        naca(0, 0, 9),
        naca(0, 0, 15),
        naca(0, 0, 18),
        naca(0, 0, 21),
        naca(1, 4, 8),
        naca(1, 4, 10),
        naca(1, 4, 12),
        naca(2, 4, 8),
        naca(2, 4, 10),
        naca(2, 4, 12),
        naca(2, 4, 15),
        naca(2, 4, 18),
        naca(4, 4, 12),
        naca(4, 4, 15),
        naca(4, 4, 18),
        naca(4, 4, 21),
        naca(6, 4, 9),
        naca(6, 4, 12),
        flatbottom(12),
        reflexed(10, 0.15),
        seagull(13, 0.14),
        biconvex(6),
        aftcamber(16, 0.05),
    };

    std::vector<Shape> targets = {
        // interpolation range
        naca(2, 4, 14),
        naca(3, 4, 12),
        naca(2, 5, 12),
        naca(1, 3, 8),
        naca(3, 5, 15),
        naca(0, 0, 10),
        naca(1, 5, 10),
        naca(4, 4, 9),
        naca(2, 6, 20),
        naca(5, 4, 15),
        // classical families at parameters the basis does not contain
        flatbottom(10),
        reflexed(12, 0.15),
        seagull(10, 0.11),
        biconvex(9),
        aftcamber(12, 0.04),
        // outside the baseline hull: needs extrapolation
        naca(0, 0, 24),
        naca(7, 5, 12),
        naca(0, 0, 4),
        biconvex(3),
        reflexed(14, 0.22),
    };

    int bad = write_set(root / "baselines", baselines, 100);
    bad += write_set(root / "targets", targets, 100);
    return bad == 0 ? 0 : 1;
}
