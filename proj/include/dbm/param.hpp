#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dbm/error.hpp"
#include "dbm/evo.hpp"
#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"

namespace dbm::param {

using geometry::CollocatedAirfoil;
using geometry::CollocationGrid;

// ---------------------------------------------------------------------------
// NACA 4-digit sections, closed trailing edge variant (last thickness
// coefficient -0.1036 instead of -0.1015, which makes y_t(1) exactly zero).
// Surfaces combine vertically: y = y_c +/- y_t.
// ---------------------------------------------------------------------------

inline double naca4_thickness(double t, double x) {
    double poly = 0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x +
                  0.2843 * x * x * x - 0.1036 * x * x * x * x;
    // The closed-TE coefficients cancel exactly at x=1 in real arithmetic but
    // leave a ~1e-17 residue in doubles; a negative residue would invert the
    // trailing edge and register as a (rounding-scale) self-intersection.
    return 5.0 * t * std::max(poly, 0.0);
}

inline double naca4_camber(double m, double p, double x) {
    if (m == 0.0 || p <= 0.0) return 0.0;
    if (x < p) return m / (p * p) * (2.0 * p * x - x * x);
    return m / ((1.0 - p) * (1.0 - p)) * ((1.0 - 2.0 * p) + 2.0 * p * x - x * x);
}

inline CollocatedAirfoil naca4(const CollocationGrid& grid, double m, double p, double t,
                               const std::string& name = "naca4") {
    if (t <= 0.0 || t >= 1.0) throw ContractError("naca4: thickness outside (0,1)");
    if (m != 0.0 && (p <= 0.0 || p >= 1.0))
        throw ContractError("naca4: camber position outside (0,1)");
    CollocatedAirfoil foil;
    foil.name = name;
    foil.grid = grid;
    foil.y.resize(grid.size());
    std::size_t half = static_cast<std::size_t>(grid.f()) / 2;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = grid.x(i);
        double yc = naca4_camber(m, p, x);
        double yt = naca4_thickness(t, x);
        foil.y[i] = (i <= half) ? yc + yt : yc - yt;
    }
    return foil;
}

// ---------------------------------------------------------------------------
// PARSEC: each surface is y(x) = sum_{n=1..6} a_n x^(n-1/2). The leading
// coefficient is pinned by the leading-edge radius (a_1 = +/- sqrt(2 r_le));
// the remaining five come from a linear solve against the crest position,
// crest curvature and trailing-edge conditions. The trailing-edge direction
// alpha and wedge beta split between the surfaces as alpha -/+ beta/2.
//
// Genome layout (12): r_le_up, r_le_lo, x_crest_up, y_crest_up, yxx_crest_up,
// x_crest_lo, y_crest_lo, yxx_crest_lo, y_te, t_te, alpha_te, beta_te.
// ---------------------------------------------------------------------------

struct ParsecParams {
    double r_le_up, r_le_lo;
    double x_up, y_up, yxx_up;
    double x_lo, y_lo, yxx_lo;
    double y_te, t_te;
    double alpha_te, beta_te;

    static ParsecParams from_genome(const std::vector<double>& g) {
        if (g.size() != 12) throw ContractError("parsec genome must have 12 entries");
        return {g[0], g[1], g[2], g[3], g[4], g[5], g[6], g[7], g[8], g[9], g[10], g[11]};
    }
};

namespace detail {

// Coefficients a_1..a_6 for one surface, or nothing if the 5x5 system is
// singular / the parameters are geometrically impossible.
inline std::optional<std::array<double, 6>>
parsec_surface(double r_le, double a1_sign, double x_c, double y_c, double yxx_c,
               double y_te_s, double slope_te) {
    if (!(r_le > 0.0) || !(x_c > 0.0) || !(x_c < 1.0)) return std::nullopt;
    double a1 = a1_sign * std::sqrt(2.0 * r_le);
    // exponents of the remaining basis terms
    const double e[5] = {1.5, 2.5, 3.5, 4.5, 5.5};
    Eigen::Matrix<double, 5, 5> A;
    Eigen::Matrix<double, 5, 1> b;
    // value at the trailing edge
    for (int k = 0; k < 5; ++k) A(0, k) = 1.0;
    b(0) = y_te_s - a1;
    // value at the crest
    for (int k = 0; k < 5; ++k) A(1, k) = std::pow(x_c, e[k]);
    b(1) = y_c - a1 * std::sqrt(x_c);
    // flat slope at the crest
    for (int k = 0; k < 5; ++k) A(2, k) = e[k] * std::pow(x_c, e[k] - 1.0);
    b(2) = -a1 * 0.5 / std::sqrt(x_c);
    // prescribed curvature at the crest
    for (int k = 0; k < 5; ++k)
        A(3, k) = e[k] * (e[k] - 1.0) * std::pow(x_c, e[k] - 2.0);
    b(3) = yxx_c + a1 * 0.25 * std::pow(x_c, -1.5);
    // slope at the trailing edge
    for (int k = 0; k < 5; ++k) A(4, k) = e[k];
    b(4) = slope_te - a1 * 0.5;

    Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(A);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::Matrix<double, 5, 1> sol = lu.solve(b);
    std::array<double, 6> a{a1, sol(0), sol(1), sol(2), sol(3), sol(4)};
    for (double v : a)
        if (!std::isfinite(v)) return std::nullopt;
    return a;
}

inline double parsec_eval(const std::array<double, 6>& a, double x) {
    if (x <= 0.0) return 0.0;
    double sq = std::sqrt(x);
    // x^(n-1/2) = sq * x^(n-1)
    double y = 0.0, xp = 1.0;
    for (int n = 0; n < 6; ++n) {
        y += a[static_cast<std::size_t>(n)] * sq * xp;
        xp *= x;
    }
    return y;
}

} // namespace detail

inline std::optional<CollocatedAirfoil> parsec_generate(const ParsecParams& p,
                                                        const CollocationGrid& grid) {
    double slope_up = std::tan(p.alpha_te - 0.5 * p.beta_te);
    double slope_lo = std::tan(p.alpha_te + 0.5 * p.beta_te);
    auto up = detail::parsec_surface(p.r_le_up, +1.0, p.x_up, p.y_up, p.yxx_up,
                                     p.y_te + 0.5 * p.t_te, slope_up);
    auto lo = detail::parsec_surface(p.r_le_lo, -1.0, p.x_lo, p.y_lo, p.yxx_lo,
                                     p.y_te - 0.5 * p.t_te, slope_lo);
    if (!up || !lo) return std::nullopt;
    CollocatedAirfoil foil;
    foil.name = "parsec";
    foil.grid = grid;
    foil.y.resize(grid.size());
    std::size_t half = static_cast<std::size_t>(grid.f()) / 2;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = grid.x(i);
        foil.y[i] = (i <= half) ? detail::parsec_eval(*up, x) : detail::parsec_eval(*lo, x);
        if (!std::isfinite(foil.y[i])) return std::nullopt;
    }
    return foil;
}

// ---------------------------------------------------------------------------
// NURBS: one clamped cubic rational B-spline per surface with six control
// points. End points are anchored at the leading edge (0,0) and trailing edge
// (1, y_te) with unit weight; the four interior control points and their
// weights are free. Interior knots sit at 1/3 and 2/3.
//
// Genome layout (26): upper x1,y1,...,x4,y4, w1..w4 (12), lower likewise
// (12), then y_te_up, y_te_lo.
// ---------------------------------------------------------------------------

// x(u) must be monotone to read the curve as y(x); dips up to this tolerance
// are treated as numerically flat, anything deeper is a fold.
inline constexpr double k_nurbs_fold_tol = 1e-4;

namespace detail {

// Clamped cubic basis over knots [0,0,0,0,1/3,2/3,1,1,1,1]: returns all six
// basis values at u (Cox-de Boor, evaluated directly).
inline void nurbs_basis6(double u, double N[6]) {
    static const double U[10] = {0, 0, 0, 0, 1.0 / 3.0, 2.0 / 3.0, 1, 1, 1, 1};
    // degree 0 seed: index i covers [U[i], U[i+1])
    double tmp[9];
    for (int i = 0; i < 9; ++i)
        tmp[i] = (u >= U[i] && u < U[i + 1]) ? 1.0 : 0.0;
    if (u >= 1.0) tmp[5] = 1.0; // close the last span at u = 1
    for (int p = 1; p <= 3; ++p) {
        for (int i = 0; i + p < 9; ++i) {
            double left = 0.0, right = 0.0;
            double dl = U[i + p] - U[i];
            double dr = U[i + p + 1] - U[i + 1];
            if (dl > 0.0) left = (u - U[i]) / dl * tmp[i];
            if (dr > 0.0) right = (U[i + p + 1] - u) / dr * tmp[i + 1];
            tmp[i] = left + right;
        }
    }
    for (int i = 0; i < 6; ++i) N[i] = tmp[i];
}

struct NurbsSurface {
    double px[6], py[6], w[6];

    void eval(double u, double& x, double& y) const {
        double N[6];
        nurbs_basis6(u, N);
        double sx = 0.0, sy = 0.0, sw = 0.0;
        for (int i = 0; i < 6; ++i) {
            double nw = N[i] * w[i];
            sx += nw * px[i];
            sy += nw * py[i];
            sw += nw;
        }
        x = sx / sw;
        y = sy / sw;
    }
};

// Sample the curve densely, enforce monotone x, linearly interpolate onto the
// requested abscissae. Returns false on a fold.
inline bool nurbs_sample_onto(const NurbsSurface& s, const std::vector<double>& xq,
                              std::vector<double>& yq, int samples) {
    std::vector<double> sx(static_cast<std::size_t>(samples) + 1);
    std::vector<double> sy(sx.size());
    for (std::size_t k = 0; k < sx.size(); ++k) {
        double u = static_cast<double>(k) / static_cast<double>(samples);
        s.eval(u, sx[k], sy[k]);
    }
    // clamp endpoints exactly onto the anchors
    sx.front() = s.px[0];
    sy.front() = s.py[0];
    sx.back() = s.px[5];
    sy.back() = s.py[5];
    double run_max = sx[0];
    for (std::size_t k = 1; k < sx.size(); ++k) {
        if (sx[k] < run_max - k_nurbs_fold_tol) return false; // folded in x
        run_max = std::max(run_max, sx[k]);
        sx[k] = run_max; // flatten sub-tolerance dips so interpolation is safe
    }
    yq.resize(xq.size());
    std::size_t k = 0;
    for (std::size_t q = 0; q < xq.size(); ++q) {
        double x = xq[q];
        while (k + 2 < sx.size() && sx[k + 1] < x) ++k;
        double x0 = sx[k], x1 = sx[k + 1];
        yq[q] = x1 > x0 ? sy[k] + (sy[k + 1] - sy[k]) * (x - x0) / (x1 - x0)
                        : 0.5 * (sy[k] + sy[k + 1]);
    }
    return true;
}

} // namespace detail

struct NurbsParams {
    detail::NurbsSurface upper, lower;

    static NurbsParams from_genome(const std::vector<double>& g) {
        if (g.size() != 26) throw ContractError("nurbs genome must have 26 entries");
        NurbsParams p;
        auto fill = [](detail::NurbsSurface& s, const double* xy, const double* w,
                       double y_te) {
            s.px[0] = 0.0;
            s.py[0] = 0.0;
            s.w[0] = 1.0;
            for (int i = 0; i < 4; ++i) {
                s.px[i + 1] = xy[2 * i];
                s.py[i + 1] = xy[2 * i + 1];
                s.w[i + 1] = w[i];
            }
            s.px[5] = 1.0;
            s.py[5] = y_te;
            s.w[5] = 1.0;
        };
        fill(p.upper, g.data(), g.data() + 8, g[24]);
        fill(p.lower, g.data() + 12, g.data() + 20, g[25]);
        return p;
    }
};

inline std::optional<CollocatedAirfoil> nurbs_generate(const NurbsParams& p,
                                                       const CollocationGrid& grid) {
    for (int i = 0; i < 6; ++i)
        if (!(p.upper.w[i] > 0.0) || !(p.lower.w[i] > 0.0)) return std::nullopt;
    std::size_t half = static_cast<std::size_t>(grid.f()) / 2;
    // surface queries in ascending x (leading edge outward)
    std::vector<double> xq(half + 1);
    for (std::size_t i = 0; i <= half; ++i) xq[i] = grid.x(half - i);
    int samples = std::max(800, 4 * grid.f());
    std::vector<double> y_up, y_lo;
    if (!detail::nurbs_sample_onto(p.upper, xq, y_up, samples)) return std::nullopt;
    if (!detail::nurbs_sample_onto(p.lower, xq, y_lo, samples)) return std::nullopt;
    CollocatedAirfoil foil;
    foil.name = "nurbs";
    foil.grid = grid;
    foil.y.resize(grid.size());
    for (std::size_t i = 0; i <= half; ++i) {
        foil.y[half - i] = y_up[i];
        foil.y[half + i] = y_lo[i];
    }
    return foil;
}

// ---------------------------------------------------------------------------
// Hicks-Henne: the 12% symmetric section plus signed sine bumps per surface.
// Bump i peaks at x = h_i with unit height: sin^3(pi * x^(ln 0.5 / ln h_i)).
//
// Genome layout (24): upper h1..h6, m1..m6, lower h1..h6, m1..m6.
// ---------------------------------------------------------------------------

inline double hicks_henne_bump(double h, double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double e = std::log(0.5) / std::log(h);
    double s = std::sin(M_PI * std::pow(x, e));
    return s * s * s;
}

inline std::optional<CollocatedAirfoil> hicks_henne_generate(const std::vector<double>& g,
                                                             const CollocationGrid& grid) {
    if (g.size() != 24) throw ContractError("hicks-henne genome must have 24 entries");
    for (int i = 0; i < 6; ++i) {
        if (!(g[i] > 0.0 && g[i] < 1.0)) return std::nullopt;
        if (!(g[12 + i] > 0.0 && g[12 + i] < 1.0)) return std::nullopt;
    }
    CollocatedAirfoil foil = naca4(grid, 0.0, 0.0, 0.12, "hicks-henne");
    foil.name = "hicks-henne";
    std::size_t half = static_cast<std::size_t>(grid.f()) / 2;
    for (std::size_t i = 0; i < foil.y.size(); ++i) {
        double x = grid.x(i);
        const double* h = i <= half ? g.data() : g.data() + 12;
        const double* m = i <= half ? g.data() + 6 : g.data() + 18;
        double d = 0.0;
        for (int k = 0; k < 6; ++k) d += m[k] * hicks_henne_bump(h[k], x);
        foil.y[i] += d;
    }
    return foil;
}

// ---------------------------------------------------------------------------
// Shape generator interface: every parameterization maps a bounded real
// genome to a collocated shape (or reports the combination as infeasible),
// and can propose a genome representing the 12% symmetric section to seed
// searches from a sane airfoil.
// ---------------------------------------------------------------------------

class ShapeGenerator {
public:
    virtual ~ShapeGenerator() = default;
    virtual const std::string& name() const = 0;
    virtual std::size_t dim() const = 0;
    virtual const evo::Bounds& bounds() const = 0;
    virtual std::optional<CollocatedAirfoil> generate(const std::vector<double>& genome,
                                                      const CollocationGrid& grid) const = 0;
    virtual std::vector<double> seed_genome(const CollocationGrid& grid) const = 0;
};

namespace detail {

class ParsecGenerator final : public ShapeGenerator {
public:
    ParsecGenerator() {
        bounds_ = evo::Bounds({0.002, 0.002, 0.15, 0.02, -4.0, 0.15, -0.2, -0.5,
                               -0.05, 0.0, -0.3, 0.0},
                              {0.08, 0.08, 0.7, 0.2, 0.5, 0.7, 0.05, 4.0,
                               0.05, 0.02, 0.3, 0.6});
    }
    const std::string& name() const override {
        static const std::string n = "parsec";
        return n;
    }
    std::size_t dim() const override { return 12; }
    const evo::Bounds& bounds() const override { return bounds_; }
    std::optional<CollocatedAirfoil> generate(const std::vector<double>& g,
                                              const CollocationGrid& grid) const override {
        return parsec_generate(ParsecParams::from_genome(g), grid);
    }
    std::vector<double> seed_genome(const CollocationGrid&) const override {
        // Crest of the 12% symmetric thickness polynomial, found numerically;
        // radius and trailing edge follow from the closed-form coefficients.
        double lo = 0.2, hi = 0.4;
        auto slope = [](double x) {
            return 0.6 * (0.14845 / std::sqrt(x) - 0.1260 - 0.7032 * x +
                          0.8529 * x * x - 0.4144 * x * x * x);
        };
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        double xc = 0.5 * (lo + hi);
        double yc = naca4_thickness(0.12, xc);
        double yxx = 0.6 * (-0.074225 * std::pow(xc, -1.5) - 0.7032 + 1.7058 * xc -
                            1.2432 * xc * xc);
        double a1 = 0.6 * 0.2969;
        double r_le = 0.5 * a1 * a1;
        double slope_te = 0.6 * (0.14845 - 0.1260 - 0.7032 + 0.8529 - 0.4144);
        double beta = 2.0 * std::atan(-slope_te);
        return {r_le, r_le, xc, yc, yxx, xc, -yc, -yxx, 0.0, 0.0, 0.0, beta};
    }

private:
    evo::Bounds bounds_;
};

class NurbsGenerator final : public ShapeGenerator {
public:
    NurbsGenerator() {
        std::vector<double> lo, hi;
        auto surface_box = [&](bool upper) {
            for (int i = 0; i < 4; ++i) {
                lo.push_back(0.0); // control x
                hi.push_back(1.0);
                lo.push_back(upper ? -0.1 : -0.35); // control y
                hi.push_back(upper ? 0.35 : 0.1);
            }
            for (int i = 0; i < 4; ++i) {
                lo.push_back(0.1); // rational weights
                hi.push_back(5.0);
            }
        };
        surface_box(true);
        surface_box(false);
        lo.push_back(-0.02); // y_te upper
        hi.push_back(0.05);
        lo.push_back(-0.05); // y_te lower
        hi.push_back(0.02);
        bounds_ = evo::Bounds(std::move(lo), std::move(hi));
    }
    const std::string& name() const override {
        static const std::string n = "nurbs";
        return n;
    }
    std::size_t dim() const override { return 26; }
    const evo::Bounds& bounds() const override { return bounds_; }
    std::optional<CollocatedAirfoil> generate(const std::vector<double>& g,
                                              const CollocationGrid& grid) const override {
        return nurbs_generate(NurbsParams::from_genome(g), grid);
    }
    std::vector<double> seed_genome(const CollocationGrid&) const override {
        // Least-squares fit of the interior control y values to the 12%
        // symmetric section with fixed x spread and unit weights. The fit is
        // linear because equal weights reduce the curve to a plain B-spline.
        const double cx[4] = {0.05, 0.30, 0.60, 0.85};
        const int rows = 64;
        Eigen::MatrixXd A(rows, 4);
        Eigen::VectorXd b_up(rows);
        detail::NurbsSurface probe{};
        probe.px[0] = 0.0;
        probe.px[5] = 1.0;
        for (int i = 0; i < 4; ++i) probe.px[i + 1] = cx[i];
        for (int i = 0; i < 6; ++i) probe.w[i] = 1.0;
        for (int i = 0; i < 6; ++i) probe.py[i] = 0.0;
        for (int r = 0; r < rows; ++r) {
            double u = (static_cast<double>(r) + 0.5) / rows;
            double N[6];
            detail::nurbs_basis6(u, N);
            double x = 0.0;
            for (int i = 0; i < 6; ++i) x += N[i] * probe.px[i];
            for (int i = 0; i < 4; ++i) A(r, i) = N[i + 1];
            b_up(r) = naca4_thickness(0.12, x);
        }
        Eigen::VectorXd cy = A.colPivHouseholderQr().solve(b_up);
        std::vector<double> g(26, 0.0);
        for (int i = 0; i < 4; ++i) {
            g[static_cast<std::size_t>(2 * i)] = cx[i];
            g[static_cast<std::size_t>(2 * i + 1)] = cy(i);
            g[static_cast<std::size_t>(12 + 2 * i)] = cx[i];
            g[static_cast<std::size_t>(12 + 2 * i + 1)] = -cy(i);
        }
        for (int i = 0; i < 4; ++i) {
            g[static_cast<std::size_t>(8 + i)] = 1.0;
            g[static_cast<std::size_t>(20 + i)] = 1.0;
        }
        g[24] = 0.0;
        g[25] = 0.0;
        bounds_.clip(g);
        return g;
    }

private:
    evo::Bounds bounds_;
};

class HicksHenneGenerator final : public ShapeGenerator {
public:
    HicksHenneGenerator() {
        std::vector<double> lo(24), hi(24);
        for (int s = 0; s < 2; ++s) {
            for (int i = 0; i < 6; ++i) {
                lo[static_cast<std::size_t>(12 * s + i)] = 0.05; // peak locations
                hi[static_cast<std::size_t>(12 * s + i)] = 0.95;
                lo[static_cast<std::size_t>(12 * s + 6 + i)] = -0.08; // magnitudes
                hi[static_cast<std::size_t>(12 * s + 6 + i)] = 0.08;
            }
        }
        bounds_ = evo::Bounds(std::move(lo), std::move(hi));
    }
    const std::string& name() const override {
        static const std::string n = "hicks-henne";
        return n;
    }
    std::size_t dim() const override { return 24; }
    const evo::Bounds& bounds() const override { return bounds_; }
    std::optional<CollocatedAirfoil> generate(const std::vector<double>& g,
                                              const CollocationGrid& grid) const override {
        return hicks_henne_generate(g, grid);
    }
    std::vector<double> seed_genome(const CollocationGrid&) const override {
        // zero magnitudes on cosine-spread peaks: exactly the base section
        std::vector<double> g(24, 0.0);
        for (int i = 0; i < 6; ++i) {
            double h = 0.5 * (1.0 - std::cos((i + 1) * M_PI / 7.0));
            g[static_cast<std::size_t>(i)] = h;
            g[static_cast<std::size_t>(12 + i)] = h;
        }
        return g;
    }

private:
    evo::Bounds bounds_;
};

class MorphGenerator final : public ShapeGenerator {
public:
    MorphGenerator(const morphing::BaselineSet& baselines, morphing::MorphMode mode,
                   geometry::RepairOptions repair)
        : baselines_(&baselines),
          mode_(mode),
          repair_(repair),
          name_(morphing::morph_mode_name(mode)),
          bounds_(evo::Bounds::uniform(baselines.size(),
                                       mode == morphing::MorphMode::blend ? -1.0 : 0.0, 1.0)) {}

    const std::string& name() const override { return name_; }
    std::size_t dim() const override { return baselines_->size(); }
    const evo::Bounds& bounds() const override { return bounds_; }
    std::optional<CollocatedAirfoil> generate(const std::vector<double>& g,
                                              const CollocationGrid& grid) const override {
        if (grid != baselines_->grid)
            throw GridMismatchError("morph generator: requested grid F=" +
                                    std::to_string(grid.f()) + ", baselines use F=" +
                                    std::to_string(baselines_->grid.f()));
        try {
            return morphing::morph(*baselines_, g, mode_, repair_);
        } catch (const ShapeError&) {
            return std::nullopt;
        }
    }
    std::vector<double> seed_genome(const CollocationGrid&) const override {
        // one-hot on the 12% symmetric baseline when the set has it
        std::vector<double> g(baselines_->size(), 0.0);
        int idx = baselines_->index_of("naca0012");
        g[static_cast<std::size_t>(idx >= 0 ? idx : 0)] = 1.0;
        return g;
    }

private:
    const morphing::BaselineSet* baselines_;
    morphing::MorphMode mode_;
    geometry::RepairOptions repair_;
    std::string name_;
    evo::Bounds bounds_;
};

} // namespace detail

// Factory over the parameterization names used in configs and reports. The
// morph kinds need the baseline set; the analytic kinds ignore it.
inline std::unique_ptr<ShapeGenerator>
make_generator(const std::string& kind, const morphing::BaselineSet* baselines = nullptr,
               const geometry::RepairOptions& repair = {}) {
    if (kind == "parsec") return std::make_unique<detail::ParsecGenerator>();
    if (kind == "nurbs") return std::make_unique<detail::NurbsGenerator>();
    if (kind == "hicks-henne" || kind == "hicks_henne")
        return std::make_unique<detail::HicksHenneGenerator>();
    if (kind == "dbm" || kind == "dbm-i" || kind == "dbm_i") {
        if (!baselines)
            throw ConfigError("generator '" + kind + "' needs a baseline set");
        return std::make_unique<detail::MorphGenerator>(
            *baselines, morphing::morph_mode_from_name(kind == "dbm_i" ? "dbm-i" : kind),
            repair);
    }
    throw ConfigError("unknown shape generator '" + kind + "'");
}

inline const std::vector<std::string>& generator_kinds() {
    static const std::vector<std::string> kinds = {"parsec", "nurbs", "hicks-henne", "dbm",
                                                   "dbm-i"};
    return kinds;
}

// ---------------------------------------------------------------------------
// Shape reconstruction: fit a generator's genome to a target shape by
// minimizing the mean absolute error with the scalar GA. Infeasible genomes
// score a flat penalty instead of aborting the search. The default early-stop
// threshold is the wind-tunnel-accuracy figure commonly attributed to Kulfan
// (1.44e-3 in y/c), past which further fitting has no physical meaning.
// ---------------------------------------------------------------------------

inline constexpr double k_fit_tolerance_mae = 1.44e-3;
inline constexpr double k_infeasible_penalty_mae = 10.0;

struct ReconstructionResult {
    std::string method;
    std::vector<double> best_genome;
    double best_mae = std::numeric_limits<double>::infinity();
    std::vector<evo::GaTracePoint> trace;
    int generations_run = 0;
    bool early_stopped = false;
};

inline ReconstructionResult reconstruct(const CollocatedAirfoil& target,
                                        const ShapeGenerator& gen, evo::GaConfig cfg,
                                        std::optional<double> early_stop = k_fit_tolerance_mae,
                                        double penalty = k_infeasible_penalty_mae) {
    target.check_consistent();
    cfg.early_stop = early_stop;
    const CollocationGrid& grid = target.grid;
    auto objective = [&](const std::vector<double>& genome) {
        auto shape = gen.generate(genome, grid);
        if (!shape) return penalty;
        return geometry::mean_absolute_error(*shape, target);
    };
    auto ga = evo::ga_minimize(objective, gen.bounds(), cfg, {gen.seed_genome(grid)});
    ReconstructionResult out;
    out.method = gen.name();
    out.best_genome = std::move(ga.best_genome);
    out.best_mae = ga.best_value;
    out.trace = std::move(ga.trace);
    out.generations_run = ga.generations_run;
    out.early_stopped = ga.early_stopped;
    return out;
}

} // namespace dbm::param
