#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbm/error.hpp"
#include "dbm/util.hpp"

namespace dbm::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// ---------------------------------------------------------------------------
// Collocation grid.
//
// F+1 abscissae x_i = |1 - 2i/F| for i = 0..F with F even. Walked in index
// order this traces trailing edge -> upper surface -> leading edge -> lower
// surface -> trailing edge; only y values vary between shapes on a shared
// grid, which is what makes morphing a plain vector blend.
// ---------------------------------------------------------------------------

class CollocationGrid {
public:
    static CollocationGrid make(int f) {
        if (f < 2 || f % 2 != 0)
            throw ContractError("CollocationGrid: F must be even and >= 2, got " +
                                std::to_string(f));
        CollocationGrid g;
        g.f_ = f;
        g.x_.resize(static_cast<std::size_t>(f) + 1);
        // Compute the front half and mirror it so x[i] == x[F-i] holds exactly.
        for (int i = 0; i <= f / 2; ++i) {
            double x = 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(f);
            g.x_[static_cast<std::size_t>(i)] = x;
            g.x_[static_cast<std::size_t>(f - i)] = x;
        }
        g.x_[static_cast<std::size_t>(f) / 2] = 0.0;
        return g;
    }

    int f() const { return f_; }
    std::size_t size() const { return x_.size(); }
    double x(std::size_t i) const { return x_[i]; }
    const std::vector<double>& xs() const { return x_; }

    bool operator==(const CollocationGrid& other) const { return f_ == other.f_; }
    bool operator!=(const CollocationGrid& other) const { return f_ != other.f_; }

private:
    int f_ = 0;
    std::vector<double> x_;
};

// An airfoil as one y value per grid abscissa. Index 0..F/2 is the upper
// surface (trailing edge to leading edge), F/2..F the lower surface.
struct CollocatedAirfoil {
    std::string name;
    CollocationGrid grid;
    std::vector<double> y;

    std::size_t size() const { return y.size(); }

    void check_consistent() const {
        if (y.size() != grid.size())
            throw ContractError("CollocatedAirfoil '" + name + "': y has " +
                                std::to_string(y.size()) + " values, grid wants " +
                                std::to_string(grid.size()));
    }
};

inline void require_same_grid(const CollocatedAirfoil& a, const CollocatedAirfoil& b) {
    if (a.grid != b.grid)
        throw GridMismatchError("grids differ: F=" + std::to_string(a.grid.f()) +
                                " vs F=" + std::to_string(b.grid.f()));
}

// ---------------------------------------------------------------------------
// Raw airfoil outlines and coordinate file parsing.
// ---------------------------------------------------------------------------

struct RawAirfoil {
    std::string name;
    std::vector<Point> points; // single traversal TE -> upper -> LE -> lower -> TE
};

enum class CoordinateFormat {
    selig,    // optional name line, then one x y pair per line, TE->LE->TE
    lednicer, // name line, point-count line, upper LE->TE block, lower LE->TE block
};

namespace detail {

inline bool is_coordinate_line(const std::string& line) {
    auto toks = split_ws(line);
    if (toks.size() != 2) return false;
    char* end = nullptr;
    std::strtod(toks[0].c_str(), &end);
    if (*end != '\0') return false;
    std::strtod(toks[1].c_str(), &end);
    return *end == '\0';
}

} // namespace detail

// Lednicer files announce the two surface point counts on a line of their own;
// those counts are > 1.5 while coordinates never exceed ~1. That is the usual
// sniffing rule and it is what we use.
inline CoordinateFormat detect_format(const std::string& text) {
    for (const auto& raw : split_char(text, '\n')) {
        auto line = trim(raw);
        if (line.empty() || !detail::is_coordinate_line(line)) continue;
        auto toks = split_ws(line);
        double a = parse_double(toks[0], "detect_format");
        return a > 1.5 ? CoordinateFormat::lednicer : CoordinateFormat::selig;
    }
    throw ParseError("coordinate file contains no numeric lines");
}

inline RawAirfoil parse_airfoil(const std::string& text, CoordinateFormat format,
                                const std::string& origin = "airfoil") {
    RawAirfoil foil;
    std::vector<std::pair<int, Point>> coords; // keep line numbers for diagnostics
    std::vector<std::string> lines = split_char(text, '\n');
    int lineno = 0;
    for (const auto& raw : lines) {
        ++lineno;
        auto line = trim(raw);
        if (line.empty()) continue;
        if (detail::is_coordinate_line(line)) {
            auto toks = split_ws(line);
            std::string ctx = origin + ":" + std::to_string(lineno);
            coords.push_back({lineno, Point{parse_double(toks[0], ctx),
                                            parse_double(toks[1], ctx)}});
        } else if (coords.empty() && foil.name.empty()) {
            foil.name = line; // header line before any coordinates
        } else {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": unexpected non-coordinate line '" + line + "'");
        }
    }
    if (coords.empty()) throw ParseError(origin + ": no coordinates found");

    if (format == CoordinateFormat::selig) {
        foil.points.reserve(coords.size());
        for (auto& [ln, p] : coords) foil.points.push_back(p);
    } else {
        // First "coordinate" pair is the surface point counts.
        int n_up = static_cast<int>(std::lround(coords[0].second.x));
        int n_lo = static_cast<int>(std::lround(coords[0].second.y));
        if (n_up < 2 || n_lo < 2)
            throw ParseError(origin + ":" + std::to_string(coords[0].first) +
                             ": bad surface point counts");
        if (static_cast<std::size_t>(n_up + n_lo) != coords.size() - 1)
            throw ParseError(origin + ": point count mismatch: header says " +
                             std::to_string(n_up) + "+" + std::to_string(n_lo) +
                             ", file has " + std::to_string(coords.size() - 1));
        // Upper runs LE->TE; reverse it so the traversal starts at the TE.
        for (int i = n_up; i >= 1; --i) foil.points.push_back(coords[static_cast<std::size_t>(i)].second);
        // Lower runs LE->TE already; skip its LE point if it repeats the upper's.
        std::size_t lo_begin = static_cast<std::size_t>(n_up) + 1;
        for (std::size_t i = lo_begin; i < coords.size(); ++i) {
            if (i == lo_begin && !foil.points.empty()) {
                const Point& le = foil.points.back();
                const Point& p = coords[i].second;
                if (p.x == le.x && p.y == le.y) continue;
            }
            foil.points.push_back(coords[i].second);
        }
    }
    if (foil.points.size() < 5)
        throw DegenerateInputError(origin + ": only " + std::to_string(foil.points.size()) +
                                   " points, need at least 5");
    if (foil.name.empty()) foil.name = origin;
    return foil;
}

inline RawAirfoil load_airfoil(const std::filesystem::path& path,
                               std::optional<CoordinateFormat> format = std::nullopt) {
    std::string text = read_text_file(path);
    CoordinateFormat fmt = format ? *format : detect_format(text);
    return parse_airfoil(text, fmt, path.filename().string());
}

inline std::string to_selig(const RawAirfoil& foil, int digits = 7) {
    std::string out = foil.name + "\n";
    for (const auto& p : foil.points)
        out += " " + fmt_fixed(p.x, digits) + "  " + fmt_fixed(p.y, digits) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Chord normalization: translate so the leading edge sits at x=0, scale both
// axes by the chord. y keeps its offset (camber must survive), x does not.
// ---------------------------------------------------------------------------

inline RawAirfoil normalize_chord(const RawAirfoil& foil) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : foil.points) {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
    }
    double chord = x_max - x_min;
    if (!(chord > 0.0) || !std::isfinite(chord))
        throw DegenerateInputError("airfoil '" + foil.name + "' has zero or invalid chord");
    RawAirfoil out;
    out.name = foil.name;
    out.points.reserve(foil.points.size());
    for (const auto& p : foil.points)
        out.points.push_back({(p.x - x_min) / chord, p.y / chord});
    return out;
}

// ---------------------------------------------------------------------------
// Collocation: resample a raw outline onto a grid by linear interpolation in
// x, one surface at a time. The outline is split at its minimum-x point; the
// stretch before it is the upper surface, the rest the lower surface.
// ---------------------------------------------------------------------------

namespace detail {

// Surface sampled as x ascending with strictly increasing x. Duplicate
// consecutive points are dropped; genuinely non-monotone x is an error.
struct Surface {
    std::vector<double> x, y;

    double interp(double xq) const {
        // Clamp queries past the sampled range onto the end segments; loader
        // normalization keeps any overhang at rounding level.
        auto it = std::lower_bound(x.begin(), x.end(), xq);
        std::size_t hi;
        if (it == x.begin()) hi = 1;
        else if (it == x.end()) hi = x.size() - 1;
        else hi = static_cast<std::size_t>(it - x.begin());
        std::size_t lo = hi - 1;
        double t = (xq - x[lo]) / (x[hi] - x[lo]);
        return y[lo] + t * (y[hi] - y[lo]);
    }
};

inline Surface make_surface(const std::vector<Point>& pts, bool reverse,
                            const std::string& which, const std::string& name) {
    Surface s;
    s.x.reserve(pts.size());
    s.y.reserve(pts.size());
    auto push = [&](const Point& p) {
        if (!s.x.empty()) {
            if (p.x == s.x.back()) {
                if (p.y == s.y.back()) return; // exact duplicate, drop
                throw DegenerateInputError("airfoil '" + name + "': " + which +
                                           " surface has two points at x=" +
                                           fmt_double(p.x));
            }
            if (p.x < s.x.back())
                throw DegenerateInputError("airfoil '" + name + "': " + which +
                                           " surface x not monotone near x=" +
                                           fmt_double(p.x));
        }
        s.x.push_back(p.x);
        s.y.push_back(p.y);
    };
    if (reverse) {
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) push(*it);
    } else {
        for (const auto& p : pts) push(p);
    }
    if (s.x.size() < 2)
        throw DegenerateInputError("airfoil '" + name + "': " + which +
                                   " surface has fewer than 2 distinct points");
    return s;
}

} // namespace detail

inline CollocatedAirfoil collocate(const RawAirfoil& foil, const CollocationGrid& grid) {
    // Split at the first point attaining minimum x.
    std::size_t le = 0;
    for (std::size_t i = 1; i < foil.points.size(); ++i)
        if (foil.points[i].x < foil.points[le].x) le = i;
    if (le == 0 || le + 1 == foil.points.size())
        throw DegenerateInputError("airfoil '" + foil.name +
                                   "': leading edge at an end of the traversal");

    std::vector<Point> upper(foil.points.begin(), foil.points.begin() + static_cast<long>(le) + 1);
    std::vector<Point> lower(foil.points.begin() + static_cast<long>(le), foil.points.end());
    detail::Surface up = detail::make_surface(upper, /*reverse=*/true, "upper", foil.name);
    detail::Surface lo = detail::make_surface(lower, /*reverse=*/false, "lower", foil.name);

    CollocatedAirfoil out;
    out.name = foil.name;
    out.grid = grid;
    out.y.resize(grid.size());
    std::size_t half = static_cast<std::size_t>(grid.f()) / 2;
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.y[i] = (i <= half) ? up.interp(grid.x(i)) : lo.interp(grid.x(i));
    return out;
}

inline RawAirfoil to_raw(const CollocatedAirfoil& foil) {
    foil.check_consistent();
    RawAirfoil out;
    out.name = foil.name;
    out.points.reserve(foil.size());
    for (std::size_t i = 0; i < foil.size(); ++i)
        out.points.push_back({foil.grid.x(i), foil.y[i]});
    return out;
}

// ---------------------------------------------------------------------------
// Mean absolute error between two shapes on the same grid:
//   (2/F) * sum_i |y_a[i] - y_b[i]|
// The factor 2/F (not 1/(F+1)) makes the score a per-surface average, so it is
// comparable across grid resolutions.
// ---------------------------------------------------------------------------

inline double mean_absolute_error(const CollocatedAirfoil& a, const CollocatedAirfoil& b) {
    a.check_consistent();
    b.check_consistent();
    require_same_grid(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.y[i] - b.y[i]);
    return 2.0 * s / static_cast<double>(a.grid.f());
}

// ---------------------------------------------------------------------------
// Self-intersection detection. The outline is the closed-ish polyline through
// the collocated points; we report proper crossings between non-adjacent
// segments. Touches, shared endpoints and collinear overlaps do not count: the
// repair below only knows how to undo transversal crossings.
// ---------------------------------------------------------------------------

struct Intersection {
    std::size_t seg_a;     // first segment index (segment i runs point i -> i+1)
    std::size_t seg_b;     // second segment index, > seg_a + 1
    Point where;
};

namespace detail {

inline double orient(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline bool proper_cross(const Point& a, const Point& b, const Point& c, const Point& d,
                         Point& where) {
    double o1 = orient(a, b, c);
    double o2 = orient(a, b, d);
    double o3 = orient(c, d, a);
    double o4 = orient(c, d, b);
    if (!((o1 > 0.0) != (o2 > 0.0)) || o1 == 0.0 || o2 == 0.0) return false;
    if (!((o3 > 0.0) != (o4 > 0.0)) || o3 == 0.0 || o4 == 0.0) return false;
    double t = o1 / (o1 - o2); // position of the crossing along cd
    where.x = c.x + t * (d.x - c.x);
    where.y = c.y + t * (d.y - c.y);
    return true;
}

} // namespace detail

inline std::vector<Intersection> find_intersections(const CollocatedAirfoil& foil) {
    foil.check_consistent();
    const auto& xs = foil.grid.xs();
    const auto& ys = foil.y;
    std::size_t n_seg = foil.size() - 1;
    std::vector<Intersection> out;
    for (std::size_t i = 0; i + 2 < n_seg + 1; ++i) {
        Point a{xs[i], ys[i]}, b{xs[i + 1], ys[i + 1]};
        double ab_xlo = std::min(a.x, b.x), ab_xhi = std::max(a.x, b.x);
        double ab_ylo = std::min(a.y, b.y), ab_yhi = std::max(a.y, b.y);
        for (std::size_t j = i + 2; j < n_seg; ++j) {
            Point c{xs[j], ys[j]}, d{xs[j + 1], ys[j + 1]};
            // cheap bounding-box reject before the orientation tests
            if (std::max(c.x, d.x) < ab_xlo || std::min(c.x, d.x) > ab_xhi) continue;
            if (std::max(c.y, d.y) < ab_ylo || std::min(c.y, d.y) > ab_yhi) continue;
            Point w;
            if (detail::proper_cross(a, b, c, d, w)) out.push_back({i, j, w});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Repair. One crossing between segments i and j means the point run i+1..j is
// traversed "inside out": reversing that run of y values undoes the fold.
// The kink left at each seam is then cut out by replacing a small neighborhood
// with a straight line, and once the outline is crossing-free a single
// moving-average pass rounds off what the surgery left behind.
// ---------------------------------------------------------------------------

struct RepairOptions {
    bool enabled = true;
    int neighborhood = 5;   // points replaced on each side of a seam
    int smooth_window = 7;  // centered moving-average width; 1 disables
    int max_passes = 20;    // flip/relax rounds before giving up

    void validate() const {
        if (neighborhood < 1) throw ContractError("repair: neighborhood must be >= 1");
        if (smooth_window < 1 || smooth_window % 2 == 0)
            throw ContractError("repair: smooth_window must be odd and >= 1");
        if (max_passes < 1) throw ContractError("repair: max_passes must be >= 1");
    }
};

namespace detail {

// Straight-line fill of y over points [c-nb+1, c+nb] (clipped to the interior)
// anchored at the surviving points just outside that window.
inline void relax_seam(std::vector<double>& y, std::size_t c, int nb) {
    std::size_t n = y.size();
    long lo = static_cast<long>(c) - nb + 1;
    long hi = static_cast<long>(c) + nb;
    lo = std::max<long>(lo, 1);
    hi = std::min<long>(hi, static_cast<long>(n) - 2);
    if (lo > hi) return;
    std::size_t a = static_cast<std::size_t>(lo) - 1;
    std::size_t b = static_cast<std::size_t>(hi) + 1;
    double span = static_cast<double>(b - a);
    for (std::size_t k = static_cast<std::size_t>(lo); k <= static_cast<std::size_t>(hi); ++k) {
        double t = static_cast<double>(k - a) / span;
        y[k] = y[a] + t * (y[b] - y[a]);
    }
}

inline std::vector<double> smooth_moving_average(const std::vector<double>& y, int window) {
    if (window <= 1) return y;
    int h = window / 2;
    std::vector<double> out = y; // endpoints and short edges stay anchored
    long n = static_cast<long>(y.size());
    for (long i = h; i + h < n; ++i) {
        double s = 0.0;
        for (long k = i - h; k <= i + h; ++k) s += y[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = s / static_cast<double>(window);
    }
    return out;
}

} // namespace detail

struct RepairReport {
    int passes = 0;           // flip/relax rounds actually used
    int crossings_found = 0;  // total crossings encountered across rounds
    bool smoothed = false;
};

inline CollocatedAirfoil remove_intersections(const CollocatedAirfoil& foil,
                                              const RepairOptions& opt = {},
                                              RepairReport* report = nullptr) {
    foil.check_consistent();
    opt.validate();
    CollocatedAirfoil cur = foil;
    RepairReport rep;
    bool done = false;
    while (!done) {
        auto crossings = find_intersections(cur);
        if (crossings.empty()) {
            if (opt.smooth_window > 1 && !rep.smoothed && rep.passes > 0) {
                cur.y = detail::smooth_moving_average(cur.y, opt.smooth_window);
                rep.smoothed = true;
                continue; // re-check: smoothing can in principle fold the outline back
            }
            done = true;
            continue;
        }
        if (rep.passes >= opt.max_passes)
            throw NonRepairableError("airfoil '" + foil.name + "': still self-intersecting after " +
                                     std::to_string(opt.max_passes) + " repair passes");
        ++rep.passes;
        rep.crossings_found += static_cast<int>(crossings.size());
        rep.smoothed = false; // this round's edit invalidates the earlier smoothing
        const Intersection& c = crossings.front();
        std::reverse(cur.y.begin() + static_cast<long>(c.seg_a) + 1,
                     cur.y.begin() + static_cast<long>(c.seg_b) + 1);
        detail::relax_seam(cur.y, c.seg_a, opt.neighborhood);
        detail::relax_seam(cur.y, c.seg_b, opt.neighborhood);
    }
    if (report) *report = rep;
    return cur;
}

// ---------------------------------------------------------------------------
// Serialization of collocated shapes: a CSV for spreadsheets and a JSON
// round-trip format that keeps full double precision.
// ---------------------------------------------------------------------------

inline std::string to_csv(const CollocatedAirfoil& foil) {
    foil.check_consistent();
    std::string out = "i,x,y\n";
    for (std::size_t i = 0; i < foil.size(); ++i)
        out += std::to_string(i) + "," + fmt_double(foil.grid.x(i)) + "," +
               fmt_double(foil.y[i]) + "\n";
    return out;
}

inline nlohmann::json to_json(const CollocatedAirfoil& foil) {
    foil.check_consistent();
    return nlohmann::json{{"name", foil.name}, {"F", foil.grid.f()}, {"y", foil.y}};
}

inline CollocatedAirfoil from_json(const nlohmann::json& j) {
    CollocatedAirfoil foil;
    try {
        foil.name = j.at("name").get<std::string>();
        foil.grid = CollocationGrid::make(j.at("F").get<int>());
        foil.y = j.at("y").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("collocated airfoil JSON: ") + e.what());
    }
    foil.check_consistent();
    return foil;
}

} // namespace dbm::geometry
