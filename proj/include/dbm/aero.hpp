#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "dbm/error.hpp"
#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"
#include "dbm/util.hpp"

namespace dbm::aero {

using geometry::CollocatedAirfoil;

// ---------------------------------------------------------------------------
// Polars. Angles are in degrees throughout. Rows keep their converged flag so
// nothing is dropped silently; consumers skip non-converged rows explicitly.
// ---------------------------------------------------------------------------

struct FlowCondition {
    double reynolds = 1e6;
    double mach = 0.0;
    double n_crit = 9.0; // transition amplification exponent

    void validate() const {
        if (!(reynolds > 0.0)) throw ContractError("FlowCondition: Re must be positive");
        if (mach < 0.0 || mach >= 1.0) throw ContractError("FlowCondition: mach outside [0,1)");
        if (!(n_crit > 0.0)) throw ContractError("FlowCondition: n_crit must be positive");
    }
};

struct PolarRow {
    double alpha = 0.0;
    double cl = 0.0;
    double cd = 0.0;
    bool converged = false;
};

struct Polar {
    std::vector<PolarRow> rows; // ascending alpha

    std::size_t n_converged() const {
        std::size_t n = 0;
        for (const auto& r : rows)
            if (r.converged) ++n;
        return n;
    }
};

// Angle-of-attack scan: a coarse pass over the whole window, then fine passes
// around the interesting angles (peak efficiency and stall).
struct ScanSchedule {
    double alpha_lo = -5.0;
    double alpha_hi = 25.0;
    double rough_step = 1.0;
    double fine_step = 0.25;
    double fine_margin = 2.0; // half-width of each fine window

    void validate() const {
        if (!(alpha_lo < alpha_hi)) throw ContractError("ScanSchedule: empty alpha window");
        if (!(rough_step > 0.0) || !(fine_step > 0.0))
            throw ContractError("ScanSchedule: steps must be positive");
        if (fine_step > rough_step)
            throw ContractError("ScanSchedule: fine step must not exceed rough step");
        if (fine_margin < 0.0) throw ContractError("ScanSchedule: negative fine margin");
    }
};

// An aerodynamic backend: evaluate the shape at the given angles and return
// one row per angle, in order. Implementations must be safe to call from
// multiple threads at once.
class PolarEvaluator {
public:
    virtual ~PolarEvaluator() = default;
    virtual const std::string& name() const = 0;
    virtual std::vector<PolarRow> sweep(const CollocatedAirfoil& shape,
                                        const FlowCondition& flow,
                                        const std::vector<double>& alphas) const = 0;
};

// ---------------------------------------------------------------------------
// Polar digests.
// ---------------------------------------------------------------------------

struct CldMax {
    double value = 0.0;
    double alpha = 0.0;
};

// Highest lift-to-drag ratio over converged rows; exact ties resolve to the
// smaller angle.
inline CldMax cld_max(const Polar& polar) {
    bool found = false;
    CldMax best;
    for (const auto& r : polar.rows) {
        if (!r.converged) continue;
        if (!(r.cd > 0.0))
            throw EvaluationError("polar row at alpha=" + fmt_double(r.alpha) +
                                  " has non-positive drag");
        double v = r.cl / r.cd;
        if (!found || v > best.value) {
            best = {v, r.alpha};
            found = true;
        }
    }
    if (!found) throw EvaluationError("no converged rows in polar");
    return best;
}

struct StallAngle {
    double alpha = 0.0;
    bool censored = false; // lift still rising at the scan edge
};

// First discrete local maximum of C_l at non-negative alpha, computed over
// converged rows only. Runs of equal C_l count as one candidate and resolve
// to the run's first angle. A missing left neighbor counts as satisfied; a
// run touching the scan's right edge proves nothing, so the result is the
// edge angle flagged censored.
inline StallAngle stall_angle(const Polar& polar) {
    std::vector<const PolarRow*> rows;
    for (const auto& r : polar.rows)
        if (r.converged) rows.push_back(&r);
    if (rows.empty()) throw EvaluationError("no converged rows in polar");

    std::size_t n = rows.size();
    for (std::size_t s = 0; s < n;) {
        std::size_t e = s;
        while (e + 1 < n && rows[e + 1]->cl == rows[s]->cl) ++e;
        // candidate runs must contain some alpha >= 0
        if (rows[e]->alpha >= 0.0) {
            bool left_ok = s == 0 || rows[s - 1]->cl <= rows[s]->cl;
            bool right_exists = e + 1 < n;
            bool right_ok = right_exists && rows[e + 1]->cl <= rows[s]->cl;
            if (left_ok && right_ok) {
                // first angle of the run that is >= 0
                for (std::size_t k = s; k <= e; ++k)
                    if (rows[k]->alpha >= 0.0) return {rows[k]->alpha, false};
            }
        }
        s = e + 1;
    }
    return {rows.back()->alpha, true};
}

// ---------------------------------------------------------------------------
// Adaptive polar evaluation: rough scan, locate the peak-efficiency and stall
// angles, then refine around both. All requested angles stay in the result.
// ---------------------------------------------------------------------------

namespace detail {

inline void add_fine_window(std::vector<double>& alphas, double center, double margin,
                            const ScanSchedule& s) {
    double lo = std::max(s.alpha_lo, center - margin);
    double hi = std::min(s.alpha_hi, center + margin);
    long k0 = static_cast<long>(std::ceil((lo - s.alpha_lo) / s.fine_step - 1e-9));
    long k1 = static_cast<long>(std::floor((hi - s.alpha_lo) / s.fine_step + 1e-9));
    for (long k = k0; k <= k1; ++k) alphas.push_back(s.alpha_lo + static_cast<double>(k) * s.fine_step);
}

} // namespace detail

inline Polar evaluate_polar(const CollocatedAirfoil& shape, const FlowCondition& flow,
                            const ScanSchedule& sched, const PolarEvaluator& eval) {
    shape.check_consistent();
    flow.validate();
    sched.validate();

    std::vector<double> rough;
    for (long k = 0;; ++k) {
        double a = sched.alpha_lo + static_cast<double>(k) * sched.rough_step;
        if (a > sched.alpha_hi + 1e-9) break;
        rough.push_back(std::min(a, sched.alpha_hi));
    }
    auto rough_rows = eval.sweep(shape, flow, rough);
    if (rough_rows.size() != rough.size())
        throw ContractError("evaluator returned " + std::to_string(rough_rows.size()) +
                            " rows for " + std::to_string(rough.size()) + " angles");

    Polar coarse;
    coarse.rows = rough_rows;
    if (coarse.n_converged() == 0)
        throw EvaluationError("rough scan produced no converged rows");

    auto peak = cld_max(coarse);
    auto stall = stall_angle(coarse);

    std::vector<double> fine;
    detail::add_fine_window(fine, peak.alpha, sched.fine_margin, sched);
    detail::add_fine_window(fine, stall.alpha, sched.fine_margin, sched);

    // drop duplicates and angles already covered by the rough lattice
    std::sort(fine.begin(), fine.end());
    std::vector<double> todo;
    for (double a : fine) {
        if (!todo.empty() && std::abs(a - todo.back()) < 1e-9) continue;
        bool seen = false;
        for (double r : rough)
            if (std::abs(a - r) < 1e-9) {
                seen = true;
                break;
            }
        if (!seen) todo.push_back(a);
    }

    auto fine_rows = eval.sweep(shape, flow, todo);
    if (fine_rows.size() != todo.size())
        throw ContractError("evaluator returned wrong fine row count");

    Polar out;
    out.rows = std::move(rough_rows);
    out.rows.insert(out.rows.end(), fine_rows.begin(), fine_rows.end());
    std::sort(out.rows.begin(), out.rows.end(),
              [](const PolarRow& a, const PolarRow& b) { return a.alpha < b.alpha; });
    if (out.n_converged() == 0) throw EvaluationError("polar has no converged rows");
    return out;
}

// ---------------------------------------------------------------------------
// The two design objectives: peak lift-to-drag ratio and the stall margin
// (how far past the peak-efficiency angle the section keeps lifting).
// Any failure along the way collapses to the failed pair (0, 0): the
// optimizer treats such designs as dominated rather than crashing.
// ---------------------------------------------------------------------------

struct ObjectivePair {
    double cld_max = 0.0;
    double delta_alpha = 0.0;
    double alpha_at_cld_max = 0.0;
    double alpha_stall = 0.0;
    bool stall_censored = false;
    bool failed = false;
};

inline ObjectivePair objectives_from_polar(const Polar& polar) {
    ObjectivePair out;
    auto peak = cld_max(polar);
    auto stall = stall_angle(polar);
    out.cld_max = peak.value;
    out.alpha_at_cld_max = peak.alpha;
    out.alpha_stall = stall.alpha;
    out.stall_censored = stall.censored;
    out.delta_alpha = std::max(0.0, stall.alpha - peak.alpha);
    return out;
}

inline ObjectivePair objectives(const CollocatedAirfoil& shape, const FlowCondition& flow,
                                const ScanSchedule& sched, const PolarEvaluator& eval) {
    try {
        return objectives_from_polar(evaluate_polar(shape, flow, sched, eval));
    } catch (const EvaluationError&) {
        ObjectivePair failed;
        failed.failed = true;
        return failed;
    }
}

// Full pipeline for a morph weight vector: blend, repair, evaluate. Weight
// and geometry failures score as failed designs just like solver failures.
inline ObjectivePair objectives_for_weights(const morphing::BaselineSet& baselines,
                                            const std::vector<double>& w,
                                            morphing::MorphMode mode,
                                            const geometry::RepairOptions& repair,
                                            const FlowCondition& flow,
                                            const ScanSchedule& sched,
                                            const PolarEvaluator& eval) {
    try {
        auto shape = morphing::morph(baselines, w, mode, repair);
        return objectives(shape, flow, sched, eval);
    } catch (const ShapeError&) {
        ObjectivePair failed;
        failed.failed = true;
        return failed;
    }
}

// ---------------------------------------------------------------------------
// Closed-form surrogate evaluator. Not a flow solver: a smooth, deterministic
// lift/drag model driven by three shape features (thickness, camber, nose
// bluntness), shaped so that thin cambered sections win on efficiency while
// thick blunt ones hold on longer before stalling. Exists so optimizer runs
// and tests have fast physics-shaped objectives with a real trade-off.
//
//   Cl(a)  = slope * (a - a0(camber)) * sigma(a; thickness, bluntness)
//   Cd(Cl) = d0(thickness) + k * Cl^2
//
// sigma is a logistic gate centered at the stall midpoint; (a - a0) grows
// while (1 - sigma) shrinks, so Cl has exactly one interior maximum. The
// stall gate moves out with thickness much faster than the drag-optimal
// angle does, so thick blunt sections buy stall margin at a drag cost while
// thin sections take the efficiency end of the front.
// ---------------------------------------------------------------------------

struct SyntheticModel {
    double lift_slope = 0.11;      // per degree
    double alpha0_per_camber = -100.0; // zero-lift angle per unit camber
    double stall_base = 7.0;       // stall midpoint for a zero-thickness plate
    double stall_per_thickness = 40.0;
    double stall_per_bluntness = 3.0;
    double stall_width = 1.3;      // logistic width, degrees
    double cd0_base = 0.0055;
    double cd0_per_thickness = 0.010;
    double cd0_thickness_quad = 0.12;
    double cd0_thin_penalty = 0.004; // drag spike for near-zero thickness
    double thin_scale = 0.01;
    double induced_k = 0.02;
};

struct ShapeFeatures {
    double thickness = 0.0; // max vertical thickness
    double camber = 0.0;    // signed camber at the station of max |camber|
    double bluntness = 0.0; // nose thickness relative to max thickness, 0..1
};

inline ShapeFeatures extract_features(const CollocatedAirfoil& shape) {
    shape.check_consistent();
    const auto& grid = shape.grid;
    std::size_t half = static_cast<std::size_t>(grid.f()) / 2;
    ShapeFeatures ft;
    double max_abs_camber = 0.0;
    double nose_thickness = 0.0;
    for (std::size_t i = 0; i <= half; ++i) {
        double up = shape.y[i];
        double lo = shape.y[shape.size() - 1 - i]; // same x by grid symmetry
        double t = up - lo;
        double c = 0.5 * (up + lo);
        ft.thickness = std::max(ft.thickness, t);
        if (std::abs(c) > max_abs_camber) {
            max_abs_camber = std::abs(c);
            ft.camber = c;
        }
        double x = grid.x(i);
        if (x >= 0.04 && x <= 0.06) nose_thickness = std::max(nose_thickness, t);
    }
    ft.bluntness = std::clamp(nose_thickness / std::max(ft.thickness, 0.01), 0.0, 1.0);
    return ft;
}

class SyntheticEvaluator final : public PolarEvaluator {
public:
    explicit SyntheticEvaluator(SyntheticModel model = {}) : model_(model) {}

    const std::string& name() const override {
        static const std::string n = "synthetic";
        return n;
    }

    std::vector<PolarRow> sweep(const CollocatedAirfoil& shape, const FlowCondition& flow,
                                const std::vector<double>& alphas) const override {
        flow.validate();
        auto ft = extract_features(shape);
        double t = std::clamp(ft.thickness, 0.0, 0.35);
        double m = std::clamp(ft.camber, -0.12, 0.12);
        double a0 = model_.alpha0_per_camber * m;
        double a_stall = std::clamp(model_.stall_base + model_.stall_per_thickness * t +
                                        model_.stall_per_bluntness * ft.bluntness,
                                    4.0, 24.0);
        double d0 = model_.cd0_base + model_.cd0_per_thickness * t +
                    model_.cd0_thickness_quad * t * t +
                    model_.cd0_thin_penalty * std::exp(-ft.thickness / model_.thin_scale);
        std::vector<PolarRow> rows;
        rows.reserve(alphas.size());
        for (double a : alphas) {
            double sigma = 1.0 / (1.0 + std::exp((a - a_stall) / model_.stall_width));
            double cl = model_.lift_slope * (a - a0) * sigma;
            double cd = d0 + model_.induced_k * cl * cl;
            rows.push_back({a, cl, cd, true});
        }
        return rows;
    }

    const SyntheticModel& model() const { return model_; }

private:
    SyntheticModel model_;
};

inline std::shared_ptr<const PolarEvaluator> make_synthetic_evaluator(SyntheticModel m = {}) {
    return std::make_shared<SyntheticEvaluator>(m);
}

} // namespace dbm::aero
