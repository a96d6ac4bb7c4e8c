#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "dbm/aero.hpp"
#include "dbm/error.hpp"
#include "dbm/geometry.hpp"
#include "dbm/util.hpp"

namespace dbm::xfoil {

using aero::FlowCondition;
using aero::PolarRow;
using geometry::CollocatedAirfoil;
using geometry::RawAirfoil;

inline constexpr const char* k_env_binary = "DBM_XFOIL_BIN";

// ---------------------------------------------------------------------------
// Panel redistribution. The collocation grid crowds nodes near the leading
// edge already, but a viscous solve wants panels concentrated wherever the
// outline turns fast. Resample the outline by arc length weighted with the
// local turning angle.
// ---------------------------------------------------------------------------

inline RawAirfoil repanel(const RawAirfoil& foil, std::size_t n_panels,
                          double curvature_weight = 2.0) {
    const auto& pts = foil.points;
    if (pts.size() < 3) throw ContractError("repanel: outline needs at least 3 points");
    if (n_panels < 10) throw ContractError("repanel: too few panels");
    if (curvature_weight < 0.0) throw ContractError("repanel: negative curvature weight");

    std::size_t n = pts.size();
    std::vector<double> seg(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double dx = pts[i + 1].x - pts[i].x;
        double dy = pts[i + 1].y - pts[i].y;
        seg[i] = std::hypot(dx, dy);
        if (seg[i] == 0.0) throw DegenerateInputError("repanel: repeated point in outline");
    }

    // turning angle at each interior vertex, spread onto adjacent segments
    std::vector<double> turn(n - 1, 0.0);
    double max_turn = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double ax = pts[i].x - pts[i - 1].x, ay = pts[i].y - pts[i - 1].y;
        double bx = pts[i + 1].x - pts[i].x, by = pts[i + 1].y - pts[i].y;
        double cross = ax * by - ay * bx;
        double dot = ax * bx + ay * by;
        double ang = std::abs(std::atan2(cross, dot));
        turn[i - 1] += 0.5 * ang;
        turn[i] += 0.5 * ang;
        max_turn = std::max(max_turn, turn[i - 1]);
        max_turn = std::max(max_turn, turn[i]);
    }

    std::vector<double> u(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double w = 1.0;
        if (max_turn > 0.0) w += curvature_weight * (turn[i] / max_turn);
        u[i + 1] = u[i] + seg[i] * w;
    }
    double total = u.back();

    RawAirfoil out;
    out.name = foil.name;
    out.points.reserve(n_panels + 1);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k <= n_panels; ++k) {
        double target = total * static_cast<double>(k) / static_cast<double>(n_panels);
        while (cursor + 2 < n && u[cursor + 1] < target) ++cursor;
        double span = u[cursor + 1] - u[cursor];
        double t = span > 0.0 ? (target - u[cursor]) / span : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        out.points.push_back({pts[cursor].x + t * (pts[cursor + 1].x - pts[cursor].x),
                              pts[cursor].y + t * (pts[cursor + 1].y - pts[cursor].y)});
    }
    // endpoints must survive resampling exactly
    out.points.front() = pts.front();
    out.points.back() = pts.back();
    return out;
}

// ---------------------------------------------------------------------------
// Command scripting and polar parsing. Both are pure so they stay testable
// without the solver installed.
// ---------------------------------------------------------------------------

inline std::string build_script(const std::string& coords_path, const std::string& polar_path,
                                const FlowCondition& flow, const std::vector<double>& alphas) {
    flow.validate();
    std::string s;
    s += "PLOP\nG F\n\n";
    s += "LOAD " + coords_path + "\n";
    s += "OPER\n";
    s += "VPAR\nN " + fmt_double(flow.n_crit) + "\n\n";
    s += "VISC " + fmt_double(flow.reynolds) + "\n";
    if (flow.mach > 0.0) s += "MACH " + fmt_fixed(flow.mach, 4) + "\n";
    s += "PACC\n" + polar_path + "\n\n";
    for (double a : alphas) s += "ALFA " + fmt_fixed(a, 4) + "\n";
    s += "PACC\n";
    s += "\nQUIT\n";
    return s;
}

struct ParsedPolarRow {
    double alpha = 0.0;
    double cl = 0.0;
    double cd = 0.0;
    double cdp = 0.0;
};

// Reads the accumulation file format: free headers, a dashed rule, then
// whitespace columns alpha/CL/CD/CDp/... Rows with non-positive viscous drag
// or with pressure drag at or above total drag are unusable and are dropped
// here; the caller sees them as non-converged angles.
inline std::vector<ParsedPolarRow> parse_polar_file(const std::string& text) {
    std::vector<ParsedPolarRow> rows;
    bool in_table = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!in_table) {
            if (t.size() > 4 && t.find_first_not_of("- ") == std::string::npos) in_table = true;
            continue;
        }
        if (t.empty()) continue;
        auto tok = split_ws(t);
        if (tok.size() < 4) continue;
        ParsedPolarRow r;
        try {
            r.alpha = parse_double(tok[0], "polar");
            r.cl = parse_double(tok[1], "polar");
            r.cd = parse_double(tok[2], "polar");
            r.cdp = parse_double(tok[3], "polar");
        } catch (const ParseError&) {
            continue; // ruled-off footer or stray text
        }
        if (!(r.cd > 0.0)) continue;
        if (r.cdp >= r.cd) continue;
        rows.push_back(r);
    }
    return rows;
}

// Match parsed rows back to the requested angles. The solver only appends
// angles it converged, so anything unmatched comes back converged=false.
inline std::vector<PolarRow> align_rows(const std::vector<double>& alphas,
                                        const std::vector<ParsedPolarRow>& parsed,
                                        double tol = 0.011) {
    std::vector<PolarRow> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        PolarRow row;
        row.alpha = a;
        for (const auto& p : parsed) {
            if (std::abs(p.alpha - a) <= tol) {
                row.cl = p.cl;
                row.cd = p.cd;
                row.converged = true;
                break;
            }
        }
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binary discovery and the subprocess driver.
// ---------------------------------------------------------------------------

inline std::optional<std::string> find_binary() {
    if (const char* env = std::getenv(k_env_binary)) {
        if (*env && ::access(env, X_OK) == 0) return std::string(env);
        return std::nullopt;
    }
    const char* path = std::getenv("PATH");
    if (!path) return std::nullopt;
    for (const auto& dir : split_char(path, ':')) {
        if (dir.empty()) continue;
        std::string cand = dir + "/xfoil";
        if (::access(cand.c_str(), X_OK) == 0) return cand;
    }
    return std::nullopt;
}

namespace detail {

// Runs `binary < script`, discarding solver chatter, with a hard wall-clock
// cap. Returns false when the process had to be killed or failed to start.
inline bool run_with_stdin(const std::string& binary, const std::string& script,
                           const std::string& workdir, double timeout_seconds) {
    int fds[2];
    if (::pipe(fds) != 0) throw Error("pipe() failed");
    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw Error("fork() failed");
    }
    if (pid == 0) {
        ::dup2(fds[0], STDIN_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0) {
            ::dup2(devnull, STDOUT_FILENO);
            ::dup2(devnull, STDERR_FILENO);
            ::close(devnull);
        }
        if (::chdir(workdir.c_str()) != 0) ::_exit(127);
        ::execl(binary.c_str(), binary.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(fds[0]);
    // feed the whole script; the child may exit early, ignore EPIPE
    signal(SIGPIPE, SIG_IGN);
    const char* p = script.data();
    std::size_t left = script.size();
    while (left > 0) {
        ssize_t w = ::write(fds[1], p, left);
        if (w <= 0) break;
        p += w;
        left -= static_cast<std::size_t>(w);
    }
    ::close(fds[1]);

    double waited = 0.0;
    const double tick = 0.05;
    int status = 0;
    while (true) {
        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) return false;
        if (waited >= timeout_seconds) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            return false;
        }
        ::usleep(static_cast<useconds_t>(tick * 1e6));
        waited += tick;
    }
    return WIFEXITED(status);
}

} // namespace detail

struct XfoilOptions {
    std::size_t panels = 200;
    std::size_t retry_panels = 250; // second attempt for unconverged angles
    double seconds_per_alpha = 10.0;
    double curvature_weight = 2.0;
};

class XfoilEvaluator final : public aero::PolarEvaluator {
public:
    explicit XfoilEvaluator(XfoilOptions opts = {}) : opts_(opts) {
        auto bin = find_binary();
        if (!bin)
            throw ConfigError(std::string("viscous solver binary not found; set ") +
                              k_env_binary + " or add xfoil to PATH");
        binary_ = *bin;
    }

    const std::string& name() const override {
        static const std::string n = "xfoil";
        return n;
    }

    std::vector<PolarRow> sweep(const CollocatedAirfoil& shape, const FlowCondition& flow,
                                const std::vector<double>& alphas) const override {
        if (alphas.empty()) return {};
        auto rows = attempt(shape, flow, alphas, opts_.panels);
        std::vector<double> missing;
        for (const auto& r : rows)
            if (!r.converged) missing.push_back(r.alpha);
        if (!missing.empty() && opts_.retry_panels != opts_.panels) {
            auto retry = attempt(shape, flow, missing, opts_.retry_panels);
            std::size_t j = 0;
            for (auto& r : rows) {
                if (r.converged) continue;
                if (retry[j].converged) r = retry[j];
                ++j;
            }
        }
        return rows;
    }

private:
    std::vector<PolarRow> attempt(const CollocatedAirfoil& shape, const FlowCondition& flow,
                                  const std::vector<double>& alphas,
                                  std::size_t n_panels) const {
        namespace fs = std::filesystem;
        auto raw = repanel(geometry::to_raw(shape), n_panels, opts_.curvature_weight);

        static std::atomic<unsigned> counter{0};
        fs::path dir = fs::temp_directory_path() /
                       ("dbm-xfoil-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        fs::create_directories(dir);
        fs::path coords = dir / "shape.dat";
        fs::path polar = dir / "polar.txt";
        write_text_file(coords.string(), geometry::to_selig(raw));

        auto script = build_script(coords.string(), polar.string(), flow, alphas);
        double budget = opts_.seconds_per_alpha * static_cast<double>(alphas.size()) + 5.0;
        detail::run_with_stdin(binary_, script, dir.string(), budget);

        std::vector<ParsedPolarRow> parsed;
        if (fs::exists(polar)) parsed = parse_polar_file(read_text_file(polar.string()));
        auto rows = align_rows(alphas, parsed);
        std::error_code ec;
        fs::remove_all(dir, ec);
        return rows;
    }

    XfoilOptions opts_;
    std::string binary_;
};

} // namespace dbm::xfoil
