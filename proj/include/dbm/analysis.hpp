#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "dbm/error.hpp"
#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"
#include "dbm/util.hpp"

namespace dbm::analysis {

// ---------------------------------------------------------------------------
// Principal components of a set of row vectors (designs in weight space).
// Components are orthonormal rows, ordered by descending variance, each with
// its largest-magnitude entry flipped positive so runs are comparable.
// ---------------------------------------------------------------------------

struct PcaResult {
    std::vector<double> mean;
    std::vector<std::vector<double>> components; // k rows, each dim-long
    std::vector<double> variances;               // eigenvalues, descending
    std::vector<double> ratios;                  // variances / total, 0 if degenerate
    bool degenerate = false;                     // no variance anywhere
};

namespace detail {

inline void check_matrix(const std::vector<std::vector<double>>& rows, std::size_t min_rows) {
    if (rows.size() < min_rows)
        throw ContractError("need at least " + std::to_string(min_rows) + " rows, got " +
                            std::to_string(rows.size()));
    std::size_t dim = rows.front().size();
    if (dim == 0) throw ContractError("rows are empty");
    for (const auto& r : rows)
        if (r.size() != dim) throw ContractError("ragged rows: expected width " +
                                                 std::to_string(dim) + ", found " +
                                                 std::to_string(r.size()));
}

} // namespace detail

inline PcaResult pca(const std::vector<std::vector<double>>& rows, std::size_t max_components = 0) {
    detail::check_matrix(rows, 2);
    const std::size_t n = rows.size();
    const std::size_t dim = rows.front().size();
    if (max_components == 0 || max_components > dim) max_components = dim;

    PcaResult out;
    out.mean.assign(dim, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dim; ++j) out.mean[j] += r[j];
    for (double& v : out.mean) v /= static_cast<double>(n);

    Eigen::MatrixXd centered(n, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) centered(i, j) = rows[i][j] - out.mean[j];
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");

    // solver returns ascending eigenvalues; walk them backwards
    double total = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
        total += std::max(0.0, solver.eigenvalues()(static_cast<Eigen::Index>(j)));
    out.degenerate = !(total > 0.0);

    for (std::size_t k = 0; k < max_components; ++k) {
        Eigen::Index col = static_cast<Eigen::Index>(dim - 1 - k);
        double lambda = std::max(0.0, solver.eigenvalues()(col));
        std::vector<double> comp(dim);
        for (std::size_t j = 0; j < dim; ++j)
            comp[j] = solver.eigenvectors()(static_cast<Eigen::Index>(j), col);
        // orient: the entry with the largest magnitude points positive
        std::size_t pivot = 0;
        for (std::size_t j = 1; j < dim; ++j)
            if (std::abs(comp[j]) > std::abs(comp[pivot])) pivot = j;
        if (comp[pivot] < 0.0)
            for (double& v : comp) v = -v;
        out.components.push_back(std::move(comp));
        out.variances.push_back(lambda);
        out.ratios.push_back(out.degenerate ? 0.0 : lambda / total);
    }
    return out;
}

inline std::vector<double> pca_project(const PcaResult& p, const std::vector<double>& row) {
    if (row.size() != p.mean.size()) throw ContractError("row width does not match the fit");
    std::vector<double> coords(p.components.size(), 0.0);
    for (std::size_t k = 0; k < p.components.size(); ++k)
        for (std::size_t j = 0; j < row.size(); ++j)
            coords[k] += (row[j] - p.mean[j]) * p.components[k][j];
    return coords;
}

inline std::vector<double> pca_reconstruct(const PcaResult& p, const std::vector<double>& coords) {
    if (coords.size() > p.components.size()) throw ContractError("more coordinates than components");
    std::vector<double> row = p.mean;
    for (std::size_t k = 0; k < coords.size(); ++k)
        for (std::size_t j = 0; j < row.size(); ++j) row[j] += coords[k] * p.components[k][j];
    return row;
}

// ---------------------------------------------------------------------------
// k-means with careful seeding and restarts. Clustering happens in the raw
// design space; ties in the assignment step go to the lowest centroid index
// so identical inputs cluster identically everywhere.
// ---------------------------------------------------------------------------

struct KmeansOptions {
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    double tolerance = 1e-10; // on total within-cluster squared distance

    void validate() const {
        if (restarts == 0) throw ContractError("kmeans: need at least one restart");
        if (max_iterations == 0) throw ContractError("kmeans: need at least one iteration");
        if (tolerance < 0.0) throw ContractError("kmeans: negative tolerance");
    }
};

struct KmeansResult {
    std::vector<std::vector<double>> centroids; // k rows
    std::vector<std::size_t> assignments;       // one per input row
    std::vector<std::size_t> counts;            // cluster sizes, zeros allowed
    double inertia = 0.0;                       // within-cluster squared distance
    std::size_t iterations = 0;                 // of the winning restart
    std::vector<double> inertia_trace;          // per-iteration, non-increasing
};

namespace detail {

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

inline std::size_t nearest_centroid(const std::vector<double>& row,
                                    const std::vector<std::vector<double>>& centroids) {
    std::size_t best = 0;
    double best_d = sq_dist(row, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        double d = sq_dist(row, centroids[c]);
        if (d < best_d) { // strict: ties keep the lower index
            best_d = d;
            best = c;
        }
    }
    return best;
}

// k-means++ seeding: spread the initial centroids with probability
// proportional to squared distance from the ones picked so far.
inline std::vector<std::vector<double>> seed_plusplus(const std::vector<std::vector<double>>& rows,
                                                      std::size_t k, Rng& rng) {
    std::vector<std::vector<double>> centroids;
    centroids.push_back(rows[rng.index(rows.size())]);
    std::vector<double> d2(rows.size());
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            d2[i] = sq_dist(rows[i], centroids[0]);
            for (std::size_t c = 1; c < centroids.size(); ++c)
                d2[i] = std::min(d2[i], sq_dist(rows[i], centroids[c]));
            total += d2[i];
        }
        if (total > 0.0) {
            double r = rng.uniform() * total;
            double acc = 0.0;
            std::size_t pick = rows.size() - 1;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
            centroids.push_back(rows[pick]);
        } else {
            // every row coincides with a centroid already; any pick works
            centroids.push_back(rows[rng.index(rows.size())]);
        }
    }
    return centroids;
}

} // namespace detail

inline KmeansResult kmeans(const std::vector<std::vector<double>>& rows, std::size_t k,
                           std::uint64_t seed, KmeansOptions opts = {}) {
    detail::check_matrix(rows, 1);
    opts.validate();
    if (k == 0) throw ContractError("kmeans: k must be positive");
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool repeat = false;
        for (std::size_t j = 0; j < i && !repeat; ++j) repeat = rows[i] == rows[j];
        if (!repeat) ++distinct;
    }
    if (k > distinct)
        throw ContractError("kmeans: k=" + std::to_string(k) + " exceeds " +
                            std::to_string(distinct) + " distinct rows");

    const std::size_t n = rows.size();
    const std::size_t dim = rows.front().size();
    KmeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (std::size_t restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(mix_seed(seed, restart));
        auto centroids = detail::seed_plusplus(rows, k, rng);
        std::vector<std::size_t> assign(n, 0);
        std::vector<double> trace;
        double inertia = std::numeric_limits<double>::infinity();
        std::size_t iter = 0;
        for (; iter < opts.max_iterations; ++iter) {
            double new_inertia = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                assign[i] = detail::nearest_centroid(rows[i], centroids);
                new_inertia += detail::sq_dist(rows[i], centroids[assign[i]]);
            }
            std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
            std::vector<std::size_t> counts(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                ++counts[assign[i]];
                for (std::size_t j = 0; j < dim; ++j) sums[assign[i]][j] += rows[i][j];
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (counts[c] == 0) continue; // empty cluster keeps its centroid
                for (std::size_t j = 0; j < dim; ++j)
                    centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
            trace.push_back(new_inertia);
            if (inertia - new_inertia <= opts.tolerance && inertia != std::numeric_limits<double>::infinity()) {
                inertia = new_inertia;
                break;
            }
            inertia = new_inertia;
        }
        if (inertia < best.inertia) {
            best.centroids = centroids;
            best.assignments = assign;
            best.inertia = inertia;
            best.iterations = iter;
            best.inertia_trace = std::move(trace);
        }
    }

    best.counts.assign(k, 0);
    for (std::size_t a : best.assignments) ++best.counts[a];
    return best;
}

// Mean design per cluster, straight from the rows. Empty clusters come back
// with a zero count and an all-NaN mean so downstream reports can show them.
inline std::vector<std::vector<double>> cluster_means(const std::vector<std::vector<double>>& rows,
                                                      const std::vector<std::size_t>& assignments,
                                                      std::size_t k,
                                                      std::vector<std::size_t>* counts_out = nullptr) {
    detail::check_matrix(rows, 1);
    if (assignments.size() != rows.size())
        throw ContractError("assignment count does not match row count");
    const std::size_t dim = rows.front().size();
    std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t c = assignments[i];
        if (c >= k) throw ContractError("assignment index out of range");
        ++counts[c];
        for (std::size_t j = 0; j < dim; ++j) means[c][j] += rows[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            means[c].assign(dim, std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        for (double& v : means[c]) v /= static_cast<double>(counts[c]);
    }
    if (counts_out) *counts_out = counts;
    return means;
}

// Per-cluster means plus the overall mean. By construction the size-weighted
// mean of the cluster means reproduces the total mean to rounding.
struct ClusterMeanReport {
    std::vector<std::vector<double>> means; // k rows, NaN rows for empties
    std::vector<std::size_t> counts;
    std::vector<double> total_mean;
};

inline ClusterMeanReport cluster_mean_weights(const std::vector<std::vector<double>>& rows,
                                              const std::vector<std::size_t>& assignments,
                                              std::size_t k) {
    ClusterMeanReport rep;
    rep.means = cluster_means(rows, assignments, k, &rep.counts);
    const std::size_t dim = rows.front().size();
    rep.total_mean.assign(dim, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dim; ++j) rep.total_mean[j] += r[j];
    for (double& v : rep.total_mean) v /= static_cast<double>(rows.size());
    return rep;
}

// Walk along a principal axis from a base design and blend the result. Shows
// what a component "means" as an actual shape.
inline geometry::CollocatedAirfoil axis_shape(const morphing::BaselineSet& baselines,
                                              const PcaResult& p, std::size_t component,
                                              double scale, morphing::MorphMode mode,
                                              const geometry::RepairOptions& repair = {}) {
    if (component >= p.components.size()) throw ContractError("component index out of range");
    std::vector<double> w = p.mean;
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += scale * p.components[component][j];
    return morphing::morph(baselines, w, mode, repair);
}

} // namespace dbm::analysis
