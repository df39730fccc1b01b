#include "crab/kmeans.hpp"

#include <cmath>
#include <limits>

#include "crab/error.hpp"
#include "crab/rng.hpp"

namespace crab {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

namespace {

// D^2-weighted seeding. Once only duplicates of chosen centers remain the
// total weight hits zero and seeding stops early.
std::vector<std::size_t> kmeanspp_init(const std::vector<std::vector<double>>& points,
                                       std::size_t k, Rng& rng) {
    const std::size_t n = points.size();
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    chosen.push_back(rng.uniform_index(n));

    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i)
        min_dist[i] = squared_distance(points[i], points[chosen[0]]);

    while (chosen.size() < k) {
        double total = 0.0;
        for (double d : min_dist) total += d;
        if (total <= 0.0) break;

        double target = rng.uniform() * total;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            target -= min_dist[i];
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        chosen.push_back(pick);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = squared_distance(points[i], points[pick]);
            if (d < min_dist[i]) min_dist[i] = d;
        }
    }
    return chosen;
}

} // namespace

KMeansResult kmeans_cluster(const std::vector<std::vector<double>>& points, std::size_t k,
                            std::uint64_t seed, int max_iter, double tol) {
    const std::size_t n = points.size();
    if (n == 0) throw DomainError("kmeans needs at least one point");
    if (k < 1 || k > n) throw DomainError("kmeans requires 1 <= k <= point count");
    const std::size_t dim = points[0].size();

    Rng rng(seed);
    auto seeds = kmeanspp_init(points, k, rng);

    KMeansResult res;
    for (std::size_t s : seeds) res.centers.push_back(points[s]);
    while (res.centers.size() < k) res.centers.push_back(res.centers.back());
    res.assignment.assign(n, 0);

    for (int iter = 0; iter < max_iter; ++iter) {
        // Assign to nearest center; ties go to the lower center id.
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < res.centers.size(); ++c) {
                const double d = squared_distance(points[i], res.centers[c]);
                if (d < best) {
                    best = d;
                    best_c = static_cast<int>(c);
                }
            }
            res.assignment[i] = best_c;
        }

        std::vector<std::vector<double>> next(res.centers.size(),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(res.centers.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = next[res.assignment[i]];
            for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
            ++counts[res.assignment[i]];
        }

        double shift2 = 0.0, scale2 = 0.0;
        for (std::size_t c = 0; c < res.centers.size(); ++c) {
            if (counts[c] == 0) {
                next[c] = res.centers[c]; // keep an emptied center in place
            } else {
                for (std::size_t d = 0; d < dim; ++d)
                    next[c][d] /= static_cast<double>(counts[c]);
            }
            shift2 += squared_distance(next[c], res.centers[c]);
            for (double v : res.centers[c]) scale2 += v * v;
        }
        res.centers.swap(next);
        if (std::sqrt(shift2) <= tol * (std::sqrt(scale2) + 1e-12)) break;
    }

    // Final assignment against the converged centers.
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < res.centers.size(); ++c) {
            const double d = squared_distance(points[i], res.centers[c]);
            if (d < best) {
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        res.assignment[i] = best_c;
    }
    return res;
}

} // namespace crab
