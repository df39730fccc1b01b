#ifndef CRAB_KMEANS_HPP
#define CRAB_KMEANS_HPP

#include <cstdint>
#include <vector>

namespace crab {

struct KMeansResult {
    std::vector<std::vector<double>> centers;
    std::vector<int> assignment; // cluster id per point
};

// Lloyd iterations from k-means++ seeding. Deterministic under seed; stops
// after max_iter rounds or when the relative center shift drops below tol.
// Requires 1 <= k <= number of points.
KMeansResult kmeans_cluster(const std::vector<std::vector<double>>& points, std::size_t k,
                            std::uint64_t seed, int max_iter = 100, double tol = 1e-6);

double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace crab

#endif
