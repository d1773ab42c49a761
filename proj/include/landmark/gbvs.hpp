#pragma once

#include "landmark/imaging.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace landmark {

struct GbvsConfig {
    int grid_w = 32;
    int grid_h = 32;
    double sigma_act = 0.15 * 32;   // cells
    double sigma_norm = 0.06 * 32;  // cells
    double eps_clamp = 1e-6;
    double power_iter_tol = 1e-9;
    int power_iter_max = 10000;
    int num_regions = 5;
    double suppression_radius = 1.0 / 6.0;  // fraction of grid width
    double crop_fraction = 0.5;             // fraction of min(image dims)
    int pyramid_levels = 2;
    int working_max_side = 256;  // larger inputs are downsampled before feature extraction

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

/// Dense column-stochastic matrix. Entry (i, j) is the probability of moving from node j to node i.
struct TransitionMatrix {
    std::size_t n = 0;
    std::vector<double> entries;  // row-major: entries[i * n + j]

    double at(std::size_t to, std::size_t from) const { return entries[to * n + from]; }

    std::vector<double> apply(std::span<const double> v) const;
};

struct SaliencyMap {
    ScalarMap grid;
    int source_w = 0;
    int source_h = 0;

    bool operator==(const SaliencyMap&) const = default;
};

struct CropBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;  // exclusive
    int y1 = 0;  // exclusive

    bool operator==(const CropBox&) const = default;
};

struct SalientRegion {
    double center_x = 0.0;
    double center_y = 0.0;
    double score = 0.0;
    CropBox crop_box;
    // Grid cell of the peak, for separation checks.
    int cell_x = 0;
    int cell_y = 0;

    bool operator==(const SalientRegion&) const = default;
};

double dissimilarity_weight(const ScalarMap& map, std::size_t a, std::size_t b, double sigma);

/// Column j holds the normalized weights from node j. A column with no outgoing weight becomes uniform.
TransitionMatrix build_transition(const ScalarMap& map, double sigma);

/// Power iteration from `start` (uniform when empty) until ||Tv - v||_1 < tol.
/// Throws ConvergenceError after max_iter iterations.
std::vector<double> markov_equilibrium(const TransitionMatrix& t, double tol, int max_iter,
                                       std::span<const double> start = {});

/// Equilibrium of the dissimilarity chain. `feature_map` must already be on the graph grid.
ScalarMap activate(const ScalarMap& feature_map, const GbvsConfig& cfg);

/// Transition matrix of the mass-concentration chain: w(a->b) = act(b) * exp(-d^2 / (2 sigma^2)).
TransitionMatrix build_normalization_transition(const ScalarMap& activation, double sigma);

ScalarMap normalize_map(const ScalarMap& activation, const GbvsConfig& cfg);

/// Elementwise sum in list order, rescaled to [0,1]; a flat sum gives all zeros.
ScalarMap combine_maps(std::span<const ScalarMap> maps);

/// The clamped, grid-resampled feature maps fed to the graph stage, in channel order
/// (per pyramid level: luminance, |RG|, |BY|, then |Gabor| for each bank orientation).
std::vector<ScalarMap> feature_maps(const RasterImage& img, const GbvsConfig& cfg);

SaliencyMap compute_saliency(const RasterImage& img, const GbvsConfig& cfg);

std::vector<SalientRegion> top_k_regions(const SaliencyMap& sal, const GbvsConfig& cfg);

std::vector<RasterImage> extract_crops(const RasterImage& img, std::span<const SalientRegion> regions,
                                       int out_size);

/// `image_id<TAB>rank<TAB>cx<TAB>cy<TAB>score<TAB>x0,y0,x1,y1`, rank starting at 1.
std::string format_region_record(const std::string& image_id, int rank, const SalientRegion& region);

struct RegionRecord {
    std::string image_id;
    int rank = 0;
    SalientRegion region;
};

RegionRecord parse_region_record(const std::string& line);

}  // namespace landmark
