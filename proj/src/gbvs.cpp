#include "landmark/gbvs.hpp"

#include "landmark/errors.hpp"
#include "landmark/fileio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace landmark {

void GbvsConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("GbvsConfig: " + what); };
    if (grid_w < 2 || grid_h < 2) fail("grid must be at least 2x2");
    if (!(sigma_act > 0.0) || !(sigma_norm > 0.0)) fail("sigmas must be > 0");
    if (!(eps_clamp > 0.0 && eps_clamp < 1.0)) fail("eps_clamp must lie in (0,1)");
    if (!(power_iter_tol > 0.0)) fail("power_iter_tol must be > 0");
    if (power_iter_max < 1) fail("power_iter_max must be >= 1");
    if (num_regions < 1) fail("num_regions must be >= 1");
    if (!(suppression_radius > 0.0 && suppression_radius < 1.0)) fail("suppression_radius must lie in (0,1)");
    if (!(crop_fraction > 0.0 && crop_fraction <= 1.0)) fail("crop_fraction must lie in (0,1]");
    if (pyramid_levels < 1) fail("pyramid_levels must be >= 1");
    if (working_max_side < 1) fail("working_max_side must be >= 1");
}

std::vector<double> TransitionMatrix::apply(std::span<const double> v) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &entries[i * n];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += row[j] * v[j];
        }
        out[i] = acc;
    }
    return out;
}

namespace {

// exp(-d^2 / (2 sigma^2)) indexed by |dy| * w + |dx|.
std::vector<double> gaussian_table(int w, int h, double sigma) {
    std::vector<double> table(static_cast<std::size_t>(w) * h);
    const double denom = 2.0 * sigma * sigma;
    for (int dy = 0; dy < h; ++dy) {
        for (int dx = 0; dx < w; ++dx) {
            table[static_cast<std::size_t>(dy) * w + dx] = std::exp(-static_cast<double>(dx * dx + dy * dy) / denom);
        }
    }
    return table;
}

// Raw weights W(to, from) stored row-major, plus column sums.
struct WeightMatrix {
    std::size_t n = 0;
    std::vector<double> w;
    std::vector<double> col_sum;
};

template <typename WeightFn>
WeightMatrix assemble(int gw, int gh, WeightFn&& weight) {
    WeightMatrix m;
    m.n = static_cast<std::size_t>(gw) * gh;
    m.w.assign(m.n * m.n, 0.0);
    m.col_sum.assign(m.n, 0.0);
    for (int ty = 0; ty < gh; ++ty) {
        for (int tx = 0; tx < gw; ++tx) {
            const std::size_t to = static_cast<std::size_t>(ty) * gw + tx;
            double* row = &m.w[to * m.n];
            for (int fy = 0; fy < gh; ++fy) {
                const std::size_t dy = static_cast<std::size_t>(std::abs(ty - fy));
                for (int fx = 0; fx < gw; ++fx) {
                    const std::size_t from = static_cast<std::size_t>(fy) * gw + fx;
                    row[from] = weight(to, from, dy * gw + static_cast<std::size_t>(std::abs(tx - fx)));
                }
            }
        }
    }
    for (std::size_t i = 0; i < m.n; ++i) {
        const double* row = &m.w[i * m.n];
        for (std::size_t j = 0; j < m.n; ++j) {
            m.col_sum[j] += row[j];
        }
    }
    return m;
}

TransitionMatrix column_normalize(WeightMatrix&& m) {
    TransitionMatrix t;
    t.n = m.n;
    t.entries = std::move(m.w);
    const double uniform = 1.0 / static_cast<double>(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        double* row = &t.entries[i * t.n];
        for (std::size_t j = 0; j < t.n; ++j) {
            row[j] = m.col_sum[j] > 0.0 ? row[j] / m.col_sum[j] : uniform;
        }
    }
    return t;
}

ScalarMap reshape(const std::vector<double>& v, int w, int h) {
    ScalarMap out(w, h);
    out.data = v;
    return out;
}

std::vector<double> normalized(std::vector<double> v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    return v;
}

void require_grid(const ScalarMap& m, const GbvsConfig& cfg, const char* who) {
    if (m.width != cfg.grid_w || m.height != cfg.grid_h) {
        throw std::invalid_argument(std::string(who) + ": map is " + std::to_string(m.width) + "x" +
                                    std::to_string(m.height) + ", expected grid " + std::to_string(cfg.grid_w) +
                                    "x" + std::to_string(cfg.grid_h));
    }
}

}  // namespace

double dissimilarity_weight(const ScalarMap& map, std::size_t a, std::size_t b, double sigma) {
    const auto w = static_cast<std::size_t>(map.width);
    const double dx = static_cast<double>(a % w) - static_cast<double>(b % w);
    const double dy = static_cast<double>(a / w) - static_cast<double>(b / w);
    const double ratio = std::abs(std::log(map.data[a]) - std::log(map.data[b]));
    return ratio * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

namespace {

WeightMatrix dissimilarity_weights(const ScalarMap& map, double sigma) {
    std::vector<double> logs(map.size());
    std::transform(map.data.begin(), map.data.end(), logs.begin(), [](double v) { return std::log(v); });
    const auto g = gaussian_table(map.width, map.height, sigma);
    return assemble(map.width, map.height, [&](std::size_t to, std::size_t from, std::size_t off) {
        return std::abs(logs[from] - logs[to]) * g[off];
    });
}

WeightMatrix concentration_weights(const ScalarMap& activation, double sigma) {
    const auto g = gaussian_table(activation.width, activation.height, sigma);
    return assemble(activation.width, activation.height, [&](std::size_t to, std::size_t, std::size_t off) {
        return activation.data[to] * g[off];
    });
}

}  // namespace

TransitionMatrix build_transition(const ScalarMap& map, double sigma) {
    return column_normalize(dissimilarity_weights(map, sigma));
}

TransitionMatrix build_normalization_transition(const ScalarMap& activation, double sigma) {
    return column_normalize(concentration_weights(activation, sigma));
}

std::vector<double> markov_equilibrium(const TransitionMatrix& t, double tol, int max_iter,
                                       std::span<const double> start) {
    if (t.n == 0) {
        throw std::invalid_argument("markov_equilibrium: empty chain");
    }
    std::vector<double> v;
    if (start.empty()) {
        v.assign(t.n, 1.0 / static_cast<double>(t.n));
    } else {
        if (start.size() != t.n) {
            throw std::invalid_argument("markov_equilibrium: start vector has wrong length");
        }
        v = normalized(std::vector<double>(start.begin(), start.end()));
    }
    double residual = 0.0;
    for (int it = 0; it <= max_iter; ++it) {
        auto next = t.apply(v);
        residual = 0.0;
        for (std::size_t i = 0; i < t.n; ++i) {
            residual += std::abs(next[i] - v[i]);
        }
        if (residual < tol) {
            return v;
        }
        v = normalized(std::move(next));
    }
    throw ConvergenceError("markov_equilibrium: no convergence after " + std::to_string(max_iter) + " iterations",
                           residual);
}

ScalarMap activate(const ScalarMap& feature_map, const GbvsConfig& cfg) {
    require_grid(feature_map, cfg, "activate");
    ScalarMap clamped = feature_map;
    for (double& v : clamped.data) v = std::max(v, cfg.eps_clamp);

    auto weights = dissimilarity_weights(clamped, cfg.sigma_act);
    // Symmetric weights make the chain reversible: stationary mass is proportional to node degree.
    std::vector<double> start;
    if (std::any_of(weights.col_sum.begin(), weights.col_sum.end(), [](double s) { return s > 0.0; })) {
        start = weights.col_sum;
    }
    const auto t = column_normalize(std::move(weights));
    return reshape(markov_equilibrium(t, cfg.power_iter_tol, cfg.power_iter_max, start), cfg.grid_w, cfg.grid_h);
}

ScalarMap normalize_map(const ScalarMap& activation, const GbvsConfig& cfg) {
    require_grid(activation, cfg, "normalize_map");
    const auto [lo, hi] = std::minmax_element(activation.data.begin(), activation.data.end());
    if (*lo < 0.0) {
        throw std::invalid_argument("normalize_map: activation must be non-negative");
    }
    const double n = static_cast<double>(activation.size());
    if (*hi <= 0.0 || *hi == *lo) {
        return ScalarMap(cfg.grid_w, cfg.grid_h, 1.0 / n);
    }
    auto weights = concentration_weights(activation, cfg.sigma_norm);
    // Detailed balance holds with pi(a) = act(a) * sum_b act(b) g(a,b).
    std::vector<double> start(weights.n);
    for (std::size_t a = 0; a < weights.n; ++a) {
        start[a] = activation.data[a] * weights.col_sum[a];
    }
    const auto t = column_normalize(std::move(weights));
    return reshape(markov_equilibrium(t, cfg.power_iter_tol, cfg.power_iter_max, start), cfg.grid_w, cfg.grid_h);
}

ScalarMap combine_maps(std::span<const ScalarMap> maps) {
    if (maps.empty()) {
        throw std::invalid_argument("combine_maps: empty list");
    }
    ScalarMap sum(maps.front().width, maps.front().height, 0.0);
    for (const auto& m : maps) {
        if (m.width != sum.width || m.height != sum.height) {
            throw std::invalid_argument("combine_maps: dimension mismatch");
        }
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum.data[i] += m.data[i];
        }
    }
    const auto [lo, hi] = std::minmax_element(sum.data.begin(), sum.data.end());
    const double min = *lo;
    const double range = *hi - *lo;
    if (!(range > 1e-12 * std::max(1.0, std::abs(*hi)))) {
        return ScalarMap(sum.width, sum.height, 0.0);
    }
    for (double& v : sum.data) v = (v - min) / range;
    return sum;
}

namespace {

// Smallest side for which every pyramid level still fits the Gabor kernel.
int minimum_working_side(const GbvsConfig& cfg) {
    int radius = 0;
    for (const auto& p : default_gabor_bank()) radius = std::max(radius, p.kernel_radius);
    return (2 * radius + 1) << (cfg.pyramid_levels - 1);
}

RasterImage working_image(const RasterImage& img, const GbvsConfig& cfg) {
    const int min_side = minimum_working_side(cfg);
    const int longest = std::max(img.width, img.height);
    const int shortest = std::min(img.width, img.height);
    double scale = 1.0;
    if (longest > cfg.working_max_side) scale = static_cast<double>(cfg.working_max_side) / longest;
    if (shortest * scale < min_side) scale = static_cast<double>(min_side) / shortest;
    if (scale == 1.0) return img;
    const int w = std::max(min_side, static_cast<int>(std::lround(img.width * scale)));
    const int h = std::max(min_side, static_cast<int>(std::lround(img.height * scale)));
    return resize_bilinear(img, w, h);
}

ScalarMap to_grid(const ScalarMap& m, const GbvsConfig& cfg, bool magnitude) {
    auto g = resize_bilinear(m, cfg.grid_w, cfg.grid_h);
    for (double& v : g.data) v = std::max(magnitude ? std::abs(v) : v, cfg.eps_clamp);
    return g;
}

}  // namespace

std::vector<ScalarMap> feature_maps(const RasterImage& img, const GbvsConfig& cfg) {
    cfg.validate();
    if (img.width < 1 || img.height < 1) {
        throw std::invalid_argument("feature_maps: empty image");
    }
    const auto work = working_image(img, cfg);
    const auto lum = build_pyramid(to_luminance(work), cfg.pyramid_levels);
    const auto opp = color_opponency(work);
    const auto rg = build_pyramid(opp.rg, cfg.pyramid_levels);
    const auto by = build_pyramid(opp.by, cfg.pyramid_levels);
    const auto bank = default_gabor_bank();

    std::vector<ScalarMap> maps;
    for (int level = 0; level < cfg.pyramid_levels; ++level) {
        const auto l = static_cast<std::size_t>(level);
        maps.push_back(to_grid(lum[l], cfg, false));
        maps.push_back(to_grid(rg[l], cfg, true));
        maps.push_back(to_grid(by[l], cfg, true));
        for (const auto& p : bank) {
            maps.push_back(to_grid(gabor_response(lum[l], p), cfg, true));
        }
    }
    return maps;
}

SaliencyMap compute_saliency(const RasterImage& img, const GbvsConfig& cfg) {
    const auto features = feature_maps(img, cfg);
    std::vector<ScalarMap> normalized_maps;
    normalized_maps.reserve(features.size());
    for (const auto& f : features) {
        normalized_maps.push_back(normalize_map(activate(f, cfg), cfg));
    }
    return SaliencyMap{combine_maps(normalized_maps), img.width, img.height};
}

namespace {

SalientRegion make_region(double cx, double cy, double score, int cell_x, int cell_y, int w, int h,
                          double crop_fraction) {
    SalientRegion r;
    r.center_x = cx;
    r.center_y = cy;
    r.score = score;
    r.cell_x = cell_x;
    r.cell_y = cell_y;
    const int side = std::clamp(static_cast<int>(std::lround(crop_fraction * std::min(w, h))), 1, std::min(w, h));
    const int x0 = std::clamp(static_cast<int>(std::lround(cx - side / 2.0)), 0, w - side);
    const int y0 = std::clamp(static_cast<int>(std::lround(cy - side / 2.0)), 0, h - side);
    r.crop_box = {x0, y0, x0 + side, y0 + side};
    return r;
}

}  // namespace

std::vector<SalientRegion> top_k_regions(const SaliencyMap& sal, const GbvsConfig& cfg) {
    cfg.validate();
    const auto& grid = sal.grid;
    if (grid.width < 1 || grid.height < 1 || sal.source_w < 1 || sal.source_h < 1) {
        throw std::invalid_argument("top_k_regions: empty saliency map");
    }
    const double sx = static_cast<double>(sal.source_w) / grid.width;
    const double sy = static_cast<double>(sal.source_h) / grid.height;
    std::vector<SalientRegion> regions;

    const double peak = *std::max_element(grid.data.begin(), grid.data.end());
    if (peak <= 0.0) {
        const double w = sal.source_w;
        const double h = sal.source_h;
        const double layout[5][2] = {{w / 2, h / 2}, {w / 4, h / 4}, {3 * w / 4, h / 4}, {w / 4, 3 * h / 4},
                                     {3 * w / 4, 3 * h / 4}};
        for (int k = 0; k < cfg.num_regions; ++k) {
            const auto& c = layout[k % 5];
            const int cell_x = std::min(grid.width - 1, static_cast<int>(c[0] / sx));
            const int cell_y = std::min(grid.height - 1, static_cast<int>(c[1] / sy));
            regions.push_back(make_region(c[0], c[1], 0.0, cell_x, cell_y, sal.source_w, sal.source_h,
                                          cfg.crop_fraction));
        }
        return regions;
    }

    const double radius = cfg.suppression_radius * grid.width;
    std::vector<bool> suppressed(grid.size(), false);
    for (int k = 0; k < cfg.num_regions; ++k) {
        std::size_t best = grid.size();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!suppressed[i] && (best == grid.size() || grid.data[i] > grid.data[best])) {
                best = i;
            }
        }
        if (best == grid.size()) {
            throw std::invalid_argument("top_k_regions: suppression radius leaves room for only " +
                                        std::to_string(k) + " regions");
        }
        const int bx = static_cast<int>(best % static_cast<std::size_t>(grid.width));
        const int by = static_cast<int>(best / static_cast<std::size_t>(grid.width));
        regions.push_back(make_region((bx + 0.5) * sx, (by + 0.5) * sy, std::clamp(grid.data[best], 0.0, 1.0), bx,
                                      by, sal.source_w, sal.source_h, cfg.crop_fraction));
        for (int y = 0; y < grid.height; ++y) {
            for (int x = 0; x < grid.width; ++x) {
                const double d = std::hypot(x - bx, y - by);
                if (d < radius) suppressed[static_cast<std::size_t>(y) * grid.width + x] = true;
            }
        }
    }
    return regions;
}

std::vector<RasterImage> extract_crops(const RasterImage& img, std::span<const SalientRegion> regions,
                                       int out_size) {
    std::vector<RasterImage> crops;
    crops.reserve(regions.size());
    for (const auto& r : regions) {
        const auto& b = r.crop_box;
        crops.push_back(resize_bilinear(crop(img, b.x0, b.y0, b.x1, b.y1), out_size, out_size));
    }
    return crops;
}

std::string format_region_record(const std::string& image_id, int rank, const SalientRegion& region) {
    const auto& b = region.crop_box;
    std::ostringstream os;
    os << image_id << '\t' << rank << '\t' << format_double(region.center_x) << '\t'
       << format_double(region.center_y) << '\t' << format_double(region.score) << '\t' << b.x0 << ',' << b.y0 << ','
       << b.x1 << ',' << b.y1;
    return os.str();
}

RegionRecord parse_region_record(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() != 6) {
        throw FormatError("region record needs 6 tab-separated fields", 0);
    }
    RegionRecord rec;
    rec.image_id = fields[0];
    try {
        rec.rank = std::stoi(fields[1]);
        rec.region.center_x = parse_double(fields[2]);
        rec.region.center_y = parse_double(fields[3]);
        rec.region.score = parse_double(fields[4]);
        char c1 = 0, c2 = 0, c3 = 0;
        std::istringstream box(fields[5]);
        auto& b = rec.region.crop_box;
        if (!(box >> b.x0 >> c1 >> b.y0 >> c2 >> b.x1 >> c3 >> b.y1) || c1 != ',' || c2 != ',' || c3 != ',') {
            throw std::invalid_argument("bad crop box");
        }
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("region record: ") + e.what(), 0);
    }
    return rec;
}

}  // namespace landmark
