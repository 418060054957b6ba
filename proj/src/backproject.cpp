#include "pyra/backproject.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pyra {

namespace {

void check_template(const HsvImage& image, const Template& tmpl) {
    if (tmpl.window_w < 1 || tmpl.window_h < 1 || tmpl.window_w % 2 == 0 || tmpl.window_h % 2 == 0)
        throw std::invalid_argument("backproject: window dimensions must be odd and positive");
    if (tmpl.window_w > image.width || tmpl.window_h > image.height)
        throw std::invalid_argument("backproject: template window larger than image");
    if (tmpl.hist.n_bins() < 1) throw std::invalid_argument("backproject: empty template histogram");
}

// Grid of computed positions for a given stride; remaining pixels take the
// value of the nearest computed pixel.
int nearest_grid(int v, int stride, int last) {
    int g = (v + stride / 2) / stride * stride;
    return std::min(g, last);
}

void replicate_stride(ProbabilityMap& map, int stride) {
    if (stride <= 1) return;
    const int w = map.width, h = map.height;
    const int last_x = (w - 1) / stride * stride;
    const int last_y = (h - 1) / stride * stride;
    for (int y = 0; y < h; y += stride) {
        for (int x = 0; x < w; ++x) {
            if (x % stride != 0) map.at(x, y) = map.at(nearest_grid(x, stride, last_x), y);
        }
    }
    for (int y = 0; y < h; ++y) {
        if (y % stride != 0) {
            int sy = nearest_grid(y, stride, last_y);
            std::copy_n(&map.at(0, sy), w, &map.at(0, y));
        }
    }
}

// Centered template statistics shared by both scan paths.
struct TemplateStats {
    std::vector<double> centered;  // t_i - mean(t)
    double sum_centered = 0.0;     // ~0, kept for exactness
    double sum_sq = 0.0;
};

TemplateStats template_stats(const NormalizedHistogram& hist) {
    TemplateStats st;
    const int n = hist.n_bins();
    double mean = 0.0;
    for (double v : hist.bins) mean += v;
    mean /= n;
    st.centered.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double c = hist.bins[static_cast<std::size_t>(i)] - mean;
        st.centered[static_cast<std::size_t>(i)] = c;
        st.sum_centered += c;
        st.sum_sq += c * c;
    }
    return st;
}

}  // namespace

ProbabilityMap backproject_single_naive(const HsvImage& image, const Template& tmpl, int stride) {
    check_template(image, tmpl);
    if (stride < 1) throw std::invalid_argument("backproject: stride must be >= 1");
    const int W = image.width, H = image.height;
    const int n_bins = tmpl.hist.n_bins();
    const int rx = tmpl.window_w / 2, ry = tmpl.window_h / 2;
    const long area = static_cast<long>(tmpl.window_w) * tmpl.window_h;

    ProbabilityMap map(W, H);
    std::vector<long> counts(static_cast<std::size_t>(n_bins));
    NormalizedHistogram win;
    win.bins.resize(static_cast<std::size_t>(n_bins));

    for (int y = 0; y < H; y += stride) {
        for (int x = 0; x < W; x += stride) {
            std::fill(counts.begin(), counts.end(), 0L);
            for (int dy = -ry; dy <= ry; ++dy) {
                int cy = std::clamp(y + dy, 0, H - 1);
                for (int dx = -rx; dx <= rx; ++dx) {
                    int cx = std::clamp(x + dx, 0, W - 1);
                    int bin = std::min(image.h(cx, cy), n_bins - 1);
                    ++counts[static_cast<std::size_t>(bin)];
                }
            }
            for (int i = 0; i < n_bins; ++i) {
                win.bins[static_cast<std::size_t>(i)] =
                    static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                    static_cast<double>(area);
            }
            map.at(x, y) = correlation_similarity(win, tmpl.hist);
        }
    }
    replicate_stride(map, stride);
    return map;
}

ProbabilityMap backproject_single(const HsvImage& image, const Template& tmpl, int stride) {
    check_template(image, tmpl);
    if (stride < 1) throw std::invalid_argument("backproject: stride must be >= 1");
    const int W = image.width, H = image.height;
    const int n_bins = tmpl.hist.n_bins();
    const int rx = tmpl.window_w / 2, ry = tmpl.window_h / 2;
    const double area = static_cast<double>(tmpl.window_w) * tmpl.window_h;
    const double mean_count = area / n_bins;

    const TemplateStats ts = template_stats(tmpl.hist);
    ProbabilityMap map(W, H);
    const int n_rows = (H + stride - 1) / stride;

    // Row-sliding scan: counts for the window at x are updated in O(window_h)
    // per step by removing the leaving column and adding the entering one.
    // Running sums give the correlation in O(1) per pixel:
    //   dot  = sum_i (c_i - area/N) * t'_i   via  S_ct = sum_i c_i t'_i
    //   var  = sum_i (c_i - area/N)^2        via  S_cc = sum_i c_i^2
    #pragma omp parallel for schedule(static)
    for (int row = 0; row < n_rows; ++row) {
        const int y = row * stride;
        std::vector<long> counts(static_cast<std::size_t>(n_bins), 0L);
        double s_ct = 0.0;
        long long s_cc = 0;

        auto add_pixel = [&](int bin) {
            long& c = counts[static_cast<std::size_t>(bin)];
            s_cc += 2 * c + 1;
            s_ct += ts.centered[static_cast<std::size_t>(bin)];
            ++c;
        };
        auto remove_pixel = [&](int bin) {
            long& c = counts[static_cast<std::size_t>(bin)];
            s_cc -= 2 * c - 1;
            s_ct -= ts.centered[static_cast<std::size_t>(bin)];
            --c;
        };
        auto bin_at = [&](int cx, int cy) { return std::min(image.h(cx, cy), n_bins - 1); };
        auto add_column = [&](int cx) {
            cx = std::clamp(cx, 0, W - 1);
            for (int dy = -ry; dy <= ry; ++dy) add_pixel(bin_at(cx, std::clamp(y + dy, 0, H - 1)));
        };
        auto remove_column = [&](int cx) {
            cx = std::clamp(cx, 0, W - 1);
            for (int dy = -ry; dy <= ry; ++dy) remove_pixel(bin_at(cx, std::clamp(y + dy, 0, H - 1)));
        };
        auto value = [&]() {
            double var = static_cast<double>(s_cc) - area * mean_count;
            if (var <= 0.0 || ts.sum_sq <= 0.0) return 0.0;
            double dot = (s_ct - mean_count * ts.sum_centered) / area;
            return dot / std::sqrt(var / (area * area) * ts.sum_sq);
        };

        for (int dx = -rx; dx <= rx; ++dx) add_column(dx);
        map.at(0, y) = value();
        for (int x = stride; x < W; x += stride) {
            for (int k = 0; k < stride; ++k) {
                remove_column(x - stride - rx + k);
                add_column(x + rx - k);
            }
            map.at(x, y) = value();
        }
    }
    replicate_stride(map, stride);
    return map;
}

GrayMap fuse_templates(const std::vector<ProbabilityMap>& maps, bool normalize) {
    if (maps.empty()) throw std::invalid_argument("fuse_templates: no maps");
    const int W = maps[0].width, H = maps[0].height;
    for (const auto& m : maps) {
        if (m.width != W || m.height != H)
            throw std::invalid_argument("fuse_templates: dimension mismatch");
    }
    const double inv_m = normalize ? 1.0 / static_cast<double>(maps.size()) : 1.0;

    GrayMap out(W, H);
    const std::size_t n = static_cast<std::size_t>(W) * H;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& m : maps) sum += m.values[i];
        double v = std::clamp(sum * inv_m, 0.0, 1.0);
        // round half up, bit-exact quantization for reproducible thresholds
        out.values[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
    }
    return out;
}

GrayMap erode(const GrayMap& map, int iterations) {
    if (iterations < 0) throw std::invalid_argument("erode: negative iteration count");
    GrayMap cur = map;
    GrayMap next(map.width, map.height);
    for (int it = 0; it < iterations; ++it) {
        #pragma omp parallel for schedule(static)
        for (int y = 0; y < cur.height; ++y) {
            for (int x = 0; x < cur.width; ++x) {
                std::uint8_t m = 255;
                for (int dy = -1; dy <= 1; ++dy) {
                    int cy = std::clamp(y + dy, 0, cur.height - 1);
                    for (int dx = -1; dx <= 1; ++dx) {
                        int cx = std::clamp(x + dx, 0, cur.width - 1);
                        m = std::min(m, cur.at(cx, cy));
                    }
                }
                next.at(x, y) = m;
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

}  // namespace pyra
