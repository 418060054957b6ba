#include "pyra/segment.hpp"

#include <stdexcept>

namespace pyra {

GrayHistogram GrayHistogram::from_map(const GrayMap& map) {
    GrayHistogram h;
    for (std::uint8_t v : map.values) ++h.counts[v];
    h.finalize();
    return h;
}

void GrayHistogram::add(int level, std::uint64_t n) {
    if (level < 0 || level > 255) throw std::invalid_argument("GrayHistogram: level out of range");
    counts[static_cast<std::size_t>(level)] += n;
}

void GrayHistogram::finalize() {
    total = 0;
    p_min = 255;
    p_max = 0;
    for (int i = 0; i < 256; ++i) {
        std::uint64_t c = counts[static_cast<std::size_t>(i)];
        if (c > 0) {
            total += c;
            if (i < p_min) p_min = i;
            if (i > p_max) p_max = i;
        }
    }
    if (total == 0) {
        p_min = 0;
        p_max = 0;
    }
}

namespace {

struct Split {
    double w1, w2, mu1, mu2;
    bool valid;
};

// Class statistics for class 1 = levels <= t, from prefix sums.
Split split_at(const GrayHistogram& h, int t, const std::uint64_t* cum_n,
               const std::uint64_t* cum_s) {
    std::uint64_t n1 = cum_n[t];
    std::uint64_t n2 = h.total - n1;
    if (n1 == 0 || n2 == 0) return {0, 0, 0, 0, false};
    std::uint64_t s1 = cum_s[t];
    std::uint64_t s2 = cum_s[255] - s1;
    double w1 = static_cast<double>(n1) / static_cast<double>(h.total);
    double w2 = static_cast<double>(n2) / static_cast<double>(h.total);
    double mu1 = static_cast<double>(s1) / static_cast<double>(n1);
    double mu2 = static_cast<double>(s2) / static_cast<double>(n2);
    return {w1, w2, mu1, mu2, true};
}

double objective(const Split& s) {
    double d = s.mu1 - s.mu2;
    return s.w1 * s.w2 * d * d;
}

struct ArgmaxResult {
    int threshold;
    double variance;
    Split split;
};

ArgmaxResult argmax_between(const GrayHistogram& h, int lo, int hi) {
    std::uint64_t cum_n[256], cum_s[256];
    std::uint64_t n = 0, s = 0;
    for (int i = 0; i < 256; ++i) {
        n += h.counts[static_cast<std::size_t>(i)];
        s += h.counts[static_cast<std::size_t>(i)] * static_cast<std::uint64_t>(i);
        cum_n[i] = n;
        cum_s[i] = s;
    }

    ArgmaxResult best{lo, -1.0, {}};
    for (int t = lo; t <= hi; ++t) {
        Split sp = split_at(h, t, cum_n, cum_s);
        double g = sp.valid ? objective(sp) : 0.0;
        if (g > best.variance) best = {t, g, sp};
    }
    if (best.variance < 0.0) best.variance = 0.0;  // degenerate single-class range
    return best;
}

}  // namespace

int otsu(const GrayHistogram& hist) {
    if (hist.total == 0) throw std::invalid_argument("otsu: empty histogram");
    if (hist.p_min == hist.p_max) return hist.p_min;  // single occupied level
    return argmax_between(hist, hist.p_min, hist.p_max).threshold;
}

ThresholdResult constrained_otsu(const GrayHistogram& hist, OtsuLower lower) {
    if (hist.total == 0) throw std::invalid_argument("constrained_otsu: empty histogram");
    ThresholdResult out;
    if (hist.p_min == hist.p_max) {
        out.g_otsu = out.g_optimal = hist.p_min;
        out.variance_at_optimal = 0.0;
        return out;
    }

    ArgmaxResult plain = argmax_between(hist, hist.p_min, hist.p_max);
    out.g_otsu = plain.threshold;

    int lower_bound = plain.threshold;
    if (lower == OtsuLower::Midpoint && plain.split.valid) {
        int mid = static_cast<int>((plain.split.mu1 + plain.split.mu2) / 2.0);
        lower_bound = std::min(std::max(mid, hist.p_min), hist.p_max);
        out.g_otsu = lower_bound;
    }

    ArgmaxResult constrained = argmax_between(hist, lower_bound, hist.p_max);
    out.g_optimal = constrained.threshold;
    out.variance_at_optimal = constrained.variance;
    return out;
}

GrayMap binarize(const GrayMap& map, int threshold) {
    if (threshold < 0 || threshold > 255) throw std::invalid_argument("binarize: threshold out of range");
    GrayMap out(map.width, map.height);
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        out.values[i] = map.values[i] > threshold ? 255 : 0;
    }
    return out;
}

}  // namespace pyra
