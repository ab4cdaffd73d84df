#include "entropykit/sigent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace entropykit::sigent {

namespace {

double resolve_tolerance(const std::vector<double>& u, double p, bool relative) {
    if (p <= 0.0) throw std::invalid_argument("tolerance must be positive");
    double r = relative ? p * sample_sd(u) : p;
    if (r <= 0.0) throw std::invalid_argument("zero tolerance");
    return r;
}

double chebyshev(const std::vector<double>& u, std::size_t i, std::size_t j, std::size_t m) {
    double d = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        d = std::max(d, std::abs(u[i + k] - u[j + k]));
    return d;
}

double entropy_of_counts(const std::map<std::vector<int>, std::size_t>& counts,
                         std::size_t total) {
    double h = 0.0;
    for (const auto& [word, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

} // namespace

double sample_sd(const std::vector<double>& u) {
    if (u.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(u.size());
    double ss = 0.0;
    for (double v : u) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(u.size() - 1));
}

double apen(const std::vector<double>& u, std::size_t m, double p,
            bool relative, bool count_ratio) {
    const std::size_t n = u.size();
    if (m < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    if (n < m + 2) throw std::invalid_argument("series too short");
    const double r = resolve_tolerance(u, p, relative);

    // mean match ratio per template (self-inclusive), and mean log ratio
    auto stats = [&](std::size_t dim) {
        const std::size_t count = n - dim + 1;
        double sum_ratio = 0.0, sum_log = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t matches = 0;
            for (std::size_t j = 0; j < count; ++j)
                if (chebyshev(u, i, j, dim) <= r) ++matches;
            double ratio = static_cast<double>(matches) / static_cast<double>(count);
            sum_ratio += ratio;
            sum_log += std::log(ratio); // >= 1/count, never zero
        }
        return std::pair{sum_ratio / static_cast<double>(count),
                         sum_log / static_cast<double>(count)};
    };

    auto [ratio_m, phi_m] = stats(m);
    auto [ratio_m1, phi_m1] = stats(m + 1);
    return count_ratio ? ratio_m - ratio_m1 : phi_m - phi_m1;
}

SampEnResult sampen(const std::vector<double>& u, std::size_t m, double p, bool relative) {
    const std::size_t n = u.size();
    if (m < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    if (n < m + 2) throw std::invalid_argument("series too short");
    const double r = resolve_tolerance(u, p, relative);

    // pairs restricted to the first n - m positions so templates of both
    // lengths exist; self-matches excluded
    const std::size_t count = n - m;
    std::size_t b = 0, a = 0;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            if (chebyshev(u, i, j, m) <= r) {
                ++b;
                if (std::abs(u[i + m] - u[j + m]) <= r) ++a;
            }
        }
    }
    if (a == 0 || b == 0) return SampEnResult{0.0, false};
    return SampEnResult{-std::log(static_cast<double>(a) / static_cast<double>(b)), true};
}

double fuzzyen(const std::vector<double>& u, std::size_t m, double p,
               int n_grad, bool relative) {
    const std::size_t n = u.size();
    if (m < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    if (n < m + 2) throw std::invalid_argument("series too short");
    if (n_grad < 1) throw std::invalid_argument("membership gradient must be >= 1");
    const double r = resolve_tolerance(u, p, relative);

    const std::size_t count = n - m;
    auto phi = [&](std::size_t dim) {
        // baseline-removed templates of length dim at the first `count` positions
        std::vector<std::vector<double>> templates(count, std::vector<double>(dim));
        for (std::size_t i = 0; i < count; ++i) {
            double mean = 0.0;
            for (std::size_t k = 0; k < dim; ++k) mean += u[i + k];
            mean /= static_cast<double>(dim);
            for (std::size_t k = 0; k < dim; ++k) templates[i][k] = u[i + k] - mean;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                if (i == j) continue;
                double d = 0.0;
                for (std::size_t k = 0; k < dim; ++k)
                    d = std::max(d, std::abs(templates[i][k] - templates[j][k]));
                sum += std::exp(-std::pow(d / r, n_grad));
            }
            total += sum / static_cast<double>(count - 1);
        }
        return total / static_cast<double>(count);
    };

    return std::log(phi(m)) - std::log(phi(m + 1));
}

double incren(const std::vector<double>& u, std::size_t m, int quant_resolution) {
    const std::size_t n = u.size();
    if (m < 2) throw std::invalid_argument("embedding dimension must be >= 2");
    if (quant_resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    if (n < m + 2) throw std::invalid_argument("series too short");

    std::vector<double> inc(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) inc[i] = u[i + 1] - u[i];

    const std::size_t words = n - m; // (n-1) increments -> (n-1) - m + 1 words
    const double res = static_cast<double>(quant_resolution);
    std::map<std::vector<int>, std::size_t> counts;
    std::vector<int> word(m);
    for (std::size_t k = 0; k < words; ++k) {
        double vmax = 0.0;
        for (std::size_t j = 0; j < m; ++j) vmax = std::max(vmax, std::abs(inc[k + j]));
        for (std::size_t j = 0; j < m; ++j) {
            double v = inc[k + j];
            int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
            int q = 0;
            if (vmax > 0.0)
                q = std::min(quant_resolution,
                             static_cast<int>(std::floor(std::abs(v) * res / vmax)));
            word[j] = sign * q;
        }
        ++counts[word];
    }
    return entropy_of_counts(counts, words);
}

double dispen(const std::vector<double>& u, std::size_t m, int n_classes, std::size_t delay) {
    const std::size_t n = u.size();
    if (m < 2) throw std::invalid_argument("embedding dimension must be >= 2");
    if (n_classes < 2) throw std::invalid_argument("need at least 2 classes");
    if (delay < 1) throw std::invalid_argument("delay must be >= 1");
    if (n < (m - 1) * delay + 2) throw std::invalid_argument("series too short");

    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(n);
    double sd = sample_sd(u);
    if (sd == 0.0) return 0.0; // every sample maps to one class

    const double c = static_cast<double>(n_classes);
    std::vector<int> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = 0.5 * std::erfc(-(u[i] - mean) / (sd * std::sqrt(2.0)));
        int cls = static_cast<int>(std::round(c * y + 0.5));
        z[i] = std::clamp(cls, 1, n_classes);
    }

    const std::size_t patterns = n - (m - 1) * delay;
    std::map<std::vector<int>, std::size_t> counts;
    std::vector<int> pattern(m);
    for (std::size_t i = 0; i < patterns; ++i) {
        for (std::size_t j = 0; j < m; ++j) pattern[j] = z[i + j * delay];
        ++counts[pattern];
    }
    return entropy_of_counts(counts, patterns);
}

double phen(const std::vector<double>& u, std::size_t k) {
    const std::size_t n = u.size();
    if (n < 3) throw std::invalid_argument("series too short (need >= 3 samples)");
    if (k < 4 || k % 4 != 0)
        throw std::invalid_argument("sector count must be >= 4 and a multiple of 4");

    const double two_pi = 6.283185307179586476925286766559;
    std::vector<std::size_t> sectors(k, 0);
    const std::size_t points = n - 2;
    for (std::size_t i = 0; i < points; ++i) {
        double x = u[i + 1] - u[i];
        double y = u[i + 2] - u[i + 1];
        std::size_t sector = 0;
        if (x != 0.0 || y != 0.0) {
            double theta = std::atan2(y, x);
            if (theta < 0.0) theta += two_pi;
            sector = static_cast<std::size_t>(theta * static_cast<double>(k) / two_pi);
            if (sector >= k) sector = k - 1;
        }
        ++sectors[sector];
    }

    double h = 0.0;
    for (std::size_t c : sectors) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(points);
        h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(k));
}

double slopen(const std::vector<double>& u, std::size_t m, double gamma, double delta) {
    const std::size_t n = u.size();
    if (m < 2) throw std::invalid_argument("embedding dimension must be >= 2");
    if (!(delta > 0.0) || !(delta < gamma))
        throw std::invalid_argument("thresholds must satisfy 0 < delta < gamma");
    if (n < m + 1) throw std::invalid_argument("series too short");

    const std::size_t subsequences = n - m + 1;
    std::map<std::vector<int>, std::size_t> counts;
    std::vector<int> symbols(m - 1);
    for (std::size_t i = 0; i < subsequences; ++i) {
        for (std::size_t t = 0; t + 1 < m; ++t) {
            double d = u[i + t + 1] - u[i + t];
            int s;
            if (d > gamma) s = 2;
            else if (d > delta) s = 1;
            else if (d >= -delta) s = 0;
            else if (d >= -gamma) s = -1;
            else s = -2;
            symbols[t] = s;
        }
        ++counts[symbols];
    }
    return entropy_of_counts(counts, subsequences);
}

} // namespace entropykit::sigent
