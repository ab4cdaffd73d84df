#include "oracles.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

std::vector<std::vector<double>> embed(const std::vector<double>& u, std::size_t m) {
    std::vector<std::vector<double>> vectors;
    for (std::size_t i = 0; i + m <= u.size(); ++i)
        vectors.emplace_back(u.begin() + static_cast<std::ptrdiff_t>(i),
                             u.begin() + static_cast<std::ptrdiff_t>(i + m));
    return vectors;
}

double chebyshev(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double diff = std::fabs(a[k] - b[k]);
        if (diff > d) d = diff;
    }
    return d;
}

std::string key_of(const std::vector<int>& symbols) {
    std::ostringstream out;
    for (int s : symbols) out << s << '|';
    return out.str();
}

double entropy_nats(const std::map<std::string, int>& counts, double total) {
    double h = 0.0;
    for (const auto& [key, count] : counts) {
        double p = count / total;
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

double apen_standard(const std::vector<double>& u, std::size_t m, double r) {
    auto phi = [&](std::size_t dim) {
        auto vectors = embed(u, dim);
        double total = 0.0;
        for (const auto& vi : vectors) {
            int matches = 0;
            for (const auto& vj : vectors)
                if (chebyshev(vi, vj) <= r) ++matches;
            total += std::log(static_cast<double>(matches) /
                              static_cast<double>(vectors.size()));
        }
        return total / static_cast<double>(vectors.size());
    };
    return phi(m) - phi(m + 1);
}

double apen_count_ratio(const std::vector<double>& u, std::size_t m, double r) {
    auto mean_ratio = [&](std::size_t dim) {
        auto vectors = embed(u, dim);
        double total = 0.0;
        for (const auto& vi : vectors) {
            int matches = 0;
            for (const auto& vj : vectors)
                if (chebyshev(vi, vj) <= r) ++matches;
            total += static_cast<double>(matches) / static_cast<double>(vectors.size());
        }
        return total / static_cast<double>(vectors.size());
    };
    return mean_ratio(m) - mean_ratio(m + 1);
}

SampEn sampen(const std::vector<double>& u, std::size_t m, double r) {
    auto short_vectors = embed(u, m);
    auto long_vectors = embed(u, m + 1);
    const std::size_t count = long_vectors.size(); // positions 0 .. N-m-1
    long b = 0, a = 0;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            if (chebyshev(short_vectors[i], short_vectors[j]) <= r) {
                ++b;
                if (chebyshev(long_vectors[i], long_vectors[j]) <= r) ++a;
            }
        }
    }
    if (a == 0 || b == 0) return {0.0, false};
    return {-std::log(static_cast<double>(a) / static_cast<double>(b)), true};
}

double fuzzyen(const std::vector<double>& u, std::size_t m, double r, int n) {
    const std::size_t count = u.size() - m;
    auto phi = [&](std::size_t dim) {
        auto raw = embed(u, dim);
        std::vector<std::vector<double>> centered;
        for (std::size_t i = 0; i < count; ++i) {
            double mean = 0.0;
            for (double v : raw[i]) mean += v;
            mean /= static_cast<double>(dim);
            std::vector<double> c;
            for (double v : raw[i]) c.push_back(v - mean);
            centered.push_back(c);
        }
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double inner = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                if (i == j) continue;
                inner += std::exp(-std::pow(chebyshev(centered[i], centered[j]) / r, n));
            }
            total += inner / static_cast<double>(count - 1);
        }
        return total / static_cast<double>(count);
    };
    return std::log(phi(m)) - std::log(phi(m + 1));
}

double incren(const std::vector<double>& u, std::size_t m, int resolution) {
    std::vector<double> inc;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) inc.push_back(u[i + 1] - u[i]);

    std::map<std::string, int> counts;
    const std::size_t words = inc.size() - m + 1;
    for (std::size_t k = 0; k < words; ++k) {
        double vmax = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (std::fabs(inc[k + j]) > vmax) vmax = std::fabs(inc[k + j]);
        std::vector<int> letters;
        for (std::size_t j = 0; j < m; ++j) {
            double v = inc[k + j];
            int sign = (v > 0.0) - (v < 0.0);
            int q;
            if (vmax == 0.0) {
                q = 0;
            } else {
                q = static_cast<int>(std::floor(std::fabs(v) * resolution / vmax));
                if (q > resolution) q = resolution;
            }
            letters.push_back(sign * q);
        }
        ++counts[key_of(letters)];
    }
    return entropy_nats(counts, static_cast<double>(words));
}

double dispen(const std::vector<double>& u, std::size_t m, int classes, std::size_t delay) {
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(u.size());
    double sd = sample_sd(u);
    if (sd == 0.0) return 0.0;

    std::vector<int> z;
    for (double v : u) {
        double y = 0.5 * std::erfc(-(v - mean) / (sd * std::sqrt(2.0)));
        int cls = static_cast<int>(std::round(classes * y + 0.5));
        if (cls < 1) cls = 1;
        if (cls > classes) cls = classes;
        z.push_back(cls);
    }

    std::map<std::string, int> counts;
    const std::size_t total = u.size() - (m - 1) * delay;
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<int> pattern;
        for (std::size_t j = 0; j < m; ++j) pattern.push_back(z[i + j * delay]);
        ++counts[key_of(pattern)];
    }
    return entropy_nats(counts, static_cast<double>(total));
}

double phen(const std::vector<double>& u, std::size_t sectors) {
    const double two_pi = 2.0 * std::acos(-1.0);
    std::map<std::string, int> counts;
    const std::size_t total = u.size() - 2;
    for (std::size_t i = 0; i < total; ++i) {
        double x = u[i + 1] - u[i];
        double y = u[i + 2] - u[i + 1];
        std::size_t sector = 0;
        if (!(x == 0.0 && y == 0.0)) {
            double theta = std::atan2(y, x);
            if (theta < 0.0) theta += two_pi;
            sector = static_cast<std::size_t>(theta / (two_pi / static_cast<double>(sectors)));
            if (sector >= sectors) sector = sectors - 1;
        }
        ++counts[std::to_string(sector)];
    }
    return entropy_nats(counts, static_cast<double>(total)) /
           std::log(static_cast<double>(sectors));
}

double slopen(const std::vector<double>& u, std::size_t m, double gamma, double delta) {
    std::map<std::string, int> counts;
    const std::size_t total = u.size() - m + 1;
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<int> pattern;
        for (std::size_t t = 0; t + 1 < m; ++t) {
            double d = u[i + t + 1] - u[i + t];
            int symbol;
            if (gamma < d) symbol = 2;
            else if (delta < d && d <= gamma) symbol = 1;
            else if (std::fabs(d) <= delta) symbol = 0;
            else if (-gamma <= d && d < -delta) symbol = -1;
            else symbol = -2;
            pattern.push_back(symbol);
        }
        ++counts[key_of(pattern)];
    }
    return entropy_nats(counts, static_cast<double>(total));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("bad vectors");
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(b.size());
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

} // namespace oracle
