#ifndef ENTROPYKIT_SIGENT_HPP
#define ENTROPYKIT_SIGENT_HPP

#include <cstddef>
#include <vector>

namespace entropykit::sigent {

// Shared conventions for this module:
//  - tolerances given as `p` are relative to the sample standard
//    deviation (N-1 divisor) unless `relative` is false;
//  - all entropies use the natural logarithm;
//  - results are deterministic functions of the input bits.

double sample_sd(const std::vector<double>& u);

// Approximate entropy. The default mode is the standard formulation
// (difference of mean log self-inclusive match ratios); count_ratio
// switches to the log-free count-ratio difference.
double apen(const std::vector<double>& u, std::size_t m, double p,
            bool relative = true, bool count_ratio = false);

// Sample entropy, -ln(A/B) with self-matches excluded. When no
// template matches exist the value is undefined and flagged instead of
// returning an infinity silently.
struct SampEnResult {
    double value = 0.0;
    bool defined = true;
};

SampEnResult sampen(const std::vector<double>& u, std::size_t m, double p,
                    bool relative = true);

// Fuzzy entropy with exponential membership exp(-(d/r)^n) over
// baseline-removed templates; both dimensions use the first N-m
// template positions.
double fuzzyen(const std::vector<double>& u, std::size_t m, double p,
               int n_grad = 2, bool relative = true);

// Increment entropy: words of m signed quantized increments, letter
// q = min(R, floor(|v| * R / max |v| within the word)), sign applied;
// q = 0 throughout a word whose max increment is 0.
double incren(const std::vector<double>& u, std::size_t m, int quant_resolution);

// Dispersion entropy with NCDF mapping and class clamp to [1, c].
// A constant series (sd = 0) maps to a single class and yields 0.
double dispen(const std::vector<double>& u, std::size_t m, int n_classes, std::size_t delay);

// Phase entropy over k equal sectors of the second-order difference
// plot, normalized by ln k to [0, 1]. Points at the origin fall in
// sector 0.
double phen(const std::vector<double>& u, std::size_t k);

// Slope entropy with soft thresholds 0 < delta < gamma mapping
// consecutive differences to the symbols {-2,-1,0,1,2}.
double slopen(const std::vector<double>& u, std::size_t m, double gamma, double delta);

} // namespace entropykit::sigent

#endif
