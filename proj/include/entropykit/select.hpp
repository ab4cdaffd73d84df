#ifndef ENTROPYKIT_SELECT_HPP
#define ENTROPYKIT_SELECT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "entropykit/linalg.hpp"

namespace entropykit::select {

struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows; // each row has one value per feature
    std::vector<int> labels;               // {0,1}, aligned with rows

    std::vector<double> column(std::size_t j) const;
    void validate() const;
};

// Plug-in mutual information in nats between a real feature and binary
// labels; the feature is discretized into `bins` equal-frequency bins
// with ties broken by stable sort order.
double mutual_information(const std::vector<double>& values, const std::vector<int>& labels,
                          std::size_t bins);

// Pearson correlation matrix over feature columns.
Matrix feature_pearson_matrix(const FeatureMatrix& matrix);

struct Rejection {
    std::string feature;
    std::string blocker;     // empty when dropped for budget, not correlation
    double correlation = 0.0;
};

struct SelectionReport {
    std::vector<std::string> feature_names; // input order
    std::vector<double> mi_scores;          // aligned with feature_names
    Matrix pearson;
    std::vector<std::string> selected;      // acceptance order
    std::vector<Rejection> rejections;
    bool incomplete = false;                // fewer than k features accepted
};

// Rank by MI descending (ties by name), then greedily accept features
// whose |correlation| with every accepted feature stays below tau.
SelectionReport select_features(const FeatureMatrix& matrix, std::size_t k, double tau,
                                std::size_t bins = 10);

} // namespace entropykit::select

#endif
