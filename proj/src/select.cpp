#include "entropykit/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entropykit/markov.hpp"

namespace entropykit::select {

std::vector<double> FeatureMatrix::column(std::size_t j) const {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& row : rows) col.push_back(row.at(j));
    return col;
}

void FeatureMatrix::validate() const {
    if (labels.size() != rows.size())
        throw std::invalid_argument("labels not aligned with rows");
    for (const auto& row : rows) {
        if (row.size() != feature_names.size())
            throw std::invalid_argument("row length does not match feature count");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    }
    for (int y : labels)
        if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        for (std::size_t j = i + 1; j < feature_names.size(); ++j)
            if (feature_names[i] == feature_names[j])
                throw std::invalid_argument("duplicate feature name: " + feature_names[i]);
}

double mutual_information(const std::vector<double>& values, const std::vector<int>& labels,
                          std::size_t bins) {
    const std::size_t n = values.size();
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    if (labels.size() != n) throw std::invalid_argument("labels not aligned with values");
    if (n < 2 * bins) throw std::invalid_argument("need at least 2 samples per bin");
    bool has0 = false, has1 = false;
    for (int y : labels) {
        if (y == 0) has0 = true;
        else if (y == 1) has1 = true;
        else throw std::invalid_argument("labels must be 0 or 1");
    }
    if (!has0 || !has1) throw std::invalid_argument("single-class labels");

    // equal-frequency bins: sorted rank r goes to bin r*bins/n
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<std::size_t> joint(bins * 2, 0);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t b = r * bins / n;
        ++joint[b * 2 + static_cast<std::size_t>(labels[order[r]])];
    }

    std::vector<double> pb(bins, 0.0);
    double py[2] = {0.0, 0.0};
    for (std::size_t b = 0; b < bins; ++b) {
        for (int y = 0; y < 2; ++y) {
            double p = static_cast<double>(joint[b * 2 + static_cast<std::size_t>(y)]) /
                       static_cast<double>(n);
            pb[b] += p;
            py[y] += p;
        }
    }

    double mi = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        for (int y = 0; y < 2; ++y) {
            double pby = static_cast<double>(joint[b * 2 + static_cast<std::size_t>(y)]) /
                         static_cast<double>(n);
            if (pby > 0.0) mi += pby * std::log(pby / (pb[b] * py[y]));
        }
    }
    return mi < 0.0 ? 0.0 : mi; // clip float noise; plug-in MI is non-negative
}

Matrix feature_pearson_matrix(const FeatureMatrix& matrix) {
    if (matrix.rows.size() < 2) throw std::invalid_argument("need at least 2 rows");
    std::vector<std::vector<double>> columns;
    columns.reserve(matrix.feature_names.size());
    for (std::size_t j = 0; j < matrix.feature_names.size(); ++j)
        columns.push_back(matrix.column(j));
    return markov::pearson_matrix(columns);
}

SelectionReport select_features(const FeatureMatrix& matrix, std::size_t k, double tau,
                                std::size_t bins) {
    matrix.validate();
    const std::size_t n_features = matrix.feature_names.size();
    if (k > n_features) throw std::invalid_argument("k exceeds feature count");
    if (!(tau > 0.0) || tau > 1.0) throw std::invalid_argument("tau must be in (0, 1]");

    SelectionReport report;
    report.feature_names = matrix.feature_names;
    report.mi_scores.reserve(n_features);
    for (std::size_t j = 0; j < n_features; ++j)
        report.mi_scores.push_back(mutual_information(matrix.column(j), matrix.labels, bins));
    report.pearson = feature_pearson_matrix(matrix);

    std::vector<std::size_t> rank(n_features);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        if (report.mi_scores[a] != report.mi_scores[b])
            return report.mi_scores[a] > report.mi_scores[b];
        return matrix.feature_names[a] < matrix.feature_names[b];
    });

    std::vector<std::size_t> accepted;
    for (std::size_t idx : rank) {
        if (accepted.size() >= k) {
            report.rejections.push_back(Rejection{matrix.feature_names[idx], "", 0.0});
            continue;
        }
        bool blocked = false;
        for (std::size_t a : accepted) {
            double corr = report.pearson(idx, a);
            if (std::abs(corr) >= tau) {
                report.rejections.push_back(
                    Rejection{matrix.feature_names[idx], matrix.feature_names[a], corr});
                blocked = true;
                break;
            }
        }
        if (!blocked) {
            accepted.push_back(idx);
            report.selected.push_back(matrix.feature_names[idx]);
        }
    }
    report.incomplete = report.selected.size() < k;

    // postcondition: no accepted pair correlates at or above tau
    for (std::size_t i = 0; i < accepted.size(); ++i)
        for (std::size_t j = i + 1; j < accepted.size(); ++j)
            if (std::abs(report.pearson(accepted[i], accepted[j])) >= tau)
                throw std::logic_error("selection failed its correlation cap");
    return report;
}

} // namespace entropykit::select
