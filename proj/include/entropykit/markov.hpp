#ifndef ENTROPYKIT_MARKOV_HPP
#define ENTROPYKIT_MARKOV_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "entropykit/core.hpp"
#include "entropykit/linalg.hpp"

namespace entropykit::markov {

// Row-stochastic transition matrix with its stationary distribution.
struct TransitionModel {
    std::size_t n = 0;
    Matrix T;
    std::vector<double> pi;

    void validate() const; // throws on invariant violation
};

// Per-period matrix of route frequencies (counts) or route durations
// (seconds spent in state i before moving to j).
struct RouteMatrix {
    std::size_t n = 0;
    Matrix A;
    std::int64_t period = 0; // day index
};

enum class RouteMode { frequency, duration };

// Hermitian (real symmetric), unit-trace, positive-semidefinite.
struct DensityOperator {
    std::size_t dim = 0;
    Matrix rho;

    void validate() const;
};

// Empirical state frequencies over the trajectory's alphabet; sums to 1.
std::vector<double> state_distribution(const core::StateTrajectory& traj);

// H = -sum p ln p, natural log, 0 ln 0 = 0. Validates the distribution.
double shannon_entropy(const std::vector<double>& p);

// T[i][j] = count(i -> j) / count(i as predecessor); rows with no
// outgoing transitions become the uniform row 1/n.
Matrix estimate_transition_matrix(const std::vector<int>& states, std::size_t n_states);
Matrix estimate_transition_matrix(const core::StateTrajectory& traj);

// Power iteration from the uniform vector, tolerance 1e-12 on the
// max-norm step difference, at most 1e5 iterations. Reducible chains
// (no unique pi) and non-converging iterations return the empirical
// fallback, flagged, when one is provided.
struct StationaryResult {
    std::vector<double> pi;
    bool fallback_used = false;
};

StationaryResult stationary_distribution(
    const Matrix& T, const std::optional<std::vector<double>>& empirical_fallback = std::nullopt);

// xi = -sum_i pi_i sum_j T_ij ln T_ij (nats per step).
double entropy_rate(const std::vector<double>& pi, const Matrix& T);

// Two-window scheme: pi estimated once from the prefix [0, tw1), one
// rate per non-overlapping tw2 window using that fixed pi.
std::vector<double> entropy_rate_windows(const core::StateTrajectory& traj,
                                         std::size_t tw1, std::size_t tw2);

// One matrix per local day between the first and last event.
std::vector<RouteMatrix> route_matrices(const std::vector<core::EventRecord>& events,
                                        std::size_t n_states, RouteMode mode,
                                        int tz_offset_minutes = 0);

// Pearson correlation matrix of the given equal-length vectors.
// Zero-variance pairs correlate 0 off the diagonal; the diagonal is 1.
Matrix pearson_matrix(const std::vector<std::vector<double>>& vectors);

// rho = R / N for an N x N correlation matrix R.
DensityOperator density_operator(const Matrix& R);

// Mercator series log(B) = sum (-1)^(k+1) (B-I)^k / k, valid for
// ||B - I||_2 < 1. Stops when the Frobenius norm of a term drops below
// tol or k_max terms are summed.
struct MercatorLog {
    Matrix log;
    double residual = 0.0; // Frobenius norm of the last term added
    std::size_t terms = 0;
};

MercatorLog matrix_log_mercator(const Matrix& B, std::size_t k_max = 1000, double tol = 1e-14);

// Von Neumann entropy -sum lambda ln lambda via eigendecomposition;
// eigenvalues below the clip threshold contribute nothing.
double vne(const DensityOperator& rho, double clip = 1e-9);

// Series route: -tr(rho * mercator_log(rho)); requires ||rho - I|| < 1.
double vne_mercator(const DensityOperator& rho, std::size_t k_max = 10000, double tol = 1e-14);

// Route matrices -> per-day flattened vectors -> Pearson R -> rho = R/N
// -> VNE, per non-overlapping window of window_days consecutive days.
std::vector<double> vne_windows(const std::vector<core::EventRecord>& events,
                                std::size_t n_states, std::size_t window_days, RouteMode mode,
                                int tz_offset_minutes = 0);

// Per-state dwell seconds inside [start, end), occupancy held between
// events and truncated at the last event.
std::vector<double> dwell_vector(const std::vector<core::EventRecord>& events,
                                 std::size_t n_states, std::int64_t start, std::int64_t end);

// L1 distance between consecutive windows' dwell vectors; the first
// window has no predecessor and yields 0.
std::vector<double> duration_differences(const std::vector<core::EventRecord>& events,
                                         std::size_t n_states, std::int64_t window_seconds);

// Schnakenberg entropy production rate
//   sigma = sum_{i<j} (pi_i T_ij - pi_j T_ji) ln(pi_i T_ij / (pi_j T_ji)).
// Pairs with flux in exactly one direction are excluded and counted
// (the formal value is infinite).
struct EntropyProduction {
    double sigma = 0.0;
    std::size_t excluded_pairs = 0;
};

EntropyProduction analytic_entropy_production(const std::vector<double>& pi, const Matrix& T);

std::int64_t day_index(std::int64_t timestamp, int tz_offset_minutes = 0);

} // namespace entropykit::markov

#endif
