#include "entropykit/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entropykit::markov {

namespace {

constexpr double kRowSumTol = 1e-9;

void check_row_stochastic(const Matrix& T) {
    if (T.rows() != T.cols() || T.rows() == 0)
        throw std::invalid_argument("transition matrix must be square and non-empty");
    for (std::size_t i = 0; i < T.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < T.cols(); ++j) {
            if (T(i, j) < 0.0) throw std::invalid_argument("negative transition probability");
            sum += T(i, j);
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw std::invalid_argument("transition matrix row does not sum to 1");
    }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// strong connectivity of the digraph with edges T(i, j) > 0; a chain
// that is not irreducible has no unique stationary distribution
bool is_irreducible(const Matrix& T) {
    const std::size_t n = T.rows();
    auto reachable_from_zero = [&](bool reversed) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                double w = reversed ? T(v, u) : T(u, v);
                if (w > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (char s : seen)
            if (!s) return false;
        return true;
    };
    return reachable_from_zero(false) && reachable_from_zero(true);
}

} // namespace

void TransitionModel::validate() const {
    if (T.rows() != n || T.cols() != n || pi.size() != n)
        throw std::invalid_argument("transition model dimension mismatch");
    check_row_stochastic(T);
    double sum = 0.0;
    for (double p : pi) {
        if (p < 0.0) throw std::invalid_argument("negative stationary probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument("stationary distribution does not sum to 1");
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += pi[i] * T(i, j);
        if (std::abs(v - pi[j]) > 1e-6)
            throw std::invalid_argument("pi is not stationary under T");
    }
}

void DensityOperator::validate() const {
    if (rho.rows() != dim || rho.cols() != dim || dim == 0)
        throw std::invalid_argument("density operator dimension mismatch");
    double trace = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        trace += rho(i, i);
        for (std::size_t j = i + 1; j < dim; ++j)
            if (std::abs(rho(i, j) - rho(j, i)) > 1e-9)
                throw std::invalid_argument("density operator not symmetric");
    }
    if (std::abs(trace - 1.0) > 1e-9)
        throw std::invalid_argument("density operator trace is not 1");
    SymmetricEigen eig = eigen_symmetric(rho);
    if (eig.values.front() < -1e-9)
        throw std::invalid_argument("density operator not positive semidefinite");
}

std::vector<double> state_distribution(const core::StateTrajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
    traj.validate();
    std::vector<double> p(traj.alphabet_size(), 0.0);
    for (int s : traj.states) p[static_cast<std::size_t>(s)] += 1.0;
    for (double& v : p) v /= static_cast<double>(traj.states.size());
    return p;
}

double shannon_entropy(const std::vector<double>& p) {
    if (p.empty()) throw std::invalid_argument("empty distribution");
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument("negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument("probabilities do not sum to 1");
    double h = 0.0;
    for (double v : p) h -= xlogx(v);
    return h;
}

Matrix estimate_transition_matrix(const std::vector<int>& states, std::size_t n_states) {
    if (states.size() < 2) throw std::invalid_argument("trajectory too short (need length >= 2)");
    if (n_states == 0) throw std::invalid_argument("empty alphabet");
    Matrix counts(n_states, n_states, 0.0);
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        int a = states[t], b = states[t + 1];
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n_states ||
            static_cast<std::size_t>(b) >= n_states)
            throw std::invalid_argument("state index out of alphabet range");
        counts(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) += 1.0;
    }
    Matrix T(n_states, n_states, 0.0);
    for (std::size_t i = 0; i < n_states; ++i) {
        double row_total = 0.0;
        for (std::size_t j = 0; j < n_states; ++j) row_total += counts(i, j);
        if (row_total == 0.0) {
            // unvisited predecessor: uniform row keeps T row-stochastic
            for (std::size_t j = 0; j < n_states; ++j)
                T(i, j) = 1.0 / static_cast<double>(n_states);
        } else {
            for (std::size_t j = 0; j < n_states; ++j) T(i, j) = counts(i, j) / row_total;
        }
    }
    return T;
}

Matrix estimate_transition_matrix(const core::StateTrajectory& traj) {
    return estimate_transition_matrix(traj.states, traj.alphabet_size());
}

StationaryResult stationary_distribution(
    const Matrix& T, const std::optional<std::vector<double>>& empirical_fallback) {
    check_row_stochastic(T);
    const std::size_t n = T.rows();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    const std::size_t max_iter = is_irreducible(T) ? 100000 : 0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += pi[i] * T(i, j);
            next[j] = v;
            sum += v;
        }
        for (double& v : next) v /= sum;
        double diff = 0.0;
        for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
        pi.swap(next);
        if (diff <= 1e-12) {
            // converged to a fixed point of the iteration; verify it is
            // actually stationary (reducible chains can stall elsewhere)
            double res = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double v = 0.0;
                for (std::size_t i = 0; i < n; ++i) v += pi[i] * T(i, j);
                res = std::max(res, std::abs(v - pi[j]));
            }
            if (res <= 1e-9) return StationaryResult{pi, false};
            break;
        }
    }
    if (empirical_fallback) {
        std::vector<double> p = *empirical_fallback;
        double sum = 0.0;
        for (double v : p) sum += v;
        if (sum <= 0.0) throw std::invalid_argument("empirical fallback is not a distribution");
        for (double& v : p) v /= sum;
        return StationaryResult{p, true};
    }
    throw std::runtime_error("power iteration did not converge and no fallback was given");
}

double entropy_rate(const std::vector<double>& pi, const Matrix& T) {
    if (T.rows() != T.cols() || pi.size() != T.rows())
        throw std::invalid_argument("dimension mismatch between pi and T");
    double xi = 0.0;
    for (std::size_t i = 0; i < T.rows(); ++i)
        for (std::size_t j = 0; j < T.cols(); ++j) xi -= pi[i] * xlogx(T(i, j));
    return xi;
}

std::vector<double> entropy_rate_windows(const core::StateTrajectory& traj,
                                         std::size_t tw1, std::size_t tw2) {
    const std::size_t L = traj.length();
    if (tw1 > L || tw2 > L) throw std::invalid_argument("window larger than trajectory");
    if (tw1 < 2 || tw2 < 2) throw std::invalid_argument("windows must cover >= 2 states");

    std::vector<int> prefix(traj.states.begin(),
                            traj.states.begin() + static_cast<std::ptrdiff_t>(tw1));
    Matrix T1 = estimate_transition_matrix(prefix, traj.alphabet_size());
    std::vector<double> freq(traj.alphabet_size(), 0.0);
    for (int s : prefix) freq[static_cast<std::size_t>(s)] += 1.0;
    StationaryResult st = stationary_distribution(T1, freq);

    std::vector<double> rates;
    for (const core::Window& w : core::window_split(L, tw2)) {
        std::vector<int> seg(traj.states.begin() + static_cast<std::ptrdiff_t>(w.start),
                             traj.states.begin() + static_cast<std::ptrdiff_t>(w.start + w.length));
        Matrix T = estimate_transition_matrix(seg, traj.alphabet_size());
        rates.push_back(entropy_rate(st.pi, T));
    }
    return rates;
}

std::int64_t day_index(std::int64_t timestamp, int tz_offset_minutes) {
    std::int64_t local = timestamp + static_cast<std::int64_t>(tz_offset_minutes) * 60;
    // floor division towards negative infinity
    std::int64_t d = local / 86400;
    if (local % 86400 < 0) --d;
    return d;
}

std::vector<RouteMatrix> route_matrices(const std::vector<core::EventRecord>& events,
                                        std::size_t n_states, RouteMode mode,
                                        int tz_offset_minutes) {
    if (events.empty()) throw std::invalid_argument("empty events");
    const std::int64_t first_day = day_index(events.front().timestamp, tz_offset_minutes);
    const std::int64_t last_day = day_index(events.back().timestamp, tz_offset_minutes);

    std::vector<RouteMatrix> out;
    for (std::int64_t d = first_day; d <= last_day; ++d)
        out.push_back(RouteMatrix{n_states, Matrix(n_states, n_states, 0.0), d});

    for (std::size_t k = 0; k + 1 < events.size(); ++k) {
        const core::EventRecord& a = events[k];
        const core::EventRecord& b = events[k + 1];
        std::size_t i = static_cast<std::size_t>(a.state);
        std::size_t j = static_cast<std::size_t>(b.state);
        if (i >= n_states || j >= n_states)
            throw std::invalid_argument("state index out of alphabet range");
        // a transition belongs to the day of its starting event
        std::size_t slot = static_cast<std::size_t>(day_index(a.timestamp, tz_offset_minutes) -
                                                    first_day);
        if (mode == RouteMode::frequency)
            out[slot].A(i, j) += 1.0;
        else
            out[slot].A(i, j) += static_cast<double>(b.timestamp - a.timestamp);
    }
    return out;
}

Matrix pearson_matrix(const std::vector<std::vector<double>>& vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw std::invalid_argument("need at least two vectors");
    const std::size_t len = vectors.front().size();
    if (len < 2) throw std::invalid_argument("vectors must have length >= 2");
    for (const auto& v : vectors)
        if (v.size() != len) throw std::invalid_argument("vector length mismatch");

    std::vector<double> mean(n, 0.0), sd(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (double v : vectors[i]) mean[i] += v;
        mean[i] /= static_cast<double>(len);
        for (double v : vectors[i]) sd[i] += (v - mean[i]) * (v - mean[i]);
        sd[i] = std::sqrt(sd[i]);
    }

    Matrix r(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double corr = 0.0;
            if (sd[i] > 0.0 && sd[j] > 0.0) {
                double cov = 0.0;
                for (std::size_t t = 0; t < len; ++t)
                    cov += (vectors[i][t] - mean[i]) * (vectors[j][t] - mean[j]);
                corr = cov / (sd[i] * sd[j]);
                corr = std::clamp(corr, -1.0, 1.0);
            }
            r(i, j) = corr;
            r(j, i) = corr;
        }
    }
    return r;
}

DensityOperator density_operator(const Matrix& R) {
    if (R.rows() != R.cols() || R.rows() == 0)
        throw std::invalid_argument("correlation matrix must be square");
    const std::size_t n = R.rows();
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += R(i, i);
    if (std::abs(trace - static_cast<double>(n)) > 1e-9 * static_cast<double>(n))
        throw std::invalid_argument("correlation matrix trace must equal its dimension");

    DensityOperator rho;
    rho.dim = n;
    rho.rho = (1.0 / static_cast<double>(n)) * R;
    rho.validate();
    return rho;
}

MercatorLog matrix_log_mercator(const Matrix& B, std::size_t k_max, double tol) {
    if (B.rows() != B.cols() || B.rows() == 0)
        throw std::invalid_argument("matrix must be square");
    Matrix D = B - Matrix::identity(B.rows());
    if (spectral_norm(D) >= 1.0) throw std::invalid_argument("series divergent");

    MercatorLog result;
    result.log = Matrix(B.rows(), B.cols(), 0.0);
    Matrix power = Matrix::identity(B.rows());
    for (std::size_t k = 1; k <= k_max; ++k) {
        power = power * D;
        double sign = (k % 2 == 1) ? 1.0 : -1.0;
        Matrix term = (sign / static_cast<double>(k)) * power;
        result.log = result.log + term;
        result.terms = k;
        result.residual = frobenius_norm(term);
        if (result.residual < tol) break;
    }
    return result;
}

double vne(const DensityOperator& rho, double clip) {
    rho.validate();
    SymmetricEigen eig = eigen_symmetric(rho.rho);
    double s = 0.0;
    for (double lambda : eig.values) {
        if (lambda < clip) continue; // clipped: 0 ln 0 = 0
        s -= lambda * std::log(lambda);
    }
    return s < 0.0 ? 0.0 : s;
}

double vne_mercator(const DensityOperator& rho, std::size_t k_max, double tol) {
    MercatorLog ml = matrix_log_mercator(rho.rho, k_max, tol);
    Matrix prod = rho.rho * ml.log;
    double trace = 0.0;
    for (std::size_t i = 0; i < prod.rows(); ++i) trace += prod(i, i);
    return -trace;
}

std::vector<double> vne_windows(const std::vector<core::EventRecord>& events,
                                std::size_t n_states, std::size_t window_days, RouteMode mode,
                                int tz_offset_minutes) {
    if (window_days < 2)
        throw std::invalid_argument("window must cover at least 2 days");
    std::vector<RouteMatrix> days = route_matrices(events, n_states, mode, tz_offset_minutes);

    std::vector<double> out;
    for (const core::Window& w : core::window_split(days.size(), window_days)) {
        std::vector<std::vector<double>> day_vectors;
        day_vectors.reserve(w.length);
        for (std::size_t d = w.start; d < w.start + w.length; ++d)
            day_vectors.push_back(days[d].A.data()); // row-major flatten
        Matrix R = pearson_matrix(day_vectors);
        out.push_back(vne(density_operator(R)));
    }
    return out;
}

std::vector<double> dwell_vector(const std::vector<core::EventRecord>& events,
                                 std::size_t n_states, std::int64_t start, std::int64_t end) {
    std::vector<double> dwell(n_states, 0.0);
    for (std::size_t k = 0; k + 1 < events.size(); ++k) {
        std::int64_t a = events[k].timestamp;
        std::int64_t b = events[k + 1].timestamp;
        std::int64_t lo = std::max(a, start);
        std::int64_t hi = std::min(b, end);
        if (hi > lo) dwell[static_cast<std::size_t>(events[k].state)] +=
            static_cast<double>(hi - lo);
    }
    return dwell;
}

std::vector<double> duration_differences(const std::vector<core::EventRecord>& events,
                                         std::size_t n_states, std::int64_t window_seconds) {
    if (events.empty()) throw std::invalid_argument("empty events");
    if (window_seconds <= 0) throw std::invalid_argument("window must be positive");
    const std::int64_t t0 = events.front().timestamp;
    const std::int64_t t_end = events.back().timestamp;
    const std::int64_t n_windows = (t_end - t0) / window_seconds +
                                   ((t_end - t0) % window_seconds != 0 || t_end == t0 ? 1 : 0);

    std::vector<double> out;
    std::vector<double> prev;
    for (std::int64_t w = 0; w < n_windows; ++w) {
        std::vector<double> cur = dwell_vector(events, n_states, t0 + w * window_seconds,
                                               t0 + (w + 1) * window_seconds);
        if (w == 0) {
            out.push_back(0.0);
        } else {
            double l1 = 0.0;
            for (std::size_t i = 0; i < n_states; ++i) l1 += std::abs(cur[i] - prev[i]);
            out.push_back(l1);
        }
        prev = std::move(cur);
    }
    return out;
}

EntropyProduction analytic_entropy_production(const std::vector<double>& pi, const Matrix& T) {
    if (T.rows() != T.cols() || pi.size() != T.rows())
        throw std::invalid_argument("dimension mismatch between pi and T");
    EntropyProduction ep;
    for (std::size_t i = 0; i < T.rows(); ++i) {
        for (std::size_t j = i + 1; j < T.cols(); ++j) {
            double fwd = pi[i] * T(i, j);
            double bwd = pi[j] * T(j, i);
            if (fwd == 0.0 && bwd == 0.0) continue;
            if (fwd == 0.0 || bwd == 0.0) {
                ++ep.excluded_pairs; // formally infinite contribution
                continue;
            }
            ep.sigma += (fwd - bwd) * std::log(fwd / bwd);
        }
    }
    return ep;
}

} // namespace entropykit::markov
