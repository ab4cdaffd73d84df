#ifndef ENTROPYKIT_CSV_HPP
#define ENTROPYKIT_CSV_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entropykit/core.hpp"
#include "entropykit/linalg.hpp"

namespace entropykit::csv {

// Reals are rendered with 17 significant digits so that a round trip
// through text is bit-exact.
std::string format_real(double v);

// "timestamp,state" rows; timestamps are integer epoch seconds or
// ISO-8601 (YYYY-MM-DD[T ]HH:MM:SS with optional trailing Z). States
// are names; the alphabet is built in order of first appearance.
struct EventTable {
    std::vector<std::string> alphabet;
    std::vector<core::EventRecord> events;
};

EventTable read_events(const std::string& path);
void write_events(const std::string& path, const EventTable& table);

// "id,label,v1,...,vN" rows, one sample per row. Empty cells and the
// literal NaN (any case) are gaps.
struct SignalTable {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<core::SignalSeries> rows;
};

SignalTable read_signals(const std::string& path);
void write_signals(const std::string& path, const SignalTable& table);

// "id,window_start,<feature...>,label" rows.
struct FeatureTable {
    std::vector<std::string> feature_names;
    std::vector<std::string> ids;
    std::vector<std::int64_t> window_starts;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels; // raw label strings, may be empty
};

FeatureTable read_features(const std::string& path);
void write_features(const std::string& path, const FeatureTable& table);

// Row-major matrix dump, 17 significant digits, optional header row.
void write_matrix(const std::string& path, const Matrix& m,
                  const std::vector<std::string>& header = {});

std::int64_t parse_timestamp(const std::string& text);

std::vector<std::string> split_csv_line(const std::string& line);

} // namespace entropykit::csv

#endif
