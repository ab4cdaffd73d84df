#ifndef ENTROPYKIT_CORE_HPP
#define ENTROPYKIT_CORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace entropykit::core {

// One sensor event: epoch seconds plus an index into a state alphabet.
struct EventRecord {
    std::int64_t timestamp = 0;
    int state = 0;
};

// Discrete state sequence over a fixed alphabet. Timestamps, when
// present, are aligned 1:1 with states and non-decreasing.
struct StateTrajectory {
    std::vector<std::string> alphabet;
    std::vector<int> states;
    std::vector<std::int64_t> timestamps; // empty, or same length as states

    std::size_t length() const { return states.size(); }
    std::size_t alphabet_size() const { return alphabet.size(); }
    bool has_timestamps() const { return !timestamps.empty(); }

    void validate() const; // throws on invariant violation
};

// Uniformly sampled real-valued series. Gaps are NaN until filled.
struct SignalSeries {
    std::vector<double> values;
    std::optional<double> sample_rate;

    std::size_t size() const { return values.size(); }
};

// Half-open index window [start, start + length) on a parent sequence.
struct Window {
    std::size_t start = 0;
    std::size_t length = 0;
};

struct LabeledSample {
    std::map<std::string, double> features;
    int label = 0;
};

// Forward-fill gaps with the last valid value, then backfill leading
// gaps with the first valid value. Throws "empty series" when every
// value is missing.
SignalSeries fill_missing(const SignalSeries& series);

// Zero-order-hold resampling of an event stream into fixed bins.
// Bin k covers [t0 + k*bin, t0 + (k+1)*bin) where t0 is the first event
// time; its state is the last event at or before the bin end. The
// horizon defaults to last event time + bin; the number of bins is the
// count of whole bins between t0 and the horizon. Emitted timestamps
// are bin starts.
StateTrajectory resample_events(const std::vector<EventRecord>& events,
                                const std::vector<std::string>& alphabet,
                                std::int64_t bin_seconds,
                                std::optional<std::int64_t> horizon = std::nullopt);

// Windows [sp, sp+tw) for sp = 0, stride, 2*stride, ... while sp+tw <= length.
// stride 0 means "use tw" (non-overlapping).
std::vector<Window> window_split(std::size_t length, std::size_t tw, std::size_t stride = 0);

// Partition events into daytime [06:00, 18:00) and night, by local
// time of day at the given fixed offset from UTC.
struct DayNight {
    std::vector<EventRecord> day;
    std::vector<EventRecord> night;
};

DayNight day_night_split(const std::vector<EventRecord>& events, int tz_offset_minutes = 0);

bool is_daytime(std::int64_t timestamp, int tz_offset_minutes = 0);

// Encode exactly two distinct raw labels as {0,1}; the lexicographically
// smaller raw label maps to 0.
struct LabelEncoding {
    std::vector<int> encoded;
    std::map<std::string, int> mapping;
};

LabelEncoding encode_labels(const std::vector<std::string>& raw);

// Civil time helpers (proleptic Gregorian, no leap seconds).
std::int64_t epoch_from_civil(int year, int month, int day,
                              int hour = 0, int minute = 0, int second = 0);

} // namespace entropykit::core

#endif
