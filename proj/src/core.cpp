#include "entropykit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace entropykit::core {

void StateTrajectory::validate() const {
    for (int s : states) {
        if (s < 0 || static_cast<std::size_t>(s) >= alphabet.size())
            throw std::invalid_argument("state index out of alphabet range");
    }
    if (!timestamps.empty()) {
        if (timestamps.size() != states.size())
            throw std::invalid_argument("timestamps not aligned with states");
        for (std::size_t i = 1; i < timestamps.size(); ++i)
            if (timestamps[i] < timestamps[i - 1])
                throw std::invalid_argument("timestamps not non-decreasing");
    }
}

SignalSeries fill_missing(const SignalSeries& series) {
    SignalSeries out = series;
    double last = std::numeric_limits<double>::quiet_NaN();
    for (double& v : out.values) {
        if (std::isnan(v)) v = last;
        else last = v;
    }
    // leading gaps take the first following valid value
    double next = std::numeric_limits<double>::quiet_NaN();
    for (auto it = out.values.rbegin(); it != out.values.rend(); ++it) {
        if (std::isnan(*it)) *it = next;
        else next = *it;
    }
    if (!out.values.empty() && std::isnan(out.values.front()))
        throw std::invalid_argument("empty series");
    if (out.values.empty()) throw std::invalid_argument("empty series");
    return out;
}

StateTrajectory resample_events(const std::vector<EventRecord>& events,
                                const std::vector<std::string>& alphabet,
                                std::int64_t bin_seconds,
                                std::optional<std::int64_t> horizon) {
    if (events.empty()) throw std::invalid_argument("empty events");
    if (bin_seconds <= 0) throw std::invalid_argument("bin must be positive");
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].timestamp < events[i - 1].timestamp)
            throw std::invalid_argument("events not sorted by timestamp");

    const std::int64_t t0 = events.front().timestamp;
    const std::int64_t end = horizon.value_or(events.back().timestamp + bin_seconds);
    const std::int64_t n_bins = (end - t0) / bin_seconds;

    StateTrajectory traj;
    traj.alphabet = alphabet;
    traj.states.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n_bins, 0)));
    traj.timestamps.reserve(traj.states.capacity());

    std::size_t ev = 0;
    int current = events.front().state;
    for (std::int64_t k = 0; k < n_bins; ++k) {
        const std::int64_t bin_end = t0 + (k + 1) * bin_seconds;
        while (ev < events.size() && events[ev].timestamp <= bin_end) {
            current = events[ev].state;
            ++ev;
        }
        traj.states.push_back(current);
        traj.timestamps.push_back(t0 + k * bin_seconds);
    }
    traj.validate();
    return traj;
}

std::vector<Window> window_split(std::size_t length, std::size_t tw, std::size_t stride) {
    if (tw < 1) throw std::invalid_argument("window length must be >= 1");
    if (stride == 0) stride = tw;
    std::vector<Window> out;
    for (std::size_t sp = 0; sp + tw <= length; sp += stride)
        out.push_back(Window{sp, tw});
    return out;
}

bool is_daytime(std::int64_t timestamp, int tz_offset_minutes) {
    std::int64_t local = timestamp + static_cast<std::int64_t>(tz_offset_minutes) * 60;
    std::int64_t tod = ((local % 86400) + 86400) % 86400;
    return tod >= 6 * 3600 && tod < 18 * 3600;
}

DayNight day_night_split(const std::vector<EventRecord>& events, int tz_offset_minutes) {
    DayNight out;
    for (const EventRecord& e : events) {
        if (is_daytime(e.timestamp, tz_offset_minutes)) out.day.push_back(e);
        else out.night.push_back(e);
    }
    return out;
}

LabelEncoding encode_labels(const std::vector<std::string>& raw) {
    std::set<std::string> distinct(raw.begin(), raw.end());
    if (distinct.size() > 2) throw std::invalid_argument("binary only");
    if (distinct.size() < 2) throw std::invalid_argument("need two distinct labels");
    LabelEncoding enc;
    int code = 0;
    for (const std::string& name : distinct) enc.mapping[name] = code++;
    enc.encoded.reserve(raw.size());
    for (const std::string& r : raw) enc.encoded.push_back(enc.mapping.at(r));
    return enc;
}

std::int64_t epoch_from_civil(int year, int month, int day, int hour, int minute, int second) {
    // days-from-civil, Howard Hinnant's algorithm
    year -= month <= 2;
    const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    const std::int64_t days = era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    return days * 86400 + hour * 3600 + minute * 60 + second;
}

} // namespace entropykit::core
