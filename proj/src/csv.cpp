#include "entropykit/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace entropykit::csv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_nan_token(const std::string& s) {
    if (s.size() != 3) return false;
    return std::tolower(s[0]) == 'n' && std::tolower(s[1]) == 'a' && std::tolower(s[2]) == 'n';
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

std::ofstream create_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot create output file: " + path);
    return out;
}

double parse_real(const std::string& cell, const std::string& path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": malformed number '" + cell + "'");
    }
}

} // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::int64_t parse_timestamp(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw std::runtime_error("empty timestamp");
    bool plain_integer = !s.empty();
    for (std::size_t i = 0; i < s.size() && plain_integer; ++i) {
        char c = s[i];
        bool sign_ok = i == 0 && (c == '-' || c == '+') && s.size() > 1;
        plain_integer = sign_ok || std::isdigit(static_cast<unsigned char>(c));
    }
    if (plain_integer) {
        try {
            std::size_t used = 0;
            std::int64_t out = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing characters");
            return out;
        } catch (const std::exception&) {
            throw std::runtime_error("malformed timestamp '" + s + "'");
        }
    }
    // ISO-8601: YYYY-MM-DD[T ]HH:MM:SS, optional trailing Z
    if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.pop_back();
    int year, month, day, hour, minute, second;
    char sep;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d",
                    &year, &month, &day, &sep, &hour, &minute, &second) != 7 ||
        (sep != 'T' && sep != ' ')) {
        throw std::runtime_error("malformed timestamp '" + text + "'");
    }
    return core::epoch_from_civil(year, month, day, hour, minute, second);
}

EventTable read_events(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto header = split_csv_line(line);
    if (header.size() != 2 || trim(header[0]) != "timestamp" || trim(header[1]) != "state")
        throw std::runtime_error(path + ": expected header 'timestamp,state'");

    EventTable table;
    std::map<std::string, int> index;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 2 cells");
        std::int64_t ts;
        try {
            ts = parse_timestamp(cells[0]);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        std::string state = trim(cells[1]);
        if (state.empty())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty state");
        auto [it, inserted] = index.try_emplace(state, static_cast<int>(table.alphabet.size()));
        if (inserted) table.alphabet.push_back(state);
        table.events.push_back(core::EventRecord{ts, it->second});
    }
    if (table.events.empty()) throw std::runtime_error(path + ": no events");
    return table;
}

void write_events(const std::string& path, const EventTable& table) {
    std::ofstream out = create_or_throw(path);
    out << "timestamp,state\n";
    for (const core::EventRecord& e : table.events)
        out << e.timestamp << ',' << table.alphabet.at(static_cast<std::size_t>(e.state)) << '\n';
}

SignalTable read_signals(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto header = split_csv_line(line);
    if (header.size() < 3 || trim(header[0]) != "id" || trim(header[1]) != "label")
        throw std::runtime_error(path + ": expected header 'id,label,v1,...'");
    const std::size_t n_values = header.size() - 2;

    SignalTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " cells");
        table.ids.push_back(trim(cells[0]));
        table.labels.push_back(trim(cells[1]));
        core::SignalSeries series;
        series.values.reserve(n_values);
        for (std::size_t i = 2; i < cells.size(); ++i) {
            std::string cell = trim(cells[i]);
            if (cell.empty() || is_nan_token(cell))
                series.values.push_back(std::numeric_limits<double>::quiet_NaN());
            else
                series.values.push_back(parse_real(cell, path, line_no));
        }
        table.rows.push_back(std::move(series));
    }
    if (table.rows.empty()) throw std::runtime_error(path + ": no samples");
    return table;
}

void write_signals(const std::string& path, const SignalTable& table) {
    std::ofstream out = create_or_throw(path);
    std::size_t n_values = table.rows.empty() ? 0 : table.rows.front().size();
    out << "id,label";
    for (std::size_t i = 1; i <= n_values; ++i) out << ",v" << i;
    out << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << table.ids[r] << ',' << table.labels[r];
        for (double v : table.rows[r].values) {
            out << ',';
            if (std::isnan(v)) out << "NaN";
            else out << format_real(v);
        }
        out << '\n';
    }
}

FeatureTable read_features(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto header = split_csv_line(line);
    if (header.size() < 4 || trim(header[0]) != "id" || trim(header[1]) != "window_start" ||
        trim(header.back()) != "label")
        throw std::runtime_error(path + ": expected header 'id,window_start,<features>,label'");

    FeatureTable table;
    for (std::size_t i = 2; i + 1 < header.size(); ++i)
        table.feature_names.push_back(trim(header[i]));

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " cells");
        table.ids.push_back(trim(cells[0]));
        try {
            table.window_starts.push_back(std::stoll(trim(cells[1])));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed window_start");
        }
        std::vector<double> row;
        row.reserve(table.feature_names.size());
        for (std::size_t i = 2; i + 1 < cells.size(); ++i)
            row.push_back(parse_real(trim(cells[i]), path, line_no));
        table.rows.push_back(std::move(row));
        table.labels.push_back(trim(cells.back()));
    }
    return table;
}

void write_features(const std::string& path, const FeatureTable& table) {
    std::ofstream out = create_or_throw(path);
    out << "id,window_start";
    for (const std::string& name : table.feature_names) out << ',' << name;
    out << ",label\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << table.ids[r] << ',' << table.window_starts[r];
        for (double v : table.rows[r]) out << ',' << format_real(v);
        out << ',' << (r < table.labels.size() ? table.labels[r] : "") << '\n';
    }
}

void write_matrix(const std::string& path, const Matrix& m,
                  const std::vector<std::string>& header) {
    std::ofstream out = create_or_throw(path);
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j)
            out << (j ? "," : "") << header[j];
        out << '\n';
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << format_real(m(i, j));
        out << '\n';
    }
}

} // namespace entropykit::csv
