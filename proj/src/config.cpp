#include "entropykit/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace entropykit::config {

std::string trim(const std::string& text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return text.substr(b, e - b);
}

std::vector<std::string> split(const std::string& text, char delimiter) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == delimiter) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

Ini Ini::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse(in, path);
}

Ini Ini::parse(std::istream& in, const std::string& source_name) {
    Ini ini;
    ini.source_ = source_name;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        std::string s = trim(line);
        if (s.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) + ": " + msg);
        };
        if (s.front() == '[') {
            if (s.back() != ']') fail("unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) fail("empty section name");
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail("empty key");
        auto [it, inserted] = ini.sections_[section].try_emplace(key, value);
        (void)it;
        if (!inserted) fail("duplicate key '" + key + "'");
    }
    return ini;
}

bool Ini::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Ini::get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw std::runtime_error(source_ + ": missing required key [" + section + "] " + key);
    return s->second.at(key);
}

std::string Ini::get_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

std::int64_t Ini::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t used = 0;
        std::int64_t out = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw std::runtime_error(source_ + ": [" + section + "] " + key +
                                 " must be an integer, got '" + v + "'");
    }
}

std::int64_t Ini::get_int_or(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

double Ini::get_real(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw std::runtime_error(source_ + ": [" + section + "] " + key +
                                 " must be a number, got '" + v + "'");
    }
}

double Ini::get_real_or(const std::string& section, const std::string& key,
                        double fallback) const {
    return has(section, key) ? get_real(section, key) : fallback;
}

bool Ini::get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get(section, key);
    for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw std::runtime_error(source_ + ": [" + section + "] " + key +
                             " must be a boolean, got '" + v + "'");
}

std::vector<std::string> Ini::get_list(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    for (const std::string& item : split(get(section, key), ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

} // namespace entropykit::config
