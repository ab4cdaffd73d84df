#ifndef ENTROPYKIT_CONFIG_HPP
#define ENTROPYKIT_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace entropykit::config {

// Flat line-oriented "key = value" file with [section] headers.
// '#' starts a comment. Keys are unique within a section.
class Ini {
public:
    static Ini parse_file(const std::string& path);
    static Ini parse(std::istream& in, const std::string& source_name);

    bool has(const std::string& section, const std::string& key) const;

    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;

    double get_real(const std::string& section, const std::string& key) const;
    double get_real_or(const std::string& section, const std::string& key,
                       double fallback) const;

    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string source_;
};

std::vector<std::string> split(const std::string& text, char delimiter);
std::string trim(const std::string& text);

} // namespace entropykit::config

#endif
