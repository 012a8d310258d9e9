#include "resire/keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "resire/errors.hpp"

namespace resire {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    return value;
}

long long parse_int(std::string_view text) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw InvalidArgument("not an integer: '" + std::string(text) + "'");
    return value;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

KeyValueDoc KeyValueDoc::parse(std::string_view text) {
    KeyValueDoc doc;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw FormatError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw FormatError("line " + std::to_string(line_no) + ": empty key", line_no);
        if (doc.entries_.contains(key))
            throw FormatError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'", line_no);
        doc.set(key, value, line_no);
    }
    return doc;
}

const std::string& KeyValueDoc::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw FormatError("missing key '" + key + "'", 0);
    return it->second;
}

std::optional<std::string> KeyValueDoc::find(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

void KeyValueDoc::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : entries_) {
        if (!allowed.contains(key)) {
            const std::size_t line = lines_.at(key);
            throw FormatError("unknown key '" + key + "' on line " + std::to_string(line), line);
        }
    }
}

double KeyValueDoc::get_double(const std::string& key) const {
    try {
        return parse_double(get(key));
    } catch (const InvalidArgument& e) {
        throw FormatError("key '" + key + "': " + e.what(), lines_.at(key));
    }
}

long long KeyValueDoc::get_int(const std::string& key) const {
    try {
        return parse_int(get(key));
    } catch (const InvalidArgument& e) {
        throw FormatError("key '" + key + "': " + e.what(), lines_.at(key));
    }
}

bool KeyValueDoc::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw FormatError("key '" + key + "': expected true or false, got '" + v + "'", lines_.at(key));
}

void KeyValueDoc::set(const std::string& key, std::string value, std::size_t line) {
    entries_[key] = std::move(value);
    lines_[key] = line;
}

} // namespace resire
