#include "qtd/format.hpp"

#include <cmath>
#include <cstdio>

namespace qtd::fmt {

namespace {

std::string printf_double(const char* spec, double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string g17(double v) { return printf_double("%.17g", v); }
std::string g6(double v) { return printf_double("%.6g", v); }

JsonLine& JsonLine::field(const std::string& key, double v) {
    // JSON has no NaN literal; emit it as a string so the line stays parseable.
    parts_.emplace_back(key, std::isnan(v) ? std::string("\"nan\"") : g17(v));
    return *this;
}

JsonLine& JsonLine::field(const std::string& key, const std::string& v) {
    parts_.emplace_back(key, "\"" + json_escape(v) + "\"");
    return *this;
}

JsonLine& JsonLine::field(const std::string& key, bool v) {
    parts_.emplace_back(key, v ? "true" : "false");
    return *this;
}

JsonLine& JsonLine::field_int(const std::string& key, long long v) {
    parts_.emplace_back(key, std::to_string(v));
    return *this;
}

JsonLine& JsonLine::field_number(const std::string& key, const std::string& formatted) {
    // `formatted` must already be a %.17g rendering; "nan" gets quoted since
    // JSON has no literal for it.
    parts_.emplace_back(key, formatted == "nan" ? std::string("\"nan\"") : formatted);
    return *this;
}

std::string JsonLine::str() const {
    std::string out = "{";
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) out.push_back(',');
        out += "\"" + json_escape(parts_[i].first) + "\":" + parts_[i].second;
    }
    out.push_back('}');
    return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(',');
        out += cells[i];
    }
    return out;
}

}  // namespace qtd::fmt
