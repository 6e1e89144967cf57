#include "lbsqa/csv.hpp"

#include <cstdio>

#include "lbsqa/errors.hpp"

namespace lbsqa::csv {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delim) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> for_each_row(
    const std::string& path,
    const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row, char delim) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<std::string> header;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;
        auto fields = split(v, delim);
        if (!have_header) {
            header.reserve(fields.size());
            for (auto f : fields) header.emplace_back(trim(f));
            have_header = true;
            continue;
        }
        row(fields, line_no);
    }
    return header;
}

Writer::Writer(const std::string& path) : out_(path) {
    if (!out_) throw Error("cannot open file for writing: " + path);
}

Writer::~Writer() = default;

void Writer::sep() {
    if (!at_row_start_) out_ << ',';
    at_row_start_ = false;
}

void Writer::raw(std::string_view s) { out_ << s; }

void Writer::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ << ',';
        out_ << names[i];
    }
    out_ << '\n';
}

void Writer::field(std::string_view s) {
    sep();
    out_ << s;
}

void Writer::field(std::int64_t v) {
    sep();
    out_ << v;
}

void Writer::field(std::uint64_t v) {
    sep();
    out_ << v;
}

void Writer::field(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    field(std::string_view(buf));
}

void Writer::field_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    field(std::string_view(buf));
}

void Writer::end_row() {
    out_ << '\n';
    at_row_start_ = true;
}

}  // namespace lbsqa::csv
