#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lbsqa::csv {

/// Splits one delimited line. No quoting: the file formats here never embed
/// the delimiter in a field.
std::vector<std::string_view> split(std::string_view line, char delim = ',');

std::string_view trim(std::string_view s);

/// Streams a delimited text file: skips '#'-prefixed comment lines and blank
/// lines, treats the first remaining line as the header, and calls `row` with
/// (fields, line_no) for every data line. Returns the header fields.
std::vector<std::string> for_each_row(
    const std::string& path,
    const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row,
    char delim = ',');

/// Buffered writer with a fixed set of numeric formats so outputs are
/// deterministic byte-for-byte.
class Writer {
public:
    explicit Writer(const std::string& path);
    ~Writer();

    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void raw(std::string_view s);
    void header(const std::vector<std::string>& names);
    void field(std::string_view s);
    void field(std::int64_t v);
    void field(std::uint64_t v);
    void field(int v) { field(static_cast<std::int64_t>(v)); }
    /// Fixed-point with `decimals` digits.
    void field(double v, int decimals);
    /// Shortest-ish general format (%.10g), for rates and coefficients.
    void field_g(double v);
    void end_row();

private:
    void sep();
    std::ofstream out_;
    bool at_row_start_ = true;
};

}  // namespace lbsqa::csv
