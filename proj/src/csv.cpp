#include "lrd/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrd {

namespace {

// from_chars keeps parsing independent of the process locale
double parse_field(const std::string& field, const std::string& path, int line) {
    const char* b = field.data();
    const char* e = b + field.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc{} || ptr != e)
        throw std::invalid_argument(path + ":" + std::to_string(line) +
                                    ": cannot parse number '" + field + "'");
    return value;
}

std::vector<double> parse_row(const std::string& line, const std::string& path, int lineno) {
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string field =
            line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        row.push_back(parse_field(field, path, lineno));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return row;
}

bool significant(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") != std::string::npos;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

FunctionalSeries read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve CSV: " + path);
    std::string line;
    int lineno = 0;
    std::vector<double> header;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!significant(line)) continue;
        std::vector<double> row = parse_row(line, path, lineno);
        if (header.empty()) {
            header = std::move(row);
            continue;
        }
        if (row.size() != header.size())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": ragged row (expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(row.size()) + ")");
        rows.push_back(std::move(row));
    }
    if (header.size() < 2)
        throw std::invalid_argument(path + ": curve CSV needs a grid header with >= 2 points");

    FunctionalSeries fs;
    const int W = static_cast<int>(header.size());
    for (int i = 1; i < W; ++i)
        if (header[i] <= header[i - 1])
            throw std::invalid_argument(path + ": grid header must be strictly increasing");
    // trapezoidal weights from the header spacing; the grid contract
    // (unit span) is enforced by validate_series below
    fs.grid.points = header;
    fs.grid.weights.assign(W, 0.0);
    for (int i = 0; i + 1 < W; ++i) {
        const double half = 0.5 * (header[i + 1] - header[i]);
        fs.grid.weights[i] += half;
        fs.grid.weights[i + 1] += half;
    }
    fs.values.resize(static_cast<int>(rows.size()), W);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < W; ++c) fs.values(static_cast<int>(r), c) = rows[r][c];
    validate_series(fs);
    return fs;
}

void write_curve_csv(const FunctionalSeries& fs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write curve CSV: " + path);
    std::ostringstream line;
    for (int i = 0; i < fs.W(); ++i) {
        if (i) line << ',';
        line << format_value(fs.grid.points[i]);
    }
    out << line.str() << '\n';
    for (int r = 0; r < fs.n(); ++r) {
        line.str("");
        for (int c = 0; c < fs.W(); ++c) {
            if (c) line << ',';
            line << format_value(fs.values(r, c));
        }
        out << line.str() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_scalar_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open CSV: " + path);
    std::string line;
    int lineno = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (!significant(line)) continue;
        std::vector<double> row = parse_row(line, path, lineno);
        if (row.size() != 1)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected a single column");
        values.push_back(row[0]);
    }
    if (values.empty()) throw std::invalid_argument(path + ": no data");
    return values;
}

int csv_first_row_width(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open CSV: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!significant(line)) continue;
        return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
    }
    return 0;
}

}  // namespace lrd
