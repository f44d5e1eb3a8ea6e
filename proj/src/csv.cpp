#include "causal/error.hpp"
#include "causal/scm.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

namespace causal {

void write_csv(std::ostream& out, const Dataset& data) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < data.columns.size(); ++j)
        if (j >= data.latent.size() || !data.latent[j]) keep.push_back(j);

    for (std::size_t k = 0; k < keep.size(); ++k) out << (k ? "," : "") << data.columns[keep[k]];
    out << "\n";
    for (Eigen::Index r = 0; r < data.rows.rows(); ++r) {
        for (std::size_t k = 0; k < keep.size(); ++k) {
            out << (k ? "," : "") << format_real(data.rows(r, static_cast<Eigen::Index>(keep[k])));
        }
        out << "\n";
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        auto comma = line.find(',', begin);
        out.push_back(trim(line.substr(begin, comma == std::string_view::npos ? std::string_view::npos : comma - begin)));
        if (comma == std::string_view::npos) break;
        begin = comma + 1;
    }
    return out;
}

[[noreturn]] void malformed(std::size_t line, const std::string& message) {
    throw Error(ErrorCode::MalformedData, "csv line " + std::to_string(line) + ": " + message);
}

}  // namespace

Dataset read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    Dataset data;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) malformed(line_no == 0 ? 1 : line_no, "missing header");
    for (auto name : split(line)) {
        if (name.empty()) malformed(line_no, "empty column name");
        if (std::find(data.columns.begin(), data.columns.end(), name) != data.columns.end()) {
            malformed(line_no, "duplicate column '" + std::string(name) + "'");
        }
        data.columns.emplace_back(name);
    }
    data.latent.assign(data.columns.size(), false);

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (cells.size() != data.columns.size()) {
            malformed(line_no, "expected " + std::to_string(data.columns.size()) + " fields, found " +
                                   std::to_string(cells.size()));
        }
        std::vector<double> row;
        for (auto cell : cells) {
            double v = 0.0;
            auto text = cell;
            if (!text.empty() && text.front() == '+') text.remove_prefix(1);
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
                malformed(line_no, "not a number: '" + std::string(cell) + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) malformed(line_no, "no data rows");
    data.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(data.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            data.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return data;
}

}  // namespace causal
