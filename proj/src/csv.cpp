#include "dsekit/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dsekit {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell, int line) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) throw parse_error("not a number: '" + cell + "'", line);
    for (const char* p = res.ptr; p < end; ++p)
        if (*p != ' ' && *p != '\t' && *p != '\r')
            throw parse_error("trailing garbage in number: '" + cell + "'", line);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') quoted = false;
            else cell += c;
        } else if (c == '"') {
            quoted = true;
            cell += c;  // keep quotes so callers can tell quoted cells apart
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string front_to_csv(std::span<const ObjectiveVector> front) {
    if (front.empty()) throw std::invalid_argument("front_to_csv: empty front");
    const std::size_t m = front[0].arity();
    std::string out;
    for (std::size_t i = 0; i < m; ++i) {
        if (i) out += ',';
        out += 'o';
        out += std::to_string(i + 1);
    }
    out += '\n';
    for (const auto& p : front) {
        for (std::size_t i = 0; i < m; ++i) {
            if (i) out += ',';
            out += format_double(p[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<ObjectiveVector> front_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::size_t m = 0;
    std::vector<ObjectiveVector> front;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (lineno == 1) {
            if (cells.empty() || cells[0] != "o1")
                throw parse_error("front CSV header must be o1,...,om", 1);
            m = cells.size();
            continue;
        }
        if (cells.size() != m)
            throw parse_error("expected " + std::to_string(m) + " cells, got " +
                                  std::to_string(cells.size()),
                              lineno);
        std::vector<double> vals(m);
        for (std::size_t i = 0; i < m; ++i) vals[i] = parse_double(cells[i], lineno);
        front.push_back(ObjectiveVector::minimizing(std::move(vals)));
    }
    if (front.empty()) throw parse_error("front CSV has no data rows", lineno);
    return front;
}

std::vector<ObjectiveVector> read_front_file(const std::string& path) {
    return front_from_csv(read_text_file(path));
}

void write_front_file(const std::string& path, std::span<const ObjectiveVector> front) {
    write_text_file_atomic(path, front_to_csv(front));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace dsekit
