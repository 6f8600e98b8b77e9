#include "calign/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace calign {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + s +
                        "' as a number in column " + col);
    }
}

struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
};

RawCsv read_raw_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    RawCsv raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto fields = split_csv_line(line);
        if (line_no == 1) {
            if (fields.size() < 2 || fields[0] != "id")
                throw DataError("line 1: header must start with 'id' and name at least one feature");
            raw.header.assign(fields.begin() + 1, fields.end());
            continue;
        }
        if (fields.size() != raw.header.size() + 1)
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(raw.header.size() + 1) + " fields, got " +
                            std::to_string(fields.size()));
        raw.ids.push_back(fields[0]);
        std::vector<double> row(raw.header.size());
        for (std::size_t c = 0; c < raw.header.size(); ++c)
            row[c] = parse_double(fields[c + 1], line_no, raw.header[c]);
        raw.rows.push_back(std::move(row));
    }
    if (raw.header.empty()) throw DataError("'" + path + "' is empty");
    return raw;
}

} // namespace

void validate(const Dataset& d) {
    if (d.ids.size() != d.features.rows())
        throw InvalidArgument("dataset: id count differs from feature row count");
    if (d.size() < 2) throw InvalidArgument("dataset: need at least 2 points");
    if (!d.features.all_finite()) throw InvalidArgument("dataset: non-finite feature");
    std::unordered_set<std::string> seen;
    for (const auto& id : d.ids)
        if (!seen.insert(id).second) throw InvalidArgument("dataset: duplicate id '" + id + "'");
}

Dataset load_dataset_csv(const std::string& path) {
    RawCsv raw = read_raw_csv(path);
    const std::size_t n = raw.ids.size();
    const std::size_t dim = raw.header.size();
    RealMatrix f(n, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < dim; ++c) f(i, c) = raw.rows[i][c];
    Dataset d{std::move(raw.ids), std::move(f)};
    validate(d);
    return d;
}

ComplexDataset load_complex_dataset_csv(const std::string& path) {
    RawCsv raw = read_raw_csv(path);
    const std::size_t n = raw.ids.size();
    const auto& hdr = raw.header;

    // detect strict `_re`/`_im` pairing; anything else is treated as real
    bool paired = !hdr.empty() && hdr.size() % 2 == 0;
    for (std::size_t c = 0; paired && c < hdr.size(); c += 2) {
        const auto& a = hdr[c];
        const auto& b = hdr[c + 1];
        paired = a.size() > 3 && b.size() > 3 && a.substr(a.size() - 3) == "_re" &&
                 b.substr(b.size() - 3) == "_im" &&
                 a.substr(0, a.size() - 3) == b.substr(0, b.size() - 3);
    }

    ComplexDataset d;
    d.ids = std::move(raw.ids);
    if (paired) {
        const std::size_t dim = hdr.size() / 2;
        CMatrix f(n, dim);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < dim; ++c)
                f(i, c) = cplx(raw.rows[i][2 * c], raw.rows[i][2 * c + 1]);
        d.features = std::move(f);
    } else {
        CMatrix f(n, hdr.size());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < hdr.size(); ++c) f(i, c) = raw.rows[i][c];
        d.features = std::move(f);
    }
    if (n < 2) throw DataError("'" + path + "': need at least 2 points");
    return d;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace calign
