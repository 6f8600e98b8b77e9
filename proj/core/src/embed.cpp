#include "calign/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "calign/dataset.hpp"

namespace calign {

Embedding make_embedding(std::shared_ptr<const Spectrum> spec, CMatrix basis, CMatrix mixer) {
    Embedding e;
    e.y = basis * mixer;
    e.y1 = e.y.real_part();
    e.y2 = e.y.imag_part();
    e.source_spectrum = std::move(spec);
    e.basis = std::move(basis);
    e.mixer = std::move(mixer);
    return e;
}

Embedding spectral_embed(std::shared_ptr<const Spectrum> spec, std::size_t m,
                         bool include_null) {
    if (!spec) throw InvalidArgument("spectral_embed: null spectrum");
    const std::size_t avail = include_null ? spec->size() : spec->xi;
    if (m < 1 || m > avail)
        throw InvalidArgument("spectral_embed: m must satisfy 1 <= m <= " +
                              std::to_string(avail));
    CMatrix raw = include_null ? spec->vectors.columns(0, m) : spec->subspace_basis(m);
    // eigenvectors are D-normalized, not Euclidean-orthonormal; the solution
    // set demands Y*Y = I, so re-orthonormalize in deterministic order
    CMatrix basis = orthonormalize_columns(raw);
    return make_embedding(std::move(spec), std::move(basis), CMatrix::identity(m));
}

Embedding remix(const Embedding& e, const CMatrix& u) {
    const std::size_t m = e.dim();
    if (u.rows() != m || u.cols() != m) throw InvalidArgument("remix: mixer has wrong shape");
    const double resid = (u.adjoint() * u - CMatrix::identity(m)).frobenius_norm();
    if (resid > 1e-10 * (1.0 + std::sqrt(static_cast<double>(m))))
        throw InvalidArgument("remix: u is not unitary within 1e-10");
    return make_embedding(e.source_spectrum, e.basis, e.mixer * u);
}

double align_error(const RealMatrix& y1, const RealMatrix& y2) {
    if (y1.rows() != y2.rows() || y1.cols() != y2.cols())
        throw InvalidArgument("align_error: shape mismatch");
    const std::size_t n = y1.rows(), m = y1.cols();
    if (n < 2) throw InvalidArgument("align_error: need at least 2 points");

    auto dist2 = [m](const RealMatrix& a, std::size_t i, const RealMatrix& b, std::size_t j) {
        double s = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            const double d = a(i, c) - b(j, c);
            s += d * d;
        }
        return s;
    };

    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double true12 = dist2(y1, j, y2, j);
        std::size_t closer12 = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j && dist2(y1, j, y2, k) < true12) ++closer12;
        std::size_t closer21 = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j && dist2(y1, k, y2, j) < true12) ++closer21;
        total += static_cast<double>(closer12) / static_cast<double>(n - 1);
        total += static_cast<double>(closer21) / static_cast<double>(n - 1);
    }
    return total / static_cast<double>(2 * n);
}

double dirichlet_modulus(const Embedding& e, const GenLaplacian& l) {
    return std::abs((e.y.adjoint() * (l.l * e.y)).trace());
}

std::string embedding_csv(const Embedding& e, const std::vector<std::string>& ids1,
                          const std::vector<std::string>& ids2) {
    const std::size_t n = e.points(), m = e.dim();
    if (ids1.size() != n || ids2.size() != n)
        throw InvalidArgument("embedding_csv: id count mismatch");
    std::ostringstream out;
    out << "id,dataset";
    for (std::size_t c = 0; c < m; ++c) out << ",c" << (c + 1);
    out << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << ids1[i] << ",1";
        for (std::size_t c = 0; c < m; ++c) out << "," << format_double(e.y1(i, c));
        out << "\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        out << ids2[i] << ",2";
        for (std::size_t c = 0; c < m; ++c) out << "," << format_double(e.y2(i, c));
        out << "\n";
    }
    return out.str();
}

EmbeddingTable load_embedding_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    std::size_t m = 0;
    std::vector<std::string> ids1, ids2;
    std::vector<std::vector<double>> rows1, rows2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
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
        if (line_no == 1) {
            if (fields.size() < 3 || fields[0] != "id" || fields[1] != "dataset")
                throw DataError("line 1: embedding header must be id,dataset,c1,...");
            m = fields.size() - 2;
            continue;
        }
        if (fields.size() != m + 2)
            throw DataError("line " + std::to_string(line_no) + ": wrong field count");
        std::vector<double> coords(m);
        for (std::size_t c = 0; c < m; ++c) {
            try {
                coords[c] = std::stod(fields[c + 2]);
            } catch (const std::exception&) {
                throw DataError("line " + std::to_string(line_no) + ": bad number '" +
                                fields[c + 2] + "'");
            }
        }
        if (fields[1] == "1") {
            ids1.push_back(fields[0]);
            rows1.push_back(std::move(coords));
        } else if (fields[1] == "2") {
            ids2.push_back(fields[0]);
            rows2.push_back(std::move(coords));
        } else {
            throw DataError("line " + std::to_string(line_no) + ": dataset must be 1 or 2");
        }
    }
    if (rows1.empty() || rows2.empty()) throw DataError("'" + path + "': missing dataset rows");
    EmbeddingTable t;
    t.ids1 = std::move(ids1);
    t.ids2 = std::move(ids2);
    t.y1 = RealMatrix(rows1.size(), m);
    for (std::size_t i = 0; i < rows1.size(); ++i)
        for (std::size_t c = 0; c < m; ++c) t.y1(i, c) = rows1[i][c];
    t.y2 = RealMatrix(rows2.size(), m);
    for (std::size_t i = 0; i < rows2.size(); ++i)
        for (std::size_t c = 0; c < m; ++c) t.y2(i, c) = rows2[i][c];
    return t;
}

} // namespace calign
