#pragma once

#include <string>
#include <vector>

#include "calign/cmatrix.hpp"

namespace calign {

/// A point set: unique string ids plus an n x d real feature matrix.
struct Dataset {
    std::vector<std::string> ids;
    RealMatrix features;

    std::size_t size() const { return ids.size(); }
    std::size_t dim() const { return features.cols(); }
};

/// Validate the Dataset invariants (n >= 2, unique ids, finite features).
void validate(const Dataset& d);

/// Parse a dataset CSV: header `id,f1,f2,...`, one point per row, 64-bit
/// floats. Malformed rows are fatal; the error message carries the line number.
Dataset load_dataset_csv(const std::string& path);

/// Complex feature matrix from a CSV whose header pairs columns with `_re` /
/// `_im` suffixes (e.g. `id,f1_re,f1_im,...`); a plain real CSV loads with
/// zero imaginary parts. Used by the kernel path.
struct ComplexDataset {
    std::vector<std::string> ids;
    CMatrix features;
    std::size_t size() const { return ids.size(); }
};

ComplexDataset load_complex_dataset_csv(const std::string& path);

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// Format a double with enough digits to round-trip, deterministically.
std::string format_double(double v);

} // namespace calign
