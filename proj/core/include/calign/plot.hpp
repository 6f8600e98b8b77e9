#pragma once

#include <string>

#include "calign/embed.hpp"

namespace calign {

/// Deterministic SVG scatter of an embedding table: 800x800 canvas, linear
/// scaling to the data bounding box with a 5% margin, dataset 1 as circles,
/// dataset 2 as crosses. `pairs` joins rows whose ids match. A degenerate
/// bounding box falls back to a unit box centered on the data. Requires at
/// least two embedding coordinates (the first two are plotted).
std::string svg_scatter(const EmbeddingTable& table, bool pairs);

} // namespace calign
