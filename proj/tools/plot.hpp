#pragma once

#include <string>
#include <vector>

#include "nhtopo/io.hpp"

namespace nhtopo::cli {

/// kind: complex | bands | profile | heatmap. The first table is the main
/// input; further tables are overlays (e.g. OBC dots over the PBC band).
/// Throws SchemaMismatch naming the first missing column.
std::string render_svg(const std::string& kind, const std::vector<io::Table>& tables,
                       const std::string& title = "");

void plot_files(const std::string& kind, const std::vector<std::string>& inputs, const std::string& output,
                const std::string& title = "");

}  // namespace nhtopo::cli
