#pragma once

#include "jigsaw/image.hpp"
#include "jigsaw/tile_model.hpp"

#include <vector>

namespace jigsaw {

/// Paints every tile at its cell, turned by its pose rotation, on a canvas
/// covering the placement's bounding box. Uncovered cells keep `background`.
/// Throws std::invalid_argument if tiles and poses disagree in count or size.
Image render(const Placement& placement, const std::vector<Image>& tiles, Rgb background = {0, 0, 0});

} // namespace jigsaw
