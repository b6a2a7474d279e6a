#include "jigsaw/render.hpp"

#include <stdexcept>

namespace jigsaw {

Image render(const Placement& placement, const std::vector<Image>& tiles, Rgb background) {
    if (placement.size() != tiles.size()) throw std::invalid_argument("placement and tile counts differ");
    if (tiles.empty()) throw std::invalid_argument("nothing to render");
    const int k = tiles.front().width;
    for (const auto& t : tiles)
        if (t.width != k || t.height != k) throw std::invalid_argument("tiles must be square and equally sized");

    const auto box = placement.bounds();
    Image canvas(box.cols() * k, box.rows() * k, background);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& pose = placement.poses[i];
        blit(canvas, rotate(tiles[i], pose.rotation), (pose.cell.col - box.min_col) * k,
             (pose.cell.row - box.min_row) * k);
    }
    return canvas;
}

} // namespace jigsaw
