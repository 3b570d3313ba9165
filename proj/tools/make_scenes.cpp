// Writes the synthetic demo scenes: two_disks.png, textured_subject.png and
// random_blobs_<seed>.png for seeds 0..4.

#include "segmerge/image_io.hpp"
#include "segmerge/synthetic.hpp"

#include <filesystem>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
    try {
        std::filesystem::create_directories(dir);
        segmerge::save_image(segmerge::synthetic::two_disks(), dir / "two_disks.png");
        segmerge::save_image(segmerge::synthetic::textured_subject(), dir / "textured_subject.png");
        for (int seed = 0; seed < 5; ++seed)
            segmerge::save_image(segmerge::synthetic::random_blobs(seed),
                                 dir / ("random_blobs_" + std::to_string(seed) + ".png"));
    } catch (const std::exception& e) {
        std::cerr << "segmerge-scenes: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
