#include "lvoaug/volume.hpp"

namespace lvoaug {

std::string_view to_string(Frame f) {
    switch (f) {
        case Frame::whole_head: return "whole_head";
        case Frame::hemisphere: return "hemisphere";
        case Frame::ica_box: return "ica_box";
        case Frame::mca_box: return "mca_box";
    }
    return "?";
}

Frame frame_from_string(std::string_view s) {
    for (Frame f : {Frame::whole_head, Frame::hemisphere, Frame::ica_box, Frame::mca_box}) {
        if (to_string(f) == s) return f;
    }
    throw FrameError("unknown frame tag '" + std::string(s) + "'");
}

std::string_view to_string(Region r) { return r == Region::ica ? "ica" : "mca"; }
std::string_view to_string(Side s) { return s == Side::left ? "left" : "right"; }

std::string describe(const Shape3& s) {
    return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + "," + std::to_string(s.z) + ")";
}

RegionBox mirror_box(const RegionBox& box) {
    RegionBox m = box;
    m.side = box.side == Side::left ? Side::right : Side::left;
    m.origin[0] = frame_shape(Frame::whole_head).x - box.origin[0] - box.extent[0];
    return m;
}

RegionBox atlas_box(Region region, Side side) {
    // Right-side placement: ICA low and anterior-medial, MCA lateral and
    // superior. The two boxes are disjoint along y.
    RegionBox box;
    box.region = region;
    box.side = Side::right;
    const Shape3 e = frame_shape(region == Region::ica ? Frame::ica_box : Frame::mca_box);
    box.extent = {e.x, e.y, e.z};
    if (region == Region::ica) {
        box.origin = {110, 4, 0};
    } else {
        box.origin = {135, 126, 14};
    }
    return side == Side::right ? box : mirror_box(box);
}

void validate_box(const RegionBox& box) {
    const Shape3 w = frame_shape(Frame::whole_head);
    const Shape3 e = frame_shape(box.frame());
    if (box.extent != std::array<int, 3>{e.x, e.y, e.z})
        throw FrameError("region box extent does not match " + std::string(to_string(box.frame())));
    const int lim[3] = {w.x, w.y, w.z};
    for (int a = 0; a < 3; ++a) {
        if (box.origin[a] < 0 || box.origin[a] + box.extent[a] > lim[a])
            throw FrameError("region box out of whole-head bounds");
    }
}

}  // namespace lvoaug
