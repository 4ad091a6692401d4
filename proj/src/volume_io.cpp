#include "lvoaug/volume_io.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace lvoaug {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path raw_path_for(const fs::path& header) {
    fs::path raw = header;
    raw.replace_extension(".raw");
    return raw;
}

void write_vmv(const fs::path& header, const BinaryVolume& v) {
    if (header.has_parent_path()) fs::create_directories(header.parent_path());
    const Shape3 s = v.shape();
    json h = {
        {"magic", "VMV1"},
        {"shape", {s.x, s.y, s.z}},
        {"spacing_mm", {1, 1, 1}},
        {"channels", v.channels()},
        {"frame", std::string(to_string(v.frame()))},
        {"dtype", "u8"},
    };
    std::ofstream hf(header, std::ios::binary);
    if (!hf) throw DataError("cannot write " + header.string());
    hf << h.dump(2) << '\n';

    std::ofstream rf(raw_path_for(header), std::ios::binary);
    if (!rf) throw DataError("cannot write " + raw_path_for(header).string());
    rf.write(reinterpret_cast<const char*>(v.data().data()),
             static_cast<std::streamsize>(v.data().size()));
    if (!rf) throw DataError("short write to " + raw_path_for(header).string());
}

BinaryVolume read_vmv(const fs::path& header) {
    std::ifstream hf(header);
    if (!hf) throw DataError("cannot open volume header " + header.string());
    json h;
    try {
        hf >> h;
    } catch (const json::exception& e) {
        throw DataError("malformed volume header " + header.string() + ": " + e.what());
    }
    if (h.value("magic", "") != "VMV1") throw DataError(header.string() + ": not a VMV1 header");
    if (h.value("dtype", "") != "u8") throw DataError(header.string() + ": unsupported dtype");
    Frame frame;
    std::vector<int> shape;
    int channels = 0;
    try {
        frame = frame_from_string(h.at("frame").get<std::string>());
        shape = h.at("shape").get<std::vector<int>>();
        channels = h.at("channels").get<int>();
    } catch (const json::exception& e) {
        throw DataError("malformed volume header " + header.string() + ": " + e.what());
    } catch (const FrameError& e) {
        throw DataError(header.string() + ": " + e.what());
    }
    const Shape3 expect = frame_shape(frame);
    if (shape.size() != 3 || shape[0] != expect.x || shape[1] != expect.y || shape[2] != expect.z)
        throw DataError(header.string() + ": shape does not match frame " + describe(expect));
    if (channels < 1) throw DataError(header.string() + ": channel count must be positive");

    std::ifstream rf(raw_path_for(header), std::ios::binary);
    if (!rf) throw DataError("cannot open volume payload " + raw_path_for(header).string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(rf)), std::istreambuf_iterator<char>());
    if (data.size() != expect.voxels() * static_cast<std::size_t>(channels))
        throw DataError(raw_path_for(header).string() + ": payload size mismatch");
    try {
        return BinaryVolume(frame, channels, std::move(data));
    } catch (const FrameError& e) {
        throw DataError(header.string() + ": " + e.what());
    }
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw DataError("cannot open " + p.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return fnv1a(data);
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lvoaug
