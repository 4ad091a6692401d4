#include "lvoaug/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "lvoaug/errors.hpp"

namespace lvoaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::pair<std::string, MatrixX<float>*>> tensors(Network<float>& net) {
    std::vector<std::pair<std::string, MatrixX<float>*>> out;
    for (const auto& p : net.params()) out.emplace_back(p.name, p.value);
    for (const auto& b : net.buffers()) out.push_back(b);
    return out;
}

}  // namespace

void save_checkpoint(const fs::path& dir, Network<float>& net) {
    fs::create_directories(dir);
    const NetworkConfig& cfg = net.config();
    json j;
    j["format"] = "lvoaug-checkpoint-1";
    j["variant"] = std::string(to_string(cfg.variant));
    j["feature_len"] = cfg.feature_len;
    j["weight_init_seed"] = cfg.weight_init_seed;
    j["conv_blocks"] = json::array();
    for (const auto& b : cfg.conv_blocks) j["conv_blocks"].push_back({b.out_channels, b.downsample});
    j["dtype"] = "f32le";
    j["tensors"] = json::array();

    std::ofstream bin(dir / "params.bin", std::ios::binary);
    if (!bin) throw DataError("cannot write " + (dir / "params.bin").string());
    std::size_t offset = 0;
    for (const auto& [name, m] : tensors(net)) {
        j["tensors"].push_back({{"name", name}, {"shape", {m->rows(), m->cols()}}, {"offset", offset}});
        bin.write(reinterpret_cast<const char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(float)));
        offset += static_cast<std::size_t>(m->size()) * sizeof(float);
    }
    std::ofstream(dir / "model.json") << j.dump(2) << '\n';
}

Network<float> load_checkpoint(const fs::path& dir) {
    std::ifstream mf(dir / "model.json");
    if (!mf) throw DataError("no checkpoint manifest in " + dir.string());
    json j;
    try {
        mf >> j;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed checkpoint manifest: ") + e.what());
    }
    NetworkConfig cfg;
    cfg.variant = variant_from_string(j.at("variant").get<std::string>());
    cfg.feature_len = j.at("feature_len").get<int>();
    cfg.weight_init_seed = j.at("weight_init_seed").get<std::uint64_t>();
    cfg.conv_blocks.clear();
    for (const auto& b : j.at("conv_blocks")) cfg.conv_blocks.push_back({b.at(0).get<int>(), b.at(1).get<int>()});
    Network<float> net(cfg);

    std::ifstream bin(dir / "params.bin", std::ios::binary);
    if (!bin) throw DataError("no params.bin in " + dir.string());
    auto table = tensors(net);
    const auto& entries = j.at("tensors");
    if (entries.size() != table.size()) throw DataError("checkpoint tensor count does not match the network");
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto& [name, m] = table[i];
        const auto& e = entries[i];
        if (e.at("name").get<std::string>() != name || e.at("shape").at(0).get<Eigen::Index>() != m->rows() ||
            e.at("shape").at(1).get<Eigen::Index>() != m->cols())
            throw DataError("checkpoint tensor " + e.at("name").get<std::string>() + " does not match " + name);
        bin.seekg(static_cast<std::streamoff>(e.at("offset").get<std::size_t>()));
        bin.read(reinterpret_cast<char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(float)));
        if (!bin) throw DataError("truncated params.bin");
    }
    return net;
}

}  // namespace lvoaug
