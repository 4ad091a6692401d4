#include "lvoaug/cohort.hpp"

#include <fstream>

#include <json.hpp>

#include "lvoaug/errors.hpp"

namespace lvoaug {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path CohortManifest::volume_path(std::size_t i) const {
    const fs::path p = patients.at(i).volume;
    return p.is_absolute() ? p : base_dir / p;
}

void save_manifest(const fs::path& path, const CohortManifest& m) {
    json j;
    j["seed"] = m.seed;
    j["patients"] = json::array();
    for (const auto& p : m.patients) {
        j["patients"].push_back({
            {"id", p.id},
            {"labels",
             {{"ica_left", int(p.labels.ica_left)},
              {"ica_right", int(p.labels.ica_right)},
              {"mca_left", int(p.labels.mca_left)},
              {"mca_right", int(p.labels.mca_right)}}},
            {"volume", p.volume},
        });
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw DataError("cannot write manifest " + path.string());
    f << j.dump(2) << '\n';
}

CohortManifest load_manifest(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open manifest " + path.string());
    CohortManifest m;
    try {
        json j;
        f >> j;
        m.seed = j.value("seed", std::uint64_t{0});
        for (const auto& pj : j.at("patients")) {
            PatientRecord p;
            p.id = pj.at("id").get<std::string>();
            const auto& l = pj.at("labels");
            p.labels.ica_left = l.at("ica_left").get<int>() != 0;
            p.labels.ica_right = l.at("ica_right").get<int>() != 0;
            p.labels.mca_left = l.at("mca_left").get<int>() != 0;
            p.labels.mca_right = l.at("mca_right").get<int>() != 0;
            p.volume = pj.at("volume").get<std::string>();
            m.patients.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw DataError("malformed manifest " + path.string() + ": " + e.what());
    }
    m.base_dir = path.parent_path();
    return m;
}

CohortStats cohort_stats(const std::vector<PatientLabels>& labels) {
    CohortStats s;
    s.patients = static_cast<long long>(labels.size());
    long long pos = 0;
    for (const auto& l : labels) pos += l.positive();
    s.positive_ratio = labels.empty() ? 0.0 : double(pos) / double(labels.size());
    return s;
}

CohortStats cohort_stats(const CohortManifest& m) {
    std::vector<PatientLabels> labels;
    labels.reserve(m.patients.size());
    for (const auto& p : m.patients) labels.push_back(p.labels);
    return cohort_stats(labels);
}

}  // namespace lvoaug
