#include "lvoaug/deform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lvoaug/errors.hpp"
#include "lvoaug/random.hpp"
#include "lvoaug/volume_io.hpp"

namespace lvoaug {

namespace fs = std::filesystem;

void DeformSpec::validate() const {
    if (anchors_per_axis < 2) throw Error("anchors_per_axis must be >= 2");
    if (!(max_displacement_vox >= 0.0)) throw Error("max displacement must be non-negative");
    if (repetitions < 1) throw Error("repetitions must be positive");
}

DisplacementField::DisplacementField(Shape3 shape, int anchors_per_axis)
    : shape_(shape), anchors_(anchors_per_axis) {
    if (anchors_per_axis < 2) throw Error("anchors_per_axis must be >= 2");
    if (shape.x < 1 || shape.y < 1 || shape.z < 1) throw FrameError("field shape must be positive");
    coarse_.assign(static_cast<std::size_t>(anchors_) * anchors_ * anchors_, Eigen::Vector3d::Zero());
}

double DisplacementField::anchor_position(int a, int anchors, int len) {
    return len <= 1 ? 0.0 : double(a) * double(len - 1) / double(anchors - 1);
}

namespace {

struct AxisWeights {
    std::vector<int> cell;
    std::vector<double> frac;
};

AxisWeights axis_weights(int len, int anchors) {
    AxisWeights w;
    w.cell.resize(static_cast<std::size_t>(len));
    w.frac.resize(static_cast<std::size_t>(len));
    for (int u = 0; u < len; ++u) {
        const double t = len <= 1 ? 0.0 : double(u) * double(anchors - 1) / double(len - 1);
        const int c = std::min(static_cast<int>(std::floor(t)), anchors - 2);
        w.cell[static_cast<std::size_t>(u)] = c;
        w.frac[static_cast<std::size_t>(u)] = t - c;
    }
    return w;
}

// Calls f(voxel_index, displacement) over the whole grid.
template <typename F>
void for_each_displacement(const DisplacementField& field, F&& f) {
    const Shape3 s = field.shape();
    const int n = field.anchors();
    const AxisWeights wx = axis_weights(s.x, n), wy = axis_weights(s.y, n), wz = axis_weights(s.z, n);
    const double b = field.bound();
    std::size_t v = 0;
    for (int z = 0; z < s.z; ++z) {
        const int k = wz.cell[z];
        const double fz = wz.frac[z];
        for (int y = 0; y < s.y; ++y) {
            const int j = wy.cell[y];
            const double fy = wy.frac[y];
            // Bilinear in (y, z) for the anchor columns, then linear in x.
            Eigen::Matrix<double, 3, Eigen::Dynamic> column(3, n);
            for (int i = 0; i < n; ++i) {
                column.col(i) = (1 - fz) * ((1 - fy) * field.anchor(i, j, k) + fy * field.anchor(i, j + 1, k)) +
                                fz * ((1 - fy) * field.anchor(i, j, k + 1) + fy * field.anchor(i, j + 1, k + 1));
            }
            for (int x = 0; x < s.x; ++x, ++v) {
                const int i = wx.cell[x];
                const double fx = wx.frac[x];
                Eigen::Vector3d d = (1 - fx) * column.col(i) + fx * column.col(i + 1);
                f(v, d.cwiseMax(-b).cwiseMin(b).eval());
            }
        }
    }
}

}  // namespace

Eigen::Vector3d DisplacementField::at(int x, int y, int z) const {
    const int n = anchors_;
    auto locate = [n](int u, int len, int& c, double& f) {
        const double t = len <= 1 ? 0.0 : double(u) * double(n - 1) / double(len - 1);
        c = std::min(static_cast<int>(std::floor(t)), n - 2);
        f = t - c;
    };
    int i, j, k;
    double fx, fy, fz;
    locate(x, shape_.x, i, fx);
    locate(y, shape_.y, j, fy);
    locate(z, shape_.z, k, fz);
    Eigen::Vector3d d = Eigen::Vector3d::Zero();
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                const double w = (di ? fx : 1 - fx) * (dj ? fy : 1 - fy) * (dk ? fz : 1 - fz);
                d += w * anchor(i + di, j + dj, k + dk);
            }
    return d.cwiseMax(-bound_).cwiseMin(bound_);
}

Eigen::Matrix3Xf DisplacementField::dense() const {
    Eigen::Matrix3Xf out(3, static_cast<Eigen::Index>(shape_.voxels()));
    for_each_displacement(*this, [&](std::size_t v, const Eigen::Vector3d& d) {
        out.col(static_cast<Eigen::Index>(v)) = d.cast<float>();
    });
    return out;
}

DisplacementField sample_field(const DeformSpec& spec, Shape3 shape, std::uint64_t seed) {
    spec.validate();
    DisplacementField field(shape, spec.anchors_per_axis);
    field.set_bound(spec.max_displacement_vox);
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-spec.max_displacement_vox, spec.max_displacement_vox);
    const int n = spec.anchors_per_axis;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                // Draw for every anchor so the stream does not depend on pinning.
                Eigen::Vector3d d(u(rng), u(rng), u(rng));
                const bool border = i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
                field.anchor(i, j, k) = border || spec.max_displacement_vox == 0.0 ? Eigen::Vector3d::Zero() : d;
            }
    return field;
}

BinaryVolume warp(const BinaryVolume& v, const DisplacementField& field) {
    const Shape3 s = v.shape();
    if (!(field.shape() == s))
        throw FrameError("field shape " + describe(field.shape()) + " does not match volume " + describe(s));
    BinaryVolume out(v.frame(), v.channels());
    const std::size_t n = s.voxels();
    const auto& src = v.data();
    auto& dst = out.data();
    for_each_displacement(field, [&](std::size_t idx, const Eigen::Vector3d& d) {
        const int x = static_cast<int>(idx % s.x);
        const int y = static_cast<int>((idx / s.x) % s.y);
        const int z = static_cast<int>(idx / (static_cast<std::size_t>(s.x) * s.y));
        const int sx = static_cast<int>(std::lround(x + d.x()));
        const int sy = static_cast<int>(std::lround(y + d.y()));
        const int sz = static_cast<int>(std::lround(z + d.z()));
        if (!v.contains(sx, sy, sz)) return;
        const std::size_t from = v.index(sx, sy, sz);
        for (int c = 0; c < v.channels(); ++c) dst[idx + n * c] = src[from + n * c];
    });
    return out;
}

std::uint64_t repetition_seed(const DeformSpec& spec, std::uint64_t index, int rep) {
    return derive_seed(spec.seed, {0xdef0ull, index, static_cast<std::uint64_t>(rep)});
}

std::vector<BinaryVolume> augment_volumes(const std::vector<BinaryVolume>& volumes, const DeformSpec& spec) {
    spec.validate();
    std::vector<BinaryVolume> out;
    out.reserve(volumes.size() * static_cast<std::size_t>(spec.repetitions));
    for (std::size_t i = 0; i < volumes.size(); ++i) {
        for (int rep = 0; rep < spec.repetitions; ++rep) {
            const auto field = sample_field(spec, volumes[i].shape(), repetition_seed(spec, i, rep));
            out.push_back(warp(volumes[i], field));
        }
    }
    return out;
}

CohortManifest augment_dataset(const CohortManifest& cohort, const DeformSpec& spec, const fs::path& out_dir) {
    spec.validate();
    CohortManifest out;
    out.seed = spec.seed;
    out.base_dir = out_dir;
    fs::create_directories(out_dir / "volumes");
    for (std::size_t i = 0; i < cohort.patients.size(); ++i) {
        const auto& p = cohort.patients[i];
        const BinaryVolume v = read_vmv(cohort.volume_path(i));
        for (int rep = 0; rep < spec.repetitions; ++rep) {
            const auto field = sample_field(spec, v.shape(), repetition_seed(spec, i, rep));
            char suffix[16];
            std::snprintf(suffix, sizeof suffix, "_d%02d", rep);
            PatientRecord rec{p.id + suffix, p.labels, "volumes/" + p.id + suffix + ".vmv"};
            write_vmv(out_dir / rec.volume, warp(v, field));
            out.patients.push_back(std::move(rec));
        }
    }
    save_manifest(out_dir / "manifest.json", out);
    return out;
}

void write_field_raw(const fs::path& path, const DisplacementField& field) {
    const Eigen::Matrix3Xf d = field.dense();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    // Eigen stores the 3xN matrix column-major: one (dx, dy, dz) triple per voxel.
    f.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(float)));
}

}  // namespace lvoaug
