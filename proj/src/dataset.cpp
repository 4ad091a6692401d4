#include "lvoaug/dataset.hpp"

#include "lvoaug/errors.hpp"

namespace lvoaug {

namespace {

enum Kind { kHemi = 0, kIca = 1, kMca = 2 };

std::vector<TrainingPool::Stored> versions_of(const BinaryVolume& v, const PoolOptions& opts, const DeformSpec& spec,
                                              std::uint64_t stream) {
    std::vector<TrainingPool::Stored> out;
    out.push_back(downsample_max<std::uint8_t>(v, opts.downsample));
    if (!opts.deform || opts.online_deform) return out;
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        const auto field = sample_field(spec, v.shape(), repetition_seed(spec, stream, rep));
        out.push_back(downsample_max<std::uint8_t>(warp(v, field), opts.downsample));
    }
    return out;
}

Grid<float> as_float(const TrainingPool::Stored& g) { return g.cast<float>(); }

}  // namespace

TrainingPool::TrainingPool(const std::vector<BinaryVolume>& whole_heads, std::vector<PatientLabels> labels,
                           const PoolOptions& opts)
    : opts_(opts), labels_(std::move(labels)) {
    if (whole_heads.size() != labels_.size()) throw DataError("volume and label counts differ");
    if (opts.downsample < 1) throw Error("downsample factor must be >= 1");
    if (opts.hemispheres && frame_shape(Frame::hemisphere).x % opts.downsample != 0)
        throw Error("downsample factor must divide the hemisphere width");
    const bool keep_full = opts.deform && opts.online_deform;
    for (std::size_t p = 0; p < whole_heads.size(); ++p) {
        PatientVolumes pv = ingest(whole_heads[p]);
        std::array<std::vector<Stored>, 2> h, i, m;
        for (int s = 0; s < 2; ++s) {
            const auto su = static_cast<std::size_t>(s);
            // Streams keep per-member deformations independent of pool layout.
            const std::uint64_t base = p * 8 + su * 4;
            if (opts.hemispheres) h[su] = versions_of(pv.hemisphere[su], opts, opts.hemisphere_deform, base);
            if (opts.subvolumes) {
                i[su] = versions_of(pv.ica[su], opts, opts.subvolume_deform, base + 1);
                m[su] = versions_of(pv.mca[su], opts, opts.subvolume_deform, base + 2);
            }
        }
        hemi_.push_back(std::move(h));
        ica_.push_back(std::move(i));
        mca_.push_back(std::move(m));
        if (keep_full) {
            if (opts.hemispheres) hemi_full_.push_back(std::move(pv.hemisphere));
            if (opts.subvolumes) {
                ica_full_.push_back(std::move(pv.ica));
                mca_full_.push_back(std::move(pv.mca));
            }
        }
    }
}

int TrainingPool::hemisphere_versions() const {
    return opts_.deform && !opts_.online_deform ? 1 + opts_.hemisphere_deform.repetitions : 1;
}

int TrainingPool::versions(Region) const {
    return opts_.deform && !opts_.online_deform ? 1 + opts_.subvolume_deform.repetitions : 1;
}

const TrainingPool::Stored& TrainingPool::hemisphere(int patient, Side side, int version) const {
    if (!opts_.hemispheres) throw Error("pool was built without hemispheres");
    return hemi_.at(static_cast<std::size_t>(patient))[static_cast<std::size_t>(side)].at(static_cast<std::size_t>(version));
}

const TrainingPool::Stored& TrainingPool::subvolume(Region r, int patient, Side side, int version) const {
    if (!opts_.subvolumes) throw Error("pool was built without subvolumes");
    const auto& src = r == Region::ica ? ica_ : mca_;
    return src.at(static_cast<std::size_t>(patient))[static_cast<std::size_t>(side)].at(static_cast<std::size_t>(version));
}

Grid<float> TrainingPool::member(int kind, const MemberRef& m, int version) const {
    if (kind == kHemi) return as_float(hemisphere(m.patient, m.side, version));
    return as_float(subvolume(kind == kIca ? Region::ica : Region::mca, m.patient, m.side, version));
}

Grid<float> TrainingPool::member_online(int kind, const MemberRef& m, std::uint64_t seed) const {
    if (!(opts_.deform && opts_.online_deform)) throw Error("pool was built without online deformation");
    const auto& src = kind == kHemi ? hemi_full_ : kind == kIca ? ica_full_ : mca_full_;
    if (src.empty()) throw Error("pool has no full-resolution members of this kind");
    const BinaryVolume& v = src.at(static_cast<std::size_t>(m.patient))[static_cast<std::size_t>(m.side)];
    const DeformSpec& spec = kind == kHemi ? opts_.hemisphere_deform : opts_.subvolume_deform;
    const auto field = sample_field(spec, v.shape(), seed);
    return downsample_max<float>(warp(v, field), opts_.downsample);
}

template <typename Get>
ModelInput<float> TrainingPool::assemble(const PlanEntry& e, Variant variant, bool mirror, Get&& get) const {
    ModelInput<float> in;
    switch (variant) {
        case Variant::whole_head: {
            if (!e.hemispheric()) throw PlanningError("whole_head needs a hemisphere stack");
            const auto l = get(kHemi, e.ica_left, 0);
            const auto r = get(kHemi, e.ica_right, 1);
            // Un-mirror the left tree into left-handed orientation.
            Grid<float> head = concat_x(mirror_x(l), r);
            in.push_back(mirror ? mirror_x(head) : std::move(head));
            break;
        }
        case Variant::h_stack: {
            if (!e.hemispheric()) throw PlanningError("h_stack needs a hemisphere stack");
            const auto l = get(kHemi, e.ica_left, 0);
            const auto r = get(kHemi, e.ica_right, 1);
            in.push_back(mirror ? stack_grids(r, l) : stack_grids(l, r));
            break;
        }
        case Variant::im_stack: {
            const auto il = get(kIca, e.ica_left, 0);
            const auto ir = get(kIca, e.ica_right, 1);
            const auto ml = get(kMca, e.mca_left, 2);
            const auto mr = get(kMca, e.mca_right, 3);
            in.push_back(mirror ? stack_grids(ir, il) : stack_grids(il, ir));
            in.push_back(mirror ? stack_grids(mr, ml) : stack_grids(ml, mr));
            break;
        }
    }
    return in;
}

ModelInput<float> TrainingPool::input(const PlanEntry& e, Variant variant, const std::array<int, 4>& version,
                                      bool mirror) const {
    return assemble(e, variant, mirror, [&](int kind, const MemberRef& m, int slot) {
        return member(kind, m, version[static_cast<std::size_t>(slot)]);
    });
}

ModelInput<float> TrainingPool::input_online(const PlanEntry& e, Variant variant,
                                             const std::array<std::uint64_t, 4>& field_seed, bool mirror) const {
    return assemble(e, variant, mirror, [&](int kind, const MemberRef& m, int slot) {
        return member_online(kind, m, field_seed[static_cast<std::size_t>(slot)]);
    });
}

}  // namespace lvoaug
