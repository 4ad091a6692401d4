#include "lvoaug/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <Eigen/Core>

#include "lvoaug/errors.hpp"
#include "lvoaug/random.hpp"
#include "lvoaug/volume_io.hpp"

namespace lvoaug {

namespace fs = std::filesystem;
using Vec3 = Eigen::Vector3d;

void PhantomSpec::validate() const {
    if (patients < 1) throw Error("phantom cohort needs at least one patient");
    if (!(lvo_fraction >= 0.0 && lvo_fraction <= 1.0)) throw Error("lvo_fraction must lie in [0, 1]");
    const double sum = region_mix.ica_only + region_mix.mca_only + region_mix.both;
    if (region_mix.ica_only < 0 || region_mix.mca_only < 0 || region_mix.both < 0 ||
        std::abs(sum - 1.0) > 1e-9)
        throw Error("region mix probabilities must be non-negative and sum to 1");
    if (asymmetry_jitter < 0) throw Error("asymmetry_jitter must be non-negative");
}

PatientLabels Lesion::labels() const {
    PatientLabels l;
    if (side == Side::left) {
        l.ica_left = ica;
        l.mca_left = mca;
    } else {
        l.ica_right = ica;
        l.mca_right = mca;
    }
    return l;
}

namespace {

enum class Tag { none, ica, mca };

// Cubic Bezier vessel piece. `parent` < 0 marks a trunk; branches hang off
// their parent at curve parameter `attach`.
struct Piece {
    Tag tag;
    std::array<Vec3, 4> ctrl;
    double radius;
    int parent;
    double attach;
};

// Right-side template in whole-head coordinates. Trunks come first per region.
std::vector<Piece> template_tree() {
    std::vector<Piece> t;
    // ICA: ascending trunk with two branches, one of which bifurcates.
    t.push_back({Tag::ica, {Vec3(135, 16, 4), Vec3(152, 45, 22), Vec3(124, 82, 34), Vec3(138, 116, 46)}, 3.0, -1, 0});
    t.push_back({Tag::ica, {Vec3(0, 0, 0), Vec3(126, 58, 44), Vec3(120, 50, 48), Vec3(119, 38, 50)}, 1.6, 0, 0.35});
    t.push_back({Tag::ica, {Vec3(0, 0, 0), Vec3(150, 96, 30), Vec3(156, 90, 20), Vec3(157, 78, 14)}, 1.6, 0, 0.7});
    t.push_back({Tag::ica, {Vec3(0, 0, 0), Vec3(150, 70, 10), Vec3(146, 56, 8), Vec3(146, 44, 8)}, 1.2, 2, 0.8});
    // Connector from the ICA terminus into the MCA box; belongs to no region.
    t.push_back({Tag::none, {Vec3(138, 116, 46), Vec3(140, 124, 50), Vec3(142, 130, 53), Vec3(146, 134, 55)}, 2.6, -1, 0});
    // MCA: lateral trunk, two side branches, terminal bifurcation.
    t.push_back({Tag::mca, {Vec3(146, 134, 55), Vec3(160, 140, 50), Vec3(172, 152, 66), Vec3(182, 166, 70)}, 2.5, -1, 0});
    t.push_back({Tag::mca, {Vec3(0, 0, 0), Vec3(166, 170, 74), Vec3(166, 184, 80), Vec3(168, 196, 84)}, 1.5, 5, 0.5});
    t.push_back({Tag::mca, {Vec3(0, 0, 0), Vec3(178, 160, 52), Vec3(184, 168, 42), Vec3(186, 176, 34)}, 1.5, 5, 0.8});
    t.push_back({Tag::mca, {Vec3(0, 0, 0), Vec3(184, 182, 34), Vec3(180, 190, 30), Vec3(176, 198, 28)}, 1.1, 7, 1.0});
    t.push_back({Tag::mca, {Vec3(0, 0, 0), Vec3(184, 176, 74), Vec3(186, 188, 78), Vec3(185, 198, 82)}, 1.5, 5, 1.0});
    t.push_back({Tag::mca, {Vec3(0, 0, 0), Vec3(188, 170, 66), Vec3(190, 176, 60), Vec3(190, 186, 56)}, 1.3, 5, 1.0});
    return t;
}

Vec3 bezier(const std::array<Vec3, 4>& c, double t) {
    const double u = 1 - t;
    return u * u * u * c[0] + 3 * u * u * t * c[1] + 3 * u * t * t * c[2] + t * t * t * c[3];
}

Vec3 mirror_point(const Vec3& p) {
    return Vec3(frame_shape(Frame::whole_head).x - 1 - p.x(), p.y(), p.z());
}

// Per-side geometry after jitter, in the side's own (possibly mirrored) frame.
std::vector<Piece> perturbed_tree(const std::vector<Piece>& base, const Vec3& patient_shift, double jitter,
                                  Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<Piece> tree = base;
    constexpr double kOffsetScale = 20.0;  // voxels of control-point offset per unit jitter
    for (auto& p : tree) {
        for (std::size_t c = 0; c < 4; ++c) {
            Vec3 d(n01(rng), n01(rng), n01(rng));
            p.ctrl[c] += patient_shift + jitter * kOffsetScale * d;
        }
        p.radius = std::clamp(p.radius * (1.0 + jitter * n01(rng)), 1.0, 3.0);
    }
    // Branches start on their parent curve; the connector joins ICA and MCA trunks.
    for (std::size_t i = 0; i < tree.size(); ++i) {
        auto& p = tree[i];
        if (p.parent >= 0) p.ctrl[0] = bezier(tree[static_cast<std::size_t>(p.parent)].ctrl, p.attach);
    }
    return tree;
}

const RegionBox* box_for(Tag tag, const RegionBox& ica, const RegionBox& mca) {
    if (tag == Tag::ica) return &ica;
    if (tag == Tag::mca) return &mca;
    return nullptr;
}

// Keeps every control point of region pieces inside the box shrunk by the
// tube radius, so the rasterized tube cannot leave the box.
void clamp_to_boxes(std::vector<Piece>& tree, const RegionBox& ica, const RegionBox& mca) {
    for (auto& p : tree) {
        const RegionBox* b = box_for(p.tag, ica, mca);
        if (!b) continue;
        const double m = p.radius + 1.0;
        for (auto& c : p.ctrl) {
            for (int a = 0; a < 3; ++a) {
                c[a] = std::clamp(c[a], b->origin[a] + m, b->origin[a] + b->extent[a] - 1 - m);
            }
        }
    }
    // Re-attach branches to the clamped parents; the box is convex so the
    // attachment point stays inside.
    for (auto& p : tree)
        if (p.parent >= 0) p.ctrl[0] = bezier(tree[static_cast<std::size_t>(p.parent)].ctrl, p.attach);
    // Connector endpoints follow the trunks they join.
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (tree[i].tag != Tag::none) continue;
        tree[i].ctrl[0] = tree[0].ctrl[3];
        for (std::size_t j = i + 1; j < tree.size(); ++j) {
            if (tree[j].tag == Tag::mca && tree[j].parent < 0) {
                tree[i].ctrl[3] = tree[j].ctrl[0];
                break;
            }
        }
    }
}

double dist_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * ab)).norm();
}

void rasterize_capsule(BinaryVolume& v, const Vec3& a, const Vec3& b, double r, const RegionBox* clip) {
    const Vec3 lo = a.cwiseMin(b).array() - r;
    const Vec3 hi = a.cwiseMax(b).array() + r;
    const Shape3 s = v.shape();
    const int x0 = std::max(0, static_cast<int>(std::floor(lo.x()))), x1 = std::min(s.x - 1, static_cast<int>(std::ceil(hi.x())));
    const int y0 = std::max(0, static_cast<int>(std::floor(lo.y()))), y1 = std::min(s.y - 1, static_cast<int>(std::ceil(hi.y())));
    const int z0 = std::max(0, static_cast<int>(std::floor(lo.z()))), z1 = std::min(s.z - 1, static_cast<int>(std::ceil(hi.z())));
    for (int z = z0; z <= z1; ++z)
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                if (clip && !clip->contains(x, y, z)) continue;
                if (dist_to_segment(Vec3(x, y, z), a, b) <= r) v.set(x, y, z, 1);
            }
}

constexpr int kSamplesPerPiece = 64;

// Curve parameter on the trunk where the cut falls, by arc length.
double cut_parameter(const Piece& trunk, double fraction) {
    std::array<double, kSamplesPerPiece + 1> arc{};
    Vec3 prev = bezier(trunk.ctrl, 0.0);
    for (int i = 1; i <= kSamplesPerPiece; ++i) {
        const Vec3 cur = bezier(trunk.ctrl, double(i) / kSamplesPerPiece);
        arc[static_cast<std::size_t>(i)] = arc[static_cast<std::size_t>(i - 1)] + (cur - prev).norm();
        prev = cur;
    }
    const double target = fraction * arc.back();
    for (int i = 1; i <= kSamplesPerPiece; ++i) {
        if (arc[static_cast<std::size_t>(i)] >= target) {
            const double seg = arc[static_cast<std::size_t>(i)] - arc[static_cast<std::size_t>(i - 1)];
            const double f = seg > 0 ? (target - arc[static_cast<std::size_t>(i - 1)]) / seg : 0.0;
            return (i - 1 + f) / kSamplesPerPiece;
        }
    }
    return 1.0;
}

// A piece is distal to a trunk cut at parameter t if it hangs (transitively)
// off the trunk beyond t.
bool distal(const std::vector<Piece>& tree, std::size_t i, std::size_t trunk, double t_cut) {
    std::size_t cur = i;
    while (tree[cur].parent >= 0) {
        const auto parent = static_cast<std::size_t>(tree[cur].parent);
        if (parent == trunk) return tree[cur].attach > t_cut;
        cur = parent;
    }
    return false;
}

void render_side(BinaryVolume& v, const std::vector<Piece>& tree, Side side, const std::optional<Lesion>& lesion) {
    const RegionBox ica = atlas_box(Region::ica, side);
    const RegionBox mca = atlas_box(Region::mca, side);
    const bool lesioned = lesion && lesion->side == side;

    std::array<double, 2> t_cut = {2.0, 2.0};  // ica, mca; > 1 means intact
    std::array<std::size_t, 2> trunk{};
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (tree[i].parent >= 0 || tree[i].tag == Tag::none) continue;
        const int r = tree[i].tag == Tag::ica ? 0 : 1;
        trunk[static_cast<std::size_t>(r)] = i;
        const bool hit = lesioned && (r == 0 ? lesion->ica : lesion->mca);
        if (hit) t_cut[static_cast<std::size_t>(r)] = cut_parameter(tree[i], lesion->cut_fraction);
    }

    for (std::size_t i = 0; i < tree.size(); ++i) {
        const Piece& p = tree[i];
        const RegionBox* clip = box_for(p.tag, ica, mca);
        double t_end = 1.0;
        if (p.tag != Tag::none) {
            const auto r = static_cast<std::size_t>(p.tag == Tag::ica ? 0 : 1);
            if (i == trunk[r]) t_end = std::min(1.0, t_cut[r]);
            else if (distal(tree, i, trunk[r], t_cut[r])) continue;
        }
        const int steps = std::max(1, static_cast<int>(std::ceil(kSamplesPerPiece * t_end)));
        Vec3 prev = bezier(p.ctrl, 0.0);
        for (int k = 1; k <= steps; ++k) {
            const Vec3 cur = bezier(p.ctrl, t_end * double(k) / steps);
            rasterize_capsule(v, prev, cur, p.radius, clip);
            prev = cur;
        }
    }
}

std::vector<Piece> mirrored(std::vector<Piece> tree) {
    for (auto& p : tree)
        for (auto& c : p.ctrl) c = mirror_point(c);
    return tree;
}

std::string patient_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%03d", index);
    return buf;
}

}  // namespace

std::vector<std::optional<Lesion>> assign_lesions(const PhantomSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, {0x1e5ull}));
    const int positives = static_cast<int>(std::lround(spec.lvo_fraction * spec.patients));
    std::vector<int> order(static_cast<std::size_t>(spec.patients));
    for (int i = 0; i < spec.patients; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::optional<Lesion>> out(static_cast<std::size_t>(spec.patients));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> cut(0.2, 0.8);
    for (int k = 0; k < positives; ++k) {
        Lesion l;
        const double m = u01(rng);
        if (m < spec.region_mix.ica_only) {
            l.ica = true;
        } else if (m < spec.region_mix.ica_only + spec.region_mix.mca_only) {
            l.mca = true;
        } else {
            l.ica = l.mca = true;
        }
        l.side = u01(rng) < 0.5 ? Side::left : Side::right;
        l.cut_fraction = cut(rng);
        out[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = l;
    }
    return out;
}

PhantomPatient generate_patient(const PhantomSpec& spec, int index, bool apply_lesion) {
    spec.validate();
    if (index < 0 || index >= spec.patients) throw Error("patient index out of range");
    const auto lesions = assign_lesions(spec);

    PhantomPatient out;
    out.id = patient_id(index);
    out.lesion = lesions[static_cast<std::size_t>(index)];
    if (out.lesion) out.labels = out.lesion->labels();

    Rng rng(derive_seed(spec.seed, {0xa7ull, static_cast<std::uint64_t>(index)}));
    std::normal_distribution<double> shift(0.0, 3.0);
    const Vec3 patient_shift(shift(rng), shift(rng), shift(rng));

    const auto base = template_tree();
    auto right = perturbed_tree(base, patient_shift, spec.asymmetry_jitter, rng);
    auto left = perturbed_tree(mirrored(base), Vec3(-patient_shift.x(), patient_shift.y(), patient_shift.z()),
                               spec.asymmetry_jitter, rng);
    clamp_to_boxes(right, atlas_box(Region::ica, Side::right), atlas_box(Region::mca, Side::right));
    clamp_to_boxes(left, atlas_box(Region::ica, Side::left), atlas_box(Region::mca, Side::left));

    const std::optional<Lesion> lesion = apply_lesion ? out.lesion : std::nullopt;
    render_side(out.whole_head, left, Side::left, lesion);
    render_side(out.whole_head, right, Side::right, lesion);
    return out;
}

std::vector<PhantomPatient> generate_cohort(const PhantomSpec& spec) {
    std::vector<PhantomPatient> out;
    out.reserve(static_cast<std::size_t>(spec.patients));
    for (int i = 0; i < spec.patients; ++i) out.push_back(generate_patient(spec, i));
    return out;
}

CohortManifest write_cohort(const fs::path& dir, const PhantomSpec& spec) {
    CohortManifest m;
    m.seed = spec.seed;
    m.base_dir = dir;
    for (int i = 0; i < spec.patients; ++i) {
        PhantomPatient p = generate_patient(spec, i);
        PatientRecord rec{p.id, p.labels, "volumes/" + p.id + ".vmv"};
        write_vmv(dir / rec.volume, p.whole_head);
        m.patients.push_back(std::move(rec));
    }
    save_manifest(dir / "manifest.json", m);
    return m;
}

}  // namespace lvoaug
