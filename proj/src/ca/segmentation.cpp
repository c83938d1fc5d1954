#include "persona/ca/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "persona/ca/color.hpp"

namespace persona::ca {
namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // The smaller root survives, keeping labels independent of merge order.
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

double lab_dist2(const Lab& x, const Lab& y) {
    const double dl = x.l - y.l, da = x.a - y.a, db = x.b - y.b;
    return dl * dl + da * da + db * db;
}

}  // namespace

double SegmentationResult::mean_region_size() const noexcept {
    if (region_sizes.empty()) return 0.0;
    return static_cast<double>(labels.size()) / static_cast<double>(region_sizes.size());
}

SegmentationResult mean_shift_segment(const image::RgbImage& rgb, const MeanShiftOptions& opt) {
    if (rgb.empty()) throw DataError("cannot segment an empty image");
    const int w = rgb.width(), h = rgb.height();
    const int hs = opt.spatial_bandwidth;
    const double hr2 = opt.range_bandwidth * opt.range_bandwidth;

    image::Plane<Lab> lab(w, h);
    for (std::size_t i = 0; i < rgb.size(); ++i) lab.pixels()[i] = srgb_to_lab(rgb.pixels()[i]);

    // Mode seeking with flat kernels in both domains over the fixed data set.
    image::Plane<Lab> mode(w, h);
    for (int y0 = 0; y0 < h; ++y0)
        for (int x0 = 0; x0 < w; ++x0) {
            double cx = x0, cy = y0;
            Lab c = lab(x0, y0);
            for (int it = 0; it < opt.max_iterations; ++it) {
                const int ix = static_cast<int>(std::lround(cx)), iy = static_cast<int>(std::lround(cy));
                double sx = 0, sy = 0, sl = 0, sa = 0, sb = 0;
                std::size_t count = 0;
                for (int y = std::max(0, iy - hs); y <= std::min(h - 1, iy + hs); ++y)
                    for (int x = std::max(0, ix - hs); x <= std::min(w - 1, ix + hs); ++x) {
                        const Lab& p = lab(x, y);
                        if (lab_dist2(p, c) >= hr2) continue;
                        sx += x;
                        sy += y;
                        sl += p.l;
                        sa += p.a;
                        sb += p.b;
                        ++count;
                    }
                if (count == 0) break;
                const double n = static_cast<double>(count);
                const double nx = sx / n, ny = sy / n;
                const Lab nc{sl / n, sa / n, sb / n};
                const double shift2 = (nx - cx) * (nx - cx) + (ny - cy) * (ny - cy) + lab_dist2(nc, c);
                cx = nx;
                cy = ny;
                c = nc;
                if (shift2 < opt.convergence * opt.convergence) break;
            }
            mode(x0, y0) = c;
        }

    // Group 4-adjacent pixels whose modes are within the range bandwidth.
    const std::size_t n = rgb.size();
    Dsu dsu(n);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int i = y * w + x;
            if (x + 1 < w && lab_dist2(mode(x, y), mode(x + 1, y)) < hr2) dsu.unite(i, i + 1);
            if (y + 1 < h && lab_dist2(mode(x, y), mode(x, y + 1)) < hr2) dsu.unite(i, i + w);
        }

    // Absorb undersized regions into the adjacent region with the closest
    // mean colour, smallest first, until none remain or one region is left.
    struct Region {
        std::size_t size = 0;
        Lab sum;
        std::set<int> neighbours;
    };
    std::map<int, Region> regions;
    for (std::size_t i = 0; i < n; ++i) {
        auto& r = regions[dsu.find(static_cast<int>(i))];
        ++r.size;
        r.sum.l += lab.pixels()[i].l;
        r.sum.a += lab.pixels()[i].a;
        r.sum.b += lab.pixels()[i].b;
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int a = dsu.find(y * w + x);
            for (const int b : {x + 1 < w ? dsu.find(y * w + x + 1) : a, y + 1 < h ? dsu.find((y + 1) * w + x) : a})
                if (a != b) {
                    regions[a].neighbours.insert(b);
                    regions[b].neighbours.insert(a);
                }
        }
    auto mean = [](const Region& r) {
        const double c = static_cast<double>(r.size);
        return Lab{r.sum.l / c, r.sum.a / c, r.sum.b / c};
    };
    std::set<std::pair<std::size_t, int>> undersized;
    for (const auto& [id, r] : regions)
        if (r.size < opt.min_region) undersized.emplace(r.size, id);
    while (!undersized.empty() && regions.size() > 1) {
        const int small = undersized.begin()->second;
        undersized.erase(undersized.begin());
        auto& sr = regions[small];
        if (sr.neighbours.empty()) continue;
        const Lab own = mean(sr);
        int best = -1;
        double best_d = 0;
        for (int nb : sr.neighbours) {
            const double d = lab_dist2(own, mean(regions[nb]));
            if (best < 0 || d < best_d) {
                best = nb;
                best_d = d;
            }
        }
        auto& br = regions[best];
        if (br.size < opt.min_region) undersized.erase({br.size, best});
        br.size += sr.size;
        br.sum.l += sr.sum.l;
        br.sum.a += sr.sum.a;
        br.sum.b += sr.sum.b;
        for (int nb : sr.neighbours) {
            if (nb == best) continue;
            auto& other = regions[nb].neighbours;
            other.erase(small);
            other.insert(best);
            br.neighbours.insert(nb);
        }
        br.neighbours.erase(small);
        dsu.parent[dsu.find(small)] = dsu.find(best);
        if (br.size < opt.min_region) undersized.emplace(br.size, best);
        regions.erase(small);
    }

    SegmentationResult out{image::Plane<int>(w, h, -1), {}};
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < n; ++i) {
        const int r = dsu.find(static_cast<int>(i));
        auto [it, inserted] = relabel.emplace(r, static_cast<int>(out.region_sizes.size()));
        if (inserted) out.region_sizes.push_back(0);
        out.labels.pixels()[i] = it->second;
        ++out.region_sizes[it->second];
    }
    return out;
}

}  // namespace persona::ca
