#pragma once

#include <cstddef>
#include <vector>

#include "persona/image/image.hpp"

namespace persona::ca {

struct MeanShiftOptions {
    int spatial_bandwidth = 8;     // pixels
    double range_bandwidth = 8.0;  // CIELab units
    std::size_t min_region = 20;   // pixels
    int max_iterations = 10;
    double convergence = 0.1;      // joint shift length
};

struct SegmentationResult {
    image::Plane<int> labels;                // region index per pixel
    std::vector<std::size_t> region_sizes;   // pixels per region, sums to w*h

    std::size_t region_count() const noexcept { return region_sizes.size(); }
    double mean_region_size() const noexcept;
};

/// Joint spatial-range mean-shift filtering in CIELab followed by grouping
/// of adjacent pixels whose modes lie within the range bandwidth, then
/// absorption of regions smaller than min_region into their closest neighbour.
SegmentationResult mean_shift_segment(const image::RgbImage& rgb, const MeanShiftOptions& options = {});

}  // namespace persona::ca
