#pragma once

#include <cstddef>
#include <span>

namespace persona::classify {

struct BinaryMetrics {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0;
    double f1 = 0;  // positive class = 1; 0 when there are no positives at all
};

/// Throws DataError on length mismatch, an empty sample, or labels outside {0,1}.
BinaryMetrics binary_metrics(std::span<const int> truth, std::span<const int> predicted);

}  // namespace persona::classify
