#include "persona/classify/metrics.hpp"

#include "persona/error.hpp"

namespace persona::classify {

BinaryMetrics binary_metrics(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw DataError("truth and predictions differ in length");
    if (truth.empty()) throw DataError("no predictions to score");
    BinaryMetrics m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i], p = predicted[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw DataError("binary labels must be 0 or 1");
        if (t == 1 && p == 1) ++m.tp;
        else if (t == 0 && p == 1) ++m.fp;
        else if (t == 0 && p == 0) ++m.tn;
        else ++m.fn;
    }
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(truth.size());
    const std::size_t denom = 2 * m.tp + m.fp + m.fn;
    m.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(m.tp) / static_cast<double>(denom);
    return m;
}

}  // namespace persona::classify
