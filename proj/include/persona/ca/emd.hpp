#pragma once

#include <span>

namespace persona::ca {

/// Earth mover's distance between two non-negative mass distributions.
/// `cost` is row-major, supply.size() x demand.size(), non-negative. Both
/// sides are normalized to unit mass, so the result is the minimum cost of
/// moving one unit. Solved exactly (up to rounding) as a transportation
/// problem by successive shortest augmenting paths.
double earth_movers_distance(std::span<const double> supply, std::span<const double> demand,
                             std::span<const double> cost);

}  // namespace persona::ca
