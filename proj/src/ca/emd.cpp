#include "persona/ca/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "persona/error.hpp"

namespace persona::ca {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> normalized(std::span<const double> mass, const char* side) {
    double total = 0;
    for (double m : mass) {
        if (!(m >= 0) || !std::isfinite(m)) throw DataError(std::string("EMD ") + side + " has a negative or non-finite mass");
        total += m;
    }
    if (total <= 0) throw DataError(std::string("EMD ") + side + " has zero total mass");
    std::vector<double> out(mass.begin(), mass.end());
    for (auto& m : out) m /= total;
    return out;
}

}  // namespace

double earth_movers_distance(std::span<const double> supply_in, std::span<const double> demand_in,
                             std::span<const double> cost) {
    const std::size_t n = supply_in.size(), m = demand_in.size();
    if (n == 0 || m == 0) throw DataError("EMD needs non-empty distributions");
    if (cost.size() != n * m) throw DataError("EMD cost matrix has the wrong size");
    auto supply = normalized(supply_in, "supply");
    auto demand = normalized(demand_in, "demand");
    for (double c : cost)
        if (!(c >= 0) || !std::isfinite(c)) throw DataError("EMD cost must be non-negative and finite");

    // Nodes 0..n-1 are sources, n..n+m-1 sinks. Potentials keep reduced
    // costs non-negative so each shortest path is found by dense Dijkstra.
    constexpr double eps = 1e-14;
    std::vector<double> flow(n * m, 0.0);
    std::vector<double> potential(n + m, 0.0);
    std::vector<double> dist(n + m);
    std::vector<std::size_t> parent(n + m);
    std::vector<char> done(n + m);

    auto remaining = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };

    for (std::size_t guard = 0; remaining(supply) > 1e-12 && remaining(demand) > 1e-12; ++guard) {
        if (guard > 64 * (n + m) * (n + m)) throw InvariantError("EMD solver failed to converge");
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(done.begin(), done.end(), 0);
        for (std::size_t i = 0; i < n; ++i)
            if (supply[i] > eps) {
                dist[i] = 0;
                parent[i] = i;
            }
        while (true) {
            std::size_t u = n + m;
            for (std::size_t v = 0; v < n + m; ++v)
                if (!done[v] && dist[v] < kInf && (u == n + m || dist[v] < dist[u])) u = v;
            if (u == n + m) break;
            done[u] = 1;
            if (u < n) {
                for (std::size_t j = 0; j < m; ++j) {
                    const double rc = cost[u * m + j] + potential[u] - potential[n + j];
                    const double d = dist[u] + std::max(rc, 0.0);
                    if (d < dist[n + j]) {
                        dist[n + j] = d;
                        parent[n + j] = u;
                    }
                }
            } else {
                const std::size_t j = u - n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (flow[i * m + j] <= eps) continue;
                    const double rc = -cost[i * m + j] + potential[u] - potential[i];
                    const double d = dist[u] + std::max(rc, 0.0);
                    if (d < dist[i]) {
                        dist[i] = d;
                        parent[i] = u;
                    }
                }
            }
        }

        std::size_t target = n + m;
        for (std::size_t j = 0; j < m; ++j)
            if (demand[j] > eps && dist[n + j] < kInf && (target == n + m || dist[n + j] < dist[target])) target = n + j;
        if (target == n + m) break;
        const double reach = dist[target];
        for (std::size_t v = 0; v < n + m; ++v) potential[v] += std::min(dist[v], reach);

        // Bottleneck along the path: source supply, sink demand, and any
        // backward (sink -> source) arcs that cancel existing flow.
        double push = demand[target - n];
        std::size_t v = target;
        while (true) {
            const std::size_t p = parent[v];
            if (v < n && p == v) {
                push = std::min(push, supply[v]);
                break;
            }
            if (v < n) push = std::min(push, flow[v * m + (p - n)]);  // backward arc p(sink) -> v(source)
            v = p;
        }
        v = target;
        while (true) {
            const std::size_t p = parent[v];
            if (v < n && p == v) {
                supply[v] -= push;
                break;
            }
            if (v >= n)
                flow[p * m + (v - n)] += push;  // forward arc source p -> sink v
            else
                flow[v * m + (p - n)] -= push;
            v = p;
        }
        demand[target - n] -= push;
    }

    double total = 0;
    for (std::size_t k = 0; k < n * m; ++k) total += flow[k] * cost[k];
    return total;
}

}  // namespace persona::ca
