#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "projstat/measures.hpp"

namespace projstat {

namespace {

constexpr double kFlowEps = 1e-15;

}  // namespace

// Successive shortest paths on the bipartite transport network. Residual
// costs can be negative (reverse arcs), so paths are found with a queue-based
// Bellman-Ford. Nodes 0..n-1 are sources (atoms of p), n..n+m-1 sinks.
double w1_distance(const DiscreteMeasure& p, const DiscreteMeasure& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("measures have different dimensions");
    const auto& a = p.atoms();
    const auto& b = q.atoms();
    const std::size_t n = a.size(), m = b.size(), nodes = n + m;

    std::vector<double> cost(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < p.dim(); ++k) {
                const double diff = a[i].point[k] - b[j].point[k];
                s += diff * diff;
            }
            cost[i * m + j] = std::sqrt(s);
        }

    std::vector<double> supply(n), demand(m), flow(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) supply[i] = a[i].weight;
    for (std::size_t j = 0; j < m; ++j) demand[j] = b[j].weight;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(nodes);
    std::vector<std::ptrdiff_t> parent(nodes);
    std::vector<char> queued(nodes);
    double total = 0.0;

    for (std::size_t iter = 0; iter < 4 * nodes * nodes + 16; ++iter) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(queued.begin(), queued.end(), 0);
        std::deque<std::size_t> work;
        for (std::size_t i = 0; i < n; ++i)
            if (supply[i] > kFlowEps) {
                dist[i] = 0.0;
                work.push_back(i);
                queued[i] = 1;
            }
        if (work.empty()) break;

        while (!work.empty()) {
            const std::size_t u = work.front();
            work.pop_front();
            queued[u] = 0;
            if (u < n) {
                for (std::size_t j = 0; j < m; ++j) {
                    const double nd = dist[u] + cost[u * m + j];
                    if (nd < dist[n + j] - 1e-15) {
                        dist[n + j] = nd;
                        parent[n + j] = static_cast<std::ptrdiff_t>(u);
                        if (!queued[n + j]) {
                            work.push_back(n + j);
                            queued[n + j] = 1;
                        }
                    }
                }
            } else {
                const std::size_t j = u - n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (flow[i * m + j] <= kFlowEps) continue;
                    const double nd = dist[u] - cost[i * m + j];
                    if (nd < dist[i] - 1e-15) {
                        dist[i] = nd;
                        parent[i] = static_cast<std::ptrdiff_t>(u);
                        if (!queued[i]) {
                            work.push_back(i);
                            queued[i] = 1;
                        }
                    }
                }
            }
        }

        std::ptrdiff_t sink = -1;
        for (std::size_t j = 0; j < m; ++j)
            if (demand[j] > kFlowEps && dist[n + j] < inf &&
                (sink < 0 || dist[n + j] < dist[static_cast<std::size_t>(sink)]))
                sink = static_cast<std::ptrdiff_t>(n + j);
        if (sink < 0) break;

        // Bottleneck along the path back to a source with remaining supply.
        double push = demand[static_cast<std::size_t>(sink) - n];
        std::size_t v = static_cast<std::size_t>(sink);
        while (parent[v] >= 0) {
            const std::size_t u = static_cast<std::size_t>(parent[v]);
            if (u >= n) push = std::min(push, flow[v * m + (u - n)]);
            v = u;
        }
        push = std::min(push, supply[v]);

        v = static_cast<std::size_t>(sink);
        while (parent[v] >= 0) {
            const std::size_t u = static_cast<std::size_t>(parent[v]);
            if (u < n) {
                flow[u * m + (v - n)] += push;
                total += push * cost[u * m + (v - n)];
            } else {
                flow[v * m + (u - n)] -= push;
                total -= push * cost[v * m + (u - n)];
            }
            v = u;
        }
        supply[v] -= push;
        demand[static_cast<std::size_t>(sink) - n] -= push;
    }
    return std::max(total, 0.0);
}

}  // namespace projstat
