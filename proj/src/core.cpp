#include "taea/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace taea {

Bounds::Bounds(std::vector<double> lo, std::vector<double> up)
    : lower(std::move(lo)), upper(std::move(up)) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("Bounds: lower/upper size mismatch");
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (!(lower[j] < upper[j]))
            throw std::invalid_argument("Bounds: lower must be strictly below upper");
}

void clip_to_bounds(std::vector<double>& x, const Bounds& bounds) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = bounds.clip(j, x[j]);
}

Solution make_solution(std::vector<double> x, const Bounds& bounds) {
    if (x.size() != bounds.size())
        throw std::invalid_argument("make_solution: dimension mismatch with bounds");
    clip_to_bounds(x, bounds);
    Solution s;
    s.x = std::move(x);
    return s;
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dominates: length mismatch");
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

bool constrained_dominates(const Solution& a, const Solution& b) {
    if (a.violation != b.violation) {
        if (a.violation == 0.0) return true;
        if (b.violation == 0.0) return false;
        return a.violation < b.violation;
    }
    return dominates(a.f, b.f);
}

std::vector<std::vector<int>> nondominated_sort(std::span<const Solution> set) {
    const int n = static_cast<int>(set.size());
    if (n == 0) throw std::invalid_argument("nondominated_sort: empty set");
    const std::size_t m = set[0].f.size();
    for (const auto& s : set)
        if (s.f.size() != m)
            throw std::invalid_argument("nondominated_sort: objective length mismatch");

    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<int>> dominated_by(n);
    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            if (constrained_dominates(set[p], set[q])) {
                dominated_by[p].push_back(q);
                ++domination_count[q];
            } else if (constrained_dominates(set[q], set[p])) {
                dominated_by[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (int p = 0; p < n; ++p)
        if (domination_count[p] == 0) fronts[0].push_back(p);

    std::size_t k = 0;
    while (!fronts[k].empty()) {
        std::vector<int> next;
        for (int p : fronts[k]) {
            for (int q : dominated_by[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
        ++k;
    }
    fronts.pop_back();
    return fronts;
}

std::vector<int> nondominated_indices(std::span<const Solution> set) {
    const int n = static_cast<int>(set.size());
    std::vector<int> nd;
    for (int p = 0; p < n; ++p) {
        bool dominated = false;
        for (int q = 0; q < n && !dominated; ++q)
            if (q != p && constrained_dominates(set[q], set[p])) dominated = true;
        if (!dominated) nd.push_back(p);
    }
    return nd;
}

std::vector<double> crowding_distance(std::span<const Solution> front) {
    const int n = static_cast<int>(front.size());
    if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
    const std::size_t m = front[0].f.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<int> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return front[a].f[obj] < front[b].f[obj]; });
        const double lo = front[order.front()].f[obj];
        const double hi = front[order.back()].f[obj];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi <= lo) continue;
        for (int i = 1; i + 1 < n; ++i) {
            const int idx = order[i];
            if (dist[idx] == inf) continue;
            dist[idx] += (front[order[i + 1]].f[obj] - front[order[i - 1]].f[obj]) / (hi - lo);
        }
    }
    return dist;
}

std::vector<double> normalize_one(std::span<const double> f, std::span<const double> ideal,
                                  std::span<const double> nadir) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double range = nadir[i] - ideal[i];
        out[i] = range > 0.0 ? (f[i] - ideal[i]) / range : 0.0;
    }
    return out;
}

std::vector<std::vector<double>> normalize_objectives(std::span<const std::vector<double>> set,
                                                      std::span<const double> ideal,
                                                      std::span<const double> nadir,
                                                      bool* outside_range) {
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        if (!std::isfinite(ideal[i]) || !std::isfinite(nadir[i]))
            throw std::runtime_error("normalize_objectives: non-finite ideal/nadir");
        if (ideal[i] > nadir[i])
            throw std::invalid_argument("normalize_objectives: ideal above nadir");
    }
    bool outside = false;
    std::vector<std::vector<double>> out;
    out.reserve(set.size());
    for (const auto& f : set) {
        for (double v : f)
            if (!std::isfinite(v)) throw std::runtime_error("normalize_objectives: non-finite input");
        out.push_back(normalize_one(f, ideal, nadir));
        for (double v : out.back())
            if (v < 0.0 || v > 1.0) outside = true;
    }
    if (outside_range) *outside_range = outside;
    return out;
}

bool same_decision_vector(std::span<const double> a, std::span<const double> b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (std::fabs(a[j] - b[j]) > tol) return false;
    return true;
}

namespace {

std::uint64_t hash_decision_vector(const std::vector<double>& x) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (double v : x) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        h ^= bits;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

std::vector<Solution> deduplicate(std::span<const Solution> set) {
    std::vector<Solution> kept;
    kept.reserve(set.size());
    std::unordered_set<std::uint64_t> seen_exact;
    for (const auto& s : set) {
        const std::uint64_t h = hash_decision_vector(s.x);
        bool duplicate = false;
        if (!seen_exact.insert(h).second) {
            // hash hit: confirm against retained entries
            for (const auto& k : kept)
                if (same_decision_vector(k.x, s.x, 0.0)) { duplicate = true; break; }
        }
        if (!duplicate) {
            for (const auto& k : kept)
                if (same_decision_vector(k.x, s.x)) { duplicate = true; break; }
        }
        if (!duplicate) kept.push_back(s);
    }
    return kept;
}

void objective_extents(std::span<const Solution> set, std::vector<double>& ideal,
                       std::vector<double>& nadir) {
    const std::size_t m = set.empty() ? 0 : set[0].f.size();
    ideal.assign(m, std::numeric_limits<double>::infinity());
    nadir.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& s : set)
        for (std::size_t i = 0; i < m; ++i) {
            ideal[i] = std::min(ideal[i], s.f[i]);
            nadir[i] = std::max(nadir[i], s.f[i]);
        }
}

} // namespace taea
