#include "taea/trust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace taea {

namespace {

double clip01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

} // namespace

void TrustParams::validate() const {
    if (!(tau_s >= 0.0 && tau_s < tau_e && tau_e <= 1.0))
        throw std::invalid_argument("TrustParams: need 0 <= tau_s < tau_e <= 1");
    if (!(mu > 0.0)) throw std::invalid_argument("TrustParams: mu must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("TrustParams: kappa must be positive");
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 ||
        std::fabs(alpha + beta + gamma - 1.0) > 1e-9)
        throw std::invalid_argument("TrustParams: maturity weights must be nonnegative and sum to 1");
    if (!(p_min >= 0.0 && p_min < p_max && p_max <= 1.0))
        throw std::invalid_argument("TrustParams: need 0 <= p_min < p_max <= 1");
    if (!(lambda_exp > 0.0)) throw std::invalid_argument("TrustParams: lambda_exp must be positive");
    if (k_min < 1) throw std::invalid_argument("TrustParams: k_min must be >= 1");
    if (k_max != 0 && k_max < k_min)
        throw std::invalid_argument("TrustParams: k_max must be >= k_min");
    if (!(rho_min >= 0.0 && rho_min < rho_max && rho_max <= 1.0))
        throw std::invalid_argument("TrustParams: need 0 <= rho_min < rho_max <= 1");
}

TrustParams TrustParams::resolved(int population_size, int num_objectives, int group_count) const {
    TrustParams r = *this;
    if (r.k_max <= 0) r.k_max = group_count;
    r.k_max = std::min(r.k_max, group_count);
    r.k_min = std::min(r.k_min, r.k_max);
    if (r.bins <= 0)
        r.bins = static_cast<int>(reference_directions(num_objectives, population_size).size());
    r.validate();
    return r;
}

void compute_progress_stage(int t, int max_generations, const TrustParams& params, double& p,
                            double& phi) {
    if (max_generations < 2)
        throw std::invalid_argument("compute_progress_stage: need at least 2 generations");
    if (t < 0 || t >= max_generations)
        throw std::invalid_argument("compute_progress_stage: generation index out of range");
    p = static_cast<double>(t) / static_cast<double>(max_generations - 1);
    phi = clip01((p - params.tau_s) / (params.tau_e - params.tau_s));
}

std::vector<std::vector<double>> reference_directions(int num_objectives, int requested) {
    if (requested < 1) requested = 1;
    std::vector<std::vector<double>> dirs;
    if (num_objectives <= 2) {
        const int b = std::max(2, requested);
        dirs.reserve(b);
        for (int i = 0; i < b; ++i) {
            const double w = static_cast<double>(i) / static_cast<double>(b - 1);
            dirs.push_back({w, 1.0 - w});
        }
        return dirs;
    }
    // simplex lattice: choose the division count whose size is closest to the
    // request (ties to the smaller lattice)
    auto lattice_size = [&](int h) {
        long s = 1;
        for (int i = 1; i < num_objectives; ++i) s = s * (h + i) / i;
        return s;
    };
    int best_h = 1;
    long best_diff = std::labs(lattice_size(1) - requested);
    for (int h = 2; h <= 2 * requested + num_objectives; ++h) {
        const long sz = lattice_size(h);
        const long diff = std::labs(sz - requested);
        if (diff < best_diff) {
            best_diff = diff;
            best_h = h;
        }
        if (sz > 4L * requested) break;
    }
    const int h = best_h;
    std::vector<int> counts(num_objectives, 0);
    // enumerate all compositions of h into num_objectives parts
    std::vector<int> stack;
    std::function<void(int, int)> recurse = [&](int dim, int remaining) {
        if (dim == num_objectives - 1) {
            std::vector<double> d(num_objectives);
            for (int i = 0; i < dim; ++i) d[i] = static_cast<double>(stack[i]) / h;
            d[dim] = static_cast<double>(remaining) / h;
            dirs.push_back(std::move(d));
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            stack.push_back(v);
            recurse(dim + 1, remaining - v);
            stack.pop_back();
        }
    };
    recurse(0, h);
    return dirs;
}

int nearest_direction(std::span<const double> v,
                      std::span<const std::vector<double>> directions) {
    double norm_v = 0.0;
    for (double c : v) norm_v += c * c;
    if (norm_v <= 0.0) return 0;
    norm_v = std::sqrt(norm_v);
    int best = 0;
    double best_cos = -2.0;
    for (std::size_t b = 0; b < directions.size(); ++b) {
        double dot = 0.0, norm_d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            dot += v[i] * directions[b][i];
            norm_d += directions[b][i] * directions[b][i];
        }
        const double c = dot / (norm_v * std::sqrt(norm_d));
        if (c > best_cos + 1e-15) {
            best_cos = c;
            best = static_cast<int>(b);
        }
    }
    return best;
}

int occupied_direction_count(std::span<const std::vector<double>> normalized_points,
                             std::span<const std::vector<double>> directions) {
    std::vector<char> occupied(directions.size(), 0);
    for (const auto& p : normalized_points) occupied[nearest_direction(p, directions)] = 1;
    return static_cast<int>(std::count(occupied.begin(), occupied.end(), 1));
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

int count_front_segments(std::span<const std::vector<double>> normalized_points) {
    const int n = static_cast<int>(normalized_points.size());
    if (n <= 1) return std::max(n, 1);
    if (normalized_points[0].size() == 2) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return normalized_points[a][0] < normalized_points[b][0];
        });
        std::vector<double> gaps(n - 1);
        for (int i = 0; i + 1 < n; ++i)
            gaps[i] = euclidean(normalized_points[order[i]], normalized_points[order[i + 1]]);
        const double cutoff = 3.0 * median_of(gaps);
        int segments = 1;
        for (double g : gaps)
            if (g > cutoff) ++segments;
        return segments;
    }
    // M >= 3: single linkage with a 3x-median nearest-neighbor cutoff
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = euclidean(normalized_points[i], normalized_points[j]);
            nn[i] = std::min(nn[i], d);
            nn[j] = std::min(nn[j], d);
        }
    const double cutoff = 3.0 * median_of(nn);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (euclidean(normalized_points[i], normalized_points[j]) <= cutoff)
                parent[find(i)] = find(j);
    int segments = 0;
    for (int i = 0; i < n; ++i)
        if (find(i) == i) ++segments;
    return segments;
}

MaturityResult compute_maturity(const Population& archive, const TrustParams& params,
                                std::span<const double> ideal, std::span<const double> nadir) {
    MaturityResult r;
    if (archive.empty()) return r;

    const auto nd_idx = nondominated_indices(archive.members);
    std::vector<std::vector<double>> nd_normalized;
    nd_normalized.reserve(nd_idx.size());
    for (int i : nd_idx)
        nd_normalized.push_back(normalize_one(archive[i].f, ideal, nadir));

    const double mu_n = params.mu * static_cast<double>(std::max(archive.capacity, 1));
    r.m_size = std::min(static_cast<double>(nd_idx.size()) / mu_n, 1.0);

    const auto dirs =
        reference_directions(static_cast<int>(archive[0].f.size()), params.bins);
    r.m_cov = static_cast<double>(occupied_direction_count(nd_normalized, dirs)) /
              static_cast<double>(dirs.size());

    const int k_seg = count_front_segments(nd_normalized);
    r.m_shape = 1.0 / (1.0 + params.kappa * (k_seg - 1));

    r.maturity = params.alpha * r.m_size + params.beta * r.m_cov + params.gamma * r.m_shape;
    return r;
}

double compute_trust(double phi, double maturity) { return phi * maturity; }

SearchControls derive_controls(double trust, const TrustParams& params) {
    SearchControls c;
    c.p_explore = params.p_max - (params.p_max - params.p_min) * std::pow(trust, params.lambda_exp);
    c.k_active = static_cast<int>(
        std::ceil(params.k_min + (params.k_max - params.k_min) * trust));
    c.k_active = std::clamp(c.k_active, params.k_min, params.k_max);
    c.rho = params.rho_min + (params.rho_max - params.rho_min) * trust;
    return c;
}

TrustState compute_trust_state(int t, int max_generations, const Population& archive,
                               const TrustParams& params, std::span<const double> ideal,
                               std::span<const double> nadir) {
    TrustState s;
    compute_progress_stage(t, max_generations, params, s.p, s.phi);
    const auto m = compute_maturity(archive, params, ideal, nadir);
    s.m_size = m.m_size;
    s.m_cov = m.m_cov;
    s.m_shape = m.m_shape;
    s.maturity = m.maturity;
    s.trust = compute_trust(s.phi, s.maturity);
    return s;
}

} // namespace taea
