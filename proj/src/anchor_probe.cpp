#include "taea/anchor_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace taea {

void ProbeParams::validate() const {
    if (!(p_start >= 0.0 && p_start < 1.0))
        throw std::invalid_argument("ProbeParams: p_start must be in [0,1)");
    if (delta0 < 0.0 || delta1 < 0.0 || delta2 < 0.0)
        throw std::invalid_argument("ProbeParams: delta terms must be nonnegative");
    if (!(delta_max >= 0.0 && delta_max <= 1.0))
        throw std::invalid_argument("ProbeParams: delta_max must be in [0,1]");
    if (!(beta_lo >= 0.0 && beta_lo <= beta_hi && beta_hi <= 1.0))
        throw std::invalid_argument("ProbeParams: beta range must be within [0,1]");
    if (rho_probe_fixed < 0.0 || rho_probe_fixed > 1.0)
        throw std::invalid_argument("ProbeParams: rho_probe_fixed must be in [0,1]");
}

void compensation_intensity(double trust, double p, double nd_ratio, int population_size,
                            const ProbeParams& params, double& delta, int& n_probe) {
    const double raw = params.delta0 + params.delta1 * (1.0 - trust) +
                       params.delta2 * (1.0 - nd_ratio);
    if (p < params.p_start) {
        delta = 0.0;
    } else {
        delta = std::clamp(raw, 0.0, params.delta_max);
    }
    // epsilon guard: the ceiling is meant over exact reals, not over the
    // accumulated rounding of the delta terms
    n_probe = static_cast<int>(std::ceil(population_size * delta - 1e-9));
}

namespace {

double front_distance(std::span<const double> a, std::span<const double> b,
                      std::span<const int> front_dims, const Bounds& bounds) {
    double s = 0.0;
    for (std::size_t i = 0; i < front_dims.size(); ++i) {
        const int j = front_dims[i];
        const double d = (a[i] - b[i]) / bounds.range(j);
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace

std::vector<std::vector<double>> build_anchor_set(const VariableStructure& structure,
                                                  const Population& archive, int count) {
    if (count < 1) throw std::invalid_argument("build_anchor_set: count must be >= 1");
    const auto& front_dims = structure.front_group();
    const auto& bounds = structure.bounds();
    const int fd = static_cast<int>(front_dims.size());

    std::vector<std::vector<double>> anchors;
    if (fd <= 4) {
        for (int mask = 0; mask < (1 << fd); ++mask) {
            std::vector<double> a(fd);
            for (int i = 0; i < fd; ++i) {
                const int j = front_dims[i];
                a[i] = (mask >> i) & 1 ? bounds.upper[j] : bounds.lower[j];
            }
            anchors.push_back(std::move(a));
        }
    }

    // uniform lattice; density chosen so corners + lattice stay within the cap
    // and cover the requested count when room remains
    const int cap = 200;
    auto lattice_total = [&](int k) {
        double t = 1.0;
        for (int i = 0; i < fd; ++i) {
            t *= k;
            if (t > 4.0 * cap) return 4.0 * cap;
        }
        return t;
    };
    int per_dim = 10;
    while (per_dim > 2 && anchors.size() + lattice_total(per_dim) > cap) --per_dim;
    while (anchors.size() + lattice_total(per_dim) < static_cast<std::size_t>(count) &&
           anchors.size() + lattice_total(per_dim + 1) <= cap)
        ++per_dim;
    std::vector<int> idx(fd, 0);
    while (true) {
        std::vector<double> a(fd);
        for (int i = 0; i < fd; ++i) {
            const int j = front_dims[i];
            a[i] = bounds.lower[j] + bounds.range(j) * idx[i] / static_cast<double>(per_dim - 1);
        }
        anchors.push_back(std::move(a));
        int carry = fd - 1;
        while (carry >= 0 && ++idx[carry] == per_dim) idx[carry--] = 0;
        if (carry < 0) break;
        if (static_cast<int>(anchors.size()) >= cap) break;
    }

    // rank by isolation from the projected nondominated archive
    std::vector<double> isolation(anchors.size(), std::numeric_limits<double>::infinity());
    if (!archive.empty()) {
        const auto nd_idx = nondominated_indices(archive.members);
        for (std::size_t a = 0; a < anchors.size(); ++a) {
            double best = std::numeric_limits<double>::infinity();
            for (int i : nd_idx) {
                std::vector<double> proj(fd);
                for (int q = 0; q < fd; ++q) proj[q] = archive[i].x[front_dims[q]];
                best = std::min(best, front_distance(anchors[a], proj, front_dims, bounds));
            }
            isolation[a] = best;
        }
    }
    std::vector<int> order(anchors.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return isolation[a] > isolation[b]; });
    std::vector<std::vector<double>> ranked;
    ranked.reserve(anchors.size());
    for (int i : order) ranked.push_back(std::move(anchors[i]));
    return ranked;
}

Solution generate_probe(const Solution& elite, std::span<const double> anchor, double beta,
                        double rho_probe, const VariableStructure& structure, RngStream& rng) {
    const auto& bounds = structure.bounds();
    const auto& front_dims = structure.front_group();
    Solution probe;
    probe.x = elite.x;
    for (std::size_t i = 0; i < front_dims.size(); ++i) {
        const int j = front_dims[i];
        probe.x[j] = (1.0 - beta) * elite.x[j] + beta * anchor[i];
    }
    for (int j : structure.convergence_indices()) {
        double raw = elite.x[j] + 0.05 * bounds.range(j) * rng.gaussian();
        raw = bounds.clip(j, raw);
        const double target = structure.target(j, probe.x);
        probe.x[j] = (1.0 - rho_probe) * raw + rho_probe * target;
    }
    clip_to_bounds(probe.x, bounds);
    return probe;
}

std::vector<Solution> probe_offspring(const Population& convergence_archive, double trust,
                                      double p, const SearchControls& controls,
                                      const VariableStructure& structure,
                                      const ProbeParams& params, int population_size,
                                      double elite_fraction, const RngSeeder& seeder,
                                      int generation, ProbeCounters* counters) {
    if (p < params.p_start) return {};
    double nd_ratio = 0.0;
    if (!convergence_archive.empty()) {
        nd_ratio = static_cast<double>(nondominated_indices(convergence_archive.members).size()) /
                   static_cast<double>(convergence_archive.size());
    }
    double delta = 0.0;
    int n_probe = 0;
    compensation_intensity(trust, p, nd_ratio, population_size, params, delta, n_probe);
    if (n_probe <= 0) return {};

    std::vector<Solution> elite =
        select_elite(convergence_archive, elite_fraction, population_size);
    if (elite.empty()) {
        if (counters) ++counters->empty_elite_fallbacks;
        elite = convergence_archive.members;
        if (elite.empty()) return {};
    }

    const auto anchors = build_anchor_set(structure, convergence_archive,
                                          std::max(2 * n_probe, 1));
    const double rho_probe =
        params.rho_probe_follows_rho ? controls.rho : params.rho_probe_fixed;

    std::vector<Solution> probes;
    probes.reserve(n_probe);
    for (int q = 0; q < n_probe; ++q) {
        RngStream rng = seeder.stream(generation, RngRole::probe, q);
        const Solution& base = elite[rng.uniform_int(0, static_cast<int>(elite.size()) - 1)];
        const auto& anchor = anchors[q % anchors.size()];
        const double beta = rng.uniform(params.beta_lo, params.beta_hi);
        probes.push_back(generate_probe(base, anchor, beta, rho_probe, structure, rng));
    }
    return probes;
}

} // namespace taea
