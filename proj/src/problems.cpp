#include "taea/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace taea {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

Solution ProblemDef::evaluated(std::vector<double> x) const {
    Solution s = make_solution(std::move(x), bounds);
    evaluate(s.x, s.f, s.violation);
    return s;
}

double LsmopLayout::linkage_coefficient(int j) const {
    const double idx = static_cast<double>(j + 1); // 1-based variable index
    if (linear_linkage) return 1.0 + idx / d;
    return 1.0 + std::cos(idx / d * kPi / 2.0);
}

int LsmopLayout::owning_objective(int j) const {
    const int rel = j - (m - 1);
    if (rel < 0) return -1;
    for (int i = 0; i < m; ++i) {
        const int begin = offset[i];
        const int end = begin + nk * sublen[i];
        if (rel >= begin && rel < end) return i;
    }
    return -1;
}

BasicFn lsmop_basic_fn(int id, int objective_index) {
    const bool odd = objective_index % 2 == 0; // first objective counts as odd
    switch (id) {
        case 1: return BasicFn::sphere;
        case 2: return odd ? BasicFn::griewank : BasicFn::schwefel;
        case 3: return odd ? BasicFn::rastrigin : BasicFn::rosenbrock;
        case 4: return odd ? BasicFn::ackley : BasicFn::griewank;
        case 5: return BasicFn::sphere;
        case 6: return odd ? BasicFn::rosenbrock : BasicFn::schwefel;
        case 7: return odd ? BasicFn::ackley : BasicFn::rosenbrock;
        case 8: return odd ? BasicFn::griewank : BasicFn::sphere;
        case 9: return odd ? BasicFn::sphere : BasicFn::ackley;
        default: throw std::invalid_argument("lsmop_basic_fn: id out of range");
    }
}

double evaluate_basic(BasicFn fn, std::span<const double> y) {
    const std::size_t l = y.size();
    switch (fn) {
        case BasicFn::sphere: {
            double s = 0.0;
            for (double v : y) s += v * v;
            return s;
        }
        case BasicFn::griewank: {
            double s = 0.0, p = 1.0;
            for (std::size_t i = 0; i < l; ++i) {
                s += y[i] * y[i];
                p *= std::cos(y[i] / std::sqrt(static_cast<double>(i + 1)));
            }
            return s / 4000.0 - p + 1.0;
        }
        case BasicFn::schwefel: {
            double best = 0.0;
            for (double v : y) best = std::max(best, std::fabs(v));
            return best;
        }
        case BasicFn::rastrigin: {
            double s = 0.0;
            for (double v : y) s += v * v - 10.0 * std::cos(2.0 * kPi * v) + 10.0;
            return s;
        }
        case BasicFn::rosenbrock: {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < l; ++i) {
                const double a = y[i] * y[i] - y[i + 1];
                const double b = y[i] - 1.0;
                s += 100.0 * a * a + b * b;
            }
            return s;
        }
        case BasicFn::ackley: {
            double sq = 0.0, cs = 0.0;
            for (double v : y) {
                sq += v * v;
                cs += std::cos(2.0 * kPi * v);
            }
            const double n = static_cast<double>(l);
            return 20.0 - 20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) +
                   std::exp(1.0);
        }
    }
    return 0.0;
}

LsmopLayout lsmop_layout(int id, int m, int d) {
    if (id < 1 || id > 9) throw std::invalid_argument("lsmop_layout: id must be in 1..9");
    if (m < 2 || m > 3) throw std::invalid_argument("lsmop_layout: 2 or 3 objectives supported");
    if (d <= m) throw std::invalid_argument("lsmop_layout: dimension too small");

    LsmopLayout lay;
    lay.id = id;
    lay.m = m;
    lay.d = d;
    lay.linear_linkage = id <= 4;

    std::vector<double> c(m);
    c[0] = 3.8 * 0.1 * (1.0 - 0.1);
    for (int i = 1; i < m; ++i) c[i] = 3.8 * c[i - 1] * (1.0 - c[i - 1]);
    const double c_sum = std::accumulate(c.begin(), c.end(), 0.0);

    const int dist = d - m + 1;
    lay.nk = std::clamp(dist / m, 1, 5);
    lay.sublen.resize(m);
    for (int i = 0; i < m; ++i)
        lay.sublen[i] = std::max(
            1, static_cast<int>(std::floor(c[i] / c_sum * dist / lay.nk)));
    // shrink when the minimum-one rule overflowed the distance block
    auto used = [&] {
        int u = 0;
        for (int s : lay.sublen) u += lay.nk * s;
        return u;
    };
    while (used() > dist) {
        const int widest =
            static_cast<int>(std::max_element(lay.sublen.begin(), lay.sublen.end()) -
                             lay.sublen.begin());
        if (lay.sublen[widest] <= 1) break;
        --lay.sublen[widest];
    }
    lay.offset.resize(m);
    int acc = 0;
    for (int i = 0; i < m; ++i) {
        lay.offset[i] = acc;
        acc += lay.nk * lay.sublen[i];
    }
    return lay;
}

namespace {

std::vector<double> lsmop_objectives(const LsmopLayout& lay, std::span<const double> x) {
    const int m = lay.m, d = lay.d;
    std::vector<double> y(x.begin(), x.end());
    for (int j = m - 1; j < d; ++j)
        y[j] = lay.linkage_coefficient(j) * y[j] - 10.0 * x[0];

    std::vector<double> g(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const BasicFn fn = lsmop_basic_fn(lay.id, i);
        for (int c = 0; c < lay.nk; ++c) {
            const int start = (m - 1) + lay.offset[i] + c * lay.sublen[i];
            g[i] += evaluate_basic(fn, std::span<const double>(y).subspan(start, lay.sublen[i]));
        }
        g[i] /= static_cast<double>(lay.sublen[i]) * lay.nk;
    }

    std::vector<double> f(m);
    if (lay.id <= 4) {
        // linear front shape
        for (int i = 0; i < m; ++i) {
            double v = 1.0 + g[i];
            for (int q = 0; q < m - 1 - i; ++q) v *= x[q];
            if (i > 0) v *= 1.0 - x[m - 1 - i];
            f[i] = v;
        }
    } else if (lay.id <= 8) {
        // convex front shape with overlapped variable groups
        for (int i = 0; i < m; ++i) {
            double v = 1.0 + g[i] + (i + 1 < m ? g[i + 1] : 0.0);
            for (int q = 0; q < m - 1 - i; ++q) v *= std::cos(x[q] * kPi / 2.0);
            if (i > 0) v *= std::sin(x[m - 1 - i] * kPi / 2.0);
            f[i] = v;
        }
    } else {
        // disconnected front with a shared distance term
        double g_total = 1.0;
        for (int i = 0; i < m; ++i) g_total += g[i];
        double h = static_cast<double>(m);
        for (int i = 0; i < m - 1; ++i) {
            f[i] = x[i];
            h -= f[i] / (1.0 + g_total) * (1.0 + std::sin(3.0 * kPi * f[i]));
        }
        f[m - 1] = (1.0 + g_total) * h;
    }
    return f;
}

} // namespace

std::vector<double> evaluate_lsmop(int id, int m, int d, std::span<const double> x) {
    const LsmopLayout lay = lsmop_layout(id, m, d);
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("evaluate_lsmop: decision vector length mismatch");
    return lsmop_objectives(lay, x);
}

namespace {

// das-dennis simplex lattice with at least n points, stride-selected to n
std::vector<std::vector<double>> simplex_points(int m, int n) {
    if (m == 2) {
        std::vector<std::vector<double>> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            pts.push_back({t, 1.0 - t});
        }
        return pts;
    }
    int h = 1;
    auto count = [&](int hh) { return (hh + 1) * (hh + 2) / 2; };
    while (count(h) < n) ++h;
    std::vector<std::vector<double>> lattice;
    lattice.reserve(count(h));
    for (int i = 0; i <= h; ++i)
        for (int j = 0; j <= h - i; ++j)
            lattice.push_back({static_cast<double>(i) / h, static_cast<double>(j) / h,
                               static_cast<double>(h - i - j) / h});
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    const int total = static_cast<int>(lattice.size());
    for (int i = 0; i < n; ++i) {
        const int idx = n == 1 ? 0 : static_cast<int>(
            std::llround(static_cast<double>(i) * (total - 1) / (n - 1)));
        pts.push_back(lattice[idx]);
    }
    return pts;
}

// ZDT3-style disconnected parameter values with strictly increasing
// x*(1+sin(3*pi*x)), which keeps product-grid samples mutually nondominated
std::vector<double> disconnected_params(int n) {
    const double i1 = 0.0, i2 = 0.251412, i3 = 0.631627, i4 = 0.859401;
    const double median = (i2 - i1) / ((i4 - i3) + (i2 - i1));
    auto remap = [&](double u) {
        if (u <= median) return i1 + u * (i2 - i1) / median;
        return i3 + (u - median) * (i4 - i3) / (1.0 - median);
    };
    auto gfun = [](double v) { return v * (1.0 + std::sin(3.0 * kPi * v)); };

    const int dense = std::max(8 * n, 400);
    std::vector<double> kept;
    double best_g = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dense; ++i) {
        const double v = remap(static_cast<double>(i) / (dense - 1));
        const double g = gfun(v);
        if (g > best_g) {
            best_g = g;
            kept.push_back(v);
        }
    }
    std::vector<double> out;
    out.reserve(n);
    const int total = static_cast<int>(kept.size());
    for (int i = 0; i < n; ++i) {
        const int idx = n == 1 ? 0 : static_cast<int>(
            std::llround(static_cast<double>(i) * (total - 1) / (n - 1)));
        out.push_back(kept[idx]);
    }
    return out;
}

} // namespace

std::vector<std::vector<double>> true_front_sample(int id, int m, int n) {
    if (n < m) throw std::invalid_argument("true_front_sample: need at least M points");
    if (id <= 4) return simplex_points(m, n);
    if (id <= 8) {
        if (m == 2) {
            std::vector<std::vector<double>> pts;
            pts.reserve(n);
            for (int i = 0; i < n; ++i) {
                const double theta = static_cast<double>(i) / (n - 1) * kPi / 2.0;
                pts.push_back({std::sin(theta), std::cos(theta)});
            }
            return pts;
        }
        auto pts = simplex_points(m, n);
        for (auto& p : pts) {
            double norm = 0.0;
            for (double v : p) norm += v * v;
            norm = std::sqrt(norm);
            if (norm > 0.0)
                for (double& v : p) v /= norm;
            else
                p.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
        }
        return pts;
    }
    // id == 9
    auto h_tail = [&](std::span<const double> xs) {
        double h = static_cast<double>(m);
        for (double x : xs) h -= x / 2.0 * (1.0 + std::sin(3.0 * kPi * x));
        return 2.0 * h;
    };
    std::vector<std::vector<double>> pts;
    if (m == 2) {
        const auto params = disconnected_params(n);
        for (double x : params) pts.push_back({x, h_tail(std::span<const double>(&x, 1))});
        return pts;
    }
    const int per_dim = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const auto params = disconnected_params(per_dim);
    std::vector<std::vector<double>> grid;
    for (double a : params)
        for (double b : params) {
            const double xs[2] = {a, b};
            grid.push_back({a, b, h_tail(xs)});
        }
    pts.reserve(n);
    const int total = static_cast<int>(grid.size());
    for (int i = 0; i < n; ++i) {
        const int idx = n == 1 ? 0 : static_cast<int>(
            std::llround(static_cast<double>(i) * (total - 1) / (n - 1)));
        pts.push_back(grid[idx]);
    }
    return pts;
}

ProblemDef lsmop_problem(int id, int m, int d, int convergence_groups) {
    const LsmopLayout lay = lsmop_layout(id, m, d);

    std::vector<double> lower(d, 0.0), upper(d, 1.0);
    for (int j = m - 1; j < d; ++j) upper[j] = 10.0;
    Bounds bounds(std::move(lower), std::move(upper));

    // distance variable j is optimal when its linkage transform hits the basic
    // function's minimizer (1 for Rosenbrock blocks, 0 otherwise)
    std::vector<double> coef(d, 1.0), ystar(d, 0.0);
    for (int j = m - 1; j < d; ++j) {
        coef[j] = lay.linkage_coefficient(j);
        const int owner = lay.owning_objective(j);
        if (owner >= 0 && lsmop_basic_fn(id, owner) == BasicFn::rosenbrock) ystar[j] = 1.0;
    }
    ProblemDef def;
    def.name = "LSMOP" + std::to_string(id);
    def.num_objectives = m;
    def.dimension = d;
    def.bounds = bounds;
    def.evaluate = [lay](std::span<const double> x, std::vector<double>& f, double& violation) {
        f = lsmop_objectives(lay, x);
        violation = 0.0;
    };
    def.structure = VariableStructure(
        contiguous_grouping(d, m - 1, convergence_groups), bounds,
        [m, coef = std::move(coef), ystar = std::move(ystar)](int j, std::span<const double> x) {
            if (j < m - 1) return x[j];
            return (ystar[j] + 10.0 * x[0]) / coef[j];
        });
    def.front_sampler = [id, m](int n) { return true_front_sample(id, m, n); };
    return def;
}

} // namespace taea
