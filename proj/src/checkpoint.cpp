#include "taea/checkpoint.hpp"

#include <cmath>
#include <stdexcept>

namespace taea {

void CheckpointParams::validate() const {
    if (lambda_d < 0.0 || lambda_c < 0.0 || lambda_n < 0.0)
        throw std::invalid_argument("CheckpointParams: score weights must be nonnegative");
    if (!(eta_gamma > 0.0 && eta_gamma < 1.0) || !(eta_r > 0.0 && eta_r < 1.0))
        throw std::invalid_argument("CheckpointParams: refresh thresholds must be in (0,1)");
    if (!(tau_b >= 0.0 && tau_b < 1.0))
        throw std::invalid_argument("CheckpointParams: tau_b must be in [0,1)");
    if (!(gamma_r > 1.0) || !(gamma_gamma > 1.0))
        throw std::invalid_argument("CheckpointParams: degradation thresholds must exceed 1");
}

double structural_residual(const Solution& solution, const VariableStructure& structure) {
    const auto& conv = structure.convergence_indices();
    if (conv.empty()) return 0.0;
    double acc = 0.0;
    for (int j : conv)
        acc += std::fabs(structure.transform(j, solution.x) - structure.target_z(j, solution.x));
    return acc / static_cast<double>(conv.size());
}

double composite_score(double mean_residual, double obj_norm, double coverage, double nd_ratio,
                       const CheckpointParams& params) {
    return mean_residual + params.lambda_d * obj_norm - params.lambda_c * coverage -
           params.lambda_n * nd_ratio;
}

ArchiveScore archive_score(const Population& archive, const VariableStructure& structure,
                           const CheckpointParams& params, const TrustParams& trust_params,
                           std::span<const double> ideal, std::span<const double> nadir) {
    if (archive.empty()) throw std::invalid_argument("archive_score: empty archive");
    ArchiveScore s;
    const int n = static_cast<int>(archive.size());
    for (const auto& sol : archive.members) {
        s.mean_residual += structural_residual(sol, structure);
        const auto nf = normalize_one(sol.f, ideal, nadir);
        double norm = 0.0;
        for (double v : nf) norm += v * v;
        s.obj_norm += std::sqrt(norm);
    }
    s.mean_residual /= n;
    s.obj_norm /= n;

    const auto m = compute_maturity(archive, trust_params, ideal, nadir);
    s.coverage = m.m_cov;
    s.nd_ratio = static_cast<double>(nondominated_indices(archive.members).size()) /
                 static_cast<double>(n);
    s.gamma = composite_score(s.mean_residual, s.obj_norm, s.coverage, s.nd_ratio, params);
    return s;
}

Population stabilize(const Population& intermediate, Checkpoint& ckpt, double p,
                     const VariableStructure& structure, const CheckpointParams& params,
                     const TrustParams& trust_params, std::span<const double> ideal,
                     std::span<const double> nadir, StabilizeEvent& event) {
    if (intermediate.empty()) throw std::invalid_argument("stabilize: empty intermediate archive");
    if (!ckpt.initialized) throw std::invalid_argument("stabilize: uninitialized checkpoint");

    const ArchiveScore current =
        archive_score(intermediate, structure, params, trust_params, ideal, nadir);
    const ArchiveScore entry_score = ckpt.score;
    const Population entry_archive = ckpt.archive;

    const bool refresh = current.gamma < params.eta_gamma * entry_score.gamma ||
                         current.mean_residual < params.eta_r * entry_score.mean_residual;
    if (refresh) {
        ckpt.archive = intermediate;
        ckpt.score = current;
        ckpt.ideal.assign(ideal.begin(), ideal.end());
        ckpt.nadir.assign(nadir.begin(), nadir.end());
        event = StabilizeEvent::refresh;
        return intermediate;
    }

    // degradation test against the checkpoint state at entry; a refresh above
    // already certifies the intermediate archive, so the branches stay
    // mutually exclusive even when scores turn negative
    const bool degraded = p > params.tau_b &&
                          current.mean_residual > params.gamma_r * entry_score.mean_residual &&
                          current.gamma > params.gamma_gamma * entry_score.gamma;
    if (degraded) {
        event = StabilizeEvent::rollback;
        return entry_archive;
    }
    event = StabilizeEvent::none;
    return intermediate;
}

} // namespace taea
