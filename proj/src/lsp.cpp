// SPDX-License-Identifier: Apache-2.0
#include "gscm/lsp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gscm {

double spatial_correlation(double d_m, double corr_dist_m)
{
    if (corr_dist_m <= 0)
        throw std::invalid_argument("spatial_correlation: corr_dist must be positive");
    if (d_m < 0)
        throw std::invalid_argument("spatial_correlation: negative distance");
    return std::exp(-d_m / corr_dist_m);
}

namespace {

/// Correlated standard-normal field over the given 2D positions, exponential
/// kernel exp(-d/cd). Exact (Cholesky) route; duplicate positions share a value.
std::vector<double> exact_field(const std::vector<std::pair<double, double>>& pos, double cd,
                                RandomStream& rng)
{
    // Deduplicate identical positions so co-located links get identical draws.
    std::map<std::pair<double, double>, int> unique;
    std::vector<int> idx(pos.size());
    std::vector<std::pair<double, double>> upos;
    for (size_t i = 0; i < pos.size(); ++i) {
        auto [it, inserted] = unique.try_emplace(pos[i], static_cast<int>(upos.size()));
        if (inserted)
            upos.push_back(pos[i]);
        idx[i] = it->second;
    }
    const int n = static_cast<int>(upos.size());
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double d = std::hypot(upos[i].first - upos[j].first,
                                        upos[i].second - upos[j].second);
            k(i, j) = k(j, i) = std::exp(-d / cd);
        }
    k.diagonal().array() += 1e-10;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("LSP spatial kernel Cholesky failed");
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i)
        g(i) = rng.normal();
    const Eigen::VectorXd z = llt.matrixL() * g;
    std::vector<double> out(pos.size());
    for (size_t i = 0; i < pos.size(); ++i)
        out[i] = z(idx[i]);
    return out;
}

/// Random-Fourier-feature approximation of the same field, O(n * features).
/// Spectral radii for the 2D exponential kernel are drawn by inverse CDF.
std::vector<double> rff_field(const std::vector<std::pair<double, double>>& pos, double cd,
                              int features, RandomStream& rng)
{
    std::vector<double> wx(features), wy(features), ph(features);
    for (int k = 0; k < features; ++k) {
        const double u = rng.uniform();
        const double t = std::sqrt(1.0 / ((1.0 - u) * (1.0 - u)) - 1.0); // radial CDF inverse
        const double ang = rng.uniform(-kPi, kPi);
        wx[k] = t / cd * std::cos(ang);
        wy[k] = t / cd * std::sin(ang);
        ph[k] = rng.uniform(-kPi, kPi);
    }
    const double scale = std::sqrt(2.0 / features);
    std::vector<double> out(pos.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pos.size()); ++i) {
        double s = 0;
        for (int k = 0; k < features; ++k)
            s += std::cos(wx[k] * pos[i].first + wy[k] * pos[i].second + ph[k]);
        out[i] = scale * s;
    }
    return out;
}

} // namespace

std::vector<double> correlated_normal_field(const std::vector<std::pair<double, double>>& pos,
                                            double corr_dist_m, RandomStream& rng,
                                            const LspOptions& opt)
{
    if (corr_dist_m <= 0)
        throw std::invalid_argument("correlated_normal_field: corr_dist must be positive");
    if (pos.empty())
        return {};
    if (static_cast<int>(pos.size()) <= opt.exact_max_links)
        return exact_field(pos, corr_dist_m, rng);
    return rff_field(pos, corr_dist_m, opt.rff_features, rng);
}

std::vector<LspSet> generate_correlated_lsps(const std::vector<LspLinkGeometry>& links,
                                             const LspDistributions& dists, double fc_ghz,
                                             RandomStream& rng, const LspOptions& opt)
{
    const int n = static_cast<int>(links.size());
    std::vector<LspSet> out(n);
    if (n == 0)
        return out;

    // Cross-correlation mixing matrix. LLT when PD; eigenvalue square root as
    // fallback for the semidefinite tables.
    Eigen::Matrix<double, 7, 7> c;
    for (int i = 0; i < kNumLsp; ++i)
        for (int j = 0; j < kNumLsp; ++j)
            c(i, j) = dists.cross_corr[i][j];
    Eigen::Matrix<double, 7, 7> mix;
    Eigen::LLT<Eigen::Matrix<double, 7, 7>> llt(c);
    if (llt.info() == Eigen::Success) {
        mix = llt.matrixL();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(c);
        const auto lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        mix = es.eigenvectors() * lam.asDiagonal();
    }

    std::vector<std::pair<double, double>> pos(n);
    for (int i = 0; i < n; ++i)
        pos[i] = {links[i].ut_position.x, links[i].ut_position.y};

    // One spatial field per parameter, then per-link cross-parameter mixing.
    Eigen::MatrixXd g(kNumLsp, n);
    for (int p = 0; p < kNumLsp; ++p) {
        if (!opt.spatial_correlation) {
            for (int i = 0; i < n; ++i)
                g(p, i) = rng.normal();
            continue;
        }
        const double cd = dists.params[p].corr_dist;
        if (cd <= 0)
            throw std::runtime_error("LSP corr_dist missing for " +
                                     to_string(static_cast<LspParam>(p)));
        const auto field = correlated_normal_field(pos, cd, rng, opt);
        for (int i = 0; i < n; ++i)
            g(p, i) = field[i];
    }

    const Eigen::MatrixXd mixed = mix * g;

    for (int i = 0; i < n; ++i) {
        auto value = [&](LspParam p) {
            const auto& e = dists.entry(p);
            return e.mu(fc_ghz, links[i].d2d_m, links[i].h_ut_m) +
                   e.sigma(fc_ghz) * mixed(static_cast<int>(p), i);
        };
        LspSet s;
        s.sf_db = value(LspParam::SF);
        s.k_db = value(LspParam::K);
        s.ds_s = std::pow(10.0, value(LspParam::DS));
        s.asd_deg = std::min(std::pow(10.0, value(LspParam::ASD)), 104.0);
        s.asa_deg = std::min(std::pow(10.0, value(LspParam::ASA)), 104.0);
        s.zsd_deg = std::min(std::pow(10.0, value(LspParam::ZSD)), 52.0);
        s.zsa_deg = std::min(std::pow(10.0, value(LspParam::ZSA)), 52.0);
        out[i] = s;
    }
    return out;
}

} // namespace gscm
