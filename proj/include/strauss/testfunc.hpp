#pragma once

#include <string>
#include <vector>

#include "strauss/eigen.hpp"
#include "strauss/model.hpp"
#include "strauss/quadrature.hpp"

namespace strauss {

/// Far-field normalised eigenfunctions ψ̂_η at the nodes of a Gauss rule with
/// weight η^{q-1} on [0, 1], tabulated on [0, r_cover].
class PsiCache {
public:
    PsiCache(int n, double mu, double beta, double q, double r_cover, int nodes = 64,
             const EigenOptions& options = {});

    int n() const { return n_; }
    double mu() const { return mu_; }
    double beta() const { return beta_; }
    double q() const { return q_; }
    double r_cover() const { return r_cover_; }
    const GaussRule& rule() const { return rule_; }
    const std::vector<EigenSolution>& solutions() const { return solutions_; }
    std::vector<double> lambdas() const;

private:
    int n_;
    double mu_;
    double beta_;
    double q_;
    double r_cover_;
    GaussRule rule_;
    std::vector<EigenSolution> solutions_;
};

/// Separable evaluation b_{q+k}(t, r) = Σ_j w_j η_j^k e^{-η_j t} ψ̂_{η_j}(r) on
/// a fixed set of radii.
class BqBasis {
public:
    BqBasis(const PsiCache& cache, std::vector<double> radii);

    /// b_{q+shift}(t, r_i) for every stored radius.
    std::vector<double> row(double t, int shift = 0) const;
    const std::vector<double>& radii() const { return radii_; }

private:
    const PsiCache* cache_;
    std::vector<double> radii_;
    std::vector<double> basis_;  // node-major: basis_[j * K + i] = w_j e^{η_j r_i} ŝ_j(r_i)
};

/// b_{q+shift}(t, r) at a single point.
double bq_value(const PsiCache& cache, double t, double r, int shift = 0);

struct BqTable {
    double q = 0.0;
    double R = 2.0;
    int n = 3;
    double mu = 0.0;
    double beta = 0.0;
    int nodes = 0;
    std::vector<double> eta_nodes;
    std::vector<double> eta_weights;
    std::vector<double> lambdas;
    std::vector<double> t;
    std::vector<double> r;
    std::vector<double> values;  ///< row-major, values[i * r.size() + j] = b_q(t_i, r_j)

    double at(std::size_t i, std::size_t j) const { return values[i * r.size() + j]; }
};

/// Table of b_{cache.q() + shift} on t_grid × r_grid.
BqTable build_bq(const PsiCache& cache, const std::vector<double>& t_grid, const std::vector<double>& r_grid,
                 double R = 2.0, int shift = 0);

/// Builds its own cache with `nodes` Gauss nodes.
BqTable build_bq(double q, const ModelParams& params, const std::vector<double>& t_grid,
                 const std::vector<double>& r_grid, double R = 2.0, int nodes = 64);

struct IdentityResiduals {
    double dt_first = 0.0;   ///< ∂_t b_q + b_{q+1}
    double dt_second = 0.0;  ///< ∂_t² b_q - b_{q+2}
    double laplace = 0.0;    ///< Δb_q - V b_{q+1} - b_{q+2}
    double wave = 0.0;       ///< ∂_t² b_q - Δb_q - V ∂_t b_q
    std::size_t points = 0;

    double max() const;
};

/// Sampling region for the identity check: t_min <= t <= t_max and r <= t.
struct IdentityRegion {
    double t_min = 1.0;
    double t_max = 20.0;
    double dt = 1e-2;
    double dr = 1e-2;
};

/// Pointwise residuals, each normalised by the sum of the magnitudes of the
/// terms in its identity, with finite differences in t and r.
IdentityResiduals verify_bq_identities(const PsiCache& cache, const IdentityRegion& region);

/// Same check on three precomputed tables (q, q+1, q+2) sharing uniform grids.
IdentityResiduals verify_bq_identities(const BqTable& bq, const BqTable& bq1, const BqTable& bq2);

/// Discrete radial Laplacian used by the identity check: fourth-order
/// stencils, one-sided next to the origin.
std::vector<double> radial_laplacian_4th(const std::vector<double>& u, double dr, int n);

enum class AsymptoticRegime { q_below, q_above };
std::string to_string(AsymptoticRegime regime);

struct AsymptoticReport {
    AsymptoticRegime regime = AsymptoticRegime::q_below;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    std::size_t samples = 0;

    double spread() const { return ratio_max / ratio_min; }
};

struct ConeSample {
    double t_min = 1.0;
    double t_max = 50.0;
    int t_points = 50;
    int r_points = 40;
};

/// b_q (t+R+r)^q for q < (n-1)/2, and
/// b_q (t+R+r)^{(n-1)/2} (t+R-r)^{q-(n-1)/2} for q > (n-1)/2, over r <= t+1.
AsymptoticReport verify_bq_asymptotics(const PsiCache& cache, double R = 2.0, const ConeSample& sample = {});

/// Gauss series for 2F1(a, b; c; z), |z| < 1.
double hyper2f1(double a, double b, double c, double z);
/// Euler integral representation, c > b > 0, z < 1.
double hyper2f1_euler(double a, double b, double c, double z);

/// b_q (t+R+r)^q / 2F1(q, (n-1)/2; n-1; 2r/(t+R+r)) over the cone.
AsymptoticReport bq_hypergeometric_ratio(const PsiCache& cache, double R = 2.0, const ConeSample& sample = {});

}  // namespace strauss
