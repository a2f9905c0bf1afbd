#pragma once

#include <cstddef>
#include <vector>

namespace strauss {

/// Radial solution of Δψ - ηVψ = η²ψ, V = μ(1+r)^{-β}, with ψ(0) = 1.
/// Values are kept in the rescaled form s = e^{-ηr}ψ so that large ηr does
/// not overflow; ψ itself is reconstructed on demand.
struct EigenSolution {
    double eta = 0.0;
    double mu = 0.0;
    double beta = 0.0;
    int n = 3;
    double r_max = 0.0;
    double dr = 0.0;        ///< integration step
    double store_dr = 0.0;  ///< spacing of the stored table
    bool theorem_regime = true;

    std::vector<double> r;
    std::vector<double> s;   ///< e^{-ηr} ψ
    std::vector<double> ds;  ///< d/dr of s
    std::vector<double> psi;
    std::vector<double> w;   ///< (1+r)^{(n-1)/2} e^{-ηr} ψ

    /// Far-field factor ψ/φ_η; 1 until normalize() has run.
    double lambda = 1.0;
    double r_ref = 0.0;
    bool normalized = false;

    /// s(r) by cubic Hermite interpolation, divided by lambda.
    double scaled(double radius) const;
    /// d/dr of scaled(), divided by lambda.
    double scaled_derivative(double radius) const;
    /// ψ(r)/lambda.
    double value(double radius) const;
    /// ψ'(r)/lambda.
    double derivative(double radius) const;

    double w_sup() const;
    std::size_t size() const { return r.size(); }
};

struct EigenOptions {
    double dr = 5e-4;
    double store_dr = 2.5e-3;
};

/// Smallest admissible r_max for a given η.
double min_eigen_r_max(double eta);

EigenSolution solve_psi(double eta, double mu, double beta, int n, double r_max,
                        const EigenOptions& options = {});

/// φ_η(r) = ∫_{S^{n-1}} e^{ηr ω_1} dω.
double varphi(double eta, double r, int n);
/// e^{-ηr} φ_η(r), finite for all r.
double varphi_scaled(double eta, double r, int n);

inline constexpr double kPlateauSlope = 1e-4;

/// Relative slope |ρ'|/ρ of ρ = ψ/φ_η at every stored node.
std::vector<double> ratio_slope(const EigenSolution& sol);

/// First radius from which the relative slope of ψ/φ_η stays below
/// kPlateauSlope. Throws std::runtime_error if it lies beyond 0.8 r_max.
double find_plateau(const EigenSolution& sol);

/// Limit of ψ/φ_η estimated from r_ref: the ratio at r_ref plus the
/// remaining drift from the potential tail, linearised about ρ(r_ref).
double far_field_ratio(const EigenSolution& sol, double r_ref);

/// Sets lambda = far_field_ratio(sol, r_ref) with r_ref from find_plateau.
EigenSolution normalize(EigenSolution sol);
/// Same with an explicit r_ref; rejected if the ratio has not plateaued there.
EigenSolution normalize(EigenSolution sol, double r_ref);

/// [∫_0^{t+R} (1+r)^α e^{-β(t-r)} dr] / (t+R)^α.
double lemma31_ratio(double alpha, double beta_rate, double R, double t);

}  // namespace strauss
