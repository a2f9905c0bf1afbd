#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "strauss/eigen.hpp"
#include "strauss/model.hpp"
#include "strauss/solver.hpp"
#include "strauss/testfunc.hpp"

namespace strauss {

struct CutoffValue {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Smooth step: 1 on [0, 1/2], 0 on [1, ∞), built from g(x) = e^{-1/x}.
CutoffValue cutoff(double t);
/// η(t/T) with derivatives in t.
CutoffValue cutoff_T(double t, double T);
/// 0 below 1/2, η at and above 1/2.
CutoffValue theta(double t);
CutoffValue theta_M(double t, double M);
/// η_T(t)^k with derivatives in t.
CutoffValue cutoff_power(double t, double T, double k);

/// Weight ∫_{max(t/M,1/2)}^{min(t,1)} θ^{2p'}(s)/s ds from a cumulative table
/// with Hermite interpolation.
class YWeight {
public:
    explicit YWeight(double p_conj, int cells = 2048);

    double operator()(double t, double M) const;
    /// ∫_{1/2}^1 θ^{2p'}(s)/s ds
    double full() const { return cumulative_.back(); }
    double p_conj() const { return p_conj_; }

private:
    double G(double s) const;

    double p_conj_;
    double h_;
    std::vector<double> cumulative_;
    std::vector<double> slope_;
};

double y_weight(double t, double M, double p_conj);

/// Samples W(t_k) of a time-dependent quantity; linear between samples.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> value;
};

/// ∫ W(t) ω(t) dt over the sampled range, with W piecewise linear and ω
/// integrated by 10-point Gauss rules split at the given breakpoints.
double time_integral(const TimeSeries& series, const std::function<double(double)>& weight,
                     std::vector<double> breaks = {});

/// ∫ f dx for a radial f sampled at r_i = i dr (trapezoid in r).
double radial_integral(std::span<const double> f, double dr, int n);

/// Nonnegative w(t_k, r_i) on a uniform radial grid.
struct SpaceTimeField {
    int n = 3;
    double dr = 0.0;
    std::vector<double> t;
    std::vector<std::vector<double>> w;
};

TimeSeries spatial_integrals(const SpaceTimeField& field);

struct FunctionalSeries {
    std::vector<double> M;
    std::vector<double> Y;
    std::vector<double> dY;         ///< centred difference of Y in M
    std::vector<double> MdY_direct;  ///< ∫∫ w θ_M^{2p'} evaluated directly
};

double y_eval(const SpaceTimeField& field, double M, const YWeight& weight);
FunctionalSeries y_series(const SpaceTimeField& field, const std::vector<double>& M_grid, double p_conj);

/// Stored solution: snapshots on r_i = i dr.
struct Trajectory {
    ModelParams params;
    double dr = 0.0;
    std::vector<Snapshot> snapshots;
    double t_blowup = std::numeric_limits<double>::quiet_NaN();

    double t_last() const { return snapshots.empty() ? 0.0 : snapshots.back().t; }
};

Trajectory make_trajectory(const ModelParams& params, const SolveOutcome& outcome);

/// C1 = ∫g + ∫Vf and C2 = ∫gφ + ∫(1+V)fφ for the bump data (amplitudes included).
struct DataConstants {
    double C1 = 0.0;
    double C2 = 0.0;
};
DataConstants data_constants(const ModelParams& params, const EigenSolution& phi);

enum class TestKind { eta2p, eta2p_Phi, dtpsi };
std::string to_string(TestKind kind);
TestKind parse_test_kind(const std::string& text);

struct WeakResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0;     ///< sum of magnitudes of all terms
    double relative = 0.0;  ///< |lhs - rhs| / scale
};

/// Energy-solution identity with Ψ = η_T^{2p'}, η_T^{2p'}Φ or ∂_t(-η_T^{2p'}Φ),
/// Φ = e^{-t}φ. The Φ kinds need φ (η = 1 eigenfunction) covering the grid.
WeakResidual weak_residual(const Trajectory& trajectory, TestKind kind, double T,
                           const EigenSolution* phi = nullptr);

enum class InequalityKind { ineq_3_4, ineq_3_16, ineq_4_9, ineq_4_15, ineq_5_1, ineq_5_11 };
std::string to_string(InequalityKind kind);
/// Accepts "3.4", "3_4" or "ineq_3_4".
InequalityKind parse_inequality(const std::string& text);

struct InequalityRow {
    double point = 0.0;  ///< T or M
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct InequalityReport {
    InequalityKind kind = InequalityKind::ineq_3_4;
    std::vector<InequalityRow> rows;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    double spread_factor = 20.0;
    bool pass = false;

    double spread() const { return ratio_max / ratio_min; }
};

struct InequalityContext {
    const Trajectory* trajectory = nullptr;
    const EigenSolution* phi = nullptr;  ///< needed by 3.16, 5.1, 5.11
    const PsiCache* bq = nullptr;        ///< needed by 4.9, 4.15; q = (n-1)/2 - 1/p
    double t_num = 0.0;                  ///< numerical lifespan
    int grid_points = 12;
    double spread_factor = 20.0;
};

/// Lower end of the T (or M) grid for each check.
double inequality_grid_start(InequalityKind kind);

InequalityReport inequality_check(const InequalityContext& context, InequalityKind kind);

struct OdeLemmaResult {
    double p1 = 0.0;
    double p2 = 0.0;
    double K1 = 1.0;
    double K2 = 1.0;
    double cap = 1e8;
    std::vector<double> delta;
    std::vector<double> log_T;  ///< log of the escape time
    double fitted_exponent = 0.0;
    double theory_exponent = 0.0;
    double cap_shift = 0.0;  ///< max relative change of log T when the cap grows 1e4-fold
};

/// log T(δ) for φ' = max(δ/(K1 t), φ^{p1}/(K2 t (log t)^{p2-1})), φ(e) = 0,
/// where T is the time φ reaches cap.
double ode_lemma_escape(double p1, double p2, double K1, double K2, double delta, double cap = 1e8);

OdeLemmaResult ode_lemma_fit(double p1, double p2, double K1, double K2, const std::vector<double>& delta_grid,
                             double cap = 1e8);

}  // namespace strauss
