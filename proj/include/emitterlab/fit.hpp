// fit.hpp — damped nonlinear least squares (Levenberg-Marquardt with bound
// projection) plus the model catalog used across the analysis pipelines, and
// maximum-likelihood Gamma distribution fitting.
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace eml {

struct DataSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma;  // optional; strictly positive when present

    void validate() const;
    bool has_sigma() const { return !sigma.empty(); }
};

enum class ModelKind {
    lorentzian,         // (2S/pi) w/(4(x-x0)^2+w^2) + b         [area, center, fwhm, offset]
    double_lorentzian,  // sum of two Lorentzians + shared offset
    sinusoid,           // c0 + (A/2) sin((2 theta + phi) pi/180) [offset, amplitude, phase_deg]
    saturation,         // I_sat P^n/(P_sat^n + P^n) + C
    g2_train,           // C0 e^{-|t|/T1} + C1 sum_{n!=0} e^{-|t-n rep|/T1} + Cb
    mono_exp,           // A e^{-t/tau} + b
    bi_exp,             // A1 e^{-t/tau1} + A2 e^{-t/tau2} + b, tau1 < tau2
};

struct ModelSpec {
    ModelKind kind{ModelKind::lorentzian};
    std::map<std::string, double> fixed;                  // pinned parameters
    std::map<std::string, std::array<double, 2>> bounds;  // [lo, hi] per name
};

struct FitResult {
    std::vector<std::string> free_names;  // canonical order of free parameters
    std::map<std::string, double> params; // all parameters, fixed included
    std::vector<std::vector<double>> covariance;  // over free_names
    double reduced_chi2{0.0};
    int n_iter{0};
    bool converged{false};
    std::vector<double> residuals;  // y - model, unweighted

    double value(const std::string& name) const;
    // sqrt of the covariance diagonal; 0 for fixed parameters.
    double sigma(const std::string& name) const;
    double covar(const std::string& a, const std::string& b) const;
};

// Canonical parameter names for a model kind.
const std::vector<std::string>& model_param_names(ModelKind kind);

// Pointwise model evaluation; `params` must cover every parameter not pinned
// in spec.fixed (pinned values win).
std::vector<double> eval_model(const ModelSpec& spec,
                               const std::map<std::string, double>& params,
                               const std::vector<double>& x);

// Weighted Levenberg-Marquardt from `init` (free parameters only need
// initials; fixed ones come from the spec). Default weights are
// sigma = sqrt(max(y, 1)) (Poisson counting). Convergence: relative cost
// change < 1e-10 or gradient inf-norm < 1e-8, capped at 500 iterations.
// Covariance = (J^T W J)^{-1} * reduced chi^2.
FitResult fit(const ModelSpec& spec, const DataSeries& data,
              const std::map<std::string, double>& init);

struct GammaFitResult {
    double shape{0.0};  // k
    double scale{0.0};  // theta
    double mean{0.0};   // k theta
    double sd{0.0};     // theta sqrt(k)
};

enum class GammaMethod { mle, moments };

// Maximum-likelihood Gamma fit (Newton on the digamma equation, Minka-style
// initialization); method-of-moments selectable as a fallback.
GammaFitResult fit_gamma_distribution(const std::vector<double>& samples,
                                      GammaMethod method = GammaMethod::mle);

}  // namespace eml
