#include "emitterlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "emitterlab/errors.hpp"
#include "emitterlab/units.hpp"

namespace eml {
namespace {

using Names = std::vector<std::string>;

const Names kLorentzian{"area", "center", "fwhm", "offset"};
const Names kDoubleLorentzian{"area1", "center1", "fwhm1",
                              "area2", "center2", "fwhm2", "offset"};
const Names kSinusoid{"offset", "amplitude", "phase_deg"};
const Names kSaturation{"i_sat", "p_sat", "n", "offset"};
const Names kG2Train{"c0", "c1", "cb", "t1", "rep"};
const Names kMonoExp{"amp", "tau", "offset"};
const Names kBiExp{"amp1", "tau1", "amp2", "tau2", "offset"};

// One Lorentzian and its partials, shared by both peak models.
struct LorentzTerm {
    double y, d_area, d_center, d_fwhm;
};

LorentzTerm lorentz_at(double x, double area, double center, double fwhm) {
    const double d = x - center;
    const double den = 4.0 * d * d + fwhm * fwhm;
    const double shape = fwhm / den;
    LorentzTerm t;
    t.d_area = (2.0 / kPi) * shape;
    t.y = area * t.d_area;
    t.d_center = (2.0 * area / kPi) * 8.0 * d * fwhm / (den * den);
    t.d_fwhm = (2.0 * area / kPi) * (4.0 * d * d - fwhm * fwhm) / (den * den);
    return t;
}

// Evaluate the model and, when grad != nullptr, the partials in canonical
// parameter order at a single x.
double model_point(ModelKind kind, const std::vector<double>& p, double x,
                   double x_absmax, std::vector<double>* grad) {
    switch (kind) {
        case ModelKind::lorentzian: {
            const LorentzTerm t = lorentz_at(x, p[0], p[1], p[2]);
            if (grad) *grad = {t.d_area, t.d_center, t.d_fwhm, 1.0};
            return t.y + p[3];
        }
        case ModelKind::double_lorentzian: {
            const LorentzTerm a = lorentz_at(x, p[0], p[1], p[2]);
            const LorentzTerm b = lorentz_at(x, p[3], p[4], p[5]);
            if (grad)
                *grad = {a.d_area, a.d_center, a.d_fwhm,
                         b.d_area, b.d_center, b.d_fwhm, 1.0};
            return a.y + b.y + p[6];
        }
        case ModelKind::sinusoid: {
            const double arg = (2.0 * x + p[2]) * kPi / 180.0;
            const double s = std::sin(arg);
            if (grad)
                *grad = {1.0, 0.5 * s, 0.5 * p[1] * std::cos(arg) * kPi / 180.0};
            return p[0] + 0.5 * p[1] * s;
        }
        case ModelKind::saturation: {
            const double i_sat = p[0], p_sat = p[1], n = p[2], c = p[3];
            if (x <= 0.0) {
                if (grad) *grad = {0.0, 0.0, 0.0, 1.0};
                return c;
            }
            const double a = std::pow(x, n);
            const double b = std::pow(p_sat, n);
            const double den = a + b;
            const double f = a / den;
            if (grad) {
                const double d_psat = -i_sat * a * n * b / p_sat / (den * den);
                const double d_n =
                    i_sat * a * b * std::log(x / p_sat) / (den * den);
                *grad = {f, d_psat, d_n, 1.0};
            }
            return i_sat * f + c;
        }
        case ModelKind::g2_train: {
            const double c0 = p[0], c1 = p[1], cb = p[2], t1 = p[3], rep = p[4];
            const auto n_max = static_cast<long>(
                std::ceil(x_absmax / std::max(rep, 1e-300)) + 2);
            double y = cb;
            double d_c0 = 0.0, d_c1 = 0.0, d_t1 = 0.0, d_rep = 0.0;
            {
                const double a = std::abs(x);
                if (a / t1 < 45.0) {
                    const double e = std::exp(-a / t1);
                    y += c0 * e;
                    d_c0 = e;
                    d_t1 += c0 * e * a / (t1 * t1);
                }
            }
            for (long n = -n_max; n <= n_max; ++n) {
                if (n == 0) continue;
                const double u = x - static_cast<double>(n) * rep;
                const double a = std::abs(u);
                if (a / t1 >= 45.0) continue;
                const double e = std::exp(-a / t1);
                y += c1 * e;
                d_c1 += e;
                d_t1 += c1 * e * a / (t1 * t1);
                d_rep += c1 * e * (u >= 0.0 ? 1.0 : -1.0) *
                         static_cast<double>(n) / t1;
            }
            if (grad) *grad = {d_c0, d_c1, 1.0, d_t1, d_rep};
            return y;
        }
        case ModelKind::mono_exp: {
            const double e = std::exp(-x / p[1]);
            if (grad) *grad = {e, p[0] * e * x / (p[1] * p[1]), 1.0};
            return p[0] * e + p[2];
        }
        case ModelKind::bi_exp: {
            const double e1 = std::exp(-x / p[1]);
            const double e2 = std::exp(-x / p[3]);
            if (grad)
                *grad = {e1, p[0] * e1 * x / (p[1] * p[1]), e2,
                         p[2] * e2 * x / (p[3] * p[3]), 1.0};
            return p[0] * e1 + p[2] * e2 + p[4];
        }
    }
    throw UsageError("model_point: unknown model kind");
}

// Cholesky solve of (A + lambda diag(A)) x = b for small symmetric systems.
// Returns false when the damped matrix is not positive definite.
bool cholesky_solve(std::vector<std::vector<double>> a, double lambda,
                    std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        a[i][i] *= 1.0 + lambda;
    // Decompose a = L L^T in place (lower triangle).
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        if (!(d > 0.0)) return false;
        a[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            a[i][j] = s / a[j][j];
        }
    }
    // Forward then backward substitution.
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * b[k];
        b[i] = s / a[i][i];
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[k][i] * x[k];
        x[i] = s / a[i][i];
    }
    return true;
}

// Full inverse via Cholesky (no damping); false when singular.
bool cholesky_inverse(const std::vector<std::vector<double>>& a,
                      std::vector<std::vector<double>>& inv) {
    const std::size_t n = a.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<double> e(n, 0.0), x;
        e[col] = 1.0;
        if (!cholesky_solve(a, 0.0, e, x)) return false;
        for (std::size_t i = 0; i < n; ++i) inv[i][col] = x[i];
    }
    return true;
}

struct Workspace {
    ModelKind kind;
    Names all_names;
    std::vector<int> free_index;   // canonical index of each free parameter
    std::vector<double> full;      // full parameter vector (canonical order)
    std::vector<double> lo, hi;    // bounds per free parameter
    double x_absmax{0.0};
};

double cost_and_linearize(const Workspace& w, const DataSeries& data,
                          const std::vector<double>& weights_inv_sigma,
                          std::vector<std::vector<double>>* normal,
                          std::vector<double>* grad,
                          std::vector<double>* residuals) {
    const std::size_t n_free = w.free_index.size();
    if (normal) {
        normal->assign(n_free, std::vector<double>(n_free, 0.0));
        grad->assign(n_free, 0.0);
    }
    if (residuals) residuals->assign(data.x.size(), 0.0);
    double cost = 0.0;
    std::vector<double> g_full;
    std::vector<double> jrow(n_free);
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double f = model_point(w.kind, w.full, data.x[i], w.x_absmax,
                                     normal ? &g_full : nullptr);
        const double r = (data.y[i] - f) * weights_inv_sigma[i];
        cost += r * r;
        if (residuals) (*residuals)[i] = data.y[i] - f;
        if (normal) {
            for (std::size_t j = 0; j < n_free; ++j)
                jrow[j] = g_full[static_cast<std::size_t>(w.free_index[j])] *
                          weights_inv_sigma[i];
            for (std::size_t j = 0; j < n_free; ++j) {
                (*grad)[j] += jrow[j] * r;
                for (std::size_t k = j; k < n_free; ++k)
                    (*normal)[j][k] += jrow[j] * jrow[k];
            }
        }
    }
    if (normal)
        for (std::size_t j = 0; j < n_free; ++j)
            for (std::size_t k = 0; k < j; ++k) (*normal)[j][k] = (*normal)[k][j];
    return cost;
}

// Keep tau1 < tau2 for bi_exp by swapping the two components in the full
// parameter vector (label-swap degeneracy removal).
void enforce_ordering(ModelKind kind, std::vector<double>& full) {
    if (kind != ModelKind::bi_exp) return;
    if (full[1] > full[3]) {
        std::swap(full[0], full[2]);
        std::swap(full[1], full[3]);
    }
}

}  // namespace

void DataSeries::validate() const {
    if (x.size() != y.size())
        throw UsageError("DataSeries: x and y lengths differ");
    if (!sigma.empty()) {
        if (sigma.size() != x.size())
            throw UsageError("DataSeries: sigma length differs");
        for (double s : sigma)
            if (!(s > 0.0))
                throw UsageError("DataSeries: sigma must be strictly positive");
    }
}

const std::vector<std::string>& model_param_names(ModelKind kind) {
    switch (kind) {
        case ModelKind::lorentzian: return kLorentzian;
        case ModelKind::double_lorentzian: return kDoubleLorentzian;
        case ModelKind::sinusoid: return kSinusoid;
        case ModelKind::saturation: return kSaturation;
        case ModelKind::g2_train: return kG2Train;
        case ModelKind::mono_exp: return kMonoExp;
        case ModelKind::bi_exp: return kBiExp;
    }
    throw UsageError("model_param_names: unknown model kind");
}

double FitResult::value(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end()) throw UsageError("FitResult: unknown parameter " + name);
    return it->second;
}

double FitResult::sigma(const std::string& name) const {
    for (std::size_t i = 0; i < free_names.size(); ++i)
        if (free_names[i] == name) return std::sqrt(std::max(covariance[i][i], 0.0));
    if (params.count(name)) return 0.0;
    throw UsageError("FitResult: unknown parameter " + name);
}

double FitResult::covar(const std::string& a, const std::string& b) const {
    int ia = -1, ib = -1;
    for (std::size_t i = 0; i < free_names.size(); ++i) {
        if (free_names[i] == a) ia = static_cast<int>(i);
        if (free_names[i] == b) ib = static_cast<int>(i);
    }
    if (ia < 0 || ib < 0) return 0.0;
    return covariance[static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)];
}

std::vector<double> eval_model(const ModelSpec& spec,
                               const std::map<std::string, double>& params,
                               const std::vector<double>& x) {
    const Names& names = model_param_names(spec.kind);
    std::vector<double> full(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto fx = spec.fixed.find(names[i]);
        if (fx != spec.fixed.end()) {
            full[i] = fx->second;
        } else {
            const auto it = params.find(names[i]);
            if (it == params.end())
                throw UsageError("eval_model: missing parameter " + names[i]);
            full[i] = it->second;
        }
    }
    double x_absmax = 0.0;
    for (double v : x) x_absmax = std::max(x_absmax, std::abs(v));
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = model_point(spec.kind, full, x[i], x_absmax, nullptr);
    return out;
}

FitResult fit(const ModelSpec& spec, const DataSeries& data,
              const std::map<std::string, double>& init) {
    data.validate();
    const Names& names = model_param_names(spec.kind);
    for (const auto& [k, v] : spec.fixed) {
        (void)v;
        if (std::find(names.begin(), names.end(), k) == names.end())
            throw UsageError("fit: fixed parameter " + k + " not in model");
    }
    for (const auto& [k, v] : spec.bounds) {
        (void)v;
        if (std::find(names.begin(), names.end(), k) == names.end())
            throw UsageError("fit: bound on parameter " + k + " not in model");
    }

    Workspace w;
    w.kind = spec.kind;
    w.all_names = names;
    w.full.assign(names.size(), 0.0);
    Names free_names;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto fx = spec.fixed.find(names[i]);
        if (fx != spec.fixed.end()) {
            w.full[i] = fx->second;
            continue;
        }
        const auto it = init.find(names[i]);
        if (it == init.end())
            throw UsageError("fit: missing initial value for " + names[i]);
        w.full[i] = it->second;
        w.free_index.push_back(static_cast<int>(i));
        free_names.push_back(names[i]);
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        const auto bd = spec.bounds.find(names[i]);
        if (bd != spec.bounds.end()) {
            lo = bd->second[0];
            hi = bd->second[1];
        }
        if (w.full[i] < lo || w.full[i] > hi)
            throw UsageError("fit: initial value for " + names[i] +
                             " outside bounds");
        w.lo.push_back(lo);
        w.hi.push_back(hi);
    }
    const std::size_t n_free = w.free_index.size();
    if (data.x.size() < n_free)
        throw UsageError("fit: fewer data points than free parameters");
    for (double v : data.x) w.x_absmax = std::max(w.x_absmax, std::abs(v));

    std::vector<double> inv_sigma(data.x.size());
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double s = data.has_sigma() ? data.sigma[i]
                                          : std::sqrt(std::max(data.y[i], 1.0));
        inv_sigma[i] = 1.0 / s;
    }

    FitResult result;
    result.free_names = free_names;

    std::vector<std::vector<double>> normal;
    std::vector<double> grad;
    double cost = cost_and_linearize(w, data, inv_sigma, &normal, &grad, nullptr);

    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < 500 && n_free > 0; ++iter) {
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < 1e-8) {
            converged = true;
            break;
        }

        std::vector<double> step;
        if (!cholesky_solve(normal, lambda, grad, step)) {
            lambda *= 10.0;
            if (lambda > 1e12)
                throw FitError("fit: singular normal matrix (degenerate fit)");
            continue;
        }

        std::vector<double> trial_full = w.full;
        bool clipped = false;
        for (std::size_t j = 0; j < n_free; ++j) {
            double v = w.full[static_cast<std::size_t>(w.free_index[j])] + step[j];
            if (v < w.lo[j]) {
                v = w.lo[j];
                clipped = true;
            }
            if (v > w.hi[j]) {
                v = w.hi[j];
                clipped = true;
            }
            trial_full[static_cast<std::size_t>(w.free_index[j])] = v;
        }
        enforce_ordering(w.kind, trial_full);

        Workspace trial = w;
        trial.full = trial_full;
        std::vector<std::vector<double>> trial_normal;
        std::vector<double> trial_grad;
        const double trial_cost = cost_and_linearize(trial, data, inv_sigma,
                                                     &trial_normal, &trial_grad,
                                                     nullptr);
        if (trial_cost <= cost) {
            const double rel_drop =
                (cost - trial_cost) / std::max(cost, 1e-300);
            w.full = trial_full;
            normal = std::move(trial_normal);
            grad = std::move(trial_grad);
            cost = trial_cost;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (clipped) lambda *= 10.0;  // damping increase on bound activation
            if (rel_drop < 1e-10) {
                converged = true;
                ++iter;
                break;
            }
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) break;  // stuck: report non-convergence
        }
    }
    if (n_free == 0) converged = true;

    result.n_iter = iter;
    result.converged = converged;
    for (std::size_t i = 0; i < names.size(); ++i)
        result.params[names[i]] = w.full[i];

    std::vector<double> final_grad;
    std::vector<std::vector<double>> final_normal;
    const double final_cost = cost_and_linearize(w, data, inv_sigma,
                                                 &final_normal, &final_grad,
                                                 &result.residuals);
    const double dof = static_cast<double>(
        data.x.size() > n_free ? data.x.size() - n_free : 1);
    result.reduced_chi2 = final_cost / dof;

    if (n_free > 0) {
        std::vector<std::vector<double>> inverse;
        if (!cholesky_inverse(final_normal, inverse)) {
            if (converged)
                throw FitError("fit: singular normal matrix (degenerate fit)");
            inverse.assign(n_free, std::vector<double>(n_free, 0.0));
        }
        result.covariance = inverse;
        for (auto& row : result.covariance)
            for (auto& v : row) v *= result.reduced_chi2;
    }
    return result;
}

GammaFitResult fit_gamma_distribution(const std::vector<double>& samples,
                                      GammaMethod method) {
    if (samples.size() < 3)
        throw UsageError("fit_gamma_distribution: need at least 3 samples");
    double mean = 0.0;
    double mean_log = 0.0;
    for (double v : samples) {
        if (!(v > 0.0))
            throw UsageError("fit_gamma_distribution: samples must be positive");
        mean += v;
        mean_log += std::log(v);
    }
    const double n = static_cast<double>(samples.size());
    mean /= n;
    mean_log /= n;

    GammaFitResult out;
    if (method == GammaMethod::moments) {
        double var = 0.0;
        for (double v : samples) var += (v - mean) * (v - mean);
        var /= (n - 1.0);
        if (!(var > 0.0))
            throw FitError("fit_gamma_distribution: zero variance (degenerate)");
        out.shape = mean * mean / var;
        out.scale = var / mean;
    } else {
        const double s = std::log(mean) - mean_log;
        if (!(s > 1e-12))
            throw FitError("fit_gamma_distribution: zero variance (degenerate)");
        double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) /
                   (12.0 * s);
        for (int it = 0; it < 100; ++it) {
            const double f = std::log(k) - boost::math::digamma(k) - s;
            const double fp = 1.0 / k - boost::math::trigamma(k);
            const double next = k - f / fp;
            if (!(next > 0.0)) {
                k *= 0.5;
                continue;
            }
            const double rel = std::abs(next - k) / k;
            k = next;
            if (rel < 1e-13) break;
        }
        out.shape = k;
        out.scale = mean / k;
    }
    out.mean = out.shape * out.scale;
    out.sd = out.scale * std::sqrt(out.shape);
    return out;
}

}  // namespace eml
