#include "emitterlab/lindblad.hpp"

#include <cmath>
#include <cstddef>

#include "emitterlab/errors.hpp"
#include "emitterlab/units.hpp"

namespace eml {
namespace {

using Cx = std::complex<double>;
// Row-major 2x2 complex matrix over the basis {|e>, |g>}:
// m[0]=ee, m[1]=eg, m[2]=ge, m[3]=gg.
using Mat = std::array<Cx, 4>;

Mat matmul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat dagger(const Mat& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

Mat add(const Mat& a, const Mat& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Mat scale(const Mat& a, Cx c) {
    return {a[0] * c, a[1] * c, a[2] * c, a[3] * c};
}

constexpr Mat kSigmaEg{Cx{0, 0}, Cx{1, 0}, Cx{0, 0}, Cx{0, 0}};  // |e><g|
constexpr Mat kSigmaGe{Cx{0, 0}, Cx{0, 0}, Cx{1, 0}, Cx{0, 0}};  // |g><e|
constexpr Mat kSigmaZ{Cx{1, 0}, Cx{0, 0}, Cx{0, 0}, Cx{-1, 0}};

// The Liouvillian as an explicit operator expression:
//   L(m) = -i[H, m] + sum_k ( Lk m Lk+ - (Lk+ Lk m + m Lk+ Lk)/2 )
// with H = omega_x |e><e|, jump operators sqrt(p21) sigma_ge (decay),
// sqrt(p12) sigma_eg (pump) and (sqrt(gamma_dp)/2) sigma_z (pure dephasing).
struct Liouvillian {
    std::array<Mat, 3> jump;
    std::array<Mat, 3> jump_dag;
    std::array<Mat, 3> jdj;  // Lk+ Lk
    Mat hamiltonian;

    explicit Liouvillian(const LindbladConfig& c) {
        jump[0] = scale(kSigmaGe, std::sqrt(c.p21));
        jump[1] = scale(kSigmaEg, std::sqrt(c.p12));
        jump[2] = scale(kSigmaZ, 0.5 * std::sqrt(c.gamma_dp));
        for (std::size_t k = 0; k < jump.size(); ++k) {
            jump_dag[k] = dagger(jump[k]);
            jdj[k] = matmul(jump_dag[k], jump[k]);
        }
        hamiltonian = {Cx{c.omega_x, 0}, Cx{0, 0}, Cx{0, 0}, Cx{0, 0}};
    }

    Mat apply(const Mat& m) const {
        const Cx minus_i{0, -1};
        Mat out = scale(add(matmul(hamiltonian, m),
                            scale(matmul(m, hamiltonian), Cx{-1, 0})),
                        minus_i);
        for (std::size_t k = 0; k < jump.size(); ++k) {
            out = add(out, matmul(matmul(jump[k], m), jump_dag[k]));
            out = add(out, scale(add(matmul(jdj[k], m), matmul(m, jdj[k])),
                                 Cx{-0.5, 0}));
        }
        return out;
    }

    // One classical 4th-order step of size h (seconds).
    Mat rk4_step(const Mat& m, double h) const {
        const Mat k1 = apply(m);
        const Mat k2 = apply(add(m, scale(k1, Cx{0.5 * h, 0})));
        const Mat k3 = apply(add(m, scale(k2, Cx{0.5 * h, 0})));
        const Mat k4 = apply(add(m, scale(k3, Cx{h, 0})));
        Mat out = m;
        for (int i = 0; i < 4; ++i)
            out[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return out;
    }
};

Mat from_state(const DensityMatrixState& s) {
    return {Cx{s.rho_ee, 0}, s.rho_eg, std::conj(s.rho_eg), Cx{s.rho_gg, 0}};
}

DensityMatrixState to_state(const Mat& m) {
    DensityMatrixState s;
    s.rho_ee = m[0].real();
    s.rho_gg = m[3].real();
    s.rho_eg = m[1];
    return s;
}

// Relax from the ground state long enough that the populations forget the
// initial condition to well below integrator tolerance.
Mat relax_to_steady_state(const LindbladConfig& config, const Liouvillian& liou) {
    const double total = config.p12 + config.p21;
    if (total <= 0.0)
        throw UsageError("lindblad: steady state undefined for P12 = P21 = 0");
    const double horizon_s = 40.0 / total;
    const double dt_s = config.dt_ns * 1e-9;
    const auto n = static_cast<std::size_t>(std::ceil(horizon_s / dt_s));
    Mat m{Cx{0, 0}, Cx{0, 0}, Cx{0, 0}, Cx{1, 0}};
    for (std::size_t i = 0; i < n; ++i) m = liou.rk4_step(m, dt_s);
    return m;
}

}  // namespace

void LindbladConfig::validate() const {
    if (!(dt_ns > 0.0)) throw UsageError("LindbladConfig: dt must be > 0");
    if (!(t_max_ns >= dt_ns))
        throw UsageError("LindbladConfig: t_max must be >= dt");
    if (p12 < 0.0 || p21 < 0.0 || gamma_dp < 0.0)
        throw UsageError("LindbladConfig: rates must be >= 0");
    if (!std::isfinite(omega_x))
        throw UsageError("LindbladConfig: omega_x must be finite");
    const double dt_s = dt_ns * 1e-9;
    const double g2 = 0.5 * (p12 + p21 + gamma_dp);
    if (dt_s * (p12 + p21) > 0.1 || dt_s * g2 > 0.1 ||
        dt_s * std::abs(omega_x) > 0.1)
        throw StabilityError(
            "LindbladConfig: integration step too large for the given rates");
}

Trajectory integrate_master(const LindbladConfig& config,
                            const DensityMatrixState& init) {
    config.validate();
    init.validate(1e-9);
    const Liouvillian liou(config);
    const double dt_s = config.dt_ns * 1e-9;
    const auto n_steps =
        static_cast<std::size_t>(std::ceil(config.t_max_ns / config.dt_ns - 1e-12));

    Trajectory traj;
    traj.times_ns.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    Mat m = from_state(init);
    traj.times_ns.push_back(0.0);
    traj.states.push_back(init);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        m = liou.rk4_step(m, dt_s);
        const double trace_err = std::abs(m[0] + m[3] - Cx{1, 0});
        if (trace_err > 1e-6)
            throw StabilityError("integrate_master: trace drift exceeds 1e-6");
        traj.times_ns.push_back(static_cast<double>(i) * config.dt_ns);
        traj.states.push_back(to_state(m));
    }
    return traj;
}

std::vector<std::complex<double>> two_time_correlation(
    const LindbladConfig& config, const std::vector<double>& tau_grid_ns) {
    config.validate();
    for (std::size_t i = 0; i < tau_grid_ns.size(); ++i) {
        if (tau_grid_ns[i] < 0.0)
            throw UsageError("two_time_correlation: tau must be >= 0");
        if (i > 0 && !(tau_grid_ns[i] > tau_grid_ns[i - 1]))
            throw UsageError("two_time_correlation: tau grid must be increasing");
    }
    const Liouvillian liou(config);
    Mat lambda = matmul(relax_to_steady_state(config, liou), kSigmaEg);

    std::vector<Cx> out;
    out.reserve(tau_grid_ns.size());
    double tau_now = 0.0;
    const double dt_s = config.dt_ns * 1e-9;
    for (double tau : tau_grid_ns) {
        const double span_s = (tau - tau_now) * 1e-9;
        if (span_s > 0.0) {
            const auto m = static_cast<std::size_t>(std::ceil(span_s / dt_s - 1e-12));
            const double h = span_s / static_cast<double>(m);
            for (std::size_t i = 0; i < m; ++i) lambda = liou.rk4_step(lambda, h);
            tau_now = tau;
        }
        // <sigma_eg sigma_ge(tau)> = tr(sigma_ge Lambda(tau)) = Lambda_eg.
        out.push_back(lambda[1]);
    }
    return out;
}

Spectrum spectrum_numeric(const LindbladConfig& config,
                          const std::vector<double>& omega_grid,
                          std::size_t n_points) {
    config.validate();
    if (omega_grid.empty())
        throw UsageError("spectrum_numeric: empty frequency grid");
    if (n_points < 16)
        throw UsageError("spectrum_numeric: too few quadrature points");
    const double gamma_rad = config.p21 - config.p12;
    if (!(gamma_rad > 0.0))
        throw UsageError("spectrum_numeric: requires P21 > P12 (radiative decay)");
    const double g2 = 0.5 * (config.p12 + config.p21 + config.gamma_dp);
    const double horizon_s = config.t_max_ns * 1e-9;
    if (horizon_s * g2 < 20.0)
        throw UsageError(
            "spectrum_numeric: tau horizon below 20/Gamma2, truncation too large");

    // Evolve the regression operator in a frame rotating at omega_x; the
    // oscillation-free envelope is then quadrature-friendly.
    LindbladConfig rot = config;
    rot.omega_x = 0.0;
    const Liouvillian liou(rot);
    Mat lambda = matmul(relax_to_steady_state(rot, liou), kSigmaEg);

    const double h_s = horizon_s / static_cast<double>(n_points - 1);
    std::vector<Cx> corr(n_points);
    corr[0] = lambda[1];
    // Substep so the quadrature sample spacing never exceeds the configured
    // integration step.
    const double dt_s = config.dt_ns * 1e-9;
    const auto sub = static_cast<std::size_t>(
        std::max(1.0, std::ceil(h_s / dt_s - 1e-12)));
    const double h_sub = h_s / static_cast<double>(sub);
    for (std::size_t k = 1; k < n_points; ++k) {
        for (std::size_t i = 0; i < sub; ++i) lambda = liou.rk4_step(lambda, h_sub);
        corr[k] = lambda[1];
    }

    Spectrum spec;
    spec.x_unit = "angular_rad_s";
    spec.x = omega_grid;
    spec.y.resize(omega_grid.size());
    for (std::size_t j = 0; j < omega_grid.size(); ++j) {
        const double delta = omega_grid[j] - config.omega_x;
        // Trapezoid rule for Re Int e^{i delta tau} corr(tau) dtau.
        Cx acc = 0.5 * corr[0];
        double phase = delta * h_s;
        for (std::size_t k = 1; k + 1 < n_points; ++k)
            acc += corr[k] * std::polar(1.0, phase * static_cast<double>(k));
        acc += 0.5 * corr[n_points - 1] *
               std::polar(1.0, phase * static_cast<double>(n_points - 1));
        spec.y[j] = gamma_rad / kPi * (acc * h_s).real();
    }
    return spec;
}

double fwhm_from_samples(const std::vector<double>& x,
                         const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw UsageError("fwhm_from_samples: need at least 3 samples");
    std::size_t peak = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[peak]) peak = i;
    if (peak == 0 || peak + 1 == y.size())
        throw UsageError("fwhm_from_samples: peak not interior to the grid");
    const double base = std::min(y.front(), y.back());
    const double half = base + 0.5 * (y[peak] - base);
    if (!(y[peak] > base))
        throw UsageError("fwhm_from_samples: flat data");

    // Outermost crossings bracketing the peak.
    double left = x.front();
    for (std::size_t i = peak; i-- > 0;) {
        if (y[i] <= half) {
            const double f = (half - y[i]) / (y[i + 1] - y[i]);
            left = x[i] + f * (x[i + 1] - x[i]);
            break;
        }
        if (i == 0) throw UsageError("fwhm_from_samples: no left half-max crossing");
    }
    double right = x.back();
    bool found_right = false;
    for (std::size_t i = peak; i + 1 < y.size(); ++i) {
        if (y[i + 1] <= half) {
            const double f = (y[i] - half) / (y[i] - y[i + 1]);
            right = x[i] + f * (x[i + 1] - x[i]);
            found_right = true;
            break;
        }
    }
    if (!found_right)
        throw UsageError("fwhm_from_samples: no right half-max crossing");
    return right - left;
}

}  // namespace eml
