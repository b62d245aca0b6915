#include "leggett/optim.hpp"

#include "leggett/errors.hpp"
#include "leggett/ineq.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace leggett {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

double objective(Branch b, double theta, double phi, double psi) {
    const TightPair l = tripartite_ghz_closed_unchecked(std::clamp(theta, 0.0, kPi), phi, psi);
    return b == Branch::Plus ? l.plus : l.minus;
}

// Runs f(i) for i in [0, n) on `jobs` threads with a static interleaved split.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                f(i);
            }
        });
    }
}

}  // namespace

const char* branch_name(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

Branch parse_branch(const std::string& s) {
    if (s == "plus") {
        return Branch::Plus;
    }
    if (s == "minus") {
        return Branch::Minus;
    }
    throw ValidationError("branch must be 'plus' or 'minus', got '" + s + "'");
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 2) {
        throw ValidationError("grid needs at least 2 steps per axis, got " + std::to_string(steps));
    }
    std::vector<double> v(static_cast<std::size_t>(steps));
    const double h = (hi - lo) / (steps - 1);
    for (int j = 0; j < steps; ++j) {
        v[static_cast<std::size_t>(j)] = lo + h * j;
    }
    v.back() = hi;
    return v;
}

ScanGrid grid_scan(int theta_steps, int phi_steps, int psi_steps, int jobs) {
    return grid_scan(linspace(0.0, kPi, theta_steps), linspace(0.0, kTwoPi, phi_steps),
                     linspace(0.0, kTwoPi, psi_steps), jobs);
}

ScanGrid grid_scan(std::vector<double> theta, std::vector<double> phi, std::vector<double> psi, int jobs) {
    for (const auto* axis : {&theta, &phi, &psi}) {
        if (axis->empty()) {
            throw ValidationError("scan axis is empty");
        }
        for (std::size_t j = 0; j < axis->size(); ++j) {
            if (!std::isfinite((*axis)[j]) || (j > 0 && !((*axis)[j] > (*axis)[j - 1]))) {
                throw ValidationError("scan axes must be finite and strictly increasing");
            }
        }
    }
    ScanGrid g;
    g.theta = std::move(theta);
    g.phi = std::move(phi);
    g.psi = std::move(psi);
    const std::size_t n = g.theta.size() * g.phi.size() * g.psi.size();
    g.l_plus.resize(n);
    g.l_minus.resize(n);
    parallel_for(g.theta.size(), jobs, [&g](std::size_t t) {
        for (std::size_t p = 0; p < g.phi.size(); ++p) {
            for (std::size_t s = 0; s < g.psi.size(); ++s) {
                const TightPair l = tripartite_ghz_closed_unchecked(g.theta[t], g.phi[p], g.psi[s]);
                g.l_plus[g.index(t, p, s)] = l.plus;
                g.l_minus[g.index(t, p, s)] = l.minus;
            }
        }
    });
    return g;
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& opts) {
    const std::size_t n = start.size();
    if (n == 0) {
        throw ValidationError("nelder_mead needs at least one variable");
    }
    NelderMeadResult res;
    res.x = std::move(start);
    res.value = f(res.x);

    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        std::vector<std::vector<double>> simplex(n + 1, res.x);
        std::vector<double> fv(n + 1, res.value);
        const double step = opts.initial_step / (1 << std::min(restart, 8));
        for (std::size_t j = 0; j < n; ++j) {
            simplex[j + 1][j] += step;
            fv[j + 1] = f(simplex[j + 1]);
        }
        std::vector<std::size_t> order(n + 1);
        bool converged = false;
        int it = 0;
        for (; it < opts.max_iterations; ++it) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&fv](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second = order[n - 1];

            double diameter = 0.0;
            for (std::size_t v = 0; v <= n; ++v) {
                for (std::size_t j = 0; j < n; ++j) {
                    diameter = std::max(diameter, std::abs(simplex[v][j] - simplex[best][j]));
                }
            }
            const double spread = fv[worst] - fv[best];
            if (diameter <= opts.x_tolerance || spread <= opts.f_tolerance * (1.0 + std::abs(fv[best]))) {
                converged = true;
                break;
            }

            std::vector<double> centroid(n, 0.0);
            for (std::size_t v = 0; v <= n; ++v) {
                if (v == worst) {
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    centroid[j] += simplex[v][j] / static_cast<double>(n);
                }
            }
            const auto along = [&](double t) {
                std::vector<double> x(n);
                for (std::size_t j = 0; j < n; ++j) {
                    x[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
                }
                return x;
            };

            auto xr = along(-1.0);
            const double fr = f(xr);
            if (fr < fv[best]) {
                auto xe = along(-2.0);
                const double fe = f(xe);
                if (fe < fr) {
                    simplex[worst] = std::move(xe);
                    fv[worst] = fe;
                } else {
                    simplex[worst] = std::move(xr);
                    fv[worst] = fr;
                }
                continue;
            }
            if (fr < fv[second]) {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
                continue;
            }
            // Outside contraction when the reflection beat the worst vertex, inside otherwise.
            const bool outside = fr < fv[worst];
            auto xc = along(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = std::move(xc);
                fv[worst] = fc;
                continue;
            }
            for (std::size_t v = 0; v <= n; ++v) {
                if (v == best) {
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    simplex[v][j] = simplex[best][j] + 0.5 * (simplex[v][j] - simplex[best][j]);
                }
                fv[v] = f(simplex[v]);
            }
        }
        res.iterations += it;
        const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
        const double improvement = res.value - fv[best];
        if (fv[best] <= res.value) {
            res.x = simplex[best];
            res.value = fv[best];
        }
        res.restarts = restart;
        res.converged = converged;
        if (restart > 0 && converged && improvement <= opts.f_tolerance * (1.0 + std::abs(res.value))) {
            break;
        }
    }
    return res;
}

double optimal_theta(Branch branch) { return branch == Branch::Plus ? kPi - 2.0 * kTheta0 : 2.0 * kTheta0; }

double optimal_locus(Branch branch, double phi) {
    if (!(phi >= 0.0 && phi <= kTwoPi)) {
        std::ostringstream os;
        os << "phi = " << phi << " outside [0, 2pi]";
        throw ValidationError(os.str());
    }
    if (branch == Branch::Plus) {
        const double seam = kPi + 2.0 * kTheta0;
        return phi <= seam ? seam - phi : 3.0 * kPi + 2.0 * kTheta0 - phi;
    }
    const double seam = kTwoPi - 2.0 * kTheta0;
    return phi <= seam ? seam - phi : 4.0 * kPi - 2.0 * kTheta0 - phi;
}

double circular_distance(double a, double b) {
    const double d = wrap_2pi(a - b);
    return std::min(d, kTwoPi - d);
}

OptimumReport maximize_violation(Branch branch, const OptimizeOptions& opts) {
    if (!(opts.tolerance > 0.0)) {
        throw ValidationError("optimizer tolerance must be positive");
    }
    if (opts.fixed_theta && !(*opts.fixed_theta >= 0.0 && *opts.fixed_theta <= kPi)) {
        throw ValidationError("fixed theta outside [0, pi]");
    }
    if (opts.fixed_phi && !(*opts.fixed_phi >= 0.0 && *opts.fixed_phi <= kTwoPi)) {
        throw ValidationError("fixed phi outside [0, 2pi]");
    }

    const auto axis = [](const std::optional<double>& fixed, double hi, int steps) {
        return fixed ? std::vector<double>{*fixed} : linspace(0.0, hi, steps);
    };
    const ScanGrid coarse = grid_scan(axis(opts.fixed_theta, kPi, opts.coarse_theta),
                                      axis(opts.fixed_phi, kTwoPi, opts.coarse_phi),
                                      linspace(0.0, kTwoPi, opts.coarse_psi), opts.jobs);
    const auto& values = branch == Branch::Plus ? coarse.l_plus : coarse.l_minus;
    std::vector<std::size_t> cells(values.size());
    std::iota(cells.begin(), cells.end(), 0);
    std::stable_sort(cells.begin(), cells.end(), [&values](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    std::vector<std::array<double, 3>> starts;
    const std::size_t per_psi = coarse.psi.size();
    const std::size_t per_phi = coarse.phi.size() * per_psi;
    for (std::size_t c = 0; c < cells.size() && starts.size() < static_cast<std::size_t>(std::max(0, opts.starts)); ++c) {
        const std::size_t id = cells[c];
        starts.push_back({coarse.theta[id / per_phi], coarse.phi[(id % per_phi) / per_psi], coarse.psi[id % per_psi]});
    }
    for (const auto& s : opts.extra_starts) {
        starts.push_back(s);
    }
    if (starts.empty()) {
        throw ValidationError("optimizer needs at least one start");
    }

    // Free variables in order theta, phi, psi; pinned ones are substituted.
    const auto unpack = [&opts](const std::vector<double>& x) {
        std::size_t j = 0;
        const double theta = opts.fixed_theta ? *opts.fixed_theta : x[j++];
        const double phi = opts.fixed_phi ? *opts.fixed_phi : x[j++];
        const double psi = x[j];
        return std::array<double, 3>{theta, phi, psi};
    };
    const auto pack = [&opts](const std::array<double, 3>& a) {
        std::vector<double> x;
        if (!opts.fixed_theta) {
            x.push_back(a[0]);
        }
        if (!opts.fixed_phi) {
            x.push_back(a[1]);
        }
        x.push_back(a[2]);
        return x;
    };
    const auto f = [&](const std::vector<double>& x) {
        const auto a = unpack(x);
        return -objective(branch, a[0], a[1], a[2]);
    };

    NelderMeadOptions nm;
    nm.max_iterations = opts.max_iterations;
    nm.f_tolerance = std::min(1e-15, opts.tolerance * 1e-6);
    nm.x_tolerance = 1e-12;
    std::vector<NelderMeadResult> results(starts.size());
    parallel_for(starts.size(), opts.jobs, [&](std::size_t j) { results[j] = nelder_mead(f, pack(starts[j]), nm); });

    std::size_t best = 0;
    int iterations = 0;
    for (std::size_t j = 0; j < results.size(); ++j) {
        iterations += results[j].iterations;
        if (results[j].value < results[best].value) {
            best = j;
        }
    }
    const auto a = unpack(results[best].x);
    OptimumReport r;
    r.branch = branch;
    r.theta = std::clamp(a[0], 0.0, kPi);
    r.phi = wrap_2pi(a[1]);
    r.psi = wrap_2pi(a[2]);
    r.value = objective(branch, r.theta, r.phi, r.psi);
    r.locus_residual = circular_distance(r.psi, optimal_locus(branch, r.phi));
    r.converged = results[best].converged;
    r.starts = static_cast<int>(starts.size());
    r.iterations = iterations;
    if (!r.converged) {
        r.warning = "no convergence within " + std::to_string(opts.max_iterations) +
                    " iterations per start; best point found is reported";
    }
    return r;
}

}  // namespace leggett
