#include "h10/evolve.hpp"

#include "h10/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace h10::evolve {

namespace {
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using fock::cplx;

constexpr double kUnitNormTol = 1e-9;
const cplx kMinusI(0.0, -1.0);

void require_unit(const StateVector& psi) {
    if (std::abs(psi.norm() - 1.0) > kUnitNormTol)
        throw ConfigError("initial state is not normalized");
}

// w ~= exp(-i dt H) v for Hermitian sparse H via the Lanczos process with
// full reorthogonalization.  The Krylov dimension adapts to an a-posteriori
// estimate of the component leaking past the subspace.
VectorXcd lanczos_expmv(const SpMat& h, const VectorXcd& v, double dt, const EvolveOptions& opts,
                        long* matvecs) {
    const double beta0 = v.norm();
    if (beta0 == 0.0 || dt == 0.0) return v;
    const std::int64_t n = v.size();
    const int max_k = static_cast<int>(std::min<std::int64_t>(opts.max_krylov, n));

    MatrixXcd basis(n, max_k);
    VectorXd alpha(max_k), beta(max_k);
    basis.col(0) = v / beta0;

    auto propagate_tridiag = [&](int k) -> VectorXcd {
        // exp(-i dt T_k) e_1 via dense eigendecomposition of the real
        // symmetric tridiagonal T_k.
        MatrixXd t = MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
        VectorXd e1 = es.eigenvectors().row(0).transpose();
        VectorXcd phases(k);
        for (int i = 0; i < k; ++i)
            phases[i] = std::exp(kMinusI * dt * es.eigenvalues()[i]) * e1[i];
        return es.eigenvectors() * phases;
    };

    int used = 0;
    bool breakdown = false;
    for (int j = 0; j < max_k; ++j) {
        VectorXcd w = opts.parallel ? fock::apply_parallel(h, basis.col(j))
                                    : fock::apply_serial(h, basis.col(j));
        if (matvecs) ++*matvecs;
        alpha[j] = basis.col(j).dot(w).real();
        w -= alpha[j] * basis.col(j);
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        // Full reorthogonalization keeps the basis numerically orthogonal.
        for (int i = 0; i <= j; ++i) w -= basis.col(i).dot(w) * basis.col(i);
        beta[j] = w.norm();
        used = j + 1;
        if (beta[j] < 1e-13) {  // invariant subspace: expansion is exact
            breakdown = true;
            break;
        }
        if (used >= 3) {
            VectorXcd small = propagate_tridiag(used);
            const double leak = beta[j] * std::abs(small[used - 1]) * std::abs(dt);
            if (leak < opts.krylov_tol) break;
        }
        if (j + 1 < max_k) basis.col(j + 1) = w / beta[j];
    }
    if (!breakdown && used == max_k) {
        VectorXcd small = propagate_tridiag(used);
        const double leak = beta[used - 1] * std::abs(small[used - 1]) * std::abs(dt);
        if (leak >= opts.krylov_tol) {
            std::ostringstream os;
            os << "Krylov propagator did not converge within " << max_k
               << " vectors (leak estimate " << leak
               << "); increase inner subdivisions or the Krylov budget";
            throw NumericsError(os.str());
        }
    }
    VectorXcd small = propagate_tridiag(used);
    return beta0 * (basis.leftCols(used) * small);
}

// Shared RK4 core over a generic generator application y = H(t) x.
StateVector rk4_core(const FockSpace& space,
                     const std::function<VectorXcd(double, const VectorXcd&)>& apply_h,
                     const StateVector& psi0, double total_time, long steps, EvolveStats* stats) {
    VectorXcd psi = psi0.amp;
    const double dt = total_time / double(steps);
    for (long k = 0; k < steps; ++k) {
        const double t = dt * double(k);
        VectorXcd k1 = kMinusI * apply_h(t, psi);
        VectorXcd k2 = kMinusI * apply_h(t + dt / 2, psi + (dt / 2) * k1);
        VectorXcd k3 = kMinusI * apply_h(t + dt / 2, psi + (dt / 2) * k2);
        VectorXcd k4 = kMinusI * apply_h(t + dt, psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (stats) {
        stats->reference_steps = steps;
        stats->max_norm_drift = std::max(stats->max_norm_drift, std::abs(psi.norm() - 1.0));
    }
    return {space, std::move(psi)};
}

// Run the integrator at `steps` and 2*steps; accept when the final states
// agree to 1e-6, otherwise keep doubling (auto mode) or fail (fixed mode).
StateVector rk4_checked(const FockSpace& space,
                        const std::function<VectorXcd(double, const VectorXcd&)>& apply_h,
                        const StateVector& psi0, double total_time, long steps, bool auto_steps,
                        EvolveStats* stats) {
    StateVector coarse = rk4_core(space, apply_h, psi0, total_time, steps, nullptr);
    for (int attempt = 0;; ++attempt) {
        StateVector fine = rk4_core(space, apply_h, psi0, total_time, steps * 2, stats);
        const double diff = (fine.amp - coarse.amp).norm();
        if (diff < 1e-6) return fine;
        if (!auto_steps || attempt >= 6) {
            std::ostringstream os;
            os << "reference integrator: step halving moved the state by " << diff
               << " at " << steps * 2 << " steps";
            throw NumericsError(os.str());
        }
        steps *= 2;
        coarse = std::move(fine);
    }
}

}  // namespace

double gershgorin_bound(const fock::SpMat& m) {
    if (!m.isCompressed()) {
        fock::SpMat c = m;
        c.makeCompressed();
        return gershgorin_bound(c);
    }
    double r = 0;
    for (int row = 0; row < m.outerSize(); ++row) {
        double acc = 0;
        for (fock::SpMat::InnerIterator it(m, row); it; ++it) acc += std::abs(it.value());
        r = std::max(r, acc);
    }
    return r;
}

Schedule default_schedule(double total_time, double norm, double energy_scale) {
    if (total_time < 0 || norm < 0 || energy_scale < 0)
        throw ConfigError("schedule parameters must be nonnegative");
    Schedule s;
    s.total_time = total_time;
    s.outer_steps = std::max(1, static_cast<int>(std::ceil(10.0 * norm)));
    s.inner_steps =
        std::max(1, static_cast<int>(std::ceil(10.0 * total_time * s.dtau() * energy_scale)));
    s.norm_bound = norm;
    return s;
}

StateVector evolve_product_formula(const HamiltonianSet& hs, const StateVector& psi0,
                                   const Schedule& sched, EvolveStats* stats,
                                   const EvolveOptions& opts) {
    if (!(psi0.space == hs.space)) throw ConfigError("state lives on a different space");
    require_unit(psi0);
    if (sched.outer_steps < 1 || sched.inner_steps < 1)
        throw ConfigError("schedule needs at least one step");
    if (sched.norm_bound > 0 && sched.dtau() * sched.norm_bound > 0.1 + 1e-12)
        throw ConfigError("schedule too coarse: dtau * norm exceeds 0.1");
    if (sched.total_time == 0) {
        if (stats) stats->outer_steps = 0;
        return psi0;
    }

    const int n = sched.outer_steps;
    const double dt_phys = sched.total_time * sched.dtau();
    VectorXcd psi = psi0.amp;
    EvolveStats local;
    for (int k = 1; k <= n; ++k) {
        const double tau = (double(k) - 0.5) / double(n);
        fock::OperatorMatrix h = hs.at(tau);
        if (hs.space.dim <= opts.dense_dim_limit) {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h.dense());
            VectorXcd phases(hs.space.dim);
            for (std::int64_t i = 0; i < hs.space.dim; ++i)
                phases[i] = std::exp(kMinusI * dt_phys * es.eigenvalues()[i]);
            psi = es.eigenvectors() * phases.asDiagonal() *
                  (es.eigenvectors().adjoint() * psi);
        } else {
            const double delta = dt_phys / double(sched.inner_steps);
            for (int q = 0; q < sched.inner_steps; ++q)
                psi = lanczos_expmv(h.mat, psi, delta, opts, &local.matvecs);
        }
        local.outer_steps = k;
        local.max_norm_drift = std::max(local.max_norm_drift, std::abs(psi.norm() - 1.0));
    }
    if (stats) {
        stats->outer_steps = local.outer_steps;
        stats->matvecs += local.matvecs;
        stats->max_norm_drift = std::max(stats->max_norm_drift, local.max_norm_drift);
    }
    return {hs.space, std::move(psi)};
}

StateVector evolve_reference(const HamiltonianSet& hs, const StateVector& psi0, double total_time,
                             long steps, EvolveStats* stats) {
    if (!(psi0.space == hs.space)) throw ConfigError("state lives on a different space");
    require_unit(psi0);
    if (total_time < 0) throw ConfigError("total time must be nonnegative");
    if (total_time == 0) return psi0;

    // Apply H(s) as a weighted pair of sparse products rather than
    // assembling a matrix per stage.
    auto apply_h = [&](double t, const VectorXcd& x) -> VectorXcd {
        hamiltonian::ScheduleWeights w = hs.interpolation(t / total_time);
        if (stats) stats->matvecs += 2;
        return w.initial * fock::apply_parallel(hs.h_initial.mat, x) +
               w.problem * fock::apply_parallel(hs.h_problem.mat, x);
    };

    bool auto_steps = steps == 0;
    if (auto_steps) {
        const double r =
            std::max(gershgorin_bound(hs.h_initial.mat), gershgorin_bound(hs.h_problem.mat));
        const double raw = std::max(64.0, std::ceil(4.0 * total_time * r));
        if (raw > 5e7)
            throw NumericsError(
                "reference integrator cannot resolve this energy scale in a sane step count");
        steps = static_cast<long>(raw);
    }
    return rk4_checked(hs.space, apply_h, psi0, total_time, steps, auto_steps, stats);
}

StateVector evolve_generator(const FockSpace& space, const std::function<SpMat(double)>& h_of_t,
                             const StateVector& psi0, double total_time, long steps,
                             EvolveStats* stats) {
    if (!(psi0.space == space)) throw ConfigError("state lives on a different space");
    require_unit(psi0);
    if (steps < 0) throw ConfigError("generator evolution step count must be nonnegative");
    if (total_time == 0) return psi0;

    bool auto_steps = steps == 0;
    if (auto_steps) {
        // No closed-form energy scale for a callback; probe a few points.
        double r = 0;
        for (double f : {0.0, 0.25, 0.5, 0.75, 1.0})
            r = std::max(r, gershgorin_bound(h_of_t(f * total_time)));
        const double raw = std::max(64.0, std::ceil(4.0 * total_time * r));
        if (raw > 5e7)
            throw NumericsError(
                "generator integrator cannot resolve this energy scale in a sane step count");
        steps = static_cast<long>(raw);
    }

    // The RK4 stages hit each midpoint twice; cache the last generator.
    double cached_t = std::numeric_limits<double>::quiet_NaN();
    SpMat cached;
    auto apply_h = [&](double t, const VectorXcd& x) -> VectorXcd {
        if (t != cached_t) {
            cached = h_of_t(t);
            if (!cached.isCompressed()) cached.makeCompressed();
            cached_t = t;
        }
        if (stats) ++stats->matvecs;
        return fock::apply_parallel(cached, x);
    };
    return rk4_checked(space, apply_h, psi0, total_time, steps, auto_steps, stats);
}

std::function<SpMat(double)> midpoint_generator(const HamiltonianSet& hs, const Schedule& sched) {
    if (sched.total_time <= 0) throw ConfigError("midpoint generator needs a positive total time");
    if (sched.outer_steps < 1) throw ConfigError("midpoint generator needs at least one interval");
    const int n = sched.outer_steps;
    const double total = sched.total_time;
    auto cache = std::make_shared<std::pair<int, SpMat>>(-1, SpMat());
    return [hs, n, total, cache](double t) -> SpMat {
        int k = static_cast<int>(std::floor(t / total * n));
        k = std::clamp(k, 0, n - 1);
        if (cache->first != k) {
            cache->second = hs.at((k + 0.5) / n).mat;
            cache->first = k;
        }
        return cache->second;
    };
}

StateVector evolve_reference_matched(const HamiltonianSet& hs, const StateVector& psi0,
                                     const Schedule& sched, EvolveStats* stats) {
    if (!(psi0.space == hs.space)) throw ConfigError("state lives on a different space");
    require_unit(psi0);
    if (sched.total_time == 0) return psi0;
    if (sched.outer_steps < 1) throw ConfigError("matched reference needs at least one interval");

    const long n = sched.outer_steps;
    const double total = sched.total_time;
    const double span = total / double(n);

    // Integrate each interval under its frozen generator; the generator is
    // constant inside an interval, so no integrator step ever crosses one
    // of its jumps and RK4 keeps its order.
    auto run = [&](long per, EvolveStats* st) -> VectorXcd {
        VectorXcd psi = psi0.amp;
        long matvecs = 0;
        for (long k = 1; k <= n; ++k) {
            const SpMat h = hs.at((double(k) - 0.5) / double(n)).mat;  // product-formula tau_k
            const double dt = span / double(per);
            auto ap = [&](const VectorXcd& x) {
                ++matvecs;
                return fock::apply_parallel(h, x);
            };
            for (long i = 0; i < per; ++i) {
                VectorXcd k1 = kMinusI * ap(psi);
                VectorXcd k2 = kMinusI * ap(psi + (dt / 2) * k1);
                VectorXcd k3 = kMinusI * ap(psi + (dt / 2) * k2);
                VectorXcd k4 = kMinusI * ap(psi + dt * k3);
                psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        if (st) {
            st->matvecs += matvecs;
            st->reference_steps = per * n;
            st->max_norm_drift = std::max(st->max_norm_drift, std::abs(psi.norm() - 1.0));
        }
        return psi;
    };

    double r = 0;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) r = std::max(r, gershgorin_bound(hs.at(s).mat));
    long per = std::max<long>(4, static_cast<long>(std::ceil(4.0 * total * r / double(n))));
    if (double(per) * double(n) > 5e7)
        throw NumericsError(
            "matched reference cannot resolve this energy scale in a sane step count");

    VectorXcd coarse = run(per, nullptr);
    for (int attempt = 0;; ++attempt) {
        VectorXcd fine = run(2 * per, stats);
        const double diff = (fine - coarse).norm();
        if (diff < 1e-6) return {hs.space, std::move(fine)};
        if (attempt >= 6) {
            std::ostringstream os;
            os << "matched reference: step halving moved the state by " << diff << " at "
               << 2 * per * n << " steps";
            throw NumericsError(os.str());
        }
        per *= 2;
        coarse = std::move(fine);
    }
}

Distribution distribution(const StateVector& psi) {
    VectorXd p = psi.amp.cwiseAbs2();
    const double total = p.sum();
    if (std::abs(total - 1.0) > kUnitNormTol) {
        std::ostringstream os;
        os << "probabilities sum to " << total << ", not 1; the state is not normalized";
        throw NumericsError(os.str());
    }
    return {psi.space, std::move(p)};
}

double sup_distance(const Distribution& a, const Distribution& b) {
    if (!(a.space == b.space)) throw ConfigError("distributions live on different spaces");
    return (a.probs - b.probs).cwiseAbs().maxCoeff();
}

}  // namespace h10::evolve
