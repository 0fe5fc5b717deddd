#include "h10/hamiltonian.hpp"

#include "h10/parallel.hpp"

#include <omp.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace h10::hamiltonian {

namespace {
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kHermTol = 1e-12;
constexpr double kEndpointDegenTol = 1e-8;
constexpr double kInteriorDegenTol = 1e-12;

void require_hermitian(const SpMat& m, const char* what, double tol = kHermTol) {
    SpMat d = m - SpMat(m.adjoint());
    double r = 0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
    if (r > tol) {
        std::ostringstream os;
        os << what << " is not Hermitian: residual " << r;
        throw ConfigError(os.str());
    }
}

// Per-(mode, exponent) power tables over occupation values, shared by both
// diagonal kernels.
struct DiagTables {
    std::vector<std::map<std::uint32_t, std::vector<BigInt>>> pows;

    DiagTables(const poly::Polynomial& p, const FockSpace& s) {
        pows.resize(p.num_vars());
        for (const auto& m : p.monomials)
            for (std::size_t j = 0; j < p.num_vars(); ++j)
                if (m.exps[j] > 0) pows[j].emplace(m.exps[j], std::vector<BigInt>{});
        for (std::size_t j = 0; j < p.num_vars(); ++j)
            for (auto& [e, col] : pows[j]) {
                col.resize(static_cast<std::size_t>(s.cutoffs[j]));
                for (std::int64_t v = 0; v < s.cutoffs[j]; ++v)
                    col[static_cast<std::size_t>(v)] = boost::multiprecision::pow(BigInt(v), e);
            }
    }

    BigInt value_squared(const poly::Polynomial& p, const FockSpace& s, std::int64_t idx) const {
        BigInt total = 0;
        for (const auto& m : p.monomials) {
            BigInt t = m.coeff;
            for (std::size_t j = 0; j < p.num_vars(); ++j)
                if (m.exps[j] > 0)
                    t *= pows[j].at(m.exps[j])[static_cast<std::size_t>(s.occupancy_of_mode(idx, j))];
            total += t;
        }
        return total * total;
    }
};

}  // namespace

Interpolation linear_interpolation() {
    return [](double s) { return ScheduleWeights{1.0 - s, s}; };
}

std::pair<Eigen::VectorXd, bool> problem_diagonal(const poly::Polynomial& p,
                                                  const FockSpace& space, bool parallel) {
    if (p.num_vars() != space.num_modes())
        throw ConfigError("polynomial has " + std::to_string(p.num_vars()) +
                          " variables but the space has " + std::to_string(space.num_modes()) +
                          " modes");
    DiagTables tabs(p, space);
    VectorXd diag(space.dim);
    std::vector<unsigned char> sat(static_cast<std::size_t>(space.dim), 0);
    if (parallel) {
#pragma omp parallel for schedule(static) num_threads(par::thread_budget())
        for (std::int64_t i = 0; i < space.dim; ++i) {
            bool s = false;
            diag[i] = to_double_saturating(tabs.value_squared(p, space, i), &s);
            sat[static_cast<std::size_t>(i)] = s;
        }
    } else {
        for (std::int64_t i = 0; i < space.dim; ++i) {
            bool s = false;
            diag[i] = to_double_saturating(tabs.value_squared(p, space, i), &s);
            sat[static_cast<std::size_t>(i)] = s;
        }
    }
    bool any_sat = std::any_of(sat.begin(), sat.end(), [](unsigned char c) { return c != 0; });
    return {std::move(diag), any_sat};
}

HamiltonianSet build(const poly::Polynomial& p, const FockSpace& space,
                     const std::vector<cplx>& alphas) {
    if (alphas.size() != space.num_modes())
        throw ConfigError("need one coherent amplitude per mode");

    HamiltonianSet hs;
    hs.space = space;
    hs.alphas = alphas;
    hs.interpolation = linear_interpolation();

    auto [diag, sat] = problem_diagonal(p, space);
    hs.problem_diagonal = diag;
    hs.problem_saturated = sat;
    {
        std::vector<Eigen::Triplet<cplx>> t;
        t.reserve(static_cast<std::size_t>(space.dim));
        for (std::int64_t i = 0; i < space.dim; ++i)
            if (diag[i] != 0.0) t.emplace_back(i, i, diag[i]);
        SpMat m(space.dim, space.dim);
        m.setFromTriplets(t.begin(), t.end());
        m.makeCompressed();
        hs.h_problem = {space, std::move(m)};
    }
    {
        SpMat acc(space.dim, space.dim);
        for (std::size_t j = 0; j < space.num_modes(); ++j) {
            SpMat b = fock::annihilation(space, j).mat - alphas[j] * fock::identity(space).mat;
            acc = acc + SpMat(SpMat(b.adjoint()) * b);
        }
        // Symmetrize to keep the Hermiticity residual at rounding level.
        SpMat h = 0.5 * (acc + SpMat(acc.adjoint()));
        h.makeCompressed();
        require_hermitian(h, "assembled initial Hamiltonian");
        hs.h_initial = {space, std::move(h)};
    }
    return hs;
}

HamiltonianSet custom_set(const FockSpace& space, SpMat h_initial, SpMat h_problem,
                          std::vector<cplx> alphas, Interpolation interp) {
    if (h_initial.rows() != space.dim || h_initial.cols() != space.dim ||
        h_problem.rows() != space.dim || h_problem.cols() != space.dim)
        throw ConfigError("matrix dimensions do not match the space");
    require_hermitian(h_initial, "initial Hamiltonian");
    require_hermitian(h_problem, "problem Hamiltonian");
    auto w0 = interp(0.0), w1 = interp(1.0);
    if (std::abs(w0.initial - 1) > kHermTol || std::abs(w0.problem) > kHermTol ||
        std::abs(w1.initial) > kHermTol || std::abs(w1.problem - 1) > kHermTol)
        throw ConfigError("interpolation must traverse from the initial to the problem Hamiltonian");

    HamiltonianSet hs;
    hs.space = space;
    hs.alphas = std::move(alphas);
    h_initial.makeCompressed();
    h_problem.makeCompressed();
    hs.problem_diagonal = Eigen::MatrixXcd(h_problem).diagonal().real();
    hs.h_initial = {space, std::move(h_initial)};
    hs.h_problem = {space, std::move(h_problem)};
    hs.interpolation = std::move(interp);
    return hs;
}

OperatorMatrix HamiltonianSet::at(double s) const {
    if (s < 0.0 || s > 1.0)
        throw ConfigError("schedule position must lie in [0, 1]");
    ScheduleWeights w = interpolation(s);
    SpMat m = w.initial * h_initial.mat + w.problem * h_problem.mat;
    m.makeCompressed();
    return {space, std::move(m)};
}

OperatorMatrix perturbed(const HamiltonianSet& hs, const Perturbation& k_fn, double t, double T) {
    if (T <= 0) throw ConfigError("perturbed evolution needs a positive total time");
    if (t < 0 || t > T) throw ConfigError("perturbation time must lie in [0, T]");
    OperatorMatrix k = k_fn(t);
    if (!(k.space == hs.space)) throw ConfigError("perturbation acts on a different space");
    require_hermitian(k.mat, "perturbation", 1e-10);
    OperatorMatrix h = hs.at(t / T);
    SpMat m = h.mat + k.mat;
    m.makeCompressed();
    return {hs.space, std::move(m)};
}

SpectralDiagnostics diagnostics_pair(const Eigen::MatrixXcd& h_initial,
                                     const Eigen::MatrixXcd& h_problem, const Interpolation& interp,
                                     int grid_points, double margin) {
    const std::int64_t n = h_initial.rows();
    if (h_problem.rows() != n || h_initial.cols() != n || h_problem.cols() != n)
        throw ConfigError("diagnostics needs square matrices of equal size");
    if (n < 2) throw ConfigError("diagnostics needs at least a two-level system");
    if (grid_points < 3) throw ConfigError("diagnostics grid needs at least three points");

    SpectralDiagnostics d;
    d.margin = margin;
    d.s_grid.resize(static_cast<std::size_t>(grid_points));
    d.ground.resize(static_cast<std::size_t>(grid_points));
    d.excited.resize(static_cast<std::size_t>(grid_points));
    d.coupling.resize(static_cast<std::size_t>(grid_points));

    const MatrixXcd coupling_op = h_initial - h_problem;

    // Each grid point is computed independently and written to its own
    // slot; dense workspaces are per-thread, so only modest dimensions are
    // worth spreading over threads.
    const int threads =
        n <= 1024 ? std::min<int>(par::thread_budget(), grid_points) : 1;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int k = 0; k < grid_points; ++k) {
        double s = double(k) / double(grid_points - 1);
        ScheduleWeights w = interp(s);
        MatrixXcd h = w.initial * h_initial + w.problem * h_problem;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
        d.s_grid[static_cast<std::size_t>(k)] = s;
        d.ground[static_cast<std::size_t>(k)] = es.eigenvalues()[0];
        d.excited[static_cast<std::size_t>(k)] = es.eigenvalues()[1];
        VectorXcd g = es.eigenvectors().col(0);
        VectorXcd e = es.eigenvectors().col(1);
        d.coupling[static_cast<std::size_t>(k)] = std::abs(e.dot(coupling_op * g));
    }

    bool any = false;
    double gap = 0, norm = 0;
    for (int k = 0; k < grid_points; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double split = d.excited[i] - d.ground[i];
        const bool endpoint = k == 0 || k == grid_points - 1;
        norm = std::max(norm, d.coupling[i]);
        if (endpoint && split < kEndpointDegenTol) {
            d.degenerate_endpoint = true;
            continue;
        }
        if (!endpoint && split < kInteriorDegenTol) d.interior_degeneracy = true;
        gap = any ? std::min(gap, split) : split;
        any = true;
    }
    if (!any)
        throw NumericsError(
            "minimum gap is undefined: the two lowest levels are degenerate at every grid point");
    d.gap = gap;
    d.norm = norm;
    d.t_bound = gap > 0 ? margin * norm / (gap * gap)
                        : std::numeric_limits<double>::infinity();
    return d;
}

SpectralDiagnostics diagnostics(const HamiltonianSet& hs, int grid_points, double margin,
                                std::int64_t max_dense_dim) {
    if (hs.space.dim > max_dense_dim)
        throw ConfigError("dimension " + std::to_string(hs.space.dim) +
                          " exceeds the dense diagnostics budget " + std::to_string(max_dense_dim) +
                          "; use the variational gap estimate instead");
    return diagnostics_pair(hs.h_initial.dense(), hs.h_problem.dense(), hs.interpolation,
                            grid_points, margin);
}

}  // namespace h10::hamiltonian
