#include "h10/fock.hpp"

#include "h10/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace h10::fock {

namespace {
using Eigen::VectorXcd;
using Triplet = Eigen::Triplet<cplx>;

SpMat from_triplets(const FockSpace& s, std::vector<Triplet>& t) {
    SpMat m(s.dim, s.dim);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}
}  // namespace

FockSpace FockSpace::make(std::vector<std::int64_t> cutoffs) {
    if (cutoffs.empty()) throw ConfigError("Fock space needs at least one mode");
    FockSpace s;
    s.cutoffs = std::move(cutoffs);
    std::int64_t dim = 1;
    for (auto m : s.cutoffs) {
        if (m < 1) throw ConfigError("mode cutoffs must be >= 1");
        if (dim > (std::int64_t(1) << 24) / m)
            throw ConfigError("Fock space dimension exceeds supported size");
        dim *= m;
    }
    s.dim = dim;
    s.strides.assign(s.cutoffs.size(), 1);
    for (std::size_t j = s.cutoffs.size() - 1; j-- > 0;)
        s.strides[j] = s.strides[j + 1] * s.cutoffs[j + 1];
    return s;
}

std::int64_t FockSpace::index(const std::vector<std::int64_t>& occupancy) const {
    if (occupancy.size() != cutoffs.size())
        throw ConfigError("occupancy arity does not match mode count");
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < occupancy.size(); ++j) {
        if (occupancy[j] < 0 || occupancy[j] >= cutoffs[j])
            throw ConfigError("occupancy out of range for mode " + std::to_string(j + 1));
        idx += occupancy[j] * strides[j];
    }
    return idx;
}

std::vector<std::int64_t> FockSpace::occupancy(std::int64_t index) const {
    std::vector<std::int64_t> occ(cutoffs.size());
    for (std::size_t j = 0; j < cutoffs.size(); ++j) occ[j] = occupancy_of_mode(index, j);
    return occ;
}

OperatorMatrix identity(const FockSpace& s) {
    SpMat m(s.dim, s.dim);
    m.setIdentity();
    return {s, std::move(m)};
}

OperatorMatrix annihilation(const FockSpace& s, std::size_t mode) {
    if (mode >= s.num_modes()) throw ConfigError("mode index out of range");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(s.dim));
    for (std::int64_t i = 0; i < s.dim; ++i) {
        std::int64_t n = s.occupancy_of_mode(i, mode);
        if (n > 0) t.emplace_back(i - s.strides[mode], i, std::sqrt(double(n)));
    }
    return {s, from_triplets(s, t)};
}

OperatorMatrix creation(const FockSpace& s, std::size_t mode) {
    if (mode >= s.num_modes()) throw ConfigError("mode index out of range");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(s.dim));
    for (std::int64_t i = 0; i < s.dim; ++i) {
        std::int64_t n = s.occupancy_of_mode(i, mode);
        if (n + 1 < s.cutoffs[mode]) t.emplace_back(i + s.strides[mode], i, std::sqrt(double(n + 1)));
    }
    return {s, from_triplets(s, t)};
}

OperatorMatrix number_op(const FockSpace& s, std::size_t mode) {
    if (mode >= s.num_modes()) throw ConfigError("mode index out of range");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(s.dim));
    for (std::int64_t i = 0; i < s.dim; ++i) {
        std::int64_t n = s.occupancy_of_mode(i, mode);
        if (n > 0) t.emplace_back(i, i, double(n));
    }
    return {s, from_triplets(s, t)};
}

OperatorMatrix position_op(const FockSpace& s, std::size_t mode) {
    const double r = 1.0 / std::sqrt(2.0);
    SpMat m = r * (annihilation(s, mode).mat + creation(s, mode).mat);
    m.makeCompressed();
    return {s, std::move(m)};
}

OperatorMatrix momentum_op(const FockSpace& s, std::size_t mode) {
    const cplx ir(0.0, 1.0 / std::sqrt(2.0));
    SpMat m = ir * (creation(s, mode).mat - annihilation(s, mode).mat);
    m.makeCompressed();
    return {s, std::move(m)};
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
    SpMat m = a.mat.adjoint();
    m.makeCompressed();
    return {a.space, std::move(m)};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.space == b.space)) throw ConfigError("operator spaces differ");
    SpMat m = (a.mat * b.mat - b.mat * a.mat).pruned();
    m.makeCompressed();
    return {a.space, std::move(m)};
}

double hermiticity_residual(const OperatorMatrix& a) {
    SpMat d = a.mat - SpMat(a.mat.adjoint());
    double r = 0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

Eigen::VectorXcd apply_serial(const SpMat& m, const Eigen::VectorXcd& x) {
    if (!m.isCompressed()) {
        SpMat c = m;
        c.makeCompressed();
        return apply_serial(c, x);
    }
    VectorXcd y(m.rows());
    const auto* outer = m.outerIndexPtr();
    const auto* inner = m.innerIndexPtr();
    const cplx* vals = m.valuePtr();
    for (std::int64_t r = 0; r < m.rows(); ++r) {
        cplx acc = 0;
        for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += vals[k] * x[inner[k]];
        y[r] = acc;
    }
    return y;
}

Eigen::VectorXcd apply_parallel(const SpMat& m, const Eigen::VectorXcd& x) {
    if (!m.isCompressed()) {
        SpMat c = m;
        c.makeCompressed();
        return apply_parallel(c, x);
    }
    VectorXcd y(m.rows());
    const auto* outer = m.outerIndexPtr();
    const auto* inner = m.innerIndexPtr();
    const cplx* vals = m.valuePtr();
    // Each row is written by exactly one thread with a fixed summation
    // order, so the result does not depend on the thread count.
#pragma omp parallel for schedule(static) num_threads(par::thread_budget())
    for (std::int64_t r = 0; r < m.rows(); ++r) {
        cplx acc = 0;
        for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += vals[k] * x[inner[k]];
        y[r] = acc;
    }
    return y;
}

Eigen::VectorXcd OperatorMatrix::apply(const Eigen::VectorXcd& x, bool parallel) const {
    if (x.size() != space.dim) throw ConfigError("state dimension does not match operator");
    return parallel ? apply_parallel(mat, x) : apply_serial(mat, x);
}

cplx expectation(const StateVector& bra, const OperatorMatrix& a, const StateVector& ket) {
    if (!(bra.space == a.space) || !(ket.space == a.space))
        throw ConfigError("expectation over mismatched spaces");
    return bra.amp.dot(a.apply(ket.amp));
}

cplx expectation(const OperatorMatrix& a, const StateVector& psi) {
    return expectation(psi, a, psi);
}

double boundary_mass(const StateVector& psi) {
    const FockSpace& s = psi.space;
    double mass = 0;
    for (std::int64_t i = 0; i < s.dim; ++i) {
        bool top = false;
        for (std::size_t j = 0; j < s.num_modes() && !top; ++j)
            top = s.occupancy_of_mode(i, j) == s.cutoffs[j] - 1;
        if (top) mass += std::norm(psi.amp[i]);
    }
    return mass;
}

StateVector coherent_state(const FockSpace& s, const std::vector<cplx>& alphas) {
    if (alphas.size() != s.num_modes())
        throw ConfigError("coherent state needs one amplitude per mode");
    VectorXcd acc;
    for (std::size_t j = 0; j < s.num_modes(); ++j) {
        const double a2 = std::norm(alphas[j]);
        const std::int64_t M = s.cutoffs[j];
        if (a2 > double(M) / 4.0) {
            std::ostringstream os;
            os << "coherent amplitude of mode " << j + 1 << " violates containment: |alpha|^2 = "
               << a2 << " > M/4 = " << double(M) / 4.0 << "; raise the cutoff to at least "
               << static_cast<std::int64_t>(std::ceil(4.0 * a2));
            throw TruncationError(os.str());
        }
        VectorXcd v(M);
        v[0] = std::exp(-a2 / 2.0);
        for (std::int64_t n = 1; n < M; ++n) v[n] = v[n - 1] * alphas[j] / std::sqrt(double(n));
        if (j == 0) {
            acc = v;
        } else {
            VectorXcd out(acc.size() * M);
            for (std::int64_t i = 0; i < acc.size(); ++i)
                for (std::int64_t n = 0; n < M; ++n) out[i * M + n] = acc[i] * v[n];
            acc = std::move(out);
        }
    }
    acc /= acc.norm();
    return {s, std::move(acc)};
}

namespace {

// Multi-indices with k_j < M_j, ascending total excitation, lexicographic
// within a total.
std::vector<std::vector<std::int64_t>> excitation_tuples(const FockSpace& s, std::int64_t count) {
    std::vector<std::vector<std::int64_t>> out;
    std::int64_t max_total = 0;
    for (auto m : s.cutoffs) max_total += m - 1;
    std::vector<std::int64_t> k(s.num_modes(), 0);
    for (std::int64_t total = 0; total <= max_total; ++total) {
        // Depth-first lexicographic enumeration of compositions of `total`.
        std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t j, std::int64_t rem) {
            if (static_cast<std::int64_t>(out.size()) >= count) return;
            if (j == s.num_modes() - 1) {
                if (rem < s.cutoffs[j]) {
                    k[j] = rem;
                    out.push_back(k);
                }
                return;
            }
            for (std::int64_t v = 0; v <= std::min<std::int64_t>(rem, s.cutoffs[j] - 1); ++v) {
                k[j] = v;
                rec(j + 1, rem - v);
                if (static_cast<std::int64_t>(out.size()) >= count) return;
            }
        };
        rec(0, total);
        if (static_cast<std::int64_t>(out.size()) >= count) break;
    }
    return out;
}

}  // namespace

DisplacedBasis displaced_number_basis(const FockSpace& s, const std::vector<cplx>& alphas,
                                      std::int64_t count, double drop_tol) {
    if (count < 1) throw ConfigError("basis size must be >= 1");
    if (count > s.dim)
        throw ConfigError("requested basis size " + std::to_string(count) +
                          " exceeds space dimension " + std::to_string(s.dim));
    StateVector coh = coherent_state(s, alphas);

    // Displaced creation operators b_j^dag = a_j^dag - conj(alpha_j).
    std::vector<SpMat> bdag;
    for (std::size_t j = 0; j < s.num_modes(); ++j) {
        SpMat m = creation(s, j).mat - std::conj(alphas[j]) * identity(s).mat;
        m.makeCompressed();
        bdag.push_back(std::move(m));
    }

    auto tuples = excitation_tuples(s, count);
    std::map<std::vector<std::int64_t>, VectorXcd> raw;

    DisplacedBasis basis;
    basis.space = s;
    basis.states.resize(s.dim, tuples.size());
    std::int64_t accepted = 0;
    for (const auto& tup : tuples) {
        VectorXcd v;
        if (std::all_of(tup.begin(), tup.end(), [](std::int64_t x) { return x == 0; })) {
            v = coh.amp;
        } else {
            std::size_t lead = 0;
            while (tup[lead] == 0) ++lead;
            auto parent = tup;
            parent[lead] -= 1;
            v = apply_parallel(bdag[lead], raw.at(parent));
        }
        raw.emplace(tup, v);

        double n0 = v.norm();
        if (n0 < 1e-300) {
            basis.dropped.push_back(tup);
            continue;
        }
        v /= n0;
        // Modified Gram-Schmidt with a second pass for reorthogonalization.
        for (int pass = 0; pass < 2; ++pass)
            for (std::int64_t c = 0; c < accepted; ++c) {
                cplx proj = basis.states.col(c).dot(v);
                v -= proj * basis.states.col(c);
            }
        double res = v.norm();
        if (res < drop_tol) {
            basis.dropped.push_back(tup);
            continue;
        }
        basis.states.col(accepted) = v / res;
        basis.indices.push_back(tup);
        ++accepted;
    }
    basis.states.conservativeResize(Eigen::NoChange, accepted);
    return basis;
}

Eigen::VectorXcd bogoliubov_mode_vector(std::int64_t cutoff, double theta, int excitation,
                                        double tail_tol) {
    if (excitation < 0 || excitation > 2)
        throw ConfigError("Bogoliubov excitation must be 0, 1 or 2");
    const double u = std::cosh(theta), v = std::sinh(theta);
    // Work in an extended range so mass beyond the requested cutoff can be
    // audited rather than silently discarded.
    const std::int64_t ext = std::max<std::int64_t>(4 * cutoff, cutoff + 64);
    VectorXcd psi = VectorXcd::Zero(ext);
    psi[0] = 1.0;
    for (std::int64_t n = 0; n + 1 < ext; ++n) {
        if ((n + 1) % 2 == 1) continue;  // odd levels stay empty in the vacuum
        psi[n + 1] = -(v / u) * std::sqrt(double(n) / double(n + 1)) * psi[n - 1];
    }
    auto raise = [&](const VectorXcd& x) {
        VectorXcd y = VectorXcd::Zero(ext);
        for (std::int64_t n = 0; n < ext; ++n) {
            cplx acc = 0;
            if (n > 0) acc += u * std::sqrt(double(n)) * x[n - 1];        // u a^dag
            if (n + 1 < ext) acc += v * std::sqrt(double(n + 1)) * x[n + 1];  // v a
            y[n] = acc;
        }
        return y;
    };
    for (int e = 0; e < excitation; ++e) psi = raise(psi);

    const double total = psi.squaredNorm();
    double tail = 0;
    for (std::int64_t n = cutoff; n < ext; ++n) tail += std::norm(psi[n]);
    if (tail > tail_tol * total) {
        // Find a sufficient cutoff to report.
        double acc = 0;
        std::int64_t needed = ext;
        for (std::int64_t n = ext; n-- > 0;) {
            acc += std::norm(psi[n]);
            if (acc > tail_tol * total) {
                needed = n + 2;
                break;
            }
        }
        std::ostringstream os;
        os << "Bogoliubov state (theta = " << theta << ", excitation " << excitation
           << ") leaves relative mass " << tail / total << " beyond cutoff " << cutoff
           << "; raise the cutoff to at least " << needed;
        throw TruncationError(os.str());
    }
    VectorXcd out = psi.head(cutoff);
    out /= out.norm();
    return out;
}

StateVector bogoliubov_product_state(const FockSpace& s, const std::vector<double>& thetas,
                                     const std::vector<int>& excitations, double tail_tol) {
    if (thetas.size() != s.num_modes() || excitations.size() != s.num_modes())
        throw ConfigError("Bogoliubov product state needs one angle and excitation per mode");
    VectorXcd acc;
    for (std::size_t j = 0; j < s.num_modes(); ++j) {
        VectorXcd v = bogoliubov_mode_vector(s.cutoffs[j], thetas[j], excitations[j], tail_tol);
        if (j == 0) {
            acc = v;
        } else {
            VectorXcd out(acc.size() * v.size());
            for (std::int64_t i = 0; i < acc.size(); ++i)
                for (std::int64_t n = 0; n < v.size(); ++n) out[i * v.size() + n] = acc[i] * v[n];
            acc = std::move(out);
        }
    }
    return {s, std::move(acc)};
}

OperatorMatrix bogoliubov_mode_op(const FockSpace& s, std::size_t mode, double theta) {
    const double u = std::cosh(theta), v = std::sinh(theta);
    SpMat m = u * annihilation(s, mode).mat + v * creation(s, mode).mat;
    m.makeCompressed();
    return {s, std::move(m)};
}

}  // namespace h10::fock
