#pragma once

#include "h10/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <vector>

namespace h10::fock {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Truncated product of per-mode number bases.  Basis states are occupancy
// tuples (n_1, ..., n_K) with 0 <= n_j < M_j, enumerated row-major with the
// first mode slowest, so ascending linear index is ascending lexicographic
// order of tuples.
struct FockSpace {
    std::vector<std::int64_t> cutoffs;
    std::vector<std::int64_t> strides;
    std::int64_t dim = 0;

    static FockSpace make(std::vector<std::int64_t> cutoffs);

    std::size_t num_modes() const { return cutoffs.size(); }
    std::int64_t index(const std::vector<std::int64_t>& occupancy) const;
    std::vector<std::int64_t> occupancy(std::int64_t index) const;
    std::int64_t occupancy_of_mode(std::int64_t index, std::size_t mode) const {
        return (index / strides[mode]) % cutoffs[mode];
    }

    bool operator==(const FockSpace&) const = default;
};

// Sparse operator tied to the space it acts on.
struct OperatorMatrix {
    FockSpace space;
    SpMat mat;

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(mat); }

    // y = A x.  `parallel` selects the OpenMP row kernel; the serial
    // kernel is the reference implementation.  Both assign each output row
    // exactly once, so results are identical.
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x, bool parallel = true) const;
};

struct StateVector {
    FockSpace space;
    Eigen::VectorXcd amp;

    double norm() const { return amp.norm(); }
};

OperatorMatrix identity(const FockSpace& s);
OperatorMatrix annihilation(const FockSpace& s, std::size_t mode);
OperatorMatrix creation(const FockSpace& s, std::size_t mode);
OperatorMatrix number_op(const FockSpace& s, std::size_t mode);
OperatorMatrix position_op(const FockSpace& s, std::size_t mode);  // (a + a^dag)/sqrt(2)
OperatorMatrix momentum_op(const FockSpace& s, std::size_t mode);  // i(a^dag - a)/sqrt(2)

OperatorMatrix adjoint(const OperatorMatrix& a);
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

// Largest |A - A^dag| entry; 0 for exactly Hermitian matrices.
double hermiticity_residual(const OperatorMatrix& a);

Eigen::VectorXcd apply_serial(const SpMat& m, const Eigen::VectorXcd& x);
Eigen::VectorXcd apply_parallel(const SpMat& m, const Eigen::VectorXcd& x);

cplx expectation(const StateVector& bra, const OperatorMatrix& a, const StateVector& ket);
cplx expectation(const OperatorMatrix& a, const StateVector& psi);  // <psi|A|psi>

// Probability mass on basis states with any mode at its top level
// M_j - 1; the truncation saturation diagnostic.
double boundary_mass(const StateVector& psi);

// Normalized tensor product of per-mode coherent states.  Enforces the
// containment rule |alpha_j|^2 <= M_j / 4 (throws TruncationError naming
// the required cutoff otherwise).
StateVector coherent_state(const FockSpace& s, const std::vector<cplx>& alphas);

// Orthonormal displaced number basis: Gram-Schmidt applied to
// (b_1^dag)^k1 ... (b_K^dag)^kK |alpha>, b_j^dag = a_j^dag - conj(alpha_j),
// enumerated by ascending total excitation with lexicographic tie-breaking,
// skipping tuples exceeding per-mode cutoffs.  Vectors whose orthogonal
// residual falls below `drop_tol` are dropped and recorded.
struct DisplacedBasis {
    FockSpace space;
    Eigen::MatrixXcd states;                            // dim x M, orthonormal columns
    std::vector<std::vector<std::int64_t>> indices;     // excitation tuple per column
    std::vector<std::vector<std::int64_t>> dropped;     // tuples skipped as dependent
};
DisplacedBasis displaced_number_basis(const FockSpace& s, const std::vector<cplx>& alphas,
                                      std::int64_t count, double drop_tol = 1e-10);

// Ground state of the Bogoliubov mode c = u a + v a^dag with u = cosh
// theta, v = sinh theta (the canonicity constraint u^2 - v^2 = 1 holds by
// construction), with `excitation` quanta of c^dag on top (0, 1 or 2).
// Mode amplitudes follow the two-term recursion psi_{n+1} =
// -(v/u) sqrt(n/(n+1)) psi_{n-1}; the mass beyond the cutoff is audited
// against `tail_tol` (throws TruncationError naming a sufficient cutoff).
Eigen::VectorXcd bogoliubov_mode_vector(std::int64_t cutoff, double theta, int excitation,
                                        double tail_tol = 1e-8);

// Product over modes of Bogoliubov states with per-mode angles and
// excitation counts.
StateVector bogoliubov_product_state(const FockSpace& s, const std::vector<double>& thetas,
                                     const std::vector<int>& excitations,
                                     double tail_tol = 1e-8);

// The transformed annihilation operator c_j = u a_j + v a_j^dag.
OperatorMatrix bogoliubov_mode_op(const FockSpace& s, std::size_t mode, double theta);

}  // namespace h10::fock
