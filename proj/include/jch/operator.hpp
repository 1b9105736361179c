// operator.hpp — Sparse operators and sector-bound state vectors

#pragma once

#include "jch/hilbert.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <vector>

namespace jch {

using cplx = std::complex<double>;
using CSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using RSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Operator between two sector bases (domain -> codomain). Square operators
// have domain == codomain. Sectors may be null for operators on other bases
// (the spin chain uses its own).
struct SparseOperator {
    CSparse matrix;
    bool hermitian{false};
    SectorPtr domain{};
    SectorPtr codomain{};

    std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
    std::size_t dimension() const noexcept { return cols(); }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

    // True when every stored entry has zero imaginary part.
    bool is_real() const;
    RSparse real_part() const;

    // max |H - H^dagger| over stored entries; 0 for exactly symmetric assembly.
    double hermiticity_defect() const;
    Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(matrix); }
};

SparseOperator from_triplets(std::size_t rows, std::size_t cols,
                             const std::vector<Eigen::Triplet<cplx>>& triplets, bool hermitian);

// Normalized amplitude vector over a sector basis.
struct QuantumState {
    SectorPtr sector{};
    Eigen::VectorXcd amplitudes{};

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes.size()); }
    int total_excitations() const { return sector ? sector->total_excitations() : 0; }
    double norm() const { return amplitudes.norm(); }
    void normalize();
};

QuantumState basis_state(const SectorPtr& sector, std::size_t index);

}  // namespace jch
