// operator.cpp

#include "jch/operator.hpp"

#include <cmath>
#include <stdexcept>

namespace jch {

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& x) const {
    if (static_cast<std::size_t>(x.size()) != cols())
        throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
    return matrix * x;
}

bool SparseOperator::is_real() const {
    for (int k = 0; k < matrix.outerSize(); ++k)
        for (CSparse::InnerIterator it(matrix, k); it; ++it)
            if (it.value().imag() != 0.0) return false;
    return true;
}

RSparse SparseOperator::real_part() const {
    return matrix.real();
}

double SparseOperator::hermiticity_defect() const {
    if (rows() != cols()) return INFINITY;
    const CSparse adj = matrix.adjoint();
    const CSparse diff = matrix - adj;
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (CSparse::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

SparseOperator from_triplets(std::size_t rows, std::size_t cols,
                             const std::vector<Eigen::Triplet<cplx>>& triplets, bool hermitian) {
    SparseOperator op;
    op.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    op.hermitian = hermitian;
    return op;
}

void QuantumState::normalize() {
    const double n = amplitudes.norm();
    if (n == 0.0) throw std::runtime_error("QuantumState::normalize: zero vector");
    amplitudes /= n;
}

QuantumState basis_state(const SectorPtr& sector, std::size_t index) {
    if (!sector) throw std::invalid_argument("basis_state: null sector");
    if (index >= sector->dimension()) throw std::out_of_range("basis_state: index out of range");
    QuantumState s{sector, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector->dimension()))};
    s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
    return s;
}

}  // namespace jch
