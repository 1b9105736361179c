// eigensolvers.cpp — Dense and thick-restart Lanczos ground states

#include "jch/solvers.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace jch {

namespace {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::VectorXcd default_start(std::size_t n) {
    // Fixed seed: the solver must be reproducible run to run.
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    return v;
}

template <class Scalar>
Vec<Scalar> convert_start(const Eigen::VectorXcd& v);

template <>
Vec<double> convert_start<double>(const Eigen::VectorXcd& v) {
    return v.real();
}

template <>
Vec<cplx> convert_start<cplx>(const Eigen::VectorXcd& v) {
    return v;
}

// Thick-restart Lanczos with full (two-pass classical Gram-Schmidt)
// reorthogonalization. The projected matrix is rebuilt from explicit
// projections, so after a restart the Ritz block and its coupling to the
// carried residual vector need no special bookkeeping.
template <class Scalar>
Eigenpair thick_restart_lanczos(const Eigen::SparseMatrix<Scalar, Eigen::RowMajor>& A,
                                Vec<Scalar> start, const GroundStateOptions& opts) {
    const Eigen::Index n = A.rows();
    const Eigen::Index m = std::min<Eigen::Index>(std::max(opts.krylov_dim, 4), n);
    const Eigen::Index keep = std::clamp<Eigen::Index>(opts.keep, 1, std::max<Eigen::Index>(1, m - 2));

    Mat<Scalar> V(n, m + 1);
    Mat<Scalar> T = Mat<Scalar>::Zero(m, m);
    const double start_norm = start.norm();
    if (start_norm == 0.0) throw std::invalid_argument("lanczos: zero start vector");
    V.col(0) = start / start_norm;

    Eigen::Index j0 = 0;
    int matvecs = 0;
    double best_residual = INFINITY;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        Eigen::Index m_eff = m;
        double beta = 0.0;
        bool invariant = false;
        for (Eigen::Index j = j0; j < m; ++j) {
            Vec<Scalar> w = A * V.col(j);
            ++matvecs;
            const auto basis = V.leftCols(j + 1);
            Vec<Scalar> h = basis.adjoint() * w;
            w.noalias() -= basis * h;
            const Vec<Scalar> h2 = basis.adjoint() * w;
            w.noalias() -= basis * h2;
            h += h2;
            for (Eigen::Index i = 0; i < j; ++i) {
                T(i, j) = h[i];
                T(j, i) = Eigen::numext::conj(h[i]);
            }
            T(j, j) = Eigen::numext::real(h[j]);
            beta = w.norm();
            const double scale = std::max(1.0, std::abs(Eigen::numext::real(h[j])));
            if (beta <= 1e-13 * scale) {
                m_eff = j + 1;
                invariant = true;
                break;
            }
            V.col(j + 1) = w / beta;
        }

        Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(T.topLeftCorner(m_eff, m_eff));
        if (es.info() != Eigen::Success) throw std::runtime_error("lanczos: projected eigensolve failed");
        const auto& theta = es.eigenvalues();
        const Mat<Scalar>& S = es.eigenvectors();
        const double estimate = invariant ? 0.0 : beta * std::abs(S(m_eff - 1, 0));

        if (estimate < opts.tolerance || restart == opts.max_restarts) {
            Vec<Scalar> x = V.leftCols(m_eff) * S.col(0);
            x.normalize();
            const double energy = theta[0];
            const double residual = (A * x - energy * x).norm();
            ++matvecs;
            best_residual = std::min(best_residual, residual);
            if (residual < opts.tolerance || invariant) {
                Eigenpair out;
                out.energy = energy;
                out.vector = x.template cast<cplx>();
                out.residual = residual;
                out.matvecs = matvecs;
                return out;
            }
        }

        const Eigen::Index k = std::min(keep, m_eff - 1);
        const Mat<Scalar> ritz = (V.leftCols(m_eff) * S.leftCols(k)).eval();
        const Vec<Scalar> carried = V.col(m_eff);
        V.leftCols(k) = ritz;
        V.col(k) = carried;
        T.setZero();
        for (Eigen::Index i = 0; i < k; ++i) T(i, i) = theta[i];
        j0 = k;
    }
    throw std::runtime_error("lanczos: no convergence (best residual " +
                             std::to_string(best_residual) + ")");
}

}  // namespace

Eigenpair dense_ground_state(const SparseOperator& H) {
    if (H.rows() != H.cols() || H.rows() == 0)
        throw std::invalid_argument("ground_state: operator must be square and nonempty");
    Eigenpair out;
    if (H.is_real()) {
        const Eigen::MatrixXd dense = Eigen::MatrixXd(H.real_part());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        if (es.info() != Eigen::Success) throw std::runtime_error("ground_state: dense solve failed");
        out.energy = es.eigenvalues()[0];
        out.vector = es.eigenvectors().col(0).cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.to_dense());
        if (es.info() != Eigen::Success) throw std::runtime_error("ground_state: dense solve failed");
        out.energy = es.eigenvalues()[0];
        out.vector = es.eigenvectors().col(0);
    }
    out.residual = (H.matrix * out.vector - out.energy * out.vector).norm();
    return out;
}

Eigenpair lanczos_ground_state(const SparseOperator& H, const GroundStateOptions& opts) {
    if (H.rows() != H.cols() || H.rows() == 0)
        throw std::invalid_argument("ground_state: operator must be square and nonempty");
    const Eigen::VectorXcd start = opts.initial_guess ? *opts.initial_guess : default_start(H.rows());
    if (static_cast<std::size_t>(start.size()) != H.rows())
        throw std::invalid_argument("ground_state: initial guess has wrong dimension");
    if (H.is_real()) {
        const RSparse A = H.real_part();
        return thick_restart_lanczos<double>(A, convert_start<double>(start), opts);
    }
    return thick_restart_lanczos<cplx>(H.matrix, convert_start<cplx>(start), opts);
}

Eigenpair ground_state(const SparseOperator& H, const GroundStateOptions& opts) {
    if (!H.hermitian) throw std::invalid_argument("ground_state: operator must be Hermitian");
    if (H.rows() <= opts.dense_threshold) return dense_ground_state(H);
    return lanczos_ground_state(H, opts);
}

QuantumState ground_state_of(const SparseOperator& H, const GroundStateOptions& opts) {
    auto pair = ground_state(H, opts);
    return QuantumState{H.domain, std::move(pair.vector)};
}

std::vector<double> cutoff_convergence(const LatticeSpec& lattice, int total,
                                       const ModelParams& params, const std::vector<int>& cutoffs) {
    std::vector<double> energies;
    energies.reserve(cutoffs.size());
    for (const int c : cutoffs) {
        LatticeSpec l = lattice;
        l.photon_cutoff = c;
        const auto sector = make_sector(l, total);
        energies.push_back(ground_state(build_hamiltonian(sector, params)).energy);
    }
    return energies;
}

}  // namespace jch
