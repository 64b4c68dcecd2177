#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace wiser {

/// Linear MMSE receive filters for one RU's scheduled group.
///
/// `eff` holds the effective (power-scaled) channels of the G scheduled
/// stations as columns of an M x G matrix. Column g of the result is
/// (H H^adj + noise I)^-1 h_g, obtained through a Cholesky solve; the
/// regularized Gram matrix is Hermitian positive definite for any input.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> mmse_weights(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& eff,
    Scalar noise_power) {
  using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  if (!(noise_power > Scalar(0))) throw std::invalid_argument("mmse_weights: noise_power must be > 0");
  if (!eff.allFinite()) throw std::invalid_argument("mmse_weights: non-finite channel entries");
  CMat gram = eff * eff.adjoint();
  gram.diagonal().array() += noise_power;
  return gram.llt().solve(eff).eval();
}

/// Post-filter SINR of every station in the group, computed literally from
/// the filter output: signal power |w^adj h_g|^2 over the interference from
/// the remaining G-1 columns plus filtered noise. A zero channel column
/// yields SINR 0.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> compute_sinr(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& eff,
    Scalar noise_power) {
  using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  using CVec = Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic>;
  const Eigen::Index g_total = eff.cols();
  const Eigen::Index m = eff.rows();
  const CMat weights = mmse_weights(eff, noise_power);

  Eigen::Vector<Scalar, Eigen::Dynamic> sinr(g_total);
  CMat others(m, g_total > 0 ? g_total - 1 : 0);
  for (Eigen::Index g = 0; g < g_total; ++g) {
    const CVec h = eff.col(g);
    const CVec w = weights.col(g);
    if (h.squaredNorm() == Scalar(0)) {
      sinr[g] = Scalar(0);
      continue;
    }
    const Scalar signal = std::norm(w.dot(h));
    // interference term uses the group matrix with column g removed
    others.leftCols(g) = eff.leftCols(g);
    others.rightCols(g_total - 1 - g) = eff.rightCols(g_total - 1 - g);
    const Scalar interference = (others.adjoint() * w).squaredNorm();
    const Scalar denom = interference + noise_power * w.squaredNorm();
    sinr[g] = denom > Scalar(0) ? signal / denom : Scalar(0);
  }
  return sinr;
}

}  // namespace wiser
