#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "monosindex/model.hpp"

namespace monosindex {

/// Pseudo-inverse of a symmetric matrix through its eigendecomposition.
/// Eigenvalues with |lambda| <= tol * max|lambda| are treated as zero.
/// Throws InvalidArgument if m is asymmetric beyond 1e-10.
Matrix moore_penrose_psd(const Matrix& m, double tol = 1e-10);

/// Conditional moments of X given the true index Z = alpha0' X.
struct ModelMoments {
  std::function<Vector(double)> conditional_mean;
  std::function<Matrix(double)> conditional_cov;
  std::function<double(double)> link_derivative;
  /// Cov(psi0(Z), Z) / Var(Z); filled only by routes that need it.
  std::optional<double> c;
};

/// Closed-form moments for i.i.d. standard normal covariates:
/// E(X|Z=u) = alpha0 u, Cov(X|Z) = I - alpha0 alpha0'.
ModelMoments standard_normal_moments(const ModelSpec& spec);

/// Limiting covariance together with the matrices it is built from.
struct AsymptoticCovariance {
  Matrix covariance;
  Matrix bread;  // A, A-tilde, or Sigma_X (linear)
  Matrix meat;   // Sigma, Sigma-tilde, Gamma, or the residual second moment
  std::optional<double> c;
};

/// A^- Sigma A^- with A = E[psi0'(Z) Cov(X|Z)] and
/// Sigma = E[(Y - psi0(Z))^2 (X - E(X|Z))(X - E(X|Z))'].
/// For standard normal covariates X - alpha0 Z and the noise are integrated out
/// exactly and the Monte Carlo runs over Z alone. Other laws use the full draws
/// with conditional moments from 200 quantile bins of Z. Throws
/// NumericalFailure if rank(A) < d - 1.
AsymptoticCovariance asymptotic_cov_sse(const ModelSpec& spec, std::size_t mc_samples,
                                        std::uint64_t seed);

/// As asymptotic_cov_sse with psi0'(Z)^2 inside both matrices.
AsymptoticCovariance asymptotic_cov_ese(const ModelSpec& spec, std::size_t mc_samples,
                                        std::uint64_t seed);

enum class LinearVariant { paper_formula, sandwich };
std::string to_string(LinearVariant v);
LinearVariant linear_variant_from_string(const std::string& name);

/// Limit of the normalized linear least squares direction,
/// c^-2 (I - P) Sigma^-1 M Sigma^-1 (I - P), P = alpha0 alpha0'.
/// paper_formula: M = E(Y^2 XX') - E(YX) E(YX)'.
/// sandwich:      M = E[(Y - EY - c alpha0'(X - mu))^2 (X - mu)(X - mu)'].
/// Under standard normal covariates c comes from Stein's identity E psi0'(Z)
/// when the link has a derivative. Throws NumericalFailure if c <= 0.
AsymptoticCovariance asymptotic_cov_linear(const ModelSpec& spec, std::size_t mc_samples,
                                           std::uint64_t seed, LinearVariant variant);

inline constexpr std::size_t kDefaultMcSamples = 1'000'000;
inline constexpr std::size_t kConditionalBins = 200;

}  // namespace monosindex
