// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_COMMON_HPP
#define ARBILOMOD_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace arbilomod
{

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<Complex>;
using RSpMat = Eigen::SparseMatrix<double>;

// Input that violates a documented precondition.
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Base of all numerical failures (exit code 2 in the driver).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A sparse or dense factorization hit an exactly (or numerically) singular pivot.
class SingularFactorization : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

// An eigenvalue iteration stopped before reaching its tolerance.
class ConvergenceError : public NumericalError
{
public:
  ConvergenceError(const std::string &what, double residual)
    : NumericalError(what), residual_(residual)
  {
  }
  double residual() const { return residual_; }

private:
  double residual_;
};

// The Galerkin-projected system is singular: the reduced inf-sup constant collapsed.
class ReducedInstability : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

inline constexpr double pi = 3.14159265358979323846;

}  // namespace arbilomod

#endif  // ARBILOMOD_COMMON_HPP
