#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rmt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;

// The three non-Hermitian Gaussian ensembles. AI and AII stand for the
// daggered classes (complex symmetric and complex self-dual).
enum class EnsembleClass { A, AI, AII };

inline constexpr EnsembleClass kAllClasses[] = {EnsembleClass::A, EnsembleClass::AI,
                                                EnsembleClass::AII};

// Matrix dimension d_N: N for A and AI, 2N for AII.
int matrix_dim(EnsembleClass c, int n);
// Radial scale s: 1 for A, 1/sqrt(2) for AI and AII.
double scale(EnsembleClass c);

std::string_view class_name(EnsembleClass c);
// Accepts "A", "AI", "AII" (a trailing dagger or "+" is tolerated).
EnsembleClass parse_class(std::string_view s);

}  // namespace rmt
