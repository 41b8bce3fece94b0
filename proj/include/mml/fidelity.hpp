#pragma once

#include <array>
#include <string>
#include <vector>

#include "mml/clifford_fock.hpp"
#include "mml/lindblad.hpp"

namespace mml {

struct LambdaQuadruple {
  std::array<double, 4> lambda{1.0, 1.0, 1.0, 1.0};

  /// Throws ValidationError unless every |lambda_i| <= 1 + 1e-9.
  void validate() const;
};

/// F = (1 + lambda^2) / 2.
double decode_fidelity_homogeneous(double lambda);

/// Candidate set of three zero-mode observables playing the role of the
/// Pauli operators after decoding.
struct DecodeTriple {
  std::string descriptor;
  bool four_mode = false;
  std::array<int, 3> modes{0, 0, 0};  // three-mode triples only, 1-based
  std::array<double, 3> upsilon{0.0, 0.0, 0.0};
  double fidelity = 0.5;
};

struct DecodeResult {
  double fidelity = 0.5;
  DecodeTriple best;
  std::vector<DecodeTriple> candidates;  // the full catalog, in enumeration order
  /// Set when a three-mode triple strictly beats the symmetrized four-mode one.
  bool three_mode_wins = false;
};

/// Maximum of F = (1 + (u1 + u2 + u3) / 3) / 2 over the symmetrized four-mode
/// triple, u = (|l_a l_b| + |l_c l_d|) / 2 for the pairings 12|34, 23|14,
/// 13|24, and the four three-mode triples u = |l_a l_b|, |l_b l_c|, |l_c l_a|.
DecodeResult decode_fidelity_general(const LambdaQuadruple& q);

/// <P_f^G> = lambda_1 lambda_2 lambda_3 lambda_4.
double parity_from_lambdas(const LambdaQuadruple& q);

/// (1 + sqrt(<P_f^G>)) / 2; a lower bound on decode_fidelity_general for
/// nonnegative lambdas.
double parity_fidelity_bound(const LambdaQuadruple& q);

/// Qubit channel n -> Lambda n + b on the Bloch ball.
struct QubitChannelAffine {
  Eigen::Matrix3d Lambda = Eigen::Matrix3d::Identity();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();

  /// Singular values in [0, 1 + 1e-9] and |Lambda n + b| <= 1 + 1e-9 on
  /// `samples` deterministic unit vectors.
  void validate(int samples = 200) const;
};

struct QubitRecovery {
  double fidelity = 0.5;
  std::array<double, 3> upsilon{0.0, 0.0, 0.0};
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();  // rotation undone by the recovery
  /// The orthogonal polar factor has det -1; an antiunitary correction would
  /// be needed to reach the bound.
  bool improper = false;
};

/// F = (1 + (u1 + u2 + u3) / 3) / 2 with u the singular values of Lambda and
/// R = U V^T from Lambda = U S V^T.
QubitRecovery qubit_recovery_optimum(const QubitChannelAffine& ch);

/// F_opt = 2/3 + ||X||_1^2 / 12 with X = D_t(m1 Pi_G).
double fopt_from_trace_norm(double trace_norm);

/// theta_1 = lambda^2 pointwise.
std::vector<double> theta1_from_lambda(const std::vector<double>& lambda);

/// Sign-matrix construction of the optimal recovery on two chains.
struct SignMatrixReport {
  double t = 0.0;
  std::array<Matrix, 3> H;
  std::array<double, 3> traces{0.0, 0.0, 0.0};  // tr[H_i D_t(sigma_i)]
  double fidelity = 0.5;                        // 1/2 + sum(traces) / 12
  double pauli_deviation = 0.0;  // max|H_j H_k - delta_jk S - i eps_jkl H_l| on S = H_z^2
  double hz_parity_deviation = 0.0;  // max|S (H_z - (Pa+ Pb+ - Pa- Pb-)) S|
  double sigma3_trace_norm = 0.0;    // ||D_t(sigma_3)||_1
};

/// Builds H_i = sign(D_t(sigma_i)) from the evolved logical operators.
SignMatrixReport recovery_sign_matrices(const LogicalSet& logical,
                                        const std::array<Matrix, 3>& evolved, double t);

/// Evolves sigma_1..3 forward to time t under `set`, which must be built on
/// logical.system, and analyzes the sign matrices. Requires L_a = L_b <= 5.
SignMatrixReport recovery_sign_matrices(const LindbladSet& set, const LogicalSet& logical,
                                        double t, double dt);

}  // namespace mml
