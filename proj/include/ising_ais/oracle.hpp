#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ising_ais/ais.hpp"
#include "ising_ais/model.hpp"

namespace ising_ais::oracle {

/// Hard limits on brute-force enumeration.
inline constexpr std::size_t kMaxVertexStates = 24;  // n_interior for p_V
inline constexpr std::size_t kMaxJointBits = 24;     // n_interior + edges for p_VE
inline constexpr std::size_t kMaxEdgeBits = 20;      // edges for p_E
inline constexpr std::size_t kMaxTransitionVertices = 9;
inline constexpr std::size_t kMaxTransitionEdges = 16;

/// Normalized probabilities over an enumerated state space.
///
/// Spin states are bit masks with bit i set when s_i = +1. Edge states are
/// masks over edge indices. Joint (s, w) states are `s | (w << n_interior)`.
struct ExactDistribution {
  std::vector<double> prob;
  double log_z = 0.0;  // log of the sum of the unnormalized weights
};

SpinConfig spins_from_mask(std::uint64_t mask, std::size_t n);
std::uint64_t mask_from_spins(const SpinConfig& s);

/// p_V(s) ~ exp(beta sum_ij s_i s_j + beta theta sum_i h_i s_i).
ExactDistribution enumerate_pV(const IsingGraph& g, double field_scale);

/// Joint vertex-edge weights: per edge (1 - e^{-2 beta}) [s_i = s_j][w = 1]
/// + e^{-2 beta} [w = 0], times exp(beta theta sum_i h_i s_i).
ExactDistribution enumerate_pVE(const IsingGraph& g, double field_scale);

/// Edge weights: (1 - e^{-2 beta})^{#on} e^{-2 beta #off} times the product
/// over clusters of (e^{-beta theta h_c} + e^{beta theta h_c}).
ExactDistribution enumerate_pE(const IsingGraph& g, double field_scale);

/// Row-major 2^n x 2^n one-sweep transition matrix over spin masks.
struct TransitionMatrix {
  std::size_t states = 0;
  std::vector<double> p;

  double operator()(std::size_t s, std::size_t t) const { return p[s * states + t]; }
};

/// P(s, t) = sum_w P(w | s) P(t | w), both factors exact.
TransitionMatrix exact_sw_transition(const IsingGraph& g, double field_scale);

/// max over (s, t) of |pi(s)P(s,t) - pi(t)P(t,s)| / max(pi(s)P(s,t), pi(t)P(t,s)).
double detailed_balance_residual(const ExactDistribution& pv, const TransitionMatrix& m);

/// max over t of |(pi P)(t) - pi(t)| / pi(t).
double stationarity_residual(const ExactDistribution& pv, const TransitionMatrix& m);

/// E[w] of an AIS path: Z(theta = 1) / Z(theta = 0). Independent of the
/// interior of the schedule.
double exact_ais_mean_weight(const IsingGraph& g, const Schedule& schedule);

/// Exact expectation of f under p_V at the given field scale.
double exact_expectation(const IsingGraph& g, double field_scale,
                         const std::function<double(const SpinConfig&)>& f);

}  // namespace ising_ais::oracle
