#include "ising_ais/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ising_ais/errors.hpp"

namespace ising_ais::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void guard(std::size_t value, std::size_t limit, const char* what) {
  if (value > limit) {
    throw SizeGuardError(std::string(what) + " is " + std::to_string(value) +
                         ", exact enumeration limit is " + std::to_string(limit));
  }
}

// log(e^x + e^-x), stable for large |x|.
double log_two_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

// Turns log-weights into probabilities in place; returns log Z.
double normalize_in_place(std::vector<double>& log_w) {
  const double m = *std::max_element(log_w.begin(), log_w.end());
  double sum = 0.0;
  for (double lw : log_w) sum += lw == kNegInf ? 0.0 : std::exp(lw - m);
  const double log_z = m + std::log(sum);
  for (double& lw : log_w) lw = lw == kNegInf ? 0.0 : std::exp(lw - log_z);
  return log_z;
}

int spin_of(std::uint64_t mask, std::size_t i) { return (mask >> i) & 1u ? 1 : -1; }

// Cluster labels of the bonded subgraph by repeated min-label relaxation.
// Deliberately unrelated to the union-find in the kernel.
std::size_t label_clusters(const IsingGraph& g, std::uint64_t w_mask,
                           std::vector<std::uint32_t>& label) {
  const std::size_t n = g.n_interior();
  const auto edges = g.edges();
  label.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) label[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (!((w_mask >> k) & 1u)) continue;
      auto& a = label[edges[k].u];
      auto& b = label[edges[k].v];
      if (a != b) {
        a = b = std::min(a, b);
        changed = true;
      }
    }
  }
  // Compact to 0..count-1 in first-vertex order.
  std::vector<std::uint32_t> remap(n, std::numeric_limits<std::uint32_t>::max());
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = remap[label[i]];
    if (r == std::numeric_limits<std::uint32_t>::max()) r = count++;
    label[i] = r;
  }
  return count;
}

}  // namespace

SpinConfig spins_from_mask(std::uint64_t mask, std::size_t n) {
  SpinConfig s{std::vector<std::int8_t>(n)};
  for (std::size_t i = 0; i < n; ++i) s.spins[i] = static_cast<std::int8_t>(spin_of(mask, i));
  return s;
}

std::uint64_t mask_from_spins(const SpinConfig& s) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.spins[i] > 0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

ExactDistribution enumerate_pV(const IsingGraph& g, double field_scale) {
  const std::size_t n = g.n_interior();
  guard(n, kMaxVertexStates, "interior vertex count");
  const auto edges = g.edges();
  const auto h = g.field();
  const double beta = g.beta();

  std::vector<double> log_w(std::size_t{1} << n);
  for (std::uint64_t s = 0; s < log_w.size(); ++s) {
    long coupling = 0;
    for (const auto& e : edges) coupling += spin_of(s, e.u) * spin_of(s, e.v);
    double field = 0.0;
    for (std::size_t i = 0; i < n; ++i) field += h[i] * spin_of(s, i);
    log_w[s] = beta * (static_cast<double>(coupling) + field_scale * field);
  }
  ExactDistribution d;
  d.log_z = normalize_in_place(log_w);
  d.prob = std::move(log_w);
  return d;
}

ExactDistribution enumerate_pVE(const IsingGraph& g, double field_scale) {
  const std::size_t n = g.n_interior();
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  guard(n + m, kMaxJointBits, "interior vertex count plus edge count");
  const auto h = g.field();
  const double beta = g.beta();
  const double log_on = std::log(-std::expm1(-2.0 * beta));
  const double log_off = -2.0 * beta;

  std::vector<double> log_w(std::size_t{1} << (n + m));
  const std::uint64_t s_mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t state = 0; state < log_w.size(); ++state) {
    const std::uint64_t s = state & s_mask;
    const std::uint64_t w = state >> n;
    double lw = 0.0;
    for (std::size_t k = 0; k < m && lw != kNegInf; ++k) {
      if ((w >> k) & 1u) {
        lw = spin_of(s, edges[k].u) == spin_of(s, edges[k].v) ? lw + log_on : kNegInf;
      } else {
        lw += log_off;
      }
    }
    if (lw != kNegInf) {
      double field = 0.0;
      for (std::size_t i = 0; i < n; ++i) field += h[i] * spin_of(s, i);
      lw += beta * field_scale * field;
    }
    log_w[state] = lw;
  }
  ExactDistribution d;
  d.log_z = normalize_in_place(log_w);
  d.prob = std::move(log_w);
  return d;
}

ExactDistribution enumerate_pE(const IsingGraph& g, double field_scale) {
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  guard(m, kMaxEdgeBits, "edge count");
  const auto h = g.field();
  const double beta = g.beta();
  const double log_on = std::log(-std::expm1(-2.0 * beta));
  const double log_off = -2.0 * beta;

  std::vector<double> log_w(std::size_t{1} << m);
  std::vector<std::uint32_t> label;
  std::vector<double> cluster_field;
  for (std::uint64_t w = 0; w < log_w.size(); ++w) {
    const auto on = static_cast<double>(std::popcount(w));
    double lw = on * log_on + (static_cast<double>(m) - on) * log_off;
    const std::size_t count = label_clusters(g, w, label);
    cluster_field.assign(count, 0.0);
    for (std::size_t i = 0; i < label.size(); ++i) cluster_field[label[i]] += h[i];
    for (double hc : cluster_field) lw += log_two_cosh(beta * field_scale * hc);
    log_w[w] = lw;
  }
  ExactDistribution d;
  d.log_z = normalize_in_place(log_w);
  d.prob = std::move(log_w);
  return d;
}

TransitionMatrix exact_sw_transition(const IsingGraph& g, double field_scale) {
  const std::size_t n = g.n_interior();
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  guard(n, kMaxTransitionVertices, "interior vertex count");
  guard(m, kMaxTransitionEdges, "edge count");
  const auto h = g.field();
  const double beta = g.beta();
  const double p_on = -std::expm1(-2.0 * beta);
  const double p_off = std::exp(-2.0 * beta);

  TransitionMatrix out;
  out.states = std::size_t{1} << n;
  out.p.assign(out.states * out.states, 0.0);

  std::vector<std::uint32_t> label;
  std::vector<double> up;
  std::vector<std::uint64_t> spin_state;  // spin mask per cluster assignment
  std::vector<double> p_w_given_s, p_t_given_w;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << m); ++w) {
    const std::size_t count = label_clusters(g, w, label);
    up.assign(count, 0.0);
    for (std::size_t i = 0; i < n; ++i) up[label[i]] += h[i];
    for (double& x : up) {
      const double a = beta * field_scale * x;
      x = std::exp(a - log_two_cosh(a));
    }

    const std::size_t assignments = std::size_t{1} << count;
    spin_state.assign(assignments, 0);
    p_w_given_s.assign(assignments, 0.0);
    p_t_given_w.assign(assignments, 1.0);
    const auto on = std::popcount(w);
    for (std::uint64_t a = 0; a < assignments; ++a) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if ((a >> label[i]) & 1u) s |= std::uint64_t{1} << i;
      }
      spin_state[a] = s;
      // Active edges are aligned by construction; inactive aligned edges
      // each contribute the probability of staying off.
      double pw = std::pow(p_on, on);
      for (std::size_t k = 0; k < m; ++k) {
        if (!((w >> k) & 1u) && spin_of(s, edges[k].u) == spin_of(s, edges[k].v)) pw *= p_off;
      }
      p_w_given_s[a] = pw;
      for (std::size_t c = 0; c < count; ++c) {
        p_t_given_w[a] *= (a >> c) & 1u ? up[c] : 1.0 - up[c];
      }
    }
    for (std::uint64_t a = 0; a < assignments; ++a) {
      double* row = &out.p[spin_state[a] * out.states];
      for (std::uint64_t b = 0; b < assignments; ++b) {
        row[spin_state[b]] += p_w_given_s[a] * p_t_given_w[b];
      }
    }
  }
  return out;
}

double detailed_balance_residual(const ExactDistribution& pv, const TransitionMatrix& m) {
  double worst = 0.0;
  for (std::size_t s = 0; s < m.states; ++s) {
    for (std::size_t t = s + 1; t < m.states; ++t) {
      const double a = pv.prob[s] * m(s, t);
      const double b = pv.prob[t] * m(t, s);
      const double scale = std::max(a, b);
      if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
  }
  return worst;
}

double stationarity_residual(const ExactDistribution& pv, const TransitionMatrix& m) {
  double worst = 0.0;
  for (std::size_t t = 0; t < m.states; ++t) {
    double flow = 0.0;
    for (std::size_t s = 0; s < m.states; ++s) flow += pv.prob[s] * m(s, t);
    worst = std::max(worst, std::abs(flow - pv.prob[t]) / pv.prob[t]);
  }
  return worst;
}

double exact_ais_mean_weight(const IsingGraph& g, [[maybe_unused]] const Schedule& schedule) {
  return std::exp(enumerate_pV(g, 1.0).log_z - enumerate_pV(g, 0.0).log_z);
}

double exact_expectation(const IsingGraph& g, double field_scale,
                         const std::function<double(const SpinConfig&)>& f) {
  const auto d = enumerate_pV(g, field_scale);
  double e = 0.0;
  for (std::uint64_t s = 0; s < d.prob.size(); ++s) {
    if (d.prob[s] > 0.0) e += d.prob[s] * f(spins_from_mask(s, g.n_interior()));
  }
  return e;
}

}  // namespace ising_ais::oracle
