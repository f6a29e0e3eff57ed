#include "ising_ais/ais.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ising_ais/errors.hpp"
#include "ising_ais/sw.hpp"

namespace ising_ais {

Schedule::Schedule(std::vector<double> thetas) : thetas_(std::move(thetas)) {
  if (thetas_.size() < 2) throw StructuralError("schedule needs at least two levels");
  if (thetas_.front() != 0.0 || thetas_.back() != 1.0) {
    throw StructuralError("schedule must start at 0 and end at 1");
  }
  for (std::size_t l = 1; l < thetas_.size(); ++l) {
    if (!(thetas_[l] >= thetas_[l - 1])) throw StructuralError("schedule must be non-decreasing");
  }
}

Schedule Schedule::equally_spaced(std::size_t levels) {
  if (levels < 1) throw StructuralError("schedule needs at least one level");
  std::vector<double> t(levels + 1);
  for (std::size_t l = 0; l <= levels; ++l) {
    t[l] = static_cast<double>(l) / static_cast<double>(levels);
  }
  return Schedule(std::move(t));
}

void AisConfig::validate() const {
  if (num_paths < 1) throw StructuralError("num_paths must be at least 1");
  if (steps_per_level < 1) throw StructuralError("steps_per_level must be at least 1");
}

namespace {

double field_sum(const IsingGraph& g, const SpinConfig& s) {
  const auto h = g.field();
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) sum += h[i] * s.spins[i];
  return sum;
}

}  // namespace

double log_weight_increment(const IsingGraph& g, const SpinConfig& s, double theta_prev,
                            double theta_next) {
  g.check_spins(s);
  return g.beta() * (theta_next - theta_prev) * field_sum(g, s);
}

Rng path_rng(std::uint64_t base_seed, std::uint64_t path_index) {
  return Rng(base_seed, path_index);
}

AisPath run_path(const IsingGraph& g, const AisConfig& cfg, std::uint64_t path_index) {
  cfg.validate();
  Rng rng = path_rng(cfg.base_seed, path_index);
  SwKernel kernel(g);

  AisPath path;
  auto& s = path.final_spins;
  s.spins.resize(g.n_interior());
  for (auto& v : s.spins) v = rng.bernoulli(0.5) ? 1 : -1;
  for (std::size_t k = 0; k < cfg.burnin_steps; ++k) kernel.step(s, 0.0, rng);

  const Schedule& schedule = cfg.schedule;
  const std::size_t levels = schedule.levels();
  path.log_weight_history.reserve(levels);
  double log_w = 0.0;
  for (std::size_t l = 1; l <= levels; ++l) {
    log_w += g.beta() * (schedule.theta(l) - schedule.theta(l - 1)) * field_sum(g, s);
    path.log_weight_history.push_back(log_w);
    if (l < levels) {
      for (std::size_t k = 0; k < cfg.steps_per_level; ++k) {
        kernel.step(s, schedule.theta(l), rng);
      }
    }
  }
  return path;
}

std::vector<AisPath> run_ensemble(const IsingGraph& g, const AisConfig& cfg, unsigned workers) {
  cfg.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.num_paths));

  std::vector<AisPath> paths(cfg.num_paths);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t k = next++; k < cfg.num_paths; k = next++) paths[k] = run_path(g, cfg, k);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = cfg.num_paths;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return paths;
}

}  // namespace ising_ais
