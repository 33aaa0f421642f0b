#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "chroma/coloring.hpp"
#include "chroma/exact.hpp"
#include "chroma/graph.hpp"

namespace chroma {

struct ChainState {
  int q = 0;
  Coloring coloring;
  std::uint64_t steps = 0;
  std::mt19937_64 rng;
};

// Greedy proper coloring, lowest available color in vertex order.
Coloring greedy_coloring(const Graph& g, int q);

ChainState init_chain(const Graph& g, int q, std::uint64_t seed);

// One transition: uniform vertex v, then a fugacity-weighted color from
// [q] minus the neighbor colors (the current color of v stays available).
void glauber_step(const Graph& g, std::span<const double> lambda, ChainState& state);

Coloring glauber_run(const Graph& g, int q, std::span<const double> lambda, std::uint64_t steps,
                     std::uint64_t seed);

enum class MoveClass { Fixing, Good, Bad };

struct CouplingRecord {
  int vertex = -1;
  int distance_before = 0;
  int distance_after = 0;
  MoveClass move = MoveClass::Fixing;
};

// One coupled transition of two chains at the same uniformly chosen vertex:
// shared mass is matched color by color, the residual distributions are
// paired by ascending-color quantiles. Each marginal is an ordinary step.
CouplingRecord coupled_step(const Graph& g, std::span<const double> lambda, Coloring& x,
                            Coloring& y, std::mt19937_64& rng);

struct ContractionEstimate {
  double mean_distance_after = 0.0;
  double mean_delta = 0.0;  // mean of d(X1,Y1) - d(X0,Y0)
  double std_error = 0.0;
  std::size_t trials = 0;
};

// Averages one coupled step over random proper pairs at Hamming distance 1.
ContractionEstimate contraction_experiment(const Graph& g, int q, std::span<const double> lambda,
                                           std::size_t trials, std::uint64_t seed,
                                           int threads = 0);

struct TvEstimate {
  double tv = 0.0;
  std::size_t n_samples = 0;
  std::size_t support = 0;  // class vectors seen in exact or empirical support
  std::string note;
};

// TV distance between the empirical class-vector distribution of independent
// chain runs and the exact one (a lower bound on coloring-space TV).
TvEstimate tv_distance_experiment(const Graph& g, int q, std::span<const double> lambda,
                                  std::uint64_t t_steps, std::size_t n_samples,
                                  std::uint64_t seed, const EnumOptions& opt = {},
                                  int threads = 0);

}  // namespace chroma
