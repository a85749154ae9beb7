#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hasse/dieudonne.hpp"

namespace hasse {

enum class Strategy { diagonal_lift, charp_flag, named };

const char* to_string(Strategy s);
/// Throws Parse on unknown names.
Strategy parse_strategy(const std::string& name);

struct GeneratorConfig {
  Params params;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::diagonal_lift;
  std::string named_id;
  int count = 1;
};

struct Instance {
  std::string label;
  std::uint64_t seed = 0;
  std::size_t index = 0;
  DieudonneDatum datum;
  std::optional<LiftedDatum> lift;
};

/// Instance n of a stream draws from an mt19937_64 seeded with (seed, n).
std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t index);

Matrix random_invertible(const ChainRing& ring, std::size_t n, std::mt19937_64& rng);

/// Greedy PR flag inside omega: level j starts from level j-1 plus
/// pi^{e-j} omega and is filled with random vectors of omega cap
/// pi^{-1}(level j-1).  Restarts up to 64 times, then throws RetryExhausted.
std::vector<Submodule> sample_pr_flag(const RingTower& tower, const Params& params, const Submodule& omega,
                                      std::mt19937_64& rng);

/// A type a in [0,e]^{h1} with sum(e - a_t) = e*d1, so that the Hodge
/// module is the sum of R/pi^{e - a_t}.  The free type is (e,...,e,0,...,0).
std::vector<int> free_type(const Params& params);
std::vector<int> random_type(const Params& params, std::mt19937_64& rng);

/// A_i = Q diag(pi^{e-a}) P^{-1}, B_i = P diag(pi^a) Q^{-1} over R.
DieudonneDatum charp_with_types(const Params& params, const std::vector<std::vector<int>>& types,
                                std::mt19937_64& rng);
/// Same shape over W^ with B_i = P diag(u pi^a) Q^{-1}, so A_i B_i = B_i A_i = p.
LiftedDatum lifted_with_types(const Params& params, const std::vector<std::vector<int>>& types,
                              std::mt19937_64& rng);

/// Free-type lifts (one per stream element); each passes validation.
std::vector<LiftedDatum> generate_lifted(const GeneratorConfig& cfg);
/// Random-type char-p data; each passes validation.
std::vector<DieudonneDatum> generate_charp(const GeneratorConfig& cfg);
/// Dispatches on cfg.strategy.
std::vector<Instance> generate(const GeneratorConfig& cfg);

std::vector<std::string> named_instance_ids();
/// ord-split, ss, ram-split, ram-ss, unram-f2.  Throws Precondition on unknown ids.
Instance named_instance(const std::string& id);

}  // namespace hasse
