#include "hasse/generator.hpp"

#include <algorithm>

#include "hasse/error.hpp"
#include "hasse/random.hpp"

namespace hasse {

namespace {

Matrix diagonal_powers(const ChainRing& ring, const std::vector<int>& exps, const RingElement& scalar) {
  std::vector<RingElement> d;
  for (int a : exps) d.push_back(ring.mul(scalar, ring.pi_power(a)));
  return Matrix::diagonal(ring, d);
}

struct Pair {
  Matrix A;
  Matrix B;
};

// A = Q diag(pi^{e-a}) P^{-1}, B = P diag(c pi^a) Q^{-1}.
Pair typed_pair(const ChainRing& ring, const std::vector<int>& a, int e, const RingElement& c,
                std::mt19937_64& rng) {
  const std::size_t n = a.size();
  const Matrix P = random_invertible(ring, n, rng);
  const Matrix Q = random_invertible(ring, n, rng);
  const Matrix Pi = *mat_inverse(ring, P);
  const Matrix Qi = *mat_inverse(ring, Q);
  std::vector<int> comp;
  for (int x : a) comp.push_back(e - x);
  return Pair{mat_mul(ring, mat_mul(ring, Q, diagonal_powers(ring, comp, ring.one())), Pi),
              mat_mul(ring, mat_mul(ring, P, diagonal_powers(ring, a, c)), Qi)};
}

void check_types(const Params& params, const std::vector<std::vector<int>>& types) {
  if (static_cast<int>(types.size()) != params.f())
    throw Error(ErrorKind::Precondition, "one type per embedding is required");
  for (const auto& a : types) {
    if (static_cast<int>(a.size()) != params.h1) throw Error(ErrorKind::Precondition, "type has the wrong length");
    int sum = 0;
    for (int x : a) {
      if (x < 0 || x > params.e()) throw Error(ErrorKind::Precondition, "type entry out of [0, e]");
      sum += params.e() - x;
    }
    if (sum != params.e() * params.d1) throw Error(ErrorKind::Precondition, "type does not have Hodge rank e*d1");
  }
}

// Fills pr_flag from the Hodge modules of a datum whose F and V are set.
void attach_flags(DieudonneDatum& D, std::mt19937_64& rng) {
  D.pr_flag.clear();
  for (int i = 0; i < D.f(); ++i) D.pr_flag.push_back(sample_pr_flag(*D.tower, D.params, hodge(D, i), rng));
}

std::shared_ptr<const RingTower> tower_for(const Params& params) {
  params.check();
  return make_tower(params.spec);
}

LiftedDatum from_lifted_matrices(const Params& params, std::shared_ptr<const RingTower> tower,
                                 const std::vector<Matrix>& A, const std::vector<Matrix>& B, std::mt19937_64& rng) {
  const ChainRing& W = tower->What();
  LiftedDatum L{params, tower, {}, {}, {}};
  DieudonneDatum D{params, tower, {}, {}, {}};
  for (int i = 0; i < params.f(); ++i) {
    L.F.push_back({A[i], 1});
    L.V.push_back({mat_frobenius(W, B[i], -1), -1});
    D.F.push_back({mat_reduce(*tower, L.F.back().matrix), 1});
    D.V.push_back({mat_reduce(*tower, L.V.back().matrix), -1});
  }
  attach_flags(D, rng);
  L.pr_flag = D.pr_flag;
  const ValidationReport rep = validate(L);
  if (!rep.valid()) throw Error(ErrorKind::InvariantViolation, "generated lift is invalid: " + rep.failures().front().axiom);
  return L;
}

RingSpec spec_with(int p, std::vector<int> g, std::vector<int> eis) {
  RingSpec s;
  s.p = p;
  s.f = static_cast<int>(g.size()) - 1;
  s.e = static_cast<int>(eis.size()) - 1;
  s.field_modulus = std::move(g);
  s.eisenstein = std::move(eis);
  return s;
}

Matrix two_by_two(const ChainRing& W, RingElement a, RingElement b, RingElement c, RingElement d) {
  Matrix m = Matrix::zero(W, 2, 2);
  m.at(0, 0) = std::move(a);
  m.at(0, 1) = std::move(b);
  m.at(1, 0) = std::move(c);
  m.at(1, 1) = std::move(d);
  return m;
}

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::diagonal_lift: return "diagonal_lift";
    case Strategy::charp_flag: return "charp_flag";
    case Strategy::named: return "named";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "diagonal_lift") return Strategy::diagonal_lift;
  if (name == "charp_flag") return Strategy::charp_flag;
  if (name == "named") return Strategy::named;
  throw Error(ErrorKind::Parse, "unknown strategy '" + name + "'");
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

Matrix random_invertible(const ChainRing& ring, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m = Matrix::zero(ring, n, n);
    for (auto& a : m.entries) a = ring.random(rng);
    if (mat_is_invertible(ring, m)) return m;
  }
}

std::vector<Submodule> sample_pr_flag(const RingTower& tower, const Params& params, const Submodule& omega,
                                      std::mt19937_64& rng) {
  const FiniteField& K = tower.field();
  const int e = params.e();
  const std::size_t h1 = static_cast<std::size_t>(params.h1);
  const std::size_t d1 = static_cast<std::size_t>(params.d1);
  if (omega.dim_k() != static_cast<std::size_t>(e) * d1)
    throw Error(ErrorKind::Precondition, "Hodge module does not have dimension e*d1");
  const KMatrix pi = pi_power_map(tower, h1, 1);
  constexpr int kBudget = 64;
  for (int attempt = 0; attempt < kBudget; ++attempt) {
    std::vector<Subspace> levels{Subspace::zero(omega.span().ambient())};
    bool ok = true;
    for (int j = 1; j <= e && ok; ++j) {
      const Subspace allowed = intersect(K, omega.span(), preimage(K, pi, levels.back()));
      Subspace cur = sum(K, levels.back(), apply(K, pi_power_map(tower, h1, e - j), omega.span()));
      const std::size_t want = static_cast<std::size_t>(j) * d1;
      if (cur.dim() > want || allowed.dim() < want || !is_subset(K, cur, allowed)) {
        ok = false;
        break;
      }
      while (cur.dim() < want) {
        Vec v(allowed.ambient(), 0);
        for (const Vec& b : allowed.basis()) {
          const Elem c = static_cast<Elem>(uniform_below(rng, K.order()));
          for (std::size_t t = 0; t < v.size(); ++t) v[t] = K.add(v[t], K.mul(c, b[t]));
        }
        if (!cur.contains(K, v)) cur = sum(K, cur, Subspace::span(K, v.size(), {v}));
      }
      levels.push_back(std::move(cur));
    }
    if (!ok || !(levels.back() == omega.span())) continue;
    std::vector<Submodule> out;
    for (auto& s : levels) out.emplace_back(h1, std::move(s));
    return out;
  }
  std::string type;
  for (int a : omega.type(tower)) type += std::to_string(a) + " ";
  throw Error(ErrorKind::RetryExhausted, "no PR flag found for Hodge module of type ( " + type + ")");
}

std::vector<int> free_type(const Params& params) {
  std::vector<int> a(static_cast<std::size_t>(params.h1), 0);
  for (int t = 0; t < params.h1 - params.d1; ++t) a[t] = params.e();
  return a;
}

std::vector<int> random_type(const Params& params, std::mt19937_64& rng) {
  std::vector<int> a = free_type(params);
  const std::size_t n = a.size();
  const std::uint64_t moves = uniform_below(rng, 4 * n * static_cast<std::size_t>(params.e()) + 1);
  for (std::uint64_t m = 0; m < moves; ++m) {
    const std::size_t s = uniform_below(rng, n), t = uniform_below(rng, n);
    if (s != t && a[s] > 0 && a[t] < params.e()) {
      --a[s];
      ++a[t];
    }
  }
  return a;
}

DieudonneDatum charp_with_types(const Params& params, const std::vector<std::vector<int>>& types,
                                std::mt19937_64& rng) {
  check_types(params, types);
  auto tower = tower_for(params);
  const ChainRing& R = tower->R();
  DieudonneDatum D{params, tower, {}, {}, {}};
  for (int i = 0; i < params.f(); ++i) {
    const Pair pr = typed_pair(R, types[i], params.e(), R.one(), rng);
    D.F.push_back({pr.A, 1});
    D.V.push_back({mat_frobenius(R, pr.B, -1), -1});
  }
  attach_flags(D, rng);
  const ValidationReport rep = validate(D);
  if (!rep.valid()) throw Error(ErrorKind::InvariantViolation, "generated datum is invalid: " + rep.failures().front().axiom);
  return D;
}

LiftedDatum lifted_with_types(const Params& params, const std::vector<std::vector<int>>& types,
                              std::mt19937_64& rng) {
  check_types(params, types);
  auto tower = tower_for(params);
  const ChainRing& W = tower->What();
  std::vector<Matrix> A, B;
  for (int i = 0; i < params.f(); ++i) {
    Pair pr = typed_pair(W, types[i], params.e(), tower->unit_u(), rng);
    A.push_back(std::move(pr.A));
    B.push_back(std::move(pr.B));
  }
  return from_lifted_matrices(params, tower, A, B, rng);
}

std::vector<LiftedDatum> generate_lifted(const GeneratorConfig& cfg) {
  std::vector<LiftedDatum> out;
  const std::vector<std::vector<int>> types(static_cast<std::size_t>(cfg.params.f()), free_type(cfg.params));
  for (int n = 0; n < cfg.count; ++n) {
    auto rng = instance_rng(cfg.seed, static_cast<std::size_t>(n));
    out.push_back(lifted_with_types(cfg.params, types, rng));
  }
  return out;
}

std::vector<DieudonneDatum> generate_charp(const GeneratorConfig& cfg) {
  std::vector<DieudonneDatum> out;
  for (int n = 0; n < cfg.count; ++n) {
    auto rng = instance_rng(cfg.seed, static_cast<std::size_t>(n));
    std::vector<std::vector<int>> types;
    for (int i = 0; i < cfg.params.f(); ++i) types.push_back(random_type(cfg.params, rng));
    out.push_back(charp_with_types(cfg.params, types, rng));
  }
  return out;
}

std::vector<Instance> generate(const GeneratorConfig& cfg) {
  std::vector<Instance> out;
  switch (cfg.strategy) {
    case Strategy::diagonal_lift: {
      auto lifts = generate_lifted(cfg);
      for (std::size_t n = 0; n < lifts.size(); ++n)
        out.push_back({"diagonal_lift-" + std::to_string(n), cfg.seed, n, reduce(lifts[n]), std::move(lifts[n])});
      break;
    }
    case Strategy::charp_flag: {
      auto data = generate_charp(cfg);
      for (std::size_t n = 0; n < data.size(); ++n)
        out.push_back({"charp_flag-" + std::to_string(n), cfg.seed, n, std::move(data[n]), std::nullopt});
      break;
    }
    case Strategy::named: {
      for (int n = 0; n < cfg.count; ++n) {
        Instance inst = named_instance(cfg.named_id);
        inst.index = static_cast<std::size_t>(n);
        inst.seed = cfg.seed;
        out.push_back(std::move(inst));
      }
      break;
    }
  }
  return out;
}

std::vector<std::string> named_instance_ids() { return {"ord-split", "ss", "ram-split", "ram-ss", "unram-f2"}; }

Instance named_instance(const std::string& id) {
  Params P;
  P.h1 = 2;
  P.d1 = 1;
  if (id == "ord-split" || id == "ss") P.spec = spec_with(3, {0, 1}, {6, 1});
  else if (id == "ram-split" || id == "ram-ss") P.spec = spec_with(3, {0, 1}, {6, 0, 1});
  else if (id == "unram-f2") P.spec = spec_with(3, {1, 0, 1}, {6, 1});
  else throw Error(ErrorKind::Precondition, "unknown named instance '" + id + "'");

  auto tower = tower_for(P);
  const ChainRing& W = tower->What();
  const RingElement zero = W.zero(), one = W.one(), p = W.from_int(P.p());
  const RingElement pie = W.pi_power(P.e()), u = tower->unit_u();
  std::vector<Matrix> A, B;
  for (int i = 0; i < P.f(); ++i) {
    if (id == "ss") {
      A.push_back(two_by_two(W, zero, p, one, zero));
      B.push_back(two_by_two(W, zero, p, one, zero));
    } else if (id == "ram-ss") {
      A.push_back(two_by_two(W, zero, pie, one, zero));
      B.push_back(two_by_two(W, zero, p, u, zero));
    } else {
      A.push_back(two_by_two(W, one, zero, zero, pie));
      B.push_back(two_by_two(W, p, zero, zero, u));
    }
  }
  auto rng = instance_rng(0, 0);
  LiftedDatum L = from_lifted_matrices(P, tower, A, B, rng);
  return Instance{id, 0, 0, reduce(L), std::move(L)};
}

}  // namespace hasse
