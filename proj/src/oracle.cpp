#include "hasse/oracle.hpp"

#include <map>

#include "hasse/error.hpp"
#include "hasse/filtration.hpp"
#include "hasse/invariants.hpp"

namespace hasse {

namespace {

using Table = std::vector<std::size_t>;
using Set = ModuleEnumerator::Set;

std::vector<RingElement> apply_entrywise(const ChainRing& R, const SemilinearMap& m,
                                         const std::vector<RingElement>& x) {
  std::vector<RingElement> y(m.matrix.rows, R.zero());
  for (std::size_t r = 0; r < m.matrix.rows; ++r)
    for (std::size_t c = 0; c < m.matrix.cols; ++c)
      y[r] = R.add(y[r], R.mul(m.matrix.at(r, c), R.frobenius(x[c], m.twist)));
  return y;
}

std::size_t encode(const Vec& v, std::size_t q) {
  std::size_t code = 0, scale = 1;
  for (Elem x : v) {
    code += x * scale;
    scale *= q;
  }
  return code;
}

Vec decode(std::size_t code, std::size_t n, std::size_t q) {
  Vec v(n);
  for (std::size_t t = 0; t < n; ++t) {
    v[t] = static_cast<Elem>(code % q);
    code /= q;
  }
  return v;
}

Table compose_power(const Table& t, int n) {
  Table out(t.size());
  for (std::size_t x = 0; x < t.size(); ++x) {
    std::size_t y = x;
    for (int s = 0; s < n; ++s) y = t[y];
    out[x] = y;
  }
  return out;
}


std::string where(int i, int j) { return "i=" + std::to_string(i) + " j=" + std::to_string(j); }

}  // namespace

Elem wedge_coefficient(const FiniteField& K, const std::vector<Vec>& vectors) {
  const std::size_t n = vectors.size();
  if (n > 30) throw Error(ErrorKind::Precondition, "wedge_coefficient: too many vectors");
  std::map<std::uint32_t, Elem> terms{{0u, K.from_int(1)}};
  for (const Vec& v : vectors) {
    if (v.size() != n) throw Error(ErrorKind::Precondition, "wedge_coefficient: vectors must have length n");
    std::map<std::uint32_t, Elem> next;
    for (const auto& [mask, coeff] : terms)
      for (std::size_t t = 0; t < n; ++t) {
        if (v[t] == 0 || (mask >> t) & 1u) continue;
        // e_S ^ e_t = (-1)^{#(S above t)} e_{S + t}
        const int above = __builtin_popcount(mask >> (t + 1));
        Elem c = K.mul(coeff, v[t]);
        if (above % 2) c = K.neg(c);
        Elem& slot = next[mask | (1u << t)];
        slot = K.add(slot, c);
      }
    terms = std::move(next);
  }
  const std::uint32_t top = n == 0 ? 0u : static_cast<std::uint32_t>((1ull << n) - 1);
  const auto it = terms.find(top);
  return it == terms.end() ? 0 : it->second;
}

ModuleEnumerator::ModuleEnumerator(const DieudonneDatum& D) : D_(&D) {
  const RingTower& t = *D.tower;
  const std::size_t q = t.field().order();
  const std::size_t n = static_cast<std::size_t>(D.params.e() * D.params.h1);
  std::size_t total = 1;
  for (std::size_t s = 0; s < n; ++s) {
    total *= q;
    if (n > 12 || total > (1u << 20)) throw Error(ErrorKind::Precondition, "module too large to enumerate");
  }
  for (std::size_t c = 0; c < total; ++c) {
    vectors_.push_back(decode(c, n, q));
    elements_.push_back(from_kvector(t, vectors_.back()));
  }
  for (int i = 0; i < D.f(); ++i) {
    F_.push_back(tabulate(D.F[i]));
    V_.push_back(tabulate(D.V[i]));
  }
  const SemilinearMap pi{Matrix::diagonal(t.R(), std::vector<RingElement>(static_cast<std::size_t>(D.params.h1),
                                                                          t.R().pi())),
                         0};
  pi_ = tabulate(pi);
}

std::vector<std::size_t> ModuleEnumerator::tabulate(const SemilinearMap& m) const {
  const RingTower& t = *D_->tower;
  std::vector<std::size_t> out(size());
  for (std::size_t c = 0; c < size(); ++c) out[c] = code(to_kvector(t, apply_entrywise(t.R(), m, elements_[c])));
  return out;
}

std::size_t ModuleEnumerator::code(const Vec& v) const { return encode(v, D_->field().order()); }

std::size_t ModuleEnumerator::add(std::size_t a, std::size_t b) const {
  const FiniteField& K = D_->field();
  const Vec& x = vectors_[a];
  const Vec& y = vectors_[b];
  Vec s(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) s[t] = K.add(x[t], y[t]);
  return code(s);
}

Set ModuleEnumerator::members(const Subspace& s) const {
  Set out(size(), 0);
  for (std::size_t c = 0; c < size(); ++c) out[c] = s.contains(D_->field(), vectors_[c]) ? 1 : 0;
  return out;
}

bool ModuleEnumerator::same(const Set& set, const Subspace& s) const { return set == members(s); }

std::size_t ModuleEnumerator::count(const Set& set) const {
  std::size_t c = 0;
  for (char x : set) c += x != 0;
  return c;
}

Set ModuleEnumerator::image(const Table& map, const Set& domain) const {
  Set out(size(), 0);
  for (std::size_t c = 0; c < size(); ++c)
    if (domain[c]) out[map[c]] = 1;
  return out;
}

Set ModuleEnumerator::preimage(const Table& map, const Set& target) const {
  Set out(size(), 0);
  for (std::size_t c = 0; c < size(); ++c) out[c] = target[map[c]];
  return out;
}

Set ModuleEnumerator::zero_set() const {
  Set out(size(), 0);
  out[0] = 1;
  return out;
}

Set ModuleEnumerator::full_set() const { return Set(size(), 1); }

Set ModuleEnumerator::sum(const Set& a, const Set& b) const {
  Set out(size(), 0);
  for (std::size_t x = 0; x < size(); ++x)
    if (a[x])
      for (std::size_t y = 0; y < size(); ++y)
        if (b[y]) out[add(x, y)] = 1;
  return out;
}

Set ModuleEnumerator::intersect(const Set& a, const Set& b) const {
  Set out(size(), 0);
  for (std::size_t c = 0; c < size(); ++c) out[c] = a[c] && b[c];
  return out;
}

Set ModuleEnumerator::annihilator(const Set& s) const {
  const RingTower& t = *D_->tower;
  const ChainRing& R = t.R();
  const std::size_t e = static_cast<std::size_t>(D_->params.e());
  Set out(size(), 0);
  for (std::size_t y = 0; y < size(); ++y) {
    bool ok = true;
    for (std::size_t x = 0; ok && x < size(); ++x) {
      if (!s[x]) continue;
      RingElement acc = R.zero();
      for (std::size_t r = 0; r < elements_[x].size(); ++r) acc = R.add(acc, R.mul(elements_[x][r], elements_[y][r]));
      ok = to_kvector(t, {acc})[e - 1] == 0;
    }
    out[y] = ok;
  }
  return out;
}

bool ModuleEnumerator::bijective(const Table& map, const Set& num1, const Set& den1, const Set& num2,
                                 const Set& den2) const {
  for (std::size_t x = 0; x < size(); ++x) {
    if (num1[x] && !num2[map[x]]) return false;
    if (den1[x] && !den2[map[x]]) return false;
  }
  if (count(num1) * count(den2) != count(num2) * count(den1)) return false;
  for (std::size_t x = 0; x < size(); ++x)
    if (num1[x] && den2[map[x]] && !den1[x]) return false;
  return true;
}

const std::vector<std::string>& oracle_check_names() {
  static const std::vector<std::string> names{"validate", "kernel",     "image",     "preimage",  "sum",
                                              "intersect", "dual_hodge", "prop_dual", "invariants"};
  return names;
}

OracleCheck prop_dual_oracle(const FiniteField& K, std::size_t r, const std::vector<Vec>& b,
                             const std::vector<Vec>& c) {
  using QP = QuotientPresentation;
  OracleCheck out{"prop_dual", 0, 0, false, ""};
  const Subspace z = Subspace::zero(r), full = Subspace::full(r);
  const Subspace Bs = Subspace::span(K, r, b), Cs = Subspace::span(K, r, c);
  const QP A = QP::make(K, full, z);
  const QP B = QP::with_basis(K, Bs, z, b), C = QP::with_basis(K, Cs, z, c);
  const PropDualSections lib = prop_dual_sections(K, A, B, C);
  const auto cat = [](std::vector<Vec> x, const std::vector<Vec>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  const QP qB = QP::make(K, full, Bs), qC = QP::make(K, full, Cs);
  const Elem wbc = wedge_coefficient(K, cat(b, c));
  const Elem wcb = wedge_coefficient(K, cat(c, b));
  const Elem wbq = wedge_coefficient(K, cat(b, qB.basis()));
  const Elem wcq = wedge_coefficient(K, cat(c, qC.basis()));
  const Elem x = K.div(wbc, wbq), y = K.div(wcb, wcq);
  const long s = static_cast<long>(b.size()), rr = static_cast<long>(r);
  Elem iso = K.div(wcq, wbq);
  if ((s * (rr - s)) % 2) iso = K.neg(iso);
  out.agree = lib.x.scalar == x && lib.y.scalar == y && lib.iso == iso && x == K.mul(iso, y);
  if (!out.agree)
    out.detail = "library (x,y,iso)=(" + std::to_string(lib.x.scalar) + "," + std::to_string(lib.y.scalar) + "," +
                 std::to_string(lib.iso) + ") wedge=(" + std::to_string(x) + "," + std::to_string(y) + "," +
                 std::to_string(iso) + ")";
  return out;
}

std::vector<OracleCheck> prop_dual_exhaustive(const FiniteField& K, std::size_t r) {
  std::size_t total = 1;
  for (std::size_t s = 0; s < r; ++s) total *= K.order();
  if (total > 256) throw Error(ErrorKind::Precondition, "prop_dual_exhaustive: space too large");
  // All subspaces, grown one spanning vector at a time.
  std::vector<Subspace> all{Subspace::zero(r)};
  for (std::size_t k = 0; k < all.size(); ++k)
    for (std::size_t code = 1; code < total; ++code) {
      const Vec v = decode(code, r, K.order());
      if (all[k].contains(K, v)) continue;
      std::vector<Vec> gens = all[k].basis();
      gens.push_back(v);
      const Subspace s = Subspace::span(K, r, gens);
      bool seen = false;
      for (const auto& t : all) seen = seen || t == s;
      if (!seen) all.push_back(s);
    }
  std::vector<OracleCheck> out;
  for (const auto& B : all)
    for (const auto& C : all) {
      if (B.dim() + C.dim() != r || intersect(K, B, C).dim() != 0) continue;
      out.push_back(prop_dual_oracle(K, r, B.basis(), C.basis()));
    }
  return out;
}

namespace {

struct Oracle {
  const DieudonneDatum& D;
  ModuleEnumerator m;
  int e;
  std::vector<Set> omega, kerF, imF, kerV, imV;
  std::vector<std::vector<Set>> pr, ext;
  std::vector<OracleCheck> rows;

  explicit Oracle(const DieudonneDatum& d) : D(d), m(d), e(d.params.e()) {
    const Set full = m.full_set(), zero = m.zero_set();
    for (int i = 0; i < D.f(); ++i) {
      kerF.push_back(m.preimage(m.F(i), zero));
      imF.push_back(m.image(m.F(i), full));
      kerV.push_back(m.preimage(m.V(i), zero));
      imV.push_back(m.image(m.V(i), full));
      std::vector<Set> levels;
      for (const auto& s : D.pr_flag.at(i)) levels.push_back(m.members(s.span()));
      pr.push_back(levels);
    }
    for (int i = 0; i < D.f(); ++i) {
      omega.push_back(imV[D.next(i)]);
      std::vector<Set> x = pr[i];
      for (int j = 1; j <= e; ++j) x.push_back(m.preimage(compose_power(m.pi(), j), pr[i][e - j]));
      ext.push_back(x);
    }
  }

  void row(const std::string& check, int i, int j, bool agree, const std::string& detail = "") {
    rows.push_back({check, i, j, agree, agree ? "" : detail});
  }

  bool set_valid() const {
    const std::size_t q = D.field().order();
    for (int i = 0; i < D.f(); ++i) {
      if (kerF[i] != imV[i] || kerV[i] != imF[i]) return false;
      std::size_t expect = 1;
      for (int s = 0; s < e * D.params.d1; ++s) expect *= q;
      if (m.count(omega[i]) != expect) return false;
      if (static_cast<int>(pr[i].size()) != e + 1 || pr[i][0] != m.zero_set() || pr[i][e] != omega[i]) return false;
      std::size_t level = 1;
      for (int j = 1; j <= e; ++j) {
        for (int s = 0; s < D.params.d1; ++s) level *= q;
        if (m.count(pr[i][j]) != level) return false;
        for (std::size_t x = 0; x < m.size(); ++x) {
          if (pr[i][j - 1][x] && !pr[i][j][x]) return false;
          if (pr[i][j][x] && !pr[i][j - 1][m.pi()[x]]) return false;
        }
      }
    }
    return true;
  }

  void structural() {
    const RingTower& t = *D.tower;
    row("validate", 0, 0, set_valid() == validate(D).valid());
    for (int i = 0; i < D.f(); ++i) {
      row("kernel", i, 0, m.same(kerF[i], kernel(t, D.F[i]).span()), "ker F");
      row("kernel", i, 1, m.same(kerV[i], kernel(t, D.V[i]).span()), "ker V");
      row("image", i, 0, m.same(imF[i], image(t, D.F[i]).span()), "im F");
      row("image", i, 1, m.same(imV[i], image(t, D.V[i]).span()), "im V");
    }
  }

  void derived(const DieudonneDatum& dual) {
    const RingTower& t = *D.tower;
    const FiniteField& K = D.field();
    for (int i = 0; i < D.f(); ++i) {
      const int ip = D.prev(i);
      const Flag x = extended_hodge_flag(D, i);
      for (int l = 0; l <= 2 * e; ++l) row("preimage", i, l, m.same(ext[i][l], x.levels[l].span()), "extended flag");
      const Flag a = hodge_aux_flag(D, i);
      for (int j = 0; j < e; ++j)
        row("preimage", i, 100 + j, m.same(m.preimage(m.pi(), pr[i][j]), a.levels[j].span()), "aux flag");
      const Flag c = conjugate_flag(D, i);
      for (int j = 0; j <= e; ++j)
        row("image", i, 100 + j, m.same(m.image(m.F(i), ext[ip][e + j]), c.levels[j].span()), "conjugate flag");
      for (int j = 1; j <= e; ++j)
        row("preimage", i, 200 + j, m.same(m.preimage(m.V(i), ext[ip][j]), c.levels[e + j].span()),
            "conjugate flag");
      const Submodule w = hodge(D, i), cj = conjugate(D, i);
      row("sum", i, 0, m.same(m.sum(omega[i], kerV[i]), sum(t, w, cj).span()));
      row("intersect", i, 0, m.same(m.intersect(omega[i], kerV[i]), intersect(t, w, cj).span()));
      for (int j = 0; j <= e; ++j)
        row("intersect", i, 10 + j, m.same(m.intersect(pr[i][j], kerV[i]), intersect(t, D.pr_flag[i][j], cj).span()));
      row("dual_hodge", i, 0, m.same(m.annihilator(omega[i]), hodge(dual, i).span()));
      for (int j = 0; j <= e; ++j)
        row("dual_hodge", i, 1 + j, m.same(m.annihilator(ext[i][2 * e - j]), dual.pr_flag[i][j].span()));
      const OracleCheck pd = prop_dual_oracle(K, m.vector(0).size(), w.span().basis(), cj.span().basis());
      row("prop_dual", i, 0, pd.agree, pd.detail);
    }
  }

  // Bijectivity of the map behind each invariant, read off the sets.
  bool unit(const std::string& name, int i, int j) const {
    const Set zero = m.zero_set();
    if (name == "ha") {
      for (int k = 0; k < D.f(); ++k)
        if (!unit("ha_i", k, 0)) return false;
      return true;
    }
    const int ip = D.prev(i);
    if (name == "ha_i") return m.bijective(m.V(i), omega[i], zero, omega[ip], zero);
    if (name == "m") return m.bijective(m.pi(), pr[i][j], pr[i][j - 1], pr[i][j - 1], pr[i][j - 2]);
    if (name == "ha_pr") return m.bijective(m.V(i), pr[i][j], pr[i][j - 1], pr[ip][j], pr[ip][j - 1]);
    if (name == "hasse") {
      // x = pi^{e-1} z  ->  V z, well defined modulo omega^[e-1] at i-1.
      const Table pe = compose_power(m.pi(), e - 1);
      Table h(m.size(), 0);
      Set hit(m.size(), 0);
      for (std::size_t z = 0; z < m.size(); ++z) {
        const std::size_t x = pe[z];
        if (pe[z] == 0 && !pr[ip][e - 1][m.V(i)[z]]) return false;
        if (!hit[x]) {
          hit[x] = 1;
          h[x] = m.V(i)[z];
        }
      }
      for (std::size_t x = 0; x < m.size(); ++x)
        if (pr[i][1][x] && !hit[x]) return false;
      return m.bijective(h, pr[i][1], zero, pr[ip][e], pr[ip][e - 1]);
    }
    throw Error(ErrorKind::Precondition, "unknown invariant " + name);
  }
};

}  // namespace

std::vector<OracleCheck> enumeration_oracle(const DieudonneDatum& D) {
  Oracle g(D);
  g.structural();
  if (!validate(D).valid()) return g.rows;
  const DieudonneDatum dual = dualize(D);
  g.derived(dual);
  const Oracle d(dual);
  const bool binary = D.field().order() == 2;
  for (const Cell& c : invariant_cells(D.params)) {
    const Elem sg = invariant_section(c, D).scalar, sd = invariant_section(c, dual).scalar;
    const bool ug = g.unit(c.name, c.i, c.j), ud = d.unit(c.name, c.i, c.j);
    bool agree = ug == (sg != 0) && ud == (sd != 0);
    if (binary) agree = agree && sg == (ug ? 1u : 0u) && sd == (ud ? 1u : 0u);
    g.row("invariants:" + c.name, c.i, c.j, agree,
          c.name + " " + where(c.i, c.j) + ": library " + std::to_string(sg) + "/" + std::to_string(sd) +
              ", oracle " + std::to_string(ug) + "/" + std::to_string(ud));
  }
  return g.rows;
}

bool enumeration_oracle(const std::string& check, const DieudonneDatum& D) {
  bool known = false;
  for (const auto& n : oracle_check_names()) known = known || n == check;
  if (!known) throw Error(ErrorKind::Precondition, "unknown oracle check " + check);
  bool ok = true;
  for (const auto& r : enumeration_oracle(D))
    if (r.check == check || r.check.rfind(check + ":", 0) == 0) ok = ok && r.agree;
  return ok;
}

std::vector<DieudonneDatum> exhaustive_tiny_family() {
  const Params P{RingSpec::standard(2, 1, 2), 2, 1};
  auto tower = make_tower(P.spec);
  const ChainRing& R = tower->R();
  const auto ring_elems = R.enumerate();
  std::vector<Matrix> mats;
  for (const auto& a : ring_elems)
    for (const auto& b : ring_elems)
      for (const auto& c : ring_elems)
        for (const auto& d : ring_elems) {
          Matrix M = Matrix::zero(R, 2, 2);
          M.at(0, 0) = a;
          M.at(0, 1) = b;
          M.at(1, 0) = c;
          M.at(1, 1) = d;
          mats.push_back(M);
        }
  // Kernel and image masks of every matrix over the 16 elements of R^2.
  const std::size_t q = 2, n = 4, N = 16;
  std::vector<std::vector<RingElement>> elems;
  for (std::size_t c = 0; c < N; ++c) elems.push_back(from_kvector(*tower, decode(c, n, q)));
  const auto code_of = [&](const std::vector<RingElement>& v) { return encode(to_kvector(*tower, v), q); };
  std::vector<std::uint32_t> ker(mats.size()), img(mats.size());
  for (std::size_t k = 0; k < mats.size(); ++k)
    for (std::size_t c = 0; c < N; ++c) {
      const std::size_t y = code_of(apply_entrywise(R, {mats[k], 0}, elems[c]));
      if (y == 0) ker[k] |= 1u << c;
      img[k] |= 1u << y;
    }
  Table pi(N);
  for (std::size_t c = 0; c < N; ++c)
    pi[c] = code_of({R.mul(R.pi(), elems[c][0]), R.mul(R.pi(), elems[c][1])});

  std::vector<DieudonneDatum> out;
  for (std::size_t a = 0; a < mats.size(); ++a)
    for (std::size_t b = 0; b < mats.size(); ++b) {
      if (ker[a] != img[b] || ker[b] != img[a] || __builtin_popcount(img[b]) != 4) continue;
      const std::uint32_t omega = img[b];
      std::uint32_t pi_omega = 0;
      for (std::size_t c = 0; c < N; ++c)
        if ((omega >> c) & 1u) pi_omega |= 1u << pi[c];
      for (std::size_t w = 1; w < N; ++w) {
        const std::uint32_t line = 1u | (1u << w);
        if (!((omega >> w) & 1u) || pi[w] != 0 || (pi_omega & ~line) != 0) continue;
        DieudonneDatum D{P, tower, {{mats[a], 1}}, {{mats[b], -1}}, {}};
        const Vec wv = decode(w, n, q);
        std::vector<Vec> omega_vecs;
        for (std::size_t c = 0; c < N; ++c)
          if ((omega >> c) & 1u) omega_vecs.push_back(decode(c, n, q));
        D.pr_flag.push_back({Submodule(2, Subspace::zero(n)), Submodule(2, Subspace::span(tower->field(), n, {wv})),
                             Submodule(2, Subspace::span(tower->field(), n, omega_vecs))});
        out.push_back(std::move(D));
      }
    }
  return out;
}

}  // namespace hasse
