#include "hasse/json_io.hpp"

#include <sstream>

#include "hasse/error.hpp"

namespace hasse {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

const Json& as_array(const Json& j, std::size_t size, const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array");
  if (j.size() != size)
    fail(what + " has length " + std::to_string(j.size()) + ", expected " + std::to_string(size));
  return j;
}

std::vector<int> int_list(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const Json& x : j) out.push_back(as_int(x, what));
  return out;
}

Json submodule_to_json(const RingTower& tower, const Submodule& s) { return to_json(tower.R(), s.generators(tower)); }

Submodule submodule_from_json(const RingTower& tower, const Json& j, std::size_t rank, const std::string& what) {
  as_array(j, rank, what);
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  return Submodule::from_generators(tower, matrix_from_json(tower.R(), j, rank, cols));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json to_json(const RingSpec& spec) {
  return Json{{"p", spec.p}, {"f", spec.f}, {"e", spec.e}, {"field_modulus", spec.field_modulus},
              {"eisenstein", spec.eisenstein}};
}

RingSpec ring_spec_from_json(const Json& j) {
  RingSpec s;
  s.p = as_int(field(j, "p"), "p");
  s.f = as_int(field(j, "f"), "f");
  s.e = as_int(field(j, "e"), "e");
  s.field_modulus = int_list(field(j, "field_modulus"), "field_modulus");
  s.eisenstein = int_list(field(j, "eisenstein"), "eisenstein");
  try {
    s.check();
  } catch (const Error& err) {
    fail(std::string("ring spec: ") + err.what());
  }
  return s;
}

Json to_json(const Params& params) {
  return Json{{"p", params.p()}, {"f", params.f()}, {"e", params.e()}, {"h1", params.h1}, {"d1", params.d1}};
}

Params params_from_json(const Json& j) {
  Params P;
  const int p = as_int(field(j, "p"), "p"), f = as_int(field(j, "f"), "f"), e = as_int(field(j, "e"), "e");
  P.h1 = as_int(field(j, "h1"), "h1");
  P.d1 = as_int(field(j, "d1"), "d1");
  try {
    P.spec = RingSpec::standard(p, f, e);
    P.check();
  } catch (const Error& err) {
    fail(std::string("params: ") + err.what());
  }
  return P;
}

Json to_json(const ChainRing& ring, const RingElement& a) {
  const int e = static_cast<int>(a.coeffs.size()) / ring.f();
  Json out = Json::array();
  for (int r = 0; r < e; ++r)
    out.push_back(std::vector<int>(a.coeffs.begin() + r * ring.f(), a.coeffs.begin() + (r + 1) * ring.f()));
  return out;
}

RingElement element_from_json(const ChainRing& ring, const Json& j) {
  const std::size_t e = ring.width() / static_cast<std::size_t>(ring.f());
  as_array(j, e, "ring element");
  std::vector<int> coeffs;
  for (const Json& digit : j) {
    as_array(digit, static_cast<std::size_t>(ring.f()), "ring element digit");
    for (const Json& c : digit) {
      const int v = as_int(c, "coefficient");
      if (v < 0 || v >= ring.modulus())
        fail("coefficient " + std::to_string(v) + " outside [0, " + std::to_string(ring.modulus()) + ")");
      coeffs.push_back(v);
    }
  }
  return ring.make(std::move(coeffs));
}

Json to_json(const ChainRing& ring, const Matrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(to_json(ring, m.at(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const ChainRing& ring, const Json& j, std::size_t rows, std::size_t cols) {
  as_array(j, rows, "matrix");
  Matrix m = Matrix::zero(ring, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    as_array(j[r], cols, "matrix row");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = element_from_json(ring, j[r][c]);
  }
  return m;
}

Json field_to_json(const FiniteField& K, Elem a) { return K.coeffs(a); }

Elem field_from_json(const FiniteField& K, const Json& j) {
  as_array(j, static_cast<std::size_t>(K.degree()), "field element");
  std::vector<int> c;
  for (const Json& x : j) {
    const int v = as_int(x, "field coefficient");
    if (v < 0 || v >= K.characteristic()) fail("field coefficient out of range");
    c.push_back(v);
  }
  return K.from_coeffs(c);
}

Json to_json(const Instance& inst) {
  const DieudonneDatum& D = inst.datum;
  const RingTower& t = *D.tower;
  const bool lifted = inst.lift.has_value();
  const ChainRing& ring = lifted ? t.What() : t.R();
  Json F = Json::array(), V = Json::array(), flags = Json::array();
  for (int i = 0; i < D.f(); ++i) {
    F.push_back(to_json(ring, lifted ? inst.lift->F[i].matrix : D.F[i].matrix));
    V.push_back(to_json(ring, lifted ? inst.lift->V[i].matrix : D.V[i].matrix));
    Json levels = Json::array();
    for (const Submodule& s : D.pr_flag[i]) levels.push_back(submodule_to_json(t, s));
    flags.push_back(std::move(levels));
  }
  return Json{{"label", inst.label}, {"seed", inst.seed}, {"index", inst.index}, {"params", to_json(D.params)},
              {"rings", to_json(D.params.spec)}, {"F", F}, {"V", V}, {"pr_flags", flags}, {"lifted", lifted}};
}

Instance instance_from_json(const Json& j) {
  Instance inst;
  const Json& label = field(j, "label");
  if (!label.is_string()) fail("label must be a string");
  inst.label = label.get<std::string>();
  const Json& seed = field(j, "seed");
  const Json& index = field(j, "index");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    fail("seed must be a non-negative integer");
  if (!index.is_number_unsigned() && !(index.is_number_integer() && index.get<long long>() >= 0))
    fail("index must be a non-negative integer");
  inst.seed = seed.get<std::uint64_t>();
  inst.index = index.get<std::size_t>();

  Params P;
  const Json& pj = field(j, "params");
  P.spec = ring_spec_from_json(field(j, "rings"));
  P.h1 = as_int(field(pj, "h1"), "h1");
  P.d1 = as_int(field(pj, "d1"), "d1");
  if (as_int(field(pj, "p"), "p") != P.p() || as_int(field(pj, "f"), "f") != P.f() ||
      as_int(field(pj, "e"), "e") != P.e())
    fail("params disagree with rings");
  try {
    P.check();
  } catch (const Error& err) {
    fail(std::string("params: ") + err.what());
  }
  const Json& lifted = field(j, "lifted");
  if (!lifted.is_boolean()) fail("lifted must be a boolean");

  auto tower = make_tower(P.spec);
  const ChainRing& ring = lifted.get<bool>() ? tower->What() : tower->R();
  const std::size_t n = static_cast<std::size_t>(P.h1), f = static_cast<std::size_t>(P.f());
  const Json& F = as_array(field(j, "F"), f, "F");
  const Json& V = as_array(field(j, "V"), f, "V");
  const Json& flags = as_array(field(j, "pr_flags"), f, "pr_flags");

  DieudonneDatum D{P, tower, {}, {}, {}};
  LiftedDatum L{P, tower, {}, {}, {}};
  for (std::size_t i = 0; i < f; ++i) {
    const Matrix a = matrix_from_json(ring, F[i], n, n), c = matrix_from_json(ring, V[i], n, n);
    if (lifted.get<bool>()) {
      L.F.push_back({a, 1});
      L.V.push_back({c, -1});
      D.F.push_back({mat_reduce(*tower, a), 1});
      D.V.push_back({mat_reduce(*tower, c), -1});
    } else {
      D.F.push_back({a, 1});
      D.V.push_back({c, -1});
    }
    const Json& levels = as_array(flags[i], static_cast<std::size_t>(P.e()) + 1, "pr_flags levels");
    std::vector<Submodule> flag;
    for (const Json& level : levels) flag.push_back(submodule_from_json(*tower, level, n, "pr_flags level"));
    D.pr_flag.push_back(std::move(flag));
  }
  L.pr_flag = D.pr_flag;
  inst.datum = std::move(D);
  if (lifted.get<bool>()) inst.lift = std::move(L);
  return inst;
}

Json to_json(const FiniteField& K, const DualityVerdict& v) {
  return Json{{"name", v.name},
              {"i", v.i},
              {"j", v.j},
              {"scalar", field_to_json(K, v.scalar_G)},
              {"vanished", v.scalar_G == 0},
              {"dual_scalar", field_to_json(K, v.scalar_GD)},
              {"iso", field_to_json(K, v.canonical_iso)},
              {"equal", v.equal},
              {"natural_agrees", v.natural_agrees},
              {"applicable", v.applicable},
              {"detail", v.detail}};
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& err) {
    fail(err.what());
  }
}

std::string write_csv(const CsvTable& table) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << csv_field(cells[c]);
    out << "\r\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out.str();
}

CsvTable read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false, started = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c != '"') {
        cell += c;
      } else if (k + 1 < text.size() && text[k + 1] == '"') {
        cell += '"';
        ++k;
      } else {
        quoted = false;
      }
      continue;
    }
    if (c == '"') {
      if (!cell.empty()) fail("quote inside an unquoted CSV field");
      quoted = started = true;
    } else if (c == ',') {
      record.push_back(std::move(cell));
      cell.clear();
      started = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && (k + 1 >= text.size() || text[k + 1] != '\n')) fail("bare CR in CSV");
      if (c == '\r') ++k;
      record.push_back(std::move(cell));
      records.push_back(std::move(record));
      record.clear();
      cell.clear();
      started = false;
    } else {
      cell += c;
      started = true;
    }
  }
  if (quoted) fail("unterminated quoted CSV field");
  if (started || !cell.empty()) {
    record.push_back(std::move(cell));
    records.push_back(std::move(record));
  }
  if (records.empty()) fail("empty CSV");
  CsvTable t;
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size()) fail("CSV row " + std::to_string(r) + " has the wrong field count");
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

CsvTable json_rows_to_csv(const Json& rows, const std::vector<std::string>& keys) {
  CsvTable t;
  t.header = keys;
  for (const Json& row : rows) {
    std::vector<std::string> cells;
    for (const std::string& k : keys) {
      const Json& v = field(row, k.c_str());
      cells.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace hasse
