#include "phigamma/io.hpp"

#include <string>

#include "phigamma/errors.hpp"

namespace phigamma {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

bool is_prime(u64 p) {
  if (p < 2) return false;
  for (u64 d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

json to_json(const Series& f) {
  const CtxPtr& c = f.ctx();
  json j;
  std::vector<u64> v;
  if (!f.is_zero())
    for (int b = f.lo(); b < f.cap(); ++b) v.push_back(f.coeff(b));
  while (!v.empty() && v.back() == 0) v.pop_back();
  j["lo"] = v.empty() ? 0 : f.lo();
  j["coeffs"] = v;
  if (f.cap() < c->max_cap()) j["cap"] = f.cap();
  return j;
}

Series series_from_json(const CtxPtr& c, const json& j) {
  const int lo = field<int>(j, "lo");
  auto v = field<std::vector<u64>>(j, "coeffs");
  if (lo < c->lo - c->N * static_cast<int>(c->p - 1)) throw ParseError("series starts below the window floor");
  for (auto x : v)
    if (x >= c->q) throw ParseError("coefficient outside [0, p^N)");
  Series s = Series::exact(c, lo, v);
  if (j.contains("cap")) s = s.with_cap(field<int>(j, "cap"));
  return s;
}

json to_json(const Character& d) {
  json j{{"k", d.k()}, {"cond", d.cond()}, {"zeta", d.zeta()}};
  j["at_p"] = d.has_at_p() ? json(d.at_p()) : json(nullptr);
  return j;
}

Character character_from_json(u64 p, int N, const json& j) {
  const int k = j.contains("k") ? field<int>(j, "k") : 0;
  const int cond = j.contains("cond") ? field<int>(j, "cond") : 0;
  const u64 zeta = j.contains("zeta") ? field<u64>(j, "zeta") : 1;
  Character d = Character::chi(p, N, k) * Character::finite(p, N, cond, zeta);
  if (j.contains("at_p") && !j.at("at_p").is_null()) return d.with_at_p(field<u64>(j, "at_p"));
  return d.gamma_only();
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (auto& r : m) {
    json row = json::array();
    for (auto& s : r) row.push_back(to_json(s));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const ModElem& x) {
  json v = json::array();
  for (auto& s : x.v) v.push_back(to_json(s));
  return json{{"basis", x.mod->basis_tag}, {"coords", v}};
}

ModElem elem_from_json(const ModulePtr& D, const json& j) {
  const json& cs = j.is_array() ? j : j.at("coords");
  if (!cs.is_array() || static_cast<int>(cs.size()) != D->rank) throw ParseError("coordinate count differs from rank");
  Vec v;
  for (auto& s : cs) v.push_back(series_from_json(D->ctx, s));
  return elem(D, v);
}

json to_json(const Measure& m) { return json{{"basis", "oneplusx"}, {"amice", to_json(amice(m))}}; }

Measure measure_from_json(const CtxPtr& c, const json& j) {
  if (field<std::string>(j, "basis") != "oneplusx") throw ParseError("unknown measure basis");
  return from_amice(c, series_from_json(c, j.at("amice")));
}

json to_json(const Cochain& c) {
  json es = json::array();
  for (auto& e : c.entries) es.push_back(to_json(e));
  return json{{"degree", c.degree},
              {"flavor", c.flavor == Flavor::PhiGamma ? "phi_gamma" : "psi_gamma"},
              {"gamma", c.gamma},
              {"entries", es}};
}

namespace {

const char* kind_name(Module::Kind k) {
  switch (k) {
    case Module::Kind::RankOne: return "rank_one";
    case Module::Kind::Split: return "split";
    case Module::Kind::Triangular: return "triangular";
    default: return "derived";
  }
}

std::vector<i64> table_points(const Ctx& c) { return {gamma_generator(c), -1}; }

}  // namespace

json describe_module(const ModulePtr& D) {
  const CtxPtr& c = D->ctx;
  if (D->kind != Module::Kind::RankOne && D->kind != Module::Kind::Split && D->kind != Module::Kind::Triangular)
    throw ConfigInvalid("only rank-one, split and triangular modules have descriptors");
  json j{{"p", c->p}, {"N", c->N}, {"window", {c->lo, c->hi}}, {"rank", D->rank}, {"kind", kind_name(D->kind)}};
  j["phi_matrix"] = to_json(D->P);
  if (D->rank == 1) {
    j["characters"] = {{"delta", to_json(D->eta[0])}};
    j["U"] = nullptr;
  } else {
    j["characters"] = {{"d1", to_json(D->eta[0])}, {"d2", to_json(D->eta[1])}};
    j["U"] = D->kind == Module::Kind::Triangular ? to_json(D->U) : json(nullptr);
  }
  json table = json::object();
  for (i64 a : table_points(*c)) table[std::to_string(a)] = to_json(D->G(a));
  j["gamma_table"] = table;
  return j;
}

CtxPtr ctx_from_json(const json& j) {
  const u64 p = field<u64>(j, "p");
  const int N = field<int>(j, "N");
  auto w = field<std::vector<int>>(j, "window");
  if (!is_prime(p) || p == 2) throw ValidationError("p must be an odd prime");
  if (N < 1 || w.size() != 2 || w[0] >= w[1]) throw ValidationError("bad precision or window");
  return make_ctx(p, N, w[0], w[1]);
}

ModulePtr module_from_json(const json& j) {
  CtxPtr c = ctx_from_json(j);
  const std::string kind = field<std::string>(j, "kind");
  const int rank = field<int>(j, "rank");
  const json& ch = j.at("characters");
  auto chr = [&](const char* k) { return character_from_json(c->p, c->N, ch.at(k)); };
  ModulePtr D;
  try {
    if (kind == "rank_one" && rank == 1) {
      D = make_rank_one(c, chr("delta"));
    } else if (kind == "split" && rank == 2) {
      D = make_split(c, chr("d1"), chr("d2"));
    } else if (kind == "triangular" && rank == 2) {
      if (!j.contains("U") || j.at("U").is_null()) throw ParseError("triangular descriptor needs U");
      D = build_triangular(c, chr("d1"), chr("d2"), series_from_json(c, j.at("U")));
    } else {
      throw ValidationError("unknown kind '" + kind + "' for rank " + std::to_string(rank));
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  auto read_mat = [&](const json& m) {
    if (!m.is_array() || static_cast<int>(m.size()) != rank) throw ParseError("matrix shape");
    Mat r;
    for (auto& row : m) {
      if (!row.is_array() || static_cast<int>(row.size()) != rank) throw ParseError("matrix shape");
      Vec v;
      for (auto& s : row) v.push_back(series_from_json(c, s));
      r.push_back(v);
    }
    return r;
  };
  if (j.contains("phi_matrix") && !mat::equal(read_mat(j.at("phi_matrix")), D->P))
    throw ValidationError("phi_matrix does not match the characters and U");
  if (!check_etale(*D)) throw ValidationError("phi matrix is not invertible");
  for (i64 a : table_points(*c))
    if (!check_commutation(*D, a)) throw ValidationError("phi and gamma do not commute");
  if (j.contains("gamma_table")) {
    for (auto& [key, m] : j.at("gamma_table").items()) {
      i64 a = 0;
      try {
        a = std::stoll(key);
      } catch (const std::exception&) {
        throw ParseError("gamma_table key is not an integer");
      }
      if (!mat::equal(read_mat(m), D->G(a))) throw ValidationError("gamma_table entry " + key + " does not match");
    }
  }
  return D;
}

}  // namespace phigamma
