#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "phigamma/errors.hpp"
#include "phigamma/io.hpp"
#include "phigamma/suites.hpp"

using namespace phigamma;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json parse_inline(const std::string& s, const std::string& what) {
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigInvalid("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

// environment fills in anything not given on the command line
template <class T>
void env_default(const CLI::Option* opt, const char* var, T& target, T (*conv)(const std::string&)) {
  if (opt->count() > 0) return;
  if (const char* v = std::getenv(var)) {
    try {
      target = conv(v);
    } catch (const std::exception&) {
      throw ConfigInvalid(std::string("bad value for ") + var);
    }
  }
}

std::pair<int, int> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigInvalid("window must be lo:hi");
  try {
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigInvalid("window must be lo:hi");
  }
}

ModElem read_elem(const ModulePtr& D, const std::string& path) {
  json j = read_json(path);
  if (j.contains("coords")) return elem_from_json(D, j);
  if (D->rank != 1) throw ParseError("a bare series input needs a rank-one module");
  return elem(D, {series_from_json(D->ctx, j)});
}

json with_precision(json value, int cap, int N) {
  return json{{"value", std::move(value)}, {"precision", {{"cap", cap}, {"exact_through", cap - N}}}};
}

int eval_op(const std::string& module_file, const std::string& op, const std::vector<std::string>& inputs,
            const std::string& char_json, i64 a, const std::string& out) {
  auto D = module_from_json(read_json(module_file));
  const CtxPtr& c = D->ctx;
  auto need = [&](std::size_t n) {
    if (inputs.size() != n) throw ConfigInvalid(op + " takes " + std::to_string(n) + " input(s)");
  };
  auto ch = [&] {
    if (char_json.empty()) throw ConfigInvalid(op + " needs --char");
    return character_from_json(c->p, c->N, parse_inline(char_json, "--char"));
  };
  auto elem_out = [&](const ModElem& x) { return with_precision(to_json(x), elem_cap(x), c->N); };
  auto pz_out = [&](const PsiZero& x) { return elem_out(realize(x)); };
  auto meas_out = [&](const Measure& m) { return with_precision(to_json(m), measure_cap(m), c->N); };
  json res;
  if (op == "phi" || op == "psi") {
    need(1);
    auto x = read_elem(D, inputs[0]);
    res = elem_out(op == "phi" ? apply_phi(x) : apply_psi(x));
  } else if (op == "sigma") {
    need(1);
    res = elem_out(apply_sigma(a, read_elem(D, inputs[0])));
  } else if (op == "m-delta" || op == "w-delta") {
    need(1);
    auto x = certify(read_elem(D, inputs[0]));
    res = pz_out(op == "m-delta" ? m_delta(x, ch()) : w_delta(x, ch()));
  } else if (op == "w-star") {
    need(1);
    res = pz_out(w_star(certify(read_elem(D, inputs[0]))));
  } else if (op == "wedge") {
    need(2);
    res = pz_out(wedge_pair(certify(read_elem(D, inputs[0])), certify(read_elem(D, inputs[1]))));
  } else if (op == "iwasawa-pair" || op == "epsilon-rank-two") {
    need(2);
    auto x = certify(read_elem(D, inputs[0])), y = certify(read_elem(D, inputs[1]));
    res = meas_out(op == "iwasawa-pair" ? iwasawa_pair(x, y) : epsilon_rank_two(x, y));
  } else if (op == "residue-pair") {
    need(2);
    res = json{{"value", residue_pair(read_elem(D, inputs[0]), read_elem(D, inputs[1]))}};
  } else if (op == "amice-coordinates") {
    need(1);
    res = meas_out(amice_coordinates(certify(read_elem(D, inputs[0]))));
  } else {
    throw ConfigInvalid("unknown op '" + op + "'");
  }
  res["op"] = op;
  write_json(res, out);
  return 0;
}

Series parse_U(const CtxPtr& c, const std::string& s) {
  if (s == "0") return Series::zero(c);
  if (s == "X") return Series::monomial(c, 1, 1);
  return series_from_json(c, parse_inline(s, "--U"));
}

int gen_example(const std::string& kind, u64 p, int N, std::pair<int, int> w, const std::string& d1s,
                const std::string& d2s, const std::string& Us, const std::string& out) {
  if (p < 3 || p % 2 == 0) throw ConfigInvalid("p must be an odd prime");
  auto c = make_ctx(p, N, w.first, w.second);
  auto chr = [&](const std::string& s, Character dflt) {
    return s.empty() ? dflt : character_from_json(p, N, parse_inline(s, "character"));
  };
  ModulePtr D;
  if (kind == "rank_one") {
    D = make_rank_one(c, chr(d1s, Character::trivial(p, N)));
  } else if (kind == "split" || kind == "triangular") {
    auto d1 = chr(d1s, Character::chi(p, N, 1).with_at_p(2));
    auto d2 = chr(d2s, Character::trivial(p, N).with_at_p(p + 2));
    D = kind == "split" ? make_split(c, d1, d2) : build_triangular(c, d1, d2, parse_U(c, Us));
  } else {
    throw ConfigInvalid("kind must be rank_one, split or triangular");
  }
  json j = describe_module(D);
  module_from_json(j);  // emitted descriptors always validate
  write_json(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phigamma: (phi, Gamma)-module operators and identity suites"};
  app.require_subcommand(1);

  SuiteConfig cfg;
  std::string window = "-40:160", report;
  auto* rs = app.add_subcommand("run-suite", "run a named identity suite");
  rs->add_option("suite", cfg.suite, "suite name")->required();
  auto* o_p = rs->add_option("--p", cfg.p, "odd prime");
  auto* o_n = rs->add_option("--prec-n", cfg.N, "p-adic precision N");
  auto* o_w = rs->add_option("--window", window, "X-adic window lo:hi");
  auto* o_s = rs->add_option("--seed", cfg.seed, "random seed");
  auto* o_t = rs->add_option("--trials", cfg.trials, "trials");
  auto* o_m = rs->add_option("--n-max", cfg.n_max, "Riemann-sum level cap (0 = N+2)");
  auto* o_th = rs->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  auto* o_r = rs->add_option("--report", report, "write the JSON report here");
  rs->add_flag("--list", "print suite names and exit");

  std::string module_file, op, char_json, out;
  std::vector<std::string> inputs;
  i64 a = 1;
  auto* ev = app.add_subcommand("eval", "evaluate one operation on a module");
  ev->add_option("--module", module_file, "module descriptor JSON")->required();
  ev->add_option("op", op, "phi, psi, sigma, m-delta, w-star, w-delta, wedge, iwasawa-pair, epsilon-rank-two, "
                           "residue-pair, amice-coordinates")->required();
  ev->add_option("--input", inputs, "element JSON file (repeat for two inputs)");
  ev->add_option("--char", char_json, "character JSON {\"k\",\"cond\",\"zeta\",\"at_p\"}");
  ev->add_option("--a", a, "unit for sigma");
  ev->add_option("--out", out, "output file (default stdout)");

  std::string kind, d1s, d2s, Us = "X", gwin = "-40:160";
  u64 gp = 3;
  int gN = 6;
  auto* ge = app.add_subcommand("gen-example", "emit a validated module descriptor");
  ge->add_option("kind", kind, "rank_one, split or triangular")->required();
  ge->add_option("--p", gp, "odd prime");
  ge->add_option("--prec-n", gN, "p-adic precision N");
  ge->add_option("--window", gwin, "X-adic window lo:hi");
  ge->add_option("--d1", d1s, "first character JSON");
  ge->add_option("--d2", d2s, "second character JSON");
  ge->add_option("--U", Us, "0, X or a series JSON");
  ge->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*rs) {
      if (rs->get_option("--list")->count()) {
        for (auto& n : suite_names()) std::cout << n << "\n";
        return 0;
      }
      auto to_u64 = +[](const std::string& s) { return static_cast<u64>(std::stoull(s)); };
      auto to_int = +[](const std::string& s) { return std::stoi(s); };
      auto to_str = +[](const std::string& s) { return s; };
      env_default(o_p, "PHIGAMMA_P", cfg.p, to_u64);
      env_default(o_n, "PHIGAMMA_PREC_N", cfg.N, to_int);
      env_default(o_w, "PHIGAMMA_WINDOW", window, to_str);
      env_default(o_s, "PHIGAMMA_SEED", cfg.seed, to_u64);
      env_default(o_t, "PHIGAMMA_TRIALS", cfg.trials, to_int);
      env_default(o_m, "PHIGAMMA_N_MAX", cfg.n_max, to_int);
      env_default(o_th, "PHIGAMMA_THREADS", cfg.threads, to_int);
      env_default(o_r, "PHIGAMMA_REPORT", report, to_str);
      std::tie(cfg.lo, cfg.hi) = parse_window(window);
      validate(cfg);
      Report r = run_suite(cfg);
      json j = to_json(r);
      if (!report.empty()) write_json(j, report);
      std::cerr << cfg.suite << ": " << r.passed << " passed, " << r.failed << " failed (" << r.wall_ms
                << " ms)\n";
      if (r.failed > 0) {
        std::string last;
        for (auto& rec : r.checks)
          if (!rec.pass && rec.name != last) std::cerr << "  FAIL " << (last = rec.name) << "\n";
      }
      return r.failed == 0 ? 0 : 1;
    }
    if (*ev) return eval_op(module_file, op, inputs, char_json, a, out);
    return gen_example(kind, gp, gN, parse_window(gwin), d1s, d2s, Us, out);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  }
}
