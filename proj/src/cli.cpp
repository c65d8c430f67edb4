#include "dopfac/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dopfac/ccsys.hpp"
#include "dopfac/dini.hpp"
#include "dopfac/error.hpp"
#include "dopfac/lodo.hpp"
#include "dopfac/lpdo.hpp"
#include "dopfac/parse.hpp"
#include "dopfac/registry.hpp"

namespace dopfac {

namespace {

using json = nlohmann::json;
using Action = std::function<json()>;

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string read_source(const std::string& path, std::istream& in) {
  std::stringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw Error("cannot read " + path);
    buf << f.rdbuf();
  }
  return buf.str();
}

json hyperbolic_json(const HyperbolicForm& H, const Invariants& inv) {
  return {{"operator", to_pdop(H).to_string()}, {"h", inv.h.to_string()}, {"k", inv.k.to_string()}};
}

json direction_json(const LaplaceDirection& d) {
  json steps = json::array();
  for (const auto& s : d.steps) steps.push_back(hyperbolic_json(s.H, s.inv));
  return {{"steps", steps}, {"terminated", d.terminated}};
}

json row_strings(const CCSystem& s) {
  json a = json::array();
  for (const auto& r : s.equations) a.push_back(s.equation_to_string(r));
  return a;
}

FirstOrderOp first_order(const std::string& text) { return FirstOrderOp::from_pdop(parse_pdop(text)); }

struct Inputs {
  std::string a, b, c;
  std::vector<std::string> list;
  std::string var = "x";
  bool left = false;
  unsigned max_steps = 12;
  std::string order, file = "-", solution, matrix, names, dir = "plus";
  std::string s1, s2, beta, alpha = "0";
  bool reciprocal = false;
};

Side side_of(const Inputs& in) { return in.left ? Side::Left : Side::Right; }

void add_lodo(CLI::App& app, Inputs& in, Action& action) {
  auto* lodo = app.add_subcommand("lodo", "ordinary operators in K[D]");
  lodo->require_subcommand(1);
  lodo->add_option("--var", in.var, "variable of D")->capture_default_str();
  auto v = [&in] { return var(in.var); };
  auto L = [&in, v](const std::string& s) { return parse_lodo(s, v()); };

  auto* mul = lodo->add_subcommand("mul", "product A*B");
  mul->add_option("A", in.a)->required();
  mul->add_option("B", in.b)->required();
  mul->callback([&, L] { action = [&, L] { return json{{"product", (L(in.a) * L(in.b)).to_string()}}; }; });

  auto* div = lodo->add_subcommand("divide", "right (or --left) division");
  div->add_option("A", in.a)->required();
  div->add_option("B", in.b)->required();
  div->add_flag("--left", in.left);
  div->callback([&, L] {
    action = [&, L] {
      DivResult r = divide(L(in.a), L(in.b), side_of(in));
      return json{{"quotient", r.quotient.to_string()}, {"remainder", r.remainder.to_string()}};
    };
  });

  for (const char* which : {"gcd", "lcm"}) {
    auto* sub = lodo->add_subcommand(which, std::string("right (or --left) ") + which);
    sub->add_option("A", in.a)->required();
    sub->add_option("B", in.b)->required();
    sub->add_flag("--left", in.left);
    std::string w = which;
    sub->callback([&, L, w] {
      action = [&, L, w] {
        GcdLcm g = gcd_lcm(L(in.a), L(in.b), side_of(in));
        std::string key = std::string(in.left ? "l" : "r") + w;
        return json{{key, (w == "gcd" ? g.gcd : g.lcm).to_string()}};
      };
    });
  }

  auto* bez = lodo->add_subcommand("bezout", "X*A + Y*B = C (or A*X + B*Y = C with --left)");
  bez->add_option("A", in.a)->required();
  bez->add_option("B", in.b)->required();
  bez->add_option("C", in.c)->required();
  bez->add_flag("--left", in.left);
  bez->callback([&, L] {
    action = [&, L] {
      auto s = bezout(L(in.a), L(in.b), L(in.c), side_of(in));
      if (!s) throw Error("no solution");
      return json{{"X", s->X.to_string()}, {"Y", s->Y.to_string()}};
    };
  });

  auto* tr = lodo->add_subcommand("transform", "transformation <L -> B -> L1>");
  tr->add_option("L", in.a)->required();
  tr->add_option("B", in.b)->required();
  tr->callback([&, L] {
    action = [&, L] {
      auto t = transform(L(in.a), L(in.b));
      if (!t) throw Error("rGCD(L, B) is not 1");
      return json{{"L1", t->L1.to_string()},
                  {"B1", t->B1.to_string()},
                  {"Binv", t->Binv.to_string()},
                  {"valid", check_transform(*t)}};
    };
  });

  auto* ic = lodo->add_subcommand("interchange", "P1 with P*Q = P1*Q1");
  ic->add_option("P", in.a)->required();
  ic->add_option("Q", in.b)->required();
  ic->add_option("Q1", in.c)->required();
  ic->callback([&, L] {
    action = [&, L] {
      auto p = interchange(L(in.a), L(in.b), L(in.c));
      if (!p) throw Error("Q1 is not a right factor of P*Q");
      return json{{"P1", p->to_string()}};
    };
  });

  auto* adj = lodo->add_subcommand("adjoint", "formal adjoint");
  adj->add_option("L", in.a)->required();
  adj->callback([&, L] { action = [&, L] { return json{{"adjoint", adjoint(L(in.a)).to_string()}}; }; });

  auto* ker = lodo->add_subcommand("kernel", "rational solutions of L y = 0");
  ker->add_option("L", in.a)->required();
  ker->callback([&, L] {
    action = [&, L] {
      json a = json::array();
      for (const auto& f : rational_kernel(L(in.a))) a.push_back(f.to_string());
      return json{{"kernel", a}};
    };
  });

  auto* jh = lodo->add_subcommand("jhcheck", "compare factorizations, factors separated by '|'");
  jh->add_option("L", in.a)->required();
  jh->add_option("factorizations", in.list)->required();
  jh->callback([&, L] {
    action = [&, L] {
      std::vector<std::vector<OrePoly>> fs;
      for (const auto& f : in.list) {
        std::vector<OrePoly> row;
        for (const auto& p : split_on(f, '|')) row.push_back(L(p));
        fs.push_back(std::move(row));
      }
      JhReport r = jh_check(L(in.a), fs);
      return json{{"lengths", r.lengths},
                  {"orders", r.orders},
                  {"lengths_equal", r.lengths_equal},
                  {"orders_match", r.orders_match}};
    };
  });
}

void add_lpdo(CLI::App& app, Inputs& in, Action& action) {
  auto* lpdo = app.add_subcommand("lpdo", "partial operators");
  lpdo->require_subcommand(1);

  auto* mul = lpdo->add_subcommand("mul", "product A*B");
  mul->add_option("A", in.a)->required();
  mul->add_option("B", in.b)->required();
  mul->callback([&] {
    action = [&] { return json{{"product", (parse_pdop(in.a) * parse_pdop(in.b)).to_string()}}; };
  });

  auto* sym = lpdo->add_subcommand("symbol", "principal symbol");
  sym->add_option("L", in.a)->required();
  sym->callback([&] {
    action = [&] { return json{{"symbol", principal_symbol(parse_pdop(in.a)).to_string()}}; };
  });

  auto* fs = lpdo->add_subcommand("factor-symbol", "linear factors of the principal symbol");
  fs->add_option("L", in.a)->required();
  fs->callback([&] {
    action = [&] {
      auto f = factor_symbol(principal_symbol(parse_pdop(in.a)));
      if (!f) return json{{"factorable", false}};
      json a = json::array();
      for (const auto& s : f->factors) a.push_back(s.to_string());
      return json{{"factorable", true}, {"scale", f->scale.to_string()}, {"factors", a}};
    };
  });

  auto* inv = lpdo->add_subcommand("invariants", "Laplace invariants h, k");
  inv->add_option("L", in.a)->required();
  inv->callback([&] {
    action = [&] {
      Invariants i = laplace_invariants(to_hyperbolic(parse_pdop(in.a)));
      return json{{"h", i.h.to_string()}, {"k", i.k.to_string()}};
    };
  });

  auto* nf = lpdo->add_subcommand("naive-factor", "first-order factorization when h or k vanishes");
  nf->add_option("L", in.a)->required();
  nf->callback([&] {
    action = [&] {
      auto f = naive_factor(to_hyperbolic(parse_pdop(in.a)));
      json a = json::array();
      if (f) a = {f->first.to_string(), f->second.to_string()};
      return json{{"factors", a}};
    };
  });

  auto* st = lpdo->add_subcommand("step", "one Laplace transformation");
  st->add_option("L", in.a)->required();
  st->add_option("--dir", in.dir)->check(CLI::IsMember({"plus", "minus"}))->capture_default_str();
  st->callback([&] {
    action = [&] {
      LaplaceStep s = laplace_step(to_hyperbolic(parse_pdop(in.a)),
                                   in.dir == "plus" ? Direction::Plus : Direction::Minus);
      json j = hyperbolic_json(s.H, s.inv);
      j["forward"] = s.sub.forward.to_string();
      j["pullback"] = s.sub.pullback.to_string();
      return j;
    };
  });

  auto* cas = lpdo->add_subcommand("cascade", "Laplace chain in both directions");
  cas->add_option("L", in.a)->required();
  cas->add_option("--max-steps", in.max_steps)->capture_default_str();
  cas->callback([&] {
    action = [&] {
      LaplaceChain ch = laplace_cascade(to_hyperbolic(parse_pdop(in.a)), in.max_steps);
      return json{{"center", hyperbolic_json(ch.center, ch.center_inv)},
                  {"plus", direction_json(ch.plus)},
                  {"minus", direction_json(ch.minus)}};
    };
  });

  auto* sol = lpdo->add_subcommand("solve", "complete solution from a terminating cascade");
  sol->add_option("L", in.a)->required();
  sol->add_option("--max-steps", in.max_steps)->capture_default_str();
  sol->callback([&] {
    action = [&] {
      PDOp L = parse_pdop(in.a);
      BuiltSolution b = build_solution(laplace_cascade(to_hyperbolic(L), in.max_steps));
      return json{{"u", b.u.to_string()},
                  {"verified", verify_solution(L, b.u)},
                  {"integration_fallback", b.integration_fallback}};
    };
  });

  auto* ver = lpdo->add_subcommand("verify", "check L u = 0");
  ver->add_option("L", in.a)->required();
  ver->add_option("u", in.b)->required();
  ver->callback([&] {
    action = [&] { return json{{"verified", verify_solution(parse_pdop(in.a), parse_expr(in.b))}}; };
  });
}

std::vector<std::vector<CCOperator>> parse_matrix(const std::string& text) {
  std::vector<std::vector<CCOperator>> m;
  for (const auto& row : split_on(text, ';')) {
    std::vector<CCOperator> r;
    for (const auto& e : split_on(row, ',')) r.push_back(parse_cc_operator(e));
    m.push_back(std::move(r));
  }
  return m;
}

SolutionVector parse_solution(const std::string& text, const CCSystem& s) {
  SolutionVector v(s.unknowns.size());
  std::vector<bool> seen(s.unknowns.size(), false);
  for (const auto& line : split_on(text, '\n')) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("expected 'name = expression': " + line);
    std::string name = line.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    auto it = std::find(s.unknowns.begin(), s.unknowns.end(), name);
    if (it == s.unknowns.end()) throw Error("unknown '" + name + "' in solution");
    auto j = static_cast<std::size_t>(it - s.unknowns.begin());
    v[j] = parse_expr(line.substr(eq + 1));
    seen[j] = true;
  }
  for (std::size_t j = 0; j < seen.size(); ++j)
    if (!seen[j]) throw Error("solution misses " + s.unknowns[j]);
  return v;
}

json solution_json(const CCSystem& s, const SolutionVector& v) {
  json o = json::object();
  for (std::size_t j = 0; j < v.size(); ++j) o[s.unknowns[j]] = v[j].to_string();
  return o;
}

void add_ccsys(CLI::App& app, Inputs& in, Action& action, std::istream& stdin_) {
  auto* cc = app.add_subcommand("ccsys", "constant-coefficient systems");
  cc->require_subcommand(1);
  auto system = [&in, &stdin_] { return parse_system(read_source(in.file, stdin_)); };
  auto order = [&in](const CCSystem& s) { return parse_order(in.order, s); };
  auto file_opts = [&in](CLI::App* sub) {
    sub->add_option("system", in.file, "file with one equation per line, - for stdin")->capture_default_str();
    sub->add_option("--order", in.order, "e.g. \"u3>u2>u1;Dx>Dy\"");
  };

  auto* el = cc->add_subcommand("eliminate", "Gröbner basis by module elimination");
  file_opts(el);
  el->callback([&, system, order] {
    action = [&, system, order] {
      CCSystem s = system();
      Elimination e = groebner_eliminate(s, order(s));
      json scalar = json::array(), zeros = json::array();
      for (const auto& p : e.scalar_equations()) scalar.push_back(cc_to_string(p));
      for (auto j : e.zero_unknowns) zeros.push_back(s.unknowns[j]);
      return json{{"unknowns", s.unknowns},
                  {"basis", row_strings(e.as_system())},
                  {"scalar_unknown", s.unknowns[e.scalar_unknown()]},
                  {"scalar_equations", scalar},
                  {"zero_unknowns", zeros}};
    };
  });

  auto* fa = cc->add_subcommand("factors", "linear factors of a scalar operator");
  fa->add_option("P", in.a)->required();
  fa->callback([&] {
    action = [&] {
      LinearFactors f = linear_factors(parse_cc_operator(in.a));
      json a = json::array();
      for (const auto& p : f.factors) a.push_back(cc_to_string(p));
      return json{{"factors", a}, {"remainder", cc_to_string(f.remainder)}};
    };
  });

  auto* so = cc->add_subcommand("solve", "complete solution through elimination");
  file_opts(so);
  so->callback([&, system, order] {
    action = [&, system, order] {
      CCSystem s = system();
      SolutionVector v = solve_system(s, order(s));
      return json{{"solution", solution_json(s, v)}, {"verified", verify_system(s, v)}};
    };
  });

  auto* ve = cc->add_subcommand("verify", "check a solution given as lines 'u1 = ...'");
  file_opts(ve);
  ve->add_option("--solution", in.solution, "solution file")->required();
  ve->callback([&, system] {
    action = [&, system] {
      CCSystem s = system();
      SolutionVector v = parse_solution(read_source(in.solution, stdin_), s);
      return json{{"verified", verify_system(s, v)}};
    };
  });

  auto* su = cc->add_subcommand("substitute", "new unknowns v = T u");
  file_opts(su);
  su->add_option("--matrix", in.matrix, "rows separated by ';', entries by ','")->required();
  su->add_option("--names", in.names, "comma-separated names of the new unknowns");
  su->callback([&, system, order] {
    action = [&, system, order] {
      CCSystem s = system();
      std::vector<std::string> names;
      if (!in.names.empty()) names = split_on(in.names, ',');
      CCSubstitution r = apply_substitution(s, parse_matrix(in.matrix), order(s), names);
      json inv = json::array();
      for (const auto& row : r.inverse) {
        json a = json::array();
        for (const auto& p : row) a.push_back(cc_to_string(p));
        inv.push_back(a);
      }
      return json{{"unknowns", r.system.unknowns}, {"system", row_strings(r.system)}, {"inverse", inv}};
    };
  });
}

json decomposition_json(const DiniDecomposition& d) {
  return {{"S1", d.S1.to_string()}, {"S2", d.S2.to_string()}, {"T", d.T.to_string()},
          {"a", d.a.to_string()},   {"K", d.K.to_string()},   {"M", d.M.to_string()},
          {"N", d.N.to_string()},   {"P", d.P.to_string()},   {"Q", d.Q.to_string()},
          {"R", d.R.to_string()}};
}

void add_dini(CLI::App& app, Inputs& in, Action& action) {
  auto* dini = app.add_subcommand("dini", "Dini transformations of trivariate operators");
  dini->require_subcommand(1);
  auto frame = [&in](CLI::App* sub) {
    sub->add_option("L", in.a)->required();
    sub->add_option("--s1", in.s1, "first-order operator S1")->required();
    sub->add_option("--s2", in.s2, "first-order operator S2")->required();
  };
  auto decompose = [&in] {
    return characteristic_decompose(parse_pdop(in.a), first_order(in.s1), first_order(in.s2));
  };

  auto* de = dini->add_subcommand("decompose", "L = S1*S2 + T + a with frame coefficients");
  frame(de);
  de->callback([&, decompose] { action = [decompose] { return decomposition_json(decompose()); }; });

  auto* ri = dini->add_subcommand("riccati", "residual of beta, or a search without --beta");
  frame(ri);
  ri->add_option("--beta", in.beta);
  ri->add_flag("--reciprocal-linear", in.reciprocal, "also try c/(p x + q y + r z + s)");
  ri->callback([&, decompose] {
    action = [&, decompose] {
      DiniDecomposition d = decompose();
      if (!in.beta.empty()) return json{{"residual", riccati_residual(d, parse_ratfunc(in.beta)).to_string()}};
      json a = json::array();
      for (const auto& b : beta_search(d, {true, in.reciprocal, {}})) a.push_back(b.to_string());
      return json{{"candidates", a}};
    };
  });

  auto* tr = dini->add_subcommand("transform", "transformed operator L1");
  frame(tr);
  tr->add_option("--beta", in.beta)->default_str("0");
  tr->add_option("--alpha", in.alpha)->capture_default_str();
  tr->callback([&] {
    action = [&] {
      RatFunc beta = parse_ratfunc(in.beta.empty() ? "0" : in.beta);
      DiniTransform t = dini_transform(parse_pdop(in.a), first_order(in.s1), first_order(in.s2), beta,
                                       parse_ratfunc(in.alpha));
      return json{{"L1", t.L1.to_string()}, {"V", t.V.to_string()}, {"b", t.b.to_string()},
                  {"mu", t.mu.to_string()}, {"nu", t.nu.to_string()}};
    };
  });

  auto* ex = dini->add_subcommand("example", "checks on L = DxDy + x DxDz - Dz");
  ex->callback([&] {
    action = [] {
      DiniReport r = verify_dini_example();
      json checks = json::array();
      for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}});
      return json{{"v", dini_example_solution().to_string()}, {"checks", checks}, {"all_pass", r.all_pass()}};
    };
  });
}

void print_error(std::ostream& err, const std::string& msg) { err << json{{"error", msg}}.dump() << "\n"; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::istream& in) {
  var("x");
  var("y");
  var("z");
  CLI::App app{"Differential operator algebra: K[D], Laplace cascades, systems, Dini transformations", "dopfac"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags after a subcommand
  bool pretty = false, json_flag = false;
  app.add_flag("--pretty", pretty, "indented JSON");
  app.add_flag("--json", json_flag, "JSON output (the default)");
  Inputs inputs;
  Action action;
  add_lodo(app, inputs, action);
  add_lpdo(app, inputs, action);
  add_ccsys(app, inputs, action, in);
  add_dini(app, inputs, action);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    print_error(err, e.what());
    return 2;
  }
  try {
    json result = action();
    out << result.dump(pretty ? 2 : -1) << "\n";
    return 0;
  } catch (const ParseError& e) {
    print_error(err, e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error(err, e.what());
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr, std::cin);
}

}  // namespace dopfac
