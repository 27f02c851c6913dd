#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <sstream>

#include "propcalc/dsl.hpp"
#include "propcalc/freelie.hpp"
#include "propcalc/module_eval.hpp"
#include "propcalc/pbw.hpp"
#include "propcalc/rewrite.hpp"
#include "propcalc/ybe.hpp"

using namespace propcalc;
using nlohmann::json;

namespace {

struct Globals {
  std::string variant = "bialg";
  int order = 8;
  bool json_out = false;
  bool csv_out = false;
  std::uint64_t seed = 1;
};

enum class Out { Text, Json, Csv };

Out out_mode(const Globals& g) { return g.json_out ? Out::Json : g.csv_out ? Out::Csv : Out::Text; }

// Letters are 1-based digits; "e" is the empty word.
Word cli_word(const std::string& s) {
  Word w;
  if (s == "e") return w;
  for (char c : s) {
    if (c < '1' || c > '9') throw std::invalid_argument("bad letter in word '" + s + "'");
    w.push_back(c - '1');
  }
  return w;
}

template <typename S>
void print_normal_form(const NormalForm<S>& nf, Out out) {
  if (out == Out::Json) {
    std::cout << to_json(nf).dump(2) << "\n";
    return;
  }
  if (nf.is_zero()) std::cout << "0\n";
  for (const auto& [od, c] : nf.terms) {
    if (out == Out::Csv)
      std::cout << '"' << to_string(c) << "\",\"" << od.str() << "\"\n";
    else
      std::cout << "(" << to_string(c) << ") " << od.str() << "\n";
  }
}

template <typename S>
int run_normalize(const std::string& text, Variant v, const std::string& strategy, const Globals& g) {
  LinComb<S> x = parse_lincomb<S>(text, Signature::for_variant(v));
  NormalizeOptions opt;
  opt.seed = g.seed;
  if (strategy == "last") opt.strategy = Strategy::Last;
  if (strategy == "random") opt.strategy = Strategy::Random;
  print_normal_form(normalize(x, v, opt), out_mode(g));
  return 0;
}

template <typename S>
int run_check(const std::string& relation, Variant v, const Globals& g) {
  Signature sig = Signature::for_variant(v);
  if (relation.empty()) {
    bool all = true;
    json rows = json::array();
    for (const auto& rel : relation_list(v)) {
      bool ok = check_relation(rel.lhs, rel.rhs, v);
      all = all && ok;
      if (out_mode(g) == Out::Json)
        rows.push_back({{"relation", rel.name}, {"holds", ok}});
      else
        std::cout << rel.name << ": " << (ok ? "holds" : "FAILS") << "\n";
    }
    if (out_mode(g) == Out::Json) std::cout << rows.dump(2) << "\n";
    return all ? 0 : 1;
  }
  auto eq = relation.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("check: relation must have the form 'lhs = rhs'");
  LinComb<S> lhs = parse_lincomb<S>(relation.substr(0, eq), sig);
  LinComb<S> rhs = parse_lincomb<S>(relation.substr(eq + 1), sig);
  if (lhs.n_in() != rhs.n_in() || lhs.n_out() != rhs.n_out()) throw std::invalid_argument("check: sides have different bidegree");
  bool ok = check_relation(lhs, rhs, v);
  std::cout << (ok ? "holds" : "FAILS") << "\n";
  return ok ? 0 : 1;
}

template <typename S>
std::unique_ptr<Module<S>> make_module(const std::string& name) {
  if (name == "tensor") return std::make_unique<TensorAlgebraModule<S>>();
  if (name == "triangular") return std::make_unique<FreeBialgebraModule<S>>(FiniteCoalgebra::triangular());
  if (name == "divided") return std::make_unique<FreeBialgebraModule<S>>(FiniteCoalgebra::divided_powers());
  if (name == "copoisson") return std::make_unique<FreeBialgebraModule<S>>(FiniteCoalgebra::copoisson());
  throw std::invalid_argument("unknown module '" + name + "' (tensor|triangular|divided|copoisson)");
}

template <typename S>
int run_eval(const std::string& text, Variant v, const std::string& module, const std::vector<std::string>& input, const Globals& g) {
  LinComb<S> x = parse_lincomb<S>(text, Signature::for_variant(v));
  WordTuple key;
  for (const auto& w : input) key.push_back(cli_word(w));
  if (static_cast<int>(key.size()) != x.n_in())
    throw std::invalid_argument("eval: expected " + std::to_string(x.n_in()) + " input words, got " + std::to_string(key.size()));
  auto mod = make_module<S>(module);
  WordTensor<S> res = eval_on_module(x, *mod, WordTensor<S>::monomial(key, ScalarTraits<S>::one()));
  if (out_mode(g) == Out::Json) {
    json terms = json::array();
    for (const auto& [k, c] : res.terms()) {
      json words = json::array();
      for (const auto& w : k) words.push_back(w.empty() ? "e" : word_str(w));
      terms.push_back({{"words", words}, {"coeff", to_string(c)}});
    }
    std::cout << json{{"slots", res.slots()}, {"terms", terms}}.dump(2) << "\n";
  } else {
    if (res.is_zero()) std::cout << "0\n";
    for (const auto& [k, c] : res.terms()) {
      std::cout << "(" << to_string(c) << ")";
      for (std::size_t i = 0; i < k.size(); ++i) std::cout << (i ? " | " : " ") << (k[i].empty() ? "e" : word_str(k[i]));
      std::cout << "\n";
    }
  }
  return 0;
}

void print_table(const std::vector<std::pair<int, long long>>& rows, const std::string& label, Out out) {
  if (out == Out::Json) {
    json arr = json::array();
    for (auto [n, d] : rows) arr.push_back({{"N", n}, {"dim", d}});
    std::cout << json{{"space", label}, {"dims", arr}}.dump(2) << "\n";
  } else if (out == Out::Csv) {
    std::cout << "N,dim\n";
    for (auto [n, d] : rows) std::cout << n << "," << d << "\n";
  } else {
    std::cout << label << "\n";
    for (auto [n, d] : rows) std::cout << "N=" << n << "  " << d << "\n";
  }
}

int run_dim(const std::string& space, int p, int q, int n, int max_n, const Globals& g) {
  std::string s;
  for (char c : space) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::vector<std::pair<int, long long>> rows;
  std::ostringstream label;
  if (s == "lba") {
    for (int N = 0; N <= max_n; ++N) rows.emplace_back(N, lba_component_dim(p, q, N));
    label << "LBA(" << p << "," << q << ")";
  } else if (s == "alg" || s == "algcomm" || s == "poisson" || s == "la") {
    ClassicalSpace cs = parse_classical_space(s);
    for (int N = 0; N <= max_n; ++N) rows.emplace_back(N, classical_dim(cs, N, n));
    label << space << "(N," << n << ")";
  } else {
    Variant v = parse_variant(s);
    for (int N = 0; N <= max_n; ++N) rows.emplace_back(N, component_dim(p, q, N, v));
    label << variant_name(v) << "(" << p << "," << q << ")";
  }
  print_table(rows, label.str(), out_mode(g));
  return 0;
}

int run_basis(Variant v, int p, int q, int N, int k, const Globals& g) {
  auto basis = structure_basis(p, q, N, v, k);
  if (out_mode(g) == Out::Json) {
    json arr = json::array();
    for (const auto& od : basis) arr.push_back(to_json(od));
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& od : basis) std::cout << od.str() << "\n";
  }
  std::cerr << basis.size() << " elements\n";
  return 0;
}

int run_eulerian(int m, int n_max, const Globals& g) {
  auto c = eulerian_coeffs(m, n_max);
  if (out_mode(g) == Out::Json) {
    json arr = json::array();
    for (const auto& x : c) arr.push_back(to_string(x));
    std::cout << json{{"m", m}, {"coeffs", arr}}.dump(2) << "\n";
    return 0;
  }
  std::string sep = out_mode(g) == Out::Csv ? "," : ", ";
  for (std::size_t i = 0; i < c.size(); ++i) std::cout << (i ? sep : "") << to_string(c[i]);
  std::cout << "\n";
  return 0;
}

// Symbols a1, b1, a2, b2, ...; ρ = Σ_k ħ^k Σ_{i} a_{k,i} ⊗ b_{k,i}.
Carrier symbol_carrier(int count, int L) {
  std::vector<std::string> names;
  for (int i = 1; i <= count; ++i) {
    names.push_back("a" + std::to_string(i));
    names.push_back("b" + std::to_string(i));
  }
  return Carrier::free_symbols(names, L);
}

TensorSeries generic_rho(int pairs, int orders, int L) {
  TensorSeries r(2, L);
  int j = 0;
  for (int k = 0; k < orders; ++k)
    for (int i = 0; i < pairs; ++i, ++j) r.add({{2 * j}, {2 * j + 1}}, HSeries::monomial(Rational(1), k));
  return r;
}

void print_series(const TensorSeries& x, const Carrier& c, Out out) {
  if (out == Out::Json)
    std::cout << to_json(x, &c).dump(2) << "\n";
  else
    std::cout << c.str(x) << "\n";
}

int run_cybe(int pairs, int L, const Globals& g) {
  Carrier c = symbol_carrier(pairs, L);
  print_series(cyb(generic_rho(pairs, 1, L)), c, out_mode(g));
  return 0;
}

int run_qybe(bool check, int pairs, int L, const Globals& g) {
  int orders = std::max(1, g.order - 2);
  Carrier c = symbol_carrier(pairs * orders, L);
  TensorSeries rho = generic_rho(pairs, orders, L);
  TensorSeries R = TensorSeries::unit(2, L);
  TensorSeries hr = rho;
  hr.scale(hbar());
  R += hr;
  TensorSeries lhs = qybe_defect(R);
  if (!check) {
    print_series(lhs, c, out_mode(g));
    return 0;
  }
  TensorSeries rhs = deformed_cybe_defect(rho);
  rhs.scale(HSeries::monomial(Rational(1), 2));
  bool ok = lhs == rhs;
  std::cout << (ok ? "OK" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

int run_dequantize(int pairs, int L, const Globals& g) {
  Carrier c = symbol_carrier(pairs, L);
  std::vector<Perturbation> ps{[](const TensorSeries& x) { return TensorSeries(x.slots(), x.max_len()); }, sample_p2};
  TensorSeries rho = generic_rho(pairs, 1, L);
  TensorSeries r = triangular_invert(ps, rho);
  print_series(r, c, out_mode(g));
  bool ok = perturb_forward(ps, r) == rho;
  std::cerr << "round trip: " << (ok ? "OK" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

int run_twist(int N, int L, const std::string& coef, bool check, const Globals& g) {
  Carrier c = Carrier::enveloping(N, L);
  TensorSeries J = c.unit(2);
  for (int i = 0; i < N; ++i) J.add({{i}, {i}}, HSeries::monomial(parse_rational(coef), 1));
  if (!check) {
    print_series(twist_d(J, c), c, out_mode(g));
    return 0;
  }
  std::mt19937_64 rng(g.seed);
  auto rand_unit = [&](int slots) {
    TensorSeries x = c.unit(slots);
    std::uniform_int_distribution<int> letter(0, N - 1), coeff(-3, 3), len(0, 2);
    for (int t = 0; t < 3; ++t) {
      WordTuple k;
      for (int s = 0; s < slots; ++s) {
        Word w(static_cast<std::size_t>(len(rng)));
        for (int& a : w) a = letter(rng);
        k.push_back(w);
      }
      x.add(k, HSeries::monomial(Rational(coeff(rng)), total_length(k) == 0 ? 1 : 0));
    }
    return x;
  };
  bool ok = true;
  auto report = [&](const std::string& what, bool v) {
    std::cout << what << ": " << (v ? "OK" : "FAIL") << "\n";
    ok = ok && v;
  };
  report("d(1) = 1", twist_d(c.unit(2), c) == c.unit(3));
  auto u = rand_unit(1), v = rand_unit(1);
  report("(uv)*J = u*(v*J)", twist_act(u * v, J, c) == twist_act(u, twist_act(v, J, c), c));
  TensorSeries kappa = rand_unit(1);
  report("d2 d1 = 0", cohochschild_d2(cohochschild_d1(kappa, c), c).is_zero());
  return ok ? 0 : 1;
}

bool series_variant(Variant v, bool force) { return force || v == Variant::QCoco; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"propcalc: computations in bialgebra props"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--variant", g.variant, "bialg|coco|cp|qcoco|qt|cyba|qyba")->capture_default_str();
  app.add_option("--order", g.order, "truncation order K in hbar")->capture_default_str();
  app.add_flag("--json", g.json_out, "JSON output");
  app.add_flag("--csv", g.csv_out, "CSV output");
  app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();

  std::function<int()> action;

  std::string expr, strategy = "first";
  bool series = false;
  auto* norm = app.add_subcommand("normalize", "normal form of an expression");
  norm->add_option("expr", expr, "expression")->required();
  norm->add_option("--strategy", strategy, "first|last|random")->check(CLI::IsMember({"first", "last", "random"}));
  norm->add_flag("--series", series, "hbar-series coefficients");
  norm->callback([&] {
    action = [&] {
      Variant v = parse_variant(g.variant);
      return series_variant(v, series) ? run_normalize<HSeries>(expr, v, strategy, g) : run_normalize<Rational>(expr, v, strategy, g);
    };
  });

  std::string space = "bialg";
  int p = 1, q = 1, n = 1, max_n = 4;
  auto* dim = app.add_subcommand("dim", "dimension table");
  dim->add_option("--space", space, "LBA|Alg|AlgComm|Poisson|LA|<variant>")->capture_default_str();
  dim->add_option("-p", p)->capture_default_str();
  dim->add_option("-q", q)->capture_default_str();
  dim->add_option("-n", n, "arity of classical spaces")->capture_default_str();
  dim->add_option("--maxN", max_n)->capture_default_str();
  dim->callback([&] { action = [&] { return run_dim(space, p, q, n, max_n, g); }; });

  int N = 2, k = -1;
  auto* basis = app.add_subcommand("basis", "structure basis of a summand");
  basis->add_option("-p", p)->capture_default_str();
  basis->add_option("-q", q)->capture_default_str();
  basis->add_option("-N", N)->capture_default_str();
  basis->add_option("-k", k, "co-Poisson symmetric degree")->capture_default_str();
  basis->callback([&] { action = [&] { return run_basis(parse_variant(g.variant), p, q, N, k, g); }; });

  std::string module = "tensor";
  std::vector<std::string> input;
  auto* eval = app.add_subcommand("eval", "evaluate on a module");
  eval->add_option("expr", expr, "expression")->required();
  eval->add_option("--module", module, "tensor|triangular|divided|copoisson")->capture_default_str();
  eval->add_option("--input", input, "one word per input, letters 1-9, e = empty");
  eval->add_flag("--series", series, "hbar-series coefficients");
  eval->callback([&] {
    action = [&] {
      Variant v = parse_variant(g.variant);
      return series_variant(v, series) ? run_eval<HSeries>(expr, v, module, input, g) : run_eval<Rational>(expr, v, module, input, g);
    };
  });

  std::string relation;
  auto* check = app.add_subcommand("check", "check a relation (or the variant's relation list)");
  check->add_option("relation", relation, "'lhs = rhs'");
  check->add_flag("--series", series, "hbar-series coefficients");
  check->callback([&] {
    action = [&] {
      Variant v = parse_variant(g.variant);
      return series_variant(v, series) ? run_check<HSeries>(relation, v, g) : run_check<Rational>(relation, v, g);
    };
  });

  int m = 1, n_max = 5;
  auto* eul = app.add_subcommand("eulerian", "Taylor coefficients of ln(1+u)^m/m!");
  eul->add_option("--m", m)->capture_default_str();
  eul->add_option("--nmax", n_max)->capture_default_str();
  eul->callback([&] { action = [&] { return run_eulerian(m, n_max, g); }; });

  int pairs = 2, L = 6;
  auto* cy = app.add_subcommand("cybe", "CYB of a generic r = sum a_i (x) b_i");
  cy->add_option("--pairs", pairs)->capture_default_str();
  cy->add_option("-L", L, "word length cap")->capture_default_str();
  cy->callback([&] { action = [&] { return run_cybe(pairs, L, g); }; });

  bool equiv = false;
  auto* qy = app.add_subcommand("qybe", "QYBE defect of 1 + h rho for generic rho");
  qy->add_option("--pairs", pairs)->capture_default_str();
  qy->add_option("-L", L, "word length cap")->capture_default_str();
  qy->add_flag("--check-equivalence", equiv, "verify the h^2 factorization");
  qy->callback([&] { action = [&] { return run_qybe(equiv, pairs, L, g); }; });

  auto* deq = app.add_subcommand("dequantize", "invert r + h^2 P_2(r) = rho for generic rho");
  deq->add_option("--pairs", pairs)->capture_default_str();
  deq->add_option("-L", L, "word length cap")->capture_default_str();
  deq->callback([&] { action = [&] { return run_dequantize(pairs, L, g); }; });

  int letters = 1;
  std::string coef = "1";
  bool twist_check = false;
  auto* tw = app.add_subcommand("twist", "twist functional of J = 1 + h c sum x_i (x) x_i in U(FL_N)");
  tw->add_option("-N", letters)->capture_default_str();
  tw->add_option("-L", L, "word length cap")->capture_default_str();
  tw->add_option("--c", coef)->capture_default_str();
  tw->add_flag("--check", twist_check, "check d(1) = 1, the group action and d2 d1 = 0");
  tw->callback([&] { action = [&] { return run_twist(letters, L, coef, twist_check, g); }; });

  CLI11_PARSE(app, argc, argv);
  try {
    set_default_order(g.order);
    return action();
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
