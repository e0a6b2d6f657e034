// bcalc: command-line front end for the infinitesimal calculus engine.
//
// Subcommands: order, st, deriv, microcont, uniform, sumthm, euler,
// compare, limit. Text output by default, --json for the machine format
// (all numeric values as decimal strings, deterministic key order).
// Exit codes: 0 computed verdict (Unknown included), 2 usage/parse error,
// 3 domain error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "bcalc/analysis.hpp"

using nlohmann::json;
using namespace bcalc;

namespace {

struct CliConfig {
  Rational trunc = Rational(8);
  int precision = 15;
  Rational r_max = Rational(64);
  std::vector<long long> horizons;       // germ schedule override
  bool horizons_set = false;
  bool json_output = false;
};

Rational parse_rational_arg(const std::string& text, const char* what) {
  if (auto q = rat_from_decimal(text)) return *q;
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    auto n = rat_from_decimal(text.substr(0, slash));
    auto d = rat_from_decimal(text.substr(slash + 1));
    if (n && d && *d != 0) return Rational(*n / *d);
  }
  throw UsageError(std::string("bad ") + what + " '" + text + "'");
}

std::vector<long long> parse_horizons(const std::string& text) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    try {
      out.push_back(std::stoll(item));
    } catch (...) {
      throw UsageError("bad horizon '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() < 2) throw UsageError("horizon schedule needs at least 2 entries");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw UsageError("horizons must be strictly increasing");
  if (out.front() < 1) throw UsageError("horizons must be positive");
  return out;
}

GermConfig germ_config(const CliConfig& cli) {
  GermConfig g;
  g.precision = cli.precision;
  g.r_max = cli.r_max;
  if (cli.horizons_set) g.schedule.horizons = cli.horizons;
  return g;
}

AnalysisConfig analysis_config(const CliConfig& cli) {
  AnalysisConfig a;
  a.trunc = cli.trunc;
  a.precision = cli.precision;
  a.germ = germ_config(cli);
  return a;
}

json config_block(const CliConfig& cli) {
  json horizons = json::array();
  for (long long h : germ_config(cli).schedule.horizons) horizons.push_back(std::to_string(h));
  return json{{"trunc", rat_to_string(cli.trunc)},
              {"precision", std::to_string(cli.precision)},
              {"r_max", rat_to_string(cli.r_max)},
              {"horizons", horizons}};
}

const char* truth_str(Truth t, const char* yes, const char* no) {
  return t == Truth::True ? yes : t == Truth::False ? no : "unknown";
}

json verdict3(Truth t) {
  // decided verdicts as JSON booleans, undecided as the string "unknown"
  if (t == Truth::True) return json(true);
  if (t == Truth::False) return json(false);
  return json("unknown");
}

void emit(const CliConfig& cli, const std::string& command, json fields,
          const std::string& text) {
  if (cli.json_output) {
    fields["command"] = command;
    fields["config"] = config_block(cli);
    std::cout << fields.dump() << "\n";
  } else {
    std::cout << text;
  }
}

std::string ordering_str(const std::optional<Ordering>& o) {
  if (!o) return "unknown";
  switch (*o) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    case Ordering::Greater: return "greater";
  }
  return "unknown";
}

json micro_json(const MicroVerdict& v) {
  json out;
  out["probe"] = v.probe.str();
  out["verdict"] = v.kind == MicroVerdict::Kind::Microcontinuous ? "microcontinuous"
                   : v.kind == MicroVerdict::Kind::Refuted       ? "refuted"
                                                                 : "unknown";
  if (v.delta_order) out["delta_order"] = v.delta_order->str();
  if (v.witness) {
    out["witness"] = json{{"x", v.witness->x_text},
                          {"x_prime", v.witness->xp_text},
                          {"family", v.witness->family}};
    out["gap"] = v.gap_limit.str();
  }
  out["note"] = v.note;
  return out;
}

std::string micro_text(const MicroVerdict& v) {
  std::string s = "probe " + v.probe.str() + ": ";
  switch (v.kind) {
    case MicroVerdict::Kind::Microcontinuous:
      s += "microcontinuous";
      if (v.delta_order) s += " (increment order " + v.delta_order->str() + ")";
      break;
    case MicroVerdict::Kind::Refuted:
      s += "refuted";
      if (v.witness)
        s += " by " + v.witness->family + " witness x_n=" + v.witness->x_text +
             ", x'_n=" + v.witness->xp_text + "; gap -> " + v.gap_limit.str();
      break;
    case MicroVerdict::Kind::Unknown:
      s += "unknown (" + v.note + ")";
      break;
  }
  s += "\n";
  return s;
}

int run(int argc, char** argv) {
  CLI::App app{"non-Archimedean calculus engine (series, dual, germ models)"};
  app.require_subcommand(1);

  CliConfig cli;
  std::string horizons_text;
  long long trunc_arg = 8;
  long long rmax_arg = 64;

  // Defaults may come from a JSON config file named by BCALC_CONFIG.
  if (const char* env = std::getenv("BCALC_CONFIG")) {
    std::ifstream in(env);
    if (!in) throw UsageError(std::string("cannot open config file ") + env);
    json defaults = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (defaults.is_discarded())
      throw UsageError(std::string("malformed config file ") + env);
    if (defaults.contains("trunc")) trunc_arg = defaults["trunc"].get<long long>();
    if (defaults.contains("precision")) cli.precision = defaults["precision"].get<int>();
    if (defaults.contains("r_max")) rmax_arg = defaults["r_max"].get<long long>();
    if (defaults.contains("horizons")) {
      cli.horizons = defaults["horizons"].get<std::vector<long long>>();
      cli.horizons_set = true;
    }
    if (defaults.contains("output") && defaults["output"] == "json") cli.json_output = true;
  }

  app.add_flag("--json", cli.json_output, "machine-readable output");
  app.add_option("--trunc", trunc_arg, "series truncation order T (default 8)");
  app.add_option("--precision", cli.precision, "decimal digits claimed for approximations");
  app.add_option("--rmax", rmax_arg, "upper bound of the order bisection window");
  auto* horizons_opt =
      app.add_option("--horizons", horizons_text, "comma-separated sampling horizons");

  std::string expr_text, lc_text, at_text, method = "both", probe_text, domain_text = "(-inf,inf)";
  std::string term_text, xseq_text = "1/n", lhs_text, rhs_text, germ_text, v_text;
  int grid = 11;
  int kmax = 4;
  long long horizon = 1000000;
  int sum_grid = 5;
  std::string sum_domain = "(0,1)";

  CLI::App* order_cmd = app.add_subcommand("order", "Cauchy order of an infinitesimal f(i)");
  order_cmd->add_option("--expr", expr_text, "expression in i")->required();

  CLI::App* st_cmd = app.add_subcommand("st", "standard part of a series element");
  st_cmd->add_option("--lc", lc_text, "series, e.g. \"3 + 5*eps - eps^2\"")->required();

  CLI::App* deriv_cmd = app.add_subcommand("deriv", "derivative as st(dy/dx)");
  deriv_cmd->add_option("--expr", expr_text, "expression in one variable")->required();
  deriv_cmd->add_option("--at", at_text, "evaluation point")->required();
  deriv_cmd->add_option("--method", method, "lc | dual | both (default both)");

  CLI::App* micro_cmd = app.add_subcommand("microcont", "microcontinuity at a probe point");
  micro_cmd->add_option("--expr", expr_text)->required();
  micro_cmd->add_option("--probe", probe_text, "standard:X0 | boundary:A+ | boundary:A- | infinite[:+-]")
      ->required();
  micro_cmd->add_option("--domain", domain_text, "interval, default (-inf,inf)");

  CLI::App* uniform_cmd = app.add_subcommand("uniform", "uniform continuity classification");
  uniform_cmd->add_option("--expr", expr_text)->required();
  uniform_cmd->add_option("--domain", domain_text)->required();
  uniform_cmd->add_option("--grid", grid, "standard grid size (default 11)");

  CLI::App* sum_cmd = app.add_subcommand("sumthm", "1821-vs-1853 sum theorem diagnostic");
  sum_cmd->add_option("--term", term_text, "series term in k and x")->required();
  sum_cmd->add_option("--xseq", xseq_text, "variable quantity for x (default 1/n)");
  sum_cmd->add_option("--domain", sum_domain, "pointwise layer domain (default (0,1))");
  sum_cmd->add_option("--grid", sum_grid, "pointwise grid size (default 5)");

  CLI::App* euler_cmd = app.add_subcommand("euler", "de Moivre cosine terms at an infinite index");
  euler_cmd->add_option("--v", v_text, "finite arc v = n z")->required();
  euler_cmd->add_option("--kmax", kmax, "largest term index (default 4)");
  euler_cmd->add_option("--horizon", horizon, "index n (default 10^6)");

  CLI::App* compare_cmd = app.add_subcommand("compare", "compare two variable quantities");
  compare_cmd->add_option("--lhs", lhs_text, "germ body in n")->required();
  compare_cmd->add_option("--rhs", rhs_text, "germ body in n")->required();

  CLI::App* limit_cmd = app.add_subcommand("limit", "limit of a variable quantity");
  limit_cmd->add_option("--germ", germ_text, "germ body in n")->required();

  // global flags remain valid after the subcommand name
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse diagnostic
    return code == 0 ? 0 : 2;
  }

  cli.trunc = Rational(trunc_arg);
  cli.r_max = Rational(rmax_arg);
  if (cli.trunc < 2) throw UsageError("truncation order must be at least 2");
  if (cli.precision < 15) throw UsageError("precision must be at least 15");
  if (horizons_opt->count() > 0) {
    cli.horizons = parse_horizons(horizons_text);
    cli.horizons_set = true;
  }

  if (order_cmd->parsed()) {
    CauchyOrderResult r = cauchy_order(parse_expr(expr_text), germ_config(cli));
    json j;
    std::string order_str = r.kind == CauchyOrderResult::Kind::PlusInfinity ? "infinity"
                            : r.kind == CauchyOrderResult::Kind::Finite     ? rat_to_string(r.order)
                                                                            : "unknown";
    j["order"] = order_str;
    j["grade"] = grade_name(r.grade);
    j["regular"] = r.regular;
    j["bisection_width"] = rat_to_string(r.bisection_width);
    if (!r.note.empty()) j["note"] = r.note;
    std::string text = "order(" + expr_text + ") = " + order_str + "  [" +
                       grade_name(r.grade) + (r.regular ? "" : ", non-regular") + "]\n";
    emit(cli, "order", j, text);
    return 0;
  }

  if (st_cmd->parsed()) {
    LeviCivitaNumber a = lc_parse(lc_text, cli.trunc);
    Scalar st = lc_standard_part(a);
    emit(cli, "st", json{{"value", st.str()}, {"input", lc_to_string(a)}}, st.str() + "\n");
    return 0;
  }

  if (deriv_cmd->parsed()) {
    if (method != "lc" && method != "dual" && method != "both")
      throw UsageError("method must be lc, dual, or both");
    ExprPtr e = parse_expr(expr_text);
    std::set<std::string> vars = free_variables(e);
    std::string var = vars.empty() ? "x" : *vars.begin();
    Scalar x0{parse_rational_arg(at_text, "evaluation point")};
    json j{{"at", x0.str()}, {"method", method}};
    std::string text;
    std::optional<Scalar> lc_value, dual_value;
    if (method != "dual") {
      DerivativeResult r = derivative_st(e, var, x0, analysis_config(cli));
      if (r.kind == DerivativeResult::Kind::Value) {
        lc_value = r.value;
        j["lc"] = r.value.str();
        text += "lc:   " + r.value.str() + "\n";
      } else {
        json nd{{"non_differentiable", true}, {"note", r.note}};
        if (r.from_above) nd["from_above"] = r.from_above->str();
        if (r.from_below) nd["from_below"] = r.from_below->str();
        j["lc"] = nd;
        text += "lc:   non-differentiable (" + r.note + ")\n";
      }
    }
    if (method != "lc") {
      try {
        dual_value = derivative_dual(e, var, x0, cli.precision);
        j["dual"] = dual_value->str();
        text += "dual: " + dual_value->str() + "\n";
      } catch (const NotRepresentable& err) {
        j["dual"] = json{{"non_differentiable", true}, {"note", err.what()}};
        text += std::string("dual: non-differentiable (") + err.what() + ")\n";
      }
    }
    if (method == "both") {
      bool agree = lc_value && dual_value && *lc_value == *dual_value;
      j["agree"] = agree;
      text += std::string("agree: ") + (agree ? "yes" : "no") + "\n";
    }
    emit(cli, "deriv", j, text);
    return 0;
  }

  if (micro_cmd->parsed()) {
    DomainSpec dom = DomainSpec::parse(domain_text);
    ProbePoint probe;
    if (probe_text.rfind("standard:", 0) == 0) {
      probe = ProbePoint::standard(parse_rational_arg(probe_text.substr(9), "probe point"));
    } else if (probe_text.rfind("boundary:", 0) == 0) {
      std::string rest = probe_text.substr(9);
      if (rest.empty()) throw UsageError("boundary probe needs an endpoint");
      int dir = rest.back() == '-' ? -1 : +1;
      if (rest.back() == '+' || rest.back() == '-') rest.pop_back();
      probe = ProbePoint::boundary(parse_rational_arg(rest, "boundary endpoint"), dir);
    } else if (probe_text.rfind("infinite", 0) == 0) {
      int dir = probe_text.find(":-") != std::string::npos ? -1 : +1;
      probe = ProbePoint::infinite(dir);
    } else {
      throw UsageError("bad probe '" + probe_text + "'");
    }
    ExprPtr e = parse_expr(expr_text);
    std::set<std::string> vars = free_variables(e);
    std::string var = vars.empty() ? "x" : *vars.begin();
    MicroVerdict v = microcontinuity_at(e, var, probe, dom, analysis_config(cli));
    emit(cli, "microcont", micro_json(v), micro_text(v));
    return 0;
  }

  if (uniform_cmd->parsed()) {
    DomainSpec dom = DomainSpec::parse(domain_text);
    ExprPtr e = parse_expr(expr_text);
    std::set<std::string> vars = free_variables(e);
    std::string var = vars.empty() ? "x" : *vars.begin();
    UniformReport r = classify_uniform(e, var, dom, grid, analysis_config(cli));
    json j;
    j["domain"] = dom.str();
    j["verdict"] = r.verdict == UniformReport::Kind::UniformOnProbes ? "uniform_on_probes"
                   : r.verdict == UniformReport::Kind::NotUniform    ? "not_uniform"
                                                                     : "unknown";
    j["note"] = r.note;
    json probes = json::array();
    for (const auto& p : r.probes) probes.push_back(micro_json(p));
    j["probes"] = probes;
    if (r.refuting_probe) j["refutation"] = micro_json(r.probes[*r.refuting_probe]);
    std::string text = "uniform(" + expr_text + ", " + dom.str() + "): " +
                       std::string(j["verdict"].get<std::string>()) + "\n";
    if (r.refuting_probe) text += "  " + micro_text(r.probes[*r.refuting_probe]);
    emit(cli, "uniform", j, text);
    return 0;
  }

  if (sum_cmd->parsed()) {
    ExprPtr term = parse_expr(term_text, std::set<std::string>{"k", "x"});
    Germ xseq = Germ::from_text(xseq_text);
    SumThmConfig sc;
    sc.domain = DomainSpec::parse(sum_domain);
    sc.grid_size = sum_grid;
    sc.precision = cli.precision;
    if (cli.horizons_set) sc.horizons = cli.horizons;
    SumTheoremReport r = sum_theorem_diagonal(term, xseq, sc);
    json j;
    json rows = json::array();
    for (const auto& row : r.rows)
      rows.push_back(json{{"n", std::to_string(row.n)},
                          {"x", format_double(row.x)},
                          {"remainder", format_double(row.remainder)},
                          {"k_stop", std::to_string(row.k_stop)},
                          {"converged", row.converged}});
    j["diagonal"] = rows;
    if (r.diagonal_limit) j["diagonal_limit"] = format_double(*r.diagonal_limit);
    j["null"] = verdict3(r.diagonal_null);
    j["verdict1821"] = truth_str(r.verdict1821, "satisfied", "violated");
    j["verdict1853"] = truth_str(r.verdict1853, "satisfied", "violated");
    j["flagged"] = r.tail_flagged;
    json pw = json::array();
    for (const auto& p : r.pointwise)
      pw.push_back(json{{"x", format_double(p.x)},
                        {"converges", verdict3(p.converges)},
                        {"sum", format_double(p.sum)}});
    j["pointwise"] = pw;
    if (!r.note.empty()) j["note"] = r.note;
    std::string text = "diagonal remainders r_n(x_n):\n";
    for (const auto& row : r.rows)
      text += "  n=" + std::to_string(row.n) + "  r_n=" + format_double(row.remainder) +
              (row.converged ? "" : "  [cap hit]") + "\n";
    if (r.diagonal_limit)
      text += "diagonal limit ~ " + format_double(*r.diagonal_limit) + "\n";
    text += std::string("diagonal null: ") + truth_str(r.diagonal_null, "true", "false") + "\n";
    text += std::string("verdict 1821 (pointwise): ") +
            truth_str(r.verdict1821, "satisfied", "violated") + "\n";
    text += std::string("verdict 1853 (toujours):  ") +
            truth_str(r.verdict1853, "satisfied", "violated") + "\n";
    emit(cli, "sumthm", j, text);
    return 0;
  }

  if (euler_cmd->parsed()) {
    Scalar v{parse_rational_arg(v_text, "arc value v")};
    EulerReport r = euler_cosine(v, kmax, horizon, cli.precision);
    json j{{"v", v.str()}, {"k_max", std::to_string(kmax)}, {"horizon", std::to_string(horizon)}};
    json rows = json::array();
    for (const auto& row : r.rows)
      rows.push_back(json{{"k", std::to_string(row.k)},
                          {"t_k", row.t_k.str()},
                          {"target", row.target.str()},
                          {"error", format_double(row.error)}});
    j["rows"] = rows;
    j["partial_sum"] = r.partial_sum.str();
    j["cos_v"] = r.cos_v.str();
    j["partial_error"] = format_double(r.partial_error);
    std::string text = "k   T_k(n)                 v^{2k}/(2k)!           |error|\n";
    for (const auto& row : r.rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%-3d %-22s %-22s %s\n", row.k,
                    row.t_k.str().substr(0, 20).c_str(), row.target.str().substr(0, 20).c_str(),
                    format_double(row.error).c_str());
      text += line;
    }
    text += "partial sum = " + r.partial_sum.str() + "  vs cos v = " + r.cos_v.str() +
            "  (|error| = " + format_double(r.partial_error) + ")\n";
    emit(cli, "euler", j, text);
    return 0;
  }

  if (compare_cmd->parsed()) {
    Germ lhs = Germ::from_text(lhs_text);
    Germ rhs = Germ::from_text(rhs_text);
    CompareVerdict v = germ_compare(lhs, rhs, germ_config(cli));
    json j{{"ordering", ordering_str(v.order)},
           {"grade", grade_name(v.grade)},
           {"witness", v.note}};
    emit(cli, "compare", j,
         "compare(" + lhs_text + ", " + rhs_text + ") = " + ordering_str(v.order) + "  [" +
             grade_name(v.grade) + "]\n");
    return 0;
  }

  if (limit_cmd->parsed()) {
    Germ g = Germ::from_text(germ_text);
    LimitResult r = germ_limit(g, germ_config(cli));
    json j{{"limit", r.str()}, {"grade", grade_name(r.grade)}};
    emit(cli, "limit", j, "limit(" + germ_text + ") = " + r.str() + "  [" +
                              grade_name(r.grade) + "]\n");
    return 0;
  }

  throw UsageError("no subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NotRepresentable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CalcError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
