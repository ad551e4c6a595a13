// Command-line front end. Subcommands map one-to-one onto the library
// entry points; all structured output is JSON on stdout, rationals are
// printed as exact strings, never as decimals.
//
// Exit codes: 0 success, 2 bad input, 3 enumeration or oracle budget
// exhausted, 4 a checked property failed to hold, 5 reconstruction left
// at least one normal unresolved, 1 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ehrkit/harness.hpp"
#include "ehrkit/json_io.hpp"
#include "ehrkit/polytope.hpp"
#include "ehrkit/reconstruct.hpp"
#include "ehrkit/stepfn.hpp"

using nlohmann::json;
using namespace ehrkit;

namespace {

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "WindowTooLarge" || c == "OracleBudget") return 3;
  if (c == "ProbeFailed") return 5;
  if (c == "Internal" || c == "Overflow") return 1;
  return 2;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) raise("BadInput", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  std::vector<Rat> out;
  for (const auto& piece : split_commas(text)) out.push_back(Rat::parse(piece));
  return out;
}

IVec parse_int_list(const std::string& text) {
  IVec out;
  for (const auto& piece : split_commas(text)) {
    Rat r = Rat::parse(piece);
    if (!r.is_integer()) raise("BadInput", "expected an integer, got '" + piece + "'");
    out.push_back(r.num());
  }
  return out;
}

// The enumeration ceiling comes from the flag when given, otherwise from
// EHRKIT_POINT_BUDGET, otherwise from the library default.
SweepLimits make_limits(long long flag_value) {
  SweepLimits lim;
  if (flag_value > 0) {
    lim.max_box_points = flag_value;
    return lim;
  }
  const char* env = std::getenv("EHRKIT_POINT_BUDGET");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end == nullptr || *end != '\0' || v <= 0)
      raise("BadInput", "EHRKIT_POINT_BUDGET must be a positive integer");
    lim.max_box_points = v;
  }
  return lim;
}

HPolytope load_polytope(const std::string& path) {
  return polytope_from_json(read_file(path));
}

int cmd_count(const std::string& path, const std::string& scale, const SweepLimits& lim) {
  HPolytope p = load_polytope(path);
  std::cout << count_points(p, Rat::parse(scale), lim).get_str() << "\n";
  return 0;
}

int cmd_stepfn(const std::string& path, const std::string& s_max, const std::string& lo,
               const std::string& format, const SweepLimits& lim) {
  HPolytope p = load_polytope(path);
  Rat top = Rat::parse(s_max);
  Rat bottom = Rat::parse(lo);
  QStepFunction f = bottom.is_zero() ? step_function(p, top, lim)
                                     : step_function_window(p, bottom, top, lim);
  if (format == "csv")
    std::cout << stepfn_to_csv(f);
  else if (format == "json")
    std::cout << stepfn_to_json(f);
  else
    raise("BadInput", "unknown format '" + format + "' (expected json or csv)");
  return 0;
}

int cmd_jumps(const std::string& path, const std::string& s_max, bool corrupt,
              const SweepLimits& lim) {
  HPolytope p = load_polytope(path);
  QStepFunction f = step_function(p, Rat::parse(s_max), lim);
  std::vector<JumpReport> rows = jumps(f);
  if (corrupt && !rows.empty()) rows.front().left_jump = rows.front().left_jump + Rat(1);

  bool all_ok = true;
  json out_rows = json::array();
  for (const auto& r : rows) {
    Int front = facet_point_count(p, r.s0, FacetKind::Front, lim);
    Int back = facet_point_count(p, r.s0, FacetKind::Back, lim);
    bool ok = r.left_jump == Rat(front) && r.right_jump == Rat(back);
    all_ok = all_ok && ok;
    out_rows.push_back({{"s", r.s0.str()},
                        {"left_jump", r.left_jump.str()},
                        {"right_jump", r.right_jump.str()},
                        {"front_facet_points", front.get_str()},
                        {"back_facet_points", back.get_str()},
                        {"cross_check", ok ? "ok" : "fail"}});
  }
  json out = {{"jumps", out_rows}, {"all_ok", all_ok}};
  std::cout << out.dump(2) << "\n";
  return all_ok ? 0 : 4;
}

int cmd_ppyr(const std::string& path) {
  HPolytope p = load_polytope(path);
  PpyrVolumes v = ppyr_volume(p);
  std::cout << ppyr_volumes_to_json(v);
  return v.via_decomposition == v.via_hull ? 0 : 4;
}

int cmd_rvol(const std::string& path, const std::string& translate,
             const std::string& s_list, const SweepLimits& lim) {
  HPolytope p = load_polytope(path);
  QVec v(p.dim, Rat(0));
  if (!translate.empty()) {
    std::vector<Rat> parsed = parse_rat_list(translate);
    if (static_cast<int>(parsed.size()) != p.dim)
      raise("BadInput", "translate needs one coordinate per dimension");
    v = parsed;
  }
  std::vector<Rat> params;
  if (s_list.empty())
    for (long k = 1; k <= 10; ++k) params.push_back(Rat(k));
  else
    params = parse_rat_list(s_list);
  std::cout << rvol_report_to_json(rvol_limit_check(p, v, params, lim));
  return 0;
}

int cmd_translates(const std::string& path, const std::string& w_arg, long k_max,
                   const std::string& s_max, const SweepLimits& lim) {
  HPolytope p = load_polytope(path);
  IVec w = w_arg.empty() ? find_translation_witness(p) : parse_int_list(w_arg);
  if (static_cast<int>(w.size()) != p.dim)
    raise("BadInput", "witness needs one coordinate per dimension");
  TranslateCheck chk = check_translates_distinct(p, w, k_max, Rat::parse(s_max), lim);
  std::cout << translate_check_to_json(chk);
  return chk.all_distinct ? 0 : 4;
}

std::vector<IVec> default_normals(const HPolytope& p) {
  std::vector<IVec> normals;
  for (const auto& row : p.ineqs) {
    auto [prim, scale] = primitivize(row.a);
    (void)scale;
    bool seen = false;
    for (const auto& n : normals) seen = seen || n == prim;
    if (!seen) normals.push_back(prim);
  }
  return normals;
}

int cmd_reconstruct(const std::string& hidden_path, long long gen_seed, int gen_dim,
                    const std::string& normals_path, const std::string& length_budget,
                    int k_max, int max_rounds, long long seed_flag,
                    const SweepLimits& lim) {
  HPolytope hidden = [&] {
    if (!hidden_path.empty()) return load_polytope(hidden_path);
    InstanceSpec spec;
    spec.dim = gen_dim;
    spec.count = 1;
    spec.seed = static_cast<std::uint64_t>(gen_seed);
    return generate_instances(spec).at(0);
  }();

  std::vector<IVec> normals = normals_path.empty()
                                  ? default_normals(hidden)
                                  : normals_from_json(read_file(normals_path));

  ReconstructConfig config;
  config.sweep = lim;
  if (max_rounds >= 0) config.max_rounds = max_rounds + 1;
  if (seed_flag >= 0) config.seed = static_cast<std::uint64_t>(seed_flag);
  if (k_max > 0) {
    auto trim = [&](std::vector<int>& ks) {
      std::vector<int> kept;
      for (int k : ks)
        if (k <= k_max) kept.push_back(k);
      ks = kept;
    };
    trim(config.schedule);
    trim(config.extensions);
    if (config.schedule.empty()) config.schedule = {k_max};
  }

  HiddenPolytopeOracle oracle(hidden, lim);
  oracle.set_length_budget(Rat::parse(length_budget));
  ReconstructionReport report = recover(oracle, normals, config);
  std::cout << report_to_json(report);
  return report.fully_resolved() ? 0 : 5;
}

int cmd_suite(const std::string& spec_path, const std::string& s_max,
              long long seed_flag, const SweepLimits& lim) {
  InstanceSpec spec;
  if (!spec_path.empty()) spec = instance_spec_from_json(read_file(spec_path));
  if (seed_flag >= 0) spec.seed = static_cast<std::uint64_t>(seed_flag);
  SuiteResult res = run_suite(generate_instances(spec), Rat::parse(s_max), lim);
  std::cout << suite_to_json_lines(res);
  return res.all_passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Ehrhart step functions of rational polytopes"};
  app.require_subcommand(1);

  long long budget = -1;
  app.add_option("--budget", budget,
                 "Enumeration ceiling in lattice points per query "
                 "(overrides EHRKIT_POINT_BUDGET)");

  std::string poly_path, scale, s_max = "4", lo = "0", format = "json";
  std::string translate_arg, s_list_arg, w_arg;
  std::string hidden_path, normals_path, length_budget = "500", spec_path;
  long k_max_translates = 3;
  int k_max_rec = -1, max_rounds = -1, gen_dim = 2;
  long long gen_seed = -1, seed_flag = -1;
  bool corrupt = false;

  CLI::App* count = app.add_subcommand("count", "Count lattice points of one dilate");
  count->add_option("polytope", poly_path, "Polytope JSON file, or - for stdin")->required();
  count->add_option("-s,--scale", scale, "Dilation parameter (rational)")->required();

  CLI::App* stepfn = app.add_subcommand("stepfn", "Counting function on a window");
  stepfn->add_option("polytope", poly_path)->required();
  stepfn->add_option("-S,--s-max", s_max, "Window upper end")->required();
  stepfn->add_option("--lo", lo, "Window lower end (default 0)");
  stepfn->add_option("--format", format, "json or csv");

  CLI::App* jumps_cmd = app.add_subcommand(
      "jumps", "Breakpoint jumps cross-checked against facet point counts");
  jumps_cmd->add_option("polytope", poly_path)->required();
  jumps_cmd->add_option("-S,--s-max", s_max)->required();
  jumps_cmd->add_flag("--corrupt-jumps", corrupt)->group("");  // fault injection, hidden

  CLI::App* ppyr = app.add_subcommand(
      "ppyr", "Pseudopyramid volume, by decomposition and by hull");
  ppyr->add_option("polytope", poly_path)->required();

  CLI::App* rvol_cmd = app.add_subcommand(
      "rvol", "Relative volume against scaled point counts of a translate");
  rvol_cmd->add_option("polytope", poly_path)->required();
  rvol_cmd->add_option("-v,--translate", translate_arg, "Comma-separated rational shift");
  rvol_cmd->add_option("--s-list", s_list_arg,
                       "Comma-separated parameters (default 1..10)");

  CLI::App* translates = app.add_subcommand(
      "translates", "Distinctness of counting functions under integer translates");
  translates->add_option("polytope", poly_path)->required();
  translates->add_option("-w,--witness", w_arg,
                         "Comma-separated integer direction (default: computed)");
  translates->add_option("--k-max", k_max_translates, "Largest multiple to check");
  translates->add_option("-S,--s-max", s_max, "Comparison window upper end");

  CLI::App* rec = app.add_subcommand(
      "reconstruct", "Recover right-hand sides from counting-function queries");
  rec->add_option("--hidden", hidden_path, "Polytope JSON file to hide behind the oracle");
  rec->add_option("--gen-seed", gen_seed, "Generate the hidden instance from this seed");
  rec->add_option("--gen-dim", gen_dim, "Dimension for the generated instance");
  rec->add_option("--normals", normals_path,
                  "JSON array of integer normals (default: the hidden ones)");
  rec->add_option("--length-budget", length_budget, "Total window length the oracle allows");
  rec->add_option("--k-max", k_max_rec, "Cap the window indices (under-resourcing demo)");
  rec->add_option("--max-rounds", max_rounds, "Escalation rounds after the base schedule");
  rec->add_option("--seed", seed_flag, "Seed for scan and verification windows");

  CLI::App* suite = app.add_subcommand(
      "suite", "Random instances through every structural check, JSON lines out");
  suite->add_option("spec", spec_path, "Instance specification JSON file");
  suite->add_option("-S,--s-max", s_max, "Window upper end per instance");
  suite->add_option("--seed", seed_flag, "Override the specification seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    SweepLimits lim = make_limits(budget);
    if (app.got_subcommand(count)) return cmd_count(poly_path, scale, lim);
    if (app.got_subcommand(stepfn)) return cmd_stepfn(poly_path, s_max, lo, format, lim);
    if (app.got_subcommand(jumps_cmd)) return cmd_jumps(poly_path, s_max, corrupt, lim);
    if (app.got_subcommand(ppyr)) return cmd_ppyr(poly_path);
    if (app.got_subcommand(rvol_cmd)) return cmd_rvol(poly_path, translate_arg, s_list_arg, lim);
    if (app.got_subcommand(translates))
      return cmd_translates(poly_path, w_arg, k_max_translates, s_max, lim);
    if (app.got_subcommand(rec)) {
      if (hidden_path.empty() && gen_seed < 0)
        raise("BadInput", "need --hidden FILE or --gen-seed N");
      return cmd_reconstruct(hidden_path, gen_seed, gen_dim, normals_path, length_budget,
                             k_max_rec, max_rounds, seed_flag, lim);
    }
    if (app.got_subcommand(suite)) return cmd_suite(spec_path, s_max, seed_flag, lim);
  } catch (const Error& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
