#include "ehrkit/json_io.hpp"

#include <json.hpp>

namespace ehrkit {

namespace {

using nlohmann::json;

json rat_json(const Rat& x) {
  if (x.is_integer()) {
    Int n = x.num();
    if (n.fits_slong_p()) return n.get_si();
  }
  return x.str();
}

Rat rat_from(const json& j, const char* where) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  raise("ParseError", std::string(where) + ": expected an integer or a 'p/q' string");
}

json ivec_json(const IVec& v) {
  json a = json::array();
  for (const auto& t : v) {
    if (t.fits_slong_p())
      a.push_back(t.get_si());
    else
      a.push_back(t.get_str());
  }
  return a;
}

json qvec_json(const QVec& v) {
  json a = json::array();
  for (const auto& t : v) a.push_back(rat_json(t));
  return a;
}

json polytope_json(const HPolytope& p) {
  json rows = json::array();
  for (const auto& iq : p.ineqs)
    rows.push_back({{"a", ivec_json(iq.a)}, {"b", rat_json(iq.b)}});
  return {{"dim", p.dim}, {"ineqs", rows}};
}

json stepfn_json(const QStepFunction& f) {
  json breaks = json::array();
  for (const auto& bp : f.breaks) {
    json b = {{"s", rat_json(bp.s)},
              {"value_at", rat_json(bp.value_at)},
              {"value_after", rat_json(bp.value_after)}};
    if (f.has_event_counts) {
      b["entering"] = bp.entering;
      b["leaving"] = bp.leaving;
    }
    breaks.push_back(std::move(b));
  }
  return {{"lo", rat_json(f.lo)},
          {"hi", rat_json(f.hi)},
          {"base_value", rat_json(f.base_value)},
          {"breaks", breaks}};
}

const char* verdict_kind_name(FacetVerdict::Kind k) {
  switch (k) {
    case FacetVerdict::Kind::Facet: return "facet";
    case FacetVerdict::Kind::NonFacet: return "non-facet";
    default: return "unresolved";
  }
}

const char* observation_class_name(WindowObservation::Cls c) {
  switch (c) {
    case WindowObservation::Cls::Good: return "good";
    case WindowObservation::Cls::NotSoGood: return "not-so-good";
    default: return "bad";
  }
}

const char* bad_why_name(WindowObservation::BadWhy w) {
  switch (w) {
    case WindowObservation::BadWhy::Empty: return "empty";
    case WindowObservation::BadWhy::NoGrid: return "no-grid";
    case WindowObservation::BadWhy::Overlap: return "overlap";
    case WindowObservation::BadWhy::Drop: return "drop";
    case WindowObservation::BadWhy::Uneven: return "uneven";
    case WindowObservation::BadWhy::Crowded: return "crowded";
    default: return "none";
  }
}

json report_json(const ReconstructionReport& rep) {
  json verdicts = json::array();
  for (const auto& v : rep.verdicts) {
    json jv = {{"kind", verdict_kind_name(v.kind)},
               {"b", rat_json(v.b)},
               {"rvol_estimate", rat_json(v.rvol_estimate)}};
    if (v.kind == FacetVerdict::Kind::Facet)
      jv["rvol_exact"] = rat_json(v.rvol_exact);
    if (!v.detail.empty()) jv["detail"] = v.detail;
    verdicts.push_back(std::move(jv));
  }
  json stages = json::array();
  for (const auto& st : rep.stages) {
    json obs = json::array();
    for (const auto& o : st.observations) {
      json jo = {{"k", o.k},
                 {"class", observation_class_name(o.cls)},
                 {"jump_total", rat_json(Rat(o.v_total))},
                 {"discontinuities", o.discs.size()}};
      if (o.cls == WindowObservation::Cls::Bad) jo["why"] = bad_why_name(o.why);
      if (!o.note.empty()) jo["note"] = o.note;
      obs.push_back(std::move(jo));
    }
    stages.push_back({{"normal", ivec_json(st.normal)},
                      {"w0", ivec_json(st.plan.w0)},
                      {"t_scale", rat_json(Rat(st.plan.t_scale))},
                      {"windows", obs}});
  }
  const char* verif = rep.verification == ReconstructionReport::Verification::Passed
                          ? "passed"
                          : rep.verification == ReconstructionReport::Verification::Failed
                                ? "failed"
                                : "not-run";
  json out = {{"verdicts", verdicts},
              {"verification", verif},
              {"oracle_calls", rep.oracle_calls},
              {"oracle_length", rat_json(rep.oracle_length)},
              {"rounds_used", rep.rounds_used},
              {"fully_resolved", rep.fully_resolved()},
              {"stages", stages}};
  if (rep.polytope) out["polytope"] = polytope_json(*rep.polytope);
  if (rep.counterexample)
    out["counterexample"] = {{"w", ivec_json(rep.counterexample->w)},
                             {"lo", rat_json(rep.counterexample->lo)},
                             {"hi", rat_json(rep.counterexample->hi)}};
  return out;
}

std::string dump(const json& j, int indent) {
  return indent > 0 ? j.dump(indent) + "\n" : j.dump();
}

}  // namespace

std::string polytope_to_json(const HPolytope& p, int indent) {
  return dump(polytope_json(p), indent);
}

HPolytope polytope_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise("ParseError", "input is not valid JSON");
  if (!j.is_object() || !j.contains("dim") || !j.contains("ineqs"))
    raise("ParseError", "polytope document needs 'dim' and 'ineqs'");
  if (!j["dim"].is_number_integer())
    raise("ParseError", "'dim' must be an integer");
  int d = j["dim"].get<int>();
  if (!j["ineqs"].is_array()) raise("ParseError", "'ineqs' must be an array");
  std::vector<Ineq> rows;
  for (const auto& row : j["ineqs"]) {
    if (!row.is_object() || !row.contains("a") || !row.contains("b"))
      raise("ParseError", "each inequality needs 'a' and 'b'");
    if (!row["a"].is_array()) raise("ParseError", "'a' must be an array");
    IVec a;
    for (const auto& t : row["a"]) {
      if (t.is_number_integer()) {
        a.push_back(Int(static_cast<long>(t.get<long long>())));
      } else if (t.is_string()) {
        Rat r = Rat::parse(t.get<std::string>());
        if (!r.is_integer())
          raise("ParseError", "normal entries must be integers");
        a.push_back(r.num());
      } else {
        raise("ParseError", "normal entries must be integers");
      }
    }
    rows.push_back({std::move(a), rat_from(row["b"], "'b'")});
  }
  return validate(d, std::move(rows));
}

std::string stepfn_to_json(const QStepFunction& f, int indent) {
  return dump(stepfn_json(f), indent);
}

std::string stepfn_to_csv(const QStepFunction& f) {
  // plot-ready: every breakpoint plus the midpoint of each constancy interval
  std::string out = "s,value,s_approx,value_approx\n";
  auto row = [&out](const Rat& s, const Rat& v) {
    out += s.str() + "," + v.str() + "," + std::to_string(s.approx()) + "," +
           std::to_string(v.approx()) + "\n";
  };
  Rat prev = f.lo;
  Rat carried = f.base_value;
  for (const auto& bp : f.breaks) {
    if (prev < bp.s) row((prev + bp.s) / 2, carried);
    row(bp.s, bp.value_at);
    prev = bp.s;
    carried = bp.value_after;
  }
  if (prev < f.hi) {
    row((prev + f.hi) / 2, carried);
    row(f.hi, carried);
  }
  return out;
}

std::string jumps_to_json(const std::vector<JumpReport>& js, int indent) {
  json arr = json::array();
  for (const auto& r : js)
    arr.push_back({{"s", rat_json(r.s0)},
                   {"left_jump", rat_json(r.left_jump)},
                   {"right_jump", rat_json(r.right_jump)},
                   {"entering", r.entering},
                   {"leaving", r.leaving}});
  return dump(arr, indent);
}

std::string ppyr_volumes_to_json(const PpyrVolumes& pv, int indent) {
  return dump({{"via_decomposition", rat_json(pv.via_decomposition)},
               {"via_hull", rat_json(pv.via_hull)},
               {"equal", pv.via_decomposition == pv.via_hull}},
              indent);
}

std::string rvol_report_to_json(const RvolLimitReport& rep, int indent) {
  json samples = json::array();
  for (const auto& s : rep.samples)
    samples.push_back({{"s", rat_json(s.s)},
                       {"count", rat_json(Rat(s.count))},
                       {"ratio", rat_json(s.ratio)},
                       {"deviation", rat_json(s.deviation)}});
  return dump({{"rvol", rat_json(rep.rvol_value)},
               {"hull_dim", rep.hull_dim},
               {"samples", samples}},
              indent);
}

std::string translate_check_to_json(const TranslateCheck& tc, int indent) {
  json pairs = json::array();
  for (const auto& pw : tc.pairs) {
    json jp = {{"i", pw.i}, {"j", pw.j}, {"how", pw.how}, {"distinct", pw.distinct}};
    if (pw.witness_s) jp["witness_s"] = rat_json(*pw.witness_s);
    pairs.push_back(std::move(jp));
  }
  return dump({{"w", ivec_json(tc.w)},
               {"k_max", tc.k_max},
               {"all_distinct", tc.all_distinct},
               {"quantities", qvec_json(tc.quantities)},
               {"pairs", pairs}},
              indent);
}

std::string report_to_json(const ReconstructionReport& rep, int indent) {
  return dump(report_json(rep), indent);
}

std::string codim1_demo_to_json(const Codim1Demo& demo, int indent) {
  json cands = json::array();
  for (const auto& c : demo.flat_candidates) cands.push_back(ivec_json(c));
  json out = {{"plane_normal", ivec_json(demo.plane_normal)},
              {"plane_offset", rat_json(demo.plane_offset)},
              {"flat_candidates", cands},
              {"flat_report", report_json(demo.flat_report)},
              {"verified", demo.verified},
              {"oracle_calls", demo.oracle_calls},
              {"oracle_length", rat_json(demo.oracle_length)}};
  if (demo.recovered) out["recovered"] = polytope_json(*demo.recovered);
  return dump(out, indent);
}

namespace {

json suite_instance_json(const SuiteInstanceResult& ir) {
  json checks = json::array();
  for (const auto& c : ir.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"polytope", polytope_json(ir.polytope)},
          {"passed", ir.passed},
          {"checks", checks}};
}

}  // namespace

std::string suite_to_json(const SuiteResult& res, int indent) {
  json instances = json::array();
  for (const auto& ir : res.instances) instances.push_back(suite_instance_json(ir));
  return dump({{"instances", instances},
               {"passed_count", res.passed_count},
               {"all_passed", res.all_passed}},
              indent);
}

std::string suite_to_json_lines(const SuiteResult& res) {
  std::string out;
  for (size_t i = 0; i < res.instances.size(); ++i) {
    json line = suite_instance_json(res.instances[i]);
    line["instance"] = i;
    out += line.dump() + "\n";
  }
  json summary = {{"passed_count", res.passed_count},
                  {"total", res.instances.size()},
                  {"all_passed", res.all_passed}};
  out += summary.dump() + "\n";
  return out;
}

InstanceSpec instance_spec_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise("ParseError", "specification is not valid JSON");
  if (!j.is_object()) raise("ParseError", "specification must be a JSON object");
  InstanceSpec spec;
  auto want_int = [&](const char* key, auto& slot) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer())
      raise("ParseError", std::string("'") + key + "' must be an integer");
    slot = static_cast<std::decay_t<decltype(slot)>>(j[key].get<long long>());
  };
  want_int("dim", spec.dim);
  want_int("normal_bound", spec.normal_bound);
  want_int("den_bound", spec.den_bound);
  want_int("count", spec.count);
  want_int("seed", spec.seed);
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (key != "dim" && key != "normal_bound" && key != "den_bound" &&
        key != "count" && key != "seed")
      raise("ParseError", "unknown specification key '" + key + "'");
  }
  return spec;
}

std::vector<IVec> normals_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise("ParseError", "normals file is not valid JSON");
  if (!j.is_array()) raise("ParseError", "normals file must be an array of arrays");
  std::vector<IVec> out;
  for (const auto& row : j) {
    if (!row.is_array()) raise("ParseError", "each normal must be an array");
    IVec a;
    for (const auto& t : row) {
      if (!t.is_number_integer())
        raise("ParseError", "normal entries must be integers");
      a.push_back(Int(static_cast<long>(t.get<long long>())));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace ehrkit
