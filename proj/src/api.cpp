#include "dsim/api.hpp"

#include "dsim/brackets.hpp"
#include "dsim/config.hpp"
#include "dsim/conserved.hpp"
#include "dsim/random.hpp"

namespace dsim {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::Schema, what); }

// Observables on K-space points are written in the (g,b) letters.
Space observable_space(Space s) {
  const Space base = parent_space(s);
  return base == Space::heisenberg_K ? Space::heisenberg_GB : base;
}

Observable build_observable(Space s, const Json& j) {
  const std::vector<WordSpec> words = words_from_json(j);
  try {
    return make_trace_observable(s, words);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema(e.what());
  }
}

PhasePoint initial_point(const Json& point, Space s, std::size_t n, const std::string& variant, std::uint64_t seed) {
  if (!point.is_null()) {
    PhasePoint p = point_from_json(point);
    if (p.space != s) schema(std::string("point lives on ") + to_string(p.space) + ", expected " + to_string(s));
    try {
      validate(p);
    } catch (const Error& e) {
      schema(std::string("point: ") + e.what());
    }
    return p;
  }
  if (n < 2) schema("n must be at least 2");
  Rng rng = make_rng(seed);
  return random_point(s, n, parse_variant(variant), rng);
}

double spectral_gap(const MatC& a, const MatC& b) {
  double d = 0.0;
  MatC pa = a, pb = b;
  for (std::size_t k = 1; k <= a.n(); ++k) {
    d = std::max(d, std::abs(pa.trace() - pb.trace()));
    pa = pa * a;
    pb = pb * b;
  }
  return d;
}

}  // namespace

Json simulate(const SimulateRequest& req) {
  const Space s = parse_space(req.space);
  const std::string form = req.form.empty() ? (is_slice(s) ? "reduced" : "unreduced") : req.form;
  if (form != "unreduced" && form != "reduced") schema("form must be unreduced or reduced");
  if ((form == "reduced") != is_slice(s))
    schema("form " + form + " does not match space " + to_string(s) +
           (is_slice(s) ? " (a slice)" : " (an unreduced space)"));
  const std::vector<WordSpec> words = words_from_json(req.hamiltonian);
  const Space os = observable_space(s);

  std::optional<Family> fam;
  for (const auto& w : words) {
    std::optional<Family> wf;
    try {
      if (!word_is_invariant(os, w)) schema("hamiltonian word is not invariant on " + std::string(to_string(os)));
      wf = word_family(os, w);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Schema) throw;
      schema(e.what());
    }
    if (!wf) schema("hamiltonian word mixes components; it belongs to no pullback family");
    if (fam && *fam != *wf) schema("hamiltonian words belong to different families");
    fam = wf;
  }
  const Family family = *fam;
  if (!req.family.empty() && parse_family(req.family) != family)
    schema("family " + req.family + " does not match the hamiltonian, which is a " + to_string(family) + " function");
  if (is_slice(s) && family != slice_family(s))
    schema(std::string("the reduced equation on ") + to_string(s) + " needs a " + to_string(slice_family(s)) +
           " hamiltonian");
  if (!(req.t_max >= 0.0) || !(req.dt > 0.0) || req.stride == 0) schema("need t_max >= 0, dt > 0 and stride >= 1");

  FlowSpec spec;
  spec.space = s;
  spec.family = family;
  spec.hamiltonian = make_trace_observable(os, words);
  spec.t_max = req.t_max;
  spec.dt = req.dt;
  spec.stride = req.stride;
  spec.restore = req.restore;
  spec.seed = req.seed;

  const Trajectory tr = integrate(spec, initial_point(req.point, s, req.n, req.variant, req.seed));
  Json j = to_json(tr);
  j["space"] = to_string(s);
  j["family"] = to_string(family);
  j["form"] = form;
  j["hamiltonian_words"] = req.hamiltonian.is_array() ? req.hamiltonian : Json::array({req.hamiltonian});
  return j;
}

Json evaluate_bracket(const std::string& kind, const Json& f1, const Json& f2, const Json& point, std::size_t n,
                      const std::string& variant, std::uint64_t seed) {
  const BracketKind k = parse_bracket_kind(kind);
  const Space s = bracket_space(k);
  const Space os = parent_space(s);
  const Observable f = build_observable(os, f1), h = build_observable(os, f2);
  if (is_reduced(k) && (!f.invariant() || !h.invariant()))
    schema("reduced brackets are defined for invariant functions only");
  const PhasePoint p = initial_point(point, s, n, variant, seed);

  const double value = bracket(k, f, h, p);
  Json res;
  res["antisymmetry"] = std::abs(value + bracket(k, h, f, p));
  // Same bracket with every derivative taken by finite differences.
  const Observable f_fd(os, [f](const PhasePoint& x) { return f(x); });
  const Observable h_fd(os, [h](const PhasePoint& x) { return h(x); });
  res["finite_difference"] = std::abs(value - bracket(k, f_fd, h_fd, p));
  if (is_reduced(k)) res["unreduced"] = std::abs(value - bracket(unreduced_kind(k), f, h, lift(p)));
  return Json{{"kind", to_string(k)}, {"point", to_json(p)}, {"value", value}, {"residuals", res}};
}

Json invariants_report(const Json& trajectory, const std::vector<std::string>& kind_names) {
  const Trajectory tr = trajectory_from_json(trajectory);
  const Space s = tr.points.front().space;
  std::vector<ConservedKind> kinds;
  if (kind_names.empty())
    kinds = conserved_kinds(s);
  else
    for (const auto& name : kind_names) kinds.push_back(parse_conserved_kind(name));
  std::optional<Family> family;
  if (trajectory.contains("family") && trajectory["family"].is_string())
    family = parse_family(trajectory["family"].get<std::string>());

  Json per_kind = Json::object();
  for (ConservedKind k : kinds) {
    const std::vector<MatC> v0 = conserved_value(k, tr.points.front());
    Json series = Json::array();
    double worst_matrix = 0.0, worst_spectral = 0.0;
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      const std::vector<MatC> v = conserved_value(k, tr.points[i]);
      double dm = 0.0, ds = 0.0;
      for (std::size_t c = 0; c < v.size(); ++c) {
        dm = std::max(dm, dist_fro(v[c], v0[c]));
        ds = std::max(ds, spectral_gap(v[c], v0[c]));
      }
      worst_matrix = std::max(worst_matrix, dm);
      worst_spectral = std::max(worst_spectral, ds);
      series.push_back(Json{{"t", tr.times[i]}, {"matrix_drift", dm}, {"spectral_drift", ds}});
    }
    Json entry{{"max_matrix_drift", worst_matrix}, {"max_spectral_drift", worst_spectral}, {"series", series}};
    if (family) entry["expected_constant"] = conserved_along(k, *family);
    per_kind[to_string(k)] = entry;
  }
  double h_drift = 0.0;
  for (double hv : tr.hamiltonian) h_drift = std::max(h_drift, std::abs(hv - tr.hamiltonian.front()));
  Json report{{"space", to_string(s)},
              {"samples", tr.points.size()},
              {"hamiltonian_drift", h_drift},
              {"conserved", per_kind},
              {"note", "slice trajectories are gauge fixed; compare spectral drift there, matrix drift on unreduced spaces"}};
  if (family) report["family"] = to_string(*family);
  return report;
}

Json random_point_json(const std::string& space, std::size_t n, const std::string& variant, std::uint64_t seed) {
  return to_json(initial_point(Json(), parse_space(space), n, variant, seed));
}

}  // namespace dsim
