#include "dsim/io.hpp"

#include <fstream>
#include <sstream>

#include "dsim/config.hpp"

namespace dsim {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::Schema, what); }

const Json& field(const Json& j, const char* key, const char* ctx) {
  if (!j.is_object()) schema(std::string(ctx) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string(ctx) + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const char* ctx) {
  if (!j.is_number()) schema(std::string(ctx) + ": expected a number");
  return j.get<double>();
}

}  // namespace

Json to_json(const MatC& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t j = 0; j < m.n(); ++j) {
    Json rr = Json::array(), ri = Json::array();
    for (std::size_t k = 0; k < m.n(); ++k) {
      rr.push_back(m(j, k).real());
      ri.push_back(m(j, k).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"n", m.n()}, {"re", re}, {"im", im}};
}

MatC matc_from_json(const Json& j) {
  const Json& jn = field(j, "n", "matrix");
  if (!jn.is_number_integer() || jn.get<long long>() < 1) schema("matrix: 'n' must be a positive integer");
  const std::size_t n = jn.get<std::size_t>();
  const Json& re = field(j, "re", "matrix");
  const Json* im = j.contains("im") ? &j.at("im") : nullptr;
  auto check_rows = [&](const Json& rows, const char* name) {
    if (!rows.is_array() || rows.size() != n) schema(std::string("matrix: '") + name + "' must have n rows");
    for (const auto& r : rows)
      if (!r.is_array() || r.size() != n) schema(std::string("matrix: every row of '") + name + "' must have n entries");
  };
  check_rows(re, "re");
  if (im) check_rows(*im, "im");
  MatC m(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      m(a, b) = cplx(number(re[a][b], "matrix entry"), im ? number((*im)[a][b], "matrix entry") : 0.0);
  return m;
}

Json to_json(const PhasePoint& p) {
  Json comps = Json::array();
  for (const auto& c : p.components) comps.push_back(to_json(c));
  return Json{{"space", to_string(p.space)}, {"variant", to_string(p.variant)}, {"components", comps}};
}

PhasePoint point_from_json(const Json& j) {
  const Json& js = field(j, "space", "point");
  if (!js.is_string()) schema("point: 'space' must be a string");
  PhasePoint p;
  p.space = parse_space(js.get<std::string>());
  p.variant = Variant::su;
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) schema("point: 'variant' must be a string");
    try {
      p.variant = parse_variant(j["variant"].get<std::string>());
    } catch (const Error& e) {
      schema(std::string("point: ") + e.what());
    }
  }
  const Json& comps = field(j, "components", "point");
  if (!comps.is_array()) schema("point: 'components' must be an array");
  for (const auto& c : comps) p.components.push_back(matc_from_json(c));
  if (p.components.size() != component_count(p.space))
    schema(std::string("point: ") + to_string(p.space) + " needs " + std::to_string(component_count(p.space)) +
           " components");
  for (const auto& c : p.components)
    if (c.n() != p.components.front().n()) schema("point: components differ in size");
  return p;
}

Json to_json(const WordSpec& w) {
  Json j{{"letters", w.letters}, {"part", w.imaginary ? "Im" : "Re"}, {"coeff", w.coeff}};
  if (!w.constants.empty()) {
    Json cs = Json::array();
    for (const auto& c : w.constants) cs.push_back(to_json(c));
    j["constants"] = cs;
  }
  return j;
}

WordSpec word_from_json(const Json& j) {
  WordSpec w;
  const Json& letters = field(j, "letters", "word");
  if (!letters.is_array() || letters.empty()) schema("word: 'letters' must be a non-empty array");
  for (const auto& l : letters) {
    if (!l.is_string()) schema("word: letters must be strings");
    w.letters.push_back(l.get<std::string>());
  }
  if (j.contains("part")) {
    const Json& part = j["part"];
    if (!part.is_string()) schema("word: 'part' must be \"Re\" or \"Im\"");
    const std::string s = part.get<std::string>();
    if (s == "Re")
      w.imaginary = false;
    else if (s == "Im")
      w.imaginary = true;
    else
      schema("word: 'part' must be \"Re\" or \"Im\"");
  }
  if (j.contains("coeff")) w.coeff = number(j["coeff"], "word coeff");
  if (j.contains("constants")) {
    if (!j["constants"].is_array()) schema("word: 'constants' must be an array");
    for (const auto& c : j["constants"]) w.constants.push_back(matc_from_json(c));
  }
  return w;
}

std::vector<WordSpec> words_from_json(const Json& j) {
  std::vector<WordSpec> out;
  if (j.is_array()) {
    if (j.empty()) schema("hamiltonian: empty word list");
    for (const auto& w : j) out.push_back(word_from_json(w));
  } else {
    out.push_back(word_from_json(j));
  }
  return out;
}

Json to_json(const Trajectory& tr) {
  Json samples = Json::array();
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    samples.push_back(Json{{"t", tr.times[i]},
                           {"point", to_json(tr.points[i])},
                           {"hamiltonian", tr.hamiltonian[i]},
                           {"structure_residual", tr.structure_residual[i]}});
  return Json{{"method", tr.method},     {"dt", tr.dt},
              {"seed", tr.seed},         {"restore", tr.restore},
              {"restorations", tr.restorations}, {"completed", tr.completed},
              {"status", tr.status},     {"samples", samples}};
}

Trajectory trajectory_from_json(const Json& j) {
  Trajectory tr;
  const Json& samples = field(j, "samples", "trajectory");
  if (!samples.is_array()) schema("trajectory: 'samples' must be an array");
  if (j.contains("method") && j["method"].is_string()) tr.method = j["method"].get<std::string>();
  if (j.contains("dt")) tr.dt = number(j["dt"], "trajectory dt");
  if (j.contains("seed") && j["seed"].is_number_unsigned()) tr.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("status") && j["status"].is_string()) tr.status = j["status"].get<std::string>();
  if (j.contains("completed") && j["completed"].is_boolean()) tr.completed = j["completed"].get<bool>();
  for (const auto& s : samples) {
    tr.times.push_back(number(field(s, "t", "trajectory sample"), "sample t"));
    tr.points.push_back(point_from_json(field(s, "point", "trajectory sample")));
    tr.hamiltonian.push_back(s.contains("hamiltonian") ? number(s["hamiltonian"], "sample hamiltonian") : 0.0);
    tr.structure_residual.push_back(
        s.contains("structure_residual") ? number(s["structure_residual"], "sample residual") : 0.0);
  }
  if (tr.points.empty()) schema("trajectory: no samples");
  return tr;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os.precision(17);
  os << "t,hamiltonian,structure_residual\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    os << tr.times[i] << ',' << tr.hamiltonian[i] << ',' << tr.structure_residual[i] << '\n';
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    schema(path + ": " + e.what());
  }
}

Json parse_json_arg(const std::string& text) {
  if (!text.empty() && text[0] == '@') return read_json_file(text.substr(1));
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    schema(std::string("invalid JSON argument: ") + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Usage, "cannot write " + path);
  out << dump(j);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dsim
