#include "dsim/observables.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "dsim/config.hpp"

namespace dsim {

namespace {
constexpr Flavor kAllFlavors[] = {Flavor::nabla1, Flavor::nabla1p, Flavor::nabla2, Flavor::nabla2p,
                                  Flavor::d2,     Flavor::D1,      Flavor::D1p,    Flavor::D2,
                                  Flavor::D2p,    Flavor::scriptD, Flavor::nabla,  Flavor::nablap};
}

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::nabla1: return "nabla1";
    case Flavor::nabla1p: return "nabla1p";
    case Flavor::nabla2: return "nabla2";
    case Flavor::nabla2p: return "nabla2p";
    case Flavor::d2: return "d2";
    case Flavor::D1: return "D1";
    case Flavor::D1p: return "D1p";
    case Flavor::D2: return "D2";
    case Flavor::D2p: return "D2p";
    case Flavor::scriptD: return "scriptD";
    case Flavor::nabla: return "nabla";
    case Flavor::nablap: return "nablap";
  }
  return "?";
}

Flavor parse_flavor(const std::string& s) {
  for (Flavor f : kAllFlavors)
    if (s == to_string(f)) return f;
  throw Error(ErrorCode::Usage, "unknown flavor '" + s + "'");
}

// ---- flavor table ------------------------------------------------------------

namespace {

FlavorSpec spec_G(std::size_t comp, Side side) { return {comp, side, Subspace::G, false, Subspace::G}; }
FlavorSpec spec_G0(std::size_t comp, Side side) { return {comp, side, Subspace::G0, false, Subspace::G0}; }
FlavorSpec spec_GtoB(std::size_t comp, Side side) { return {comp, side, Subspace::G, true, Subspace::B}; }
FlavorSpec spec_G0toB0(std::size_t comp, Side side) { return {comp, side, Subspace::G0, true, Subspace::iG0}; }
FlavorSpec spec_BtoG(std::size_t comp, Side side) { return {comp, side, Subspace::B, true, Subspace::G}; }
FlavorSpec spec_B0toG0(std::size_t comp, Side side) { return {comp, side, Subspace::iG0, true, Subspace::G0}; }

[[noreturn]] void missing(Space s, Flavor f) {
  throw Error(ErrorCode::MissingFlavor,
              std::string("flavor ") + to_string(f) + " is not defined on space " + to_string(s));
}

}  // namespace

FlavorSpec flavor_spec(Space s, Flavor f) {
  const Side L = Side::left, R = Side::right;
  switch (s) {
    case Space::cotangent:
    case Space::red_cot_1:
    case Space::red_cot_2: {
      const bool cartan_g = s == Space::red_cot_1, cartan_j = s == Space::red_cot_2;
      switch (f) {
        case Flavor::nabla1: return cartan_g ? spec_G0(0, L) : spec_G(0, L);
        case Flavor::nabla1p: return cartan_g ? spec_G0(0, R) : spec_G(0, R);
        case Flavor::d2: return cartan_j ? spec_G0(1, Side::additive) : spec_G(1, Side::additive);
        default: missing(s, f);
      }
    }
    case Space::heisenberg_GB:
    case Space::red_heis_1:
    case Space::red_heis_2: {
      const bool cartan_g = s == Space::red_heis_1, cartan_b = s == Space::red_heis_2;
      switch (f) {
        case Flavor::nabla1: return cartan_g ? spec_G0(0, L) : spec_G(0, L);
        case Flavor::nabla1p: return cartan_g ? spec_G0(0, R) : spec_G(0, R);
        case Flavor::D1: return cartan_g ? spec_G0toB0(0, L) : spec_GtoB(0, L);
        case Flavor::D1p: return cartan_g ? spec_G0toB0(0, R) : spec_GtoB(0, R);
        case Flavor::D2:
        case Flavor::scriptD: return cartan_b ? spec_B0toG0(1, L) : spec_BtoG(1, L);
        case Flavor::D2p: return cartan_b ? spec_B0toG0(1, R) : spec_BtoG(1, R);
        default: missing(s, f);
      }
    }
    case Space::heisenberg_K:
      switch (f) {
        case Flavor::nabla: return {0, L, Subspace::full, true, Subspace::full};
        case Flavor::nablap: return {0, R, Subspace::full, true, Subspace::full};
        default: missing(s, f);
      }
    case Space::quasi:
    case Space::red_quasi_1:
    case Space::red_quasi_2: {
      const bool c1 = s == Space::red_quasi_1, c2 = s == Space::red_quasi_2;
      switch (f) {
        case Flavor::nabla1: return c1 ? spec_G0(0, L) : spec_G(0, L);
        case Flavor::nabla1p: return c1 ? spec_G0(0, R) : spec_G(0, R);
        case Flavor::nabla2: return c2 ? spec_G0(1, L) : spec_G(1, L);
        case Flavor::nabla2p: return c2 ? spec_G0(1, R) : spec_G(1, R);
        default: missing(s, f);
      }
    }
  }
  missing(s, f);
}

std::vector<Flavor> flavors_of(Space s) {
  std::vector<Flavor> out;
  for (Flavor f : kAllFlavors) {
    try {
      flavor_spec(s, f);
      out.push_back(f);
    } catch (const Error&) {
    }
  }
  return out;
}

// ---- observable plumbing ------------------------------------------------------

bool accepts(Space obs_space, Space point_space) {
  return obs_space == point_space || obs_space == parent_space(point_space);
}

Observable::Observable(Space space, Eval eval, Grad grad, bool invariant, std::string descriptor)
    : space_(space), eval_(std::move(eval)), grad_(std::move(grad)), invariant_(invariant),
      descriptor_(std::move(descriptor)) {}

double Observable::operator()(const PhasePoint& p) const {
  if (!accepts(space_, p.space))
    throw Error(ErrorCode::WrongSpace, std::string("observable on ") + to_string(space_) + " evaluated at " +
                                           to_string(p.space) + " point");
  return eval_(p);
}

MatC Observable::analytic(const PhasePoint& p, Flavor f) const {
  if (!grad_) throw Error(ErrorCode::MissingFlavor, std::string("no analytic oracle for ") + to_string(f));
  if (!accepts(space_, p.space)) throw Error(ErrorCode::WrongSpace, "observable evaluated on the wrong space");
  return grad_(p, f);
}

// ---- trace words ---------------------------------------------------------------

namespace {

enum class Kind { plain, inv, dag, gram, constant };

struct Letter {
  std::size_t comp = 0;
  Kind kind = Kind::plain;
};

struct LetterDef {
  std::string name;
  Letter letter;
  bool covariant;  // transforms by conjugation under the space's action
};

std::vector<LetterDef> letter_table(Space s) {
  switch (parent_space(s)) {
    case Space::cotangent:
      return {{"g", {0, Kind::plain}, true},
              {"ginv", {0, Kind::inv}, true},
              {"gdag", {0, Kind::dag}, true},
              {"J", {1, Kind::plain}, true}};
    case Space::heisenberg_GB:
      return {{"g", {0, Kind::plain}, true},   {"ginv", {0, Kind::inv}, true},  {"gdag", {0, Kind::dag}, true},
              {"L", {1, Kind::gram}, true},    {"b", {1, Kind::plain}, false},  {"binv", {1, Kind::inv}, false},
              {"bdag", {1, Kind::dag}, false}};
    case Space::heisenberg_K:
      return {{"K", {0, Kind::plain}, false}, {"Kinv", {0, Kind::inv}, false}, {"Kdag", {0, Kind::dag}, false}};
    case Space::quasi:
      return {{"g1", {0, Kind::plain}, true}, {"g1inv", {0, Kind::inv}, true}, {"g1dag", {0, Kind::dag}, true},
              {"g2", {1, Kind::plain}, true}, {"g2inv", {1, Kind::inv}, true}, {"g2dag", {1, Kind::dag}, true}};
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "no alphabet for space");
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
}

struct ParsedLetter {
  Letter letter;
  std::size_t const_index = 0;
};

std::vector<ParsedLetter> parse_word(Space s, const WordSpec& w) {
  const auto table = letter_table(s);
  std::vector<ParsedLetter> out;
  for (const auto& raw : w.letters) {
    const std::string name = canonical_letter(raw);
    bool found = false;
    for (const auto& d : table)
      if (d.name == name) {
        out.push_back({d.letter, 0});
        found = true;
        break;
      }
    if (!found && name.size() > 1 && name[0] == 'C') {
      std::size_t idx = 0;
      try {
        idx = std::stoul(name.substr(1));
      } catch (...) {
        throw Error(ErrorCode::Schema, "invalid letter '" + raw + "'");
      }
      if (idx >= w.constants.size()) throw Error(ErrorCode::Schema, "constant letter '" + raw + "' out of range");
      out.push_back({{0, Kind::constant}, idx});
      found = true;
    }
    if (!found)
      throw Error(ErrorCode::Schema, "letter '" + raw + "' is not valid on space " + to_string(parent_space(s)));
  }
  if (out.empty()) throw Error(ErrorCode::Schema, "empty word");
  return out;
}

MatC letter_matrix(const PhasePoint& p, const WordSpec& w, const ParsedLetter& pl) {
  if (pl.letter.kind == Kind::constant) return w.constants[pl.const_index];
  const MatC& m = p[pl.letter.comp];
  switch (pl.letter.kind) {
    case Kind::plain: return m;
    case Kind::inv: return inverse(m);
    case Kind::dag: return m.adjoint();
    case Kind::gram: return m * m.adjoint();
    case Kind::constant: break;
  }
  return m;
}

std::string describe(const WordSpec& w) {
  std::ostringstream os;
  os << w.coeff << "*" << (w.imaginary ? "Im" : "Re") << " tr(";
  for (std::size_t k = 0; k < w.letters.size(); ++k) os << (k ? " " : "") << canonical_letter(w.letters[k]);
  os << ")";
  return os.str();
}

/// Maps the raw gradient A (d/dt F = Re tr(X A) for all complex X) to the
/// flavor's target subspace.
MatC to_target(const MatC& a, const FlavorSpec& spec, Variant v) {
  const MatC a0 = remove_trace(a, v);
  if (!spec.imaginary_form) {
    MatC y = antihermitian_part(a0);
    return spec.direction == Subspace::G0 ? project(y, Subspace::G0) : y;
  }
  const MatC z = a0 * cplx(0.0, 1.0);
  switch (spec.direction) {
    case Subspace::G: return proj_B(z);
    case Subspace::B: return proj_G(z);
    case Subspace::G0: return project(z, Subspace::iG0);
    case Subspace::iG0: return project(z, Subspace::G0);
    case Subspace::full: return z;
    default: break;
  }
  throw Error(ErrorCode::ContractViolation, "to_target: unsupported direction");
}

/// Raw gradient of tr(word) (before taking the real or imaginary part):
/// d/dt tr(word) = tr(X P) + tr(X^dagger Q).
std::pair<MatC, MatC> raw_word_gradient(const PhasePoint& p, const WordSpec& w, const std::vector<ParsedLetter>& word,
                                        const FlavorSpec& spec) {
  const std::size_t n = p.n(), m = word.size();
  std::vector<MatC> mats;
  mats.reserve(m);
  for (const auto& pl : word) mats.push_back(letter_matrix(p, w, pl));
  std::vector<MatC> prefix(m + 1), suffix(m + 1);
  prefix[0] = MatC::identity(n);
  for (std::size_t k = 0; k < m; ++k) prefix[k + 1] = prefix[k] * mats[k];
  suffix[m] = MatC::identity(n);
  for (std::size_t k = m; k-- > 0;) suffix[k] = mats[k] * suffix[k + 1];

  MatC P(n), Q(n);
  const MatC& comp = p[spec.component];
  for (std::size_t k = 0; k < m; ++k) {
    const auto& pl = word[k];
    if (pl.letter.kind == Kind::constant || pl.letter.comp != spec.component) continue;
    const MatC c = suffix[k + 1] * prefix[k];  // cyclic remainder after letter k
    const MatC& mk = mats[k];
    switch (pl.letter.kind) {
      case Kind::plain:
        if (spec.side == Side::left) P += mk * c;
        else if (spec.side == Side::right) P += c * mk;
        else P += c;
        break;
      case Kind::inv:
        if (spec.side == Side::left) P -= c * mk;
        else if (spec.side == Side::right) P -= mk * c;
        else P -= mk * c * mk;
        break;
      case Kind::dag:
        if (spec.side == Side::left) Q += c * mk;
        else if (spec.side == Side::right) Q += mk * c;
        else Q += c;
        break;
      case Kind::gram:
        if (spec.side == Side::left) {
          P += mk * c;
          Q += c * mk;
        } else if (spec.side == Side::right) {
          const MatC t = comp.adjoint() * c * comp;
          P += t;
          Q += t;
        } else {
          P += comp.adjoint() * c;
          Q += c * comp;
        }
        break;
      case Kind::constant: break;
    }
  }
  return {P, Q};
}

struct CompiledWord {
  WordSpec spec;
  std::vector<ParsedLetter> word;
};

double eval_word(const PhasePoint& p, const CompiledWord& cw) {
  MatC prod = letter_matrix(p, cw.spec, cw.word[0]);
  for (std::size_t k = 1; k < cw.word.size(); ++k) prod = prod * letter_matrix(p, cw.spec, cw.word[k]);
  const cplx t = prod.trace();
  return cw.spec.coeff * (cw.spec.imaginary ? t.imag() : t.real());
}

MatC raw_gradient(const PhasePoint& p, const CompiledWord& cw, const FlavorSpec& spec) {
  auto [P, Q] = raw_word_gradient(p, cw.spec, cw.word, spec);
  const MatC qd = Q.adjoint();
  if (!cw.spec.imaginary) return (P + qd) * cplx(cw.spec.coeff);
  return (P - qd) * cplx(0.0, -cw.spec.coeff);
}

}  // namespace

std::string canonical_letter(const std::string& letter) {
  std::string s = letter;
  replace_all(s, "⁻¹", "inv");
  replace_all(s, "^-1", "inv");
  replace_all(s, "₁", "1");
  replace_all(s, "₂", "2");
  replace_all(s, "†", "dag");
  replace_all(s, "^dagger", "dag");
  return s;
}

std::vector<std::string> alphabet(Space s) {
  std::vector<std::string> out;
  for (const auto& d : letter_table(s)) out.push_back(d.name);
  return out;
}

bool word_is_invariant(Space s, const WordSpec& w) {
  const auto table = letter_table(s);
  for (const auto& raw : w.letters) {
    const std::string name = canonical_letter(raw);
    bool cov = false;
    for (const auto& d : table)
      if (d.name == name) cov = d.covariant;
    if (!cov) return false;
  }
  return true;
}

std::optional<std::size_t> word_component(Space s, const WordSpec& w) {
  const auto table = letter_table(s);
  std::optional<std::size_t> comp;
  for (const auto& raw : w.letters) {
    const std::string name = canonical_letter(raw);
    const LetterDef* def = nullptr;
    for (const auto& d : table)
      if (d.name == name) def = &d;
    if (!def) {
      if (!name.empty() && name[0] == 'C') return std::nullopt;
      throw Error(ErrorCode::Schema, "unknown letter '" + raw + "' for space " + to_string(s));
    }
    if (comp && *comp != def->letter.comp) return std::nullopt;
    comp = def->letter.comp;
  }
  return comp;
}

Observable make_trace_observable(Space s, const std::vector<WordSpec>& ws) {
  if (ws.empty()) throw Error(ErrorCode::Schema, "empty word list");
  auto words = std::make_shared<std::vector<CompiledWord>>();
  bool inv = true;
  std::string desc;
  for (const auto& w : ws) {
    words->push_back({w, parse_word(s, w)});
    inv = inv && word_is_invariant(s, w);
    desc += (desc.empty() ? "" : " + ") + describe(w);
  }
  const Space base = parent_space(s);
  auto eval = [words](const PhasePoint& p) {
    double v = 0.0;
    for (const auto& cw : *words) v += eval_word(p, cw);
    return v;
  };
  auto grad = [words](const PhasePoint& p, Flavor f) {
    const FlavorSpec spec = flavor_spec(p.space, f);
    MatC a(p.n());
    for (const auto& cw : *words) a += raw_gradient(p, cw, spec);
    return to_target(a, spec, p.variant);
  };
  return Observable(base, eval, grad, inv, desc);
}

Observable make_trace_observable(Space s, const WordSpec& w) { return make_trace_observable(s, std::vector<WordSpec>{w}); }

Observable constant_observable(Space s, double c) {
  return Observable(
      parent_space(s), [c](const PhasePoint&) { return c; },
      [](const PhasePoint& p, Flavor f) {
        flavor_spec(p.space, f);
        return MatC(p.n());
      },
      true, "const");
}

Observable linear_observable(Space s, std::size_t component, const MatC& a) {
  static const std::map<Space, std::vector<std::string>> plain = {{Space::cotangent, {"g", "J"}},
                                                                  {Space::heisenberg_GB, {"g", "b"}},
                                                                  {Space::heisenberg_K, {"K"}},
                                                                  {Space::quasi, {"g1", "g2"}}};
  const auto& names = plain.at(parent_space(s));
  if (component >= names.size()) throw Error(ErrorCode::Usage, "linear_observable: bad component");
  WordSpec w{{"C0", names[component]}, false, 1.0, {a}};
  Observable o = make_trace_observable(s, w);
  return Observable(
      o.space(), [o](const PhasePoint& p) { return o(p); }, [o](const PhasePoint& p, Flavor f) { return o.analytic(p, f); },
      false, "Re tr(A " + names[component] + ")");
}

Observable sum(const Observable& f, const Observable& h) {
  if (f.space() != h.space()) throw Error(ErrorCode::WrongSpace, "sum of observables on different spaces");
  Observable::Grad g;
  if (f.has_analytic() && h.has_analytic())
    g = [f, h](const PhasePoint& p, Flavor fl) { return f.analytic(p, fl) + h.analytic(p, fl); };
  return Observable(
      f.space(), [f, h](const PhasePoint& p) { return f(p) + h(p); }, g, f.invariant() && h.invariant(),
      "(" + f.descriptor() + ") + (" + h.descriptor() + ")");
}

Observable scale(const Observable& f, double c) {
  Observable::Grad g;
  if (f.has_analytic()) g = [f, c](const PhasePoint& p, Flavor fl) { return f.analytic(p, fl) * cplx(c); };
  return Observable(
      f.space(), [f, c](const PhasePoint& p) { return c * f(p); }, g, f.invariant(),
      std::to_string(c) + "*(" + f.descriptor() + ")");
}

Observable product(const Observable& f, const Observable& h) {
  if (f.space() != h.space()) throw Error(ErrorCode::WrongSpace, "product of observables on different spaces");
  Observable::Grad g;
  if (f.has_analytic() && h.has_analytic())
    g = [f, h](const PhasePoint& p, Flavor fl) {
      return f.analytic(p, fl) * cplx(h(p)) + h.analytic(p, fl) * cplx(f(p));
    };
  return Observable(
      f.space(), [f, h](const PhasePoint& p) { return f(p) * h(p); }, g, f.invariant() && h.invariant(),
      "(" + f.descriptor() + ") * (" + h.descriptor() + ")");
}

Observable pullback_to_K(const Observable& f) {
  if (f.space() != Space::heisenberg_GB) throw Error(ErrorCode::WrongSpace, "pullback_to_K needs a (g,b) observable");
  // Chain rule through K = gL bR^{-1} = bL gR^{-1}, using the partial right
  // derivatives of F at m(K):
  //   nabla'(F o m) = -gR D1'F gR^{-1} - bR D2'F bR^{-1}
  //   nabla (F o m) = -bL D1'F bL^{-1} - gL D2'F gL^{-1}
  Observable::Grad grad;
  if (f.has_analytic())
    grad = [f](const PhasePoint& p, Flavor fl) -> MatC {
      if (fl != Flavor::nabla && fl != Flavor::nablap) missing(Space::heisenberg_K, fl);
      const Iwasawa iw = iwasawa(p[0]);
      const PhasePoint gb = model_map(p[0], p.variant);
      const MatC d1 = f.analytic(gb, Flavor::D1p), d2 = f.analytic(gb, Flavor::D2p);
      const MatC out = fl == Flavor::nablap ? iw.gR * d1 * inverse(iw.gR) + iw.bR * d2 * inverse(iw.bR)
                                            : iw.bL * d1 * inverse(iw.bL) + iw.gL * d2 * inverse(iw.gL);
      return remove_trace(out * cplx(-1.0), p.variant);
    };
  return Observable(
      Space::heisenberg_K, [f](const PhasePoint& p) { return f(model_map(p[0], p.variant)); }, grad, false,
      "(" + f.descriptor() + ") o m");
}

Observable pullback_to_GB(const Observable& f) {
  if (f.space() != Space::heisenberg_K) throw Error(ErrorCode::WrongSpace, "pullback_to_GB needs a K observable");
  return Observable(
      Space::heisenberg_GB,
      [f](const PhasePoint& p) {
        return f(PhasePoint{Space::heisenberg_K, p.variant, {model_map_inv(p[0], p[1])}});
      },
      {}, false, "(" + f.descriptor() + ") o m^-1");
}

std::vector<WordSpec> invariant_word_panel(Space s) {
  auto re = [](std::vector<std::string> l, double c = 1.0) { return WordSpec{std::move(l), false, c, {}}; };
  auto im = [](std::vector<std::string> l, double c = 1.0) { return WordSpec{std::move(l), true, c, {}}; };
  switch (parent_space(s)) {
    case Space::cotangent:
      return {re({"g"}),           im({"g", "g"}),      re({"g", "J"}),           im({"g", "J"}),
              re({"J", "J"}, -0.5), im({"g", "J", "J"}), re({"g", "g", "J"}, 0.5), re({"ginv", "J", "g", "J"}),
              im({"g", "J", "g", "J"}), re({"g", "J", "J", "J"})};
    case Space::heisenberg_GB:
      return {re({"g"}),           im({"g", "g"}),          re({"L"}),           re({"L", "L"}, 0.5),
              re({"g", "L"}),      im({"g", "L"}),          re({"g", "g", "L"}), re({"ginv", "L", "g", "L"}),
              im({"g", "L", "L"}), re({"g", "L", "g", "L"}, 0.5)};
    case Space::quasi:
      return {re({"g1"}),       im({"g2"}),          re({"g1", "g2"}),     im({"g1", "g2"}),
              re({"g1", "g1", "g2"}), im({"g1", "g2", "g2"}), re({"g1", "g2", "g1inv", "g2inv"}),
              re({"g1inv", "g2", "g2"}), im({"g1", "g2", "g1", "g2"}), re({"g1", "g1", "g2", "g2"})};
    case Space::heisenberg_K:
      return {re({"K", "Kdag"}), re({"K", "Kdag", "K", "Kdag"}, 0.5), re({"Kdag", "K", "K", "Kdag"})};
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "no panel for space");
}

std::vector<WordSpec> generic_word_panel(Space s) {
  std::vector<WordSpec> out = invariant_word_panel(s);
  auto re = [](std::vector<std::string> l) { return WordSpec{std::move(l), false, 1.0, {}}; };
  auto im = [](std::vector<std::string> l) { return WordSpec{std::move(l), true, 1.0, {}}; };
  switch (parent_space(s)) {
    case Space::heisenberg_GB:
      out.push_back(re({"g", "b"}));
      out.push_back(im({"b", "g", "bdag"}));
      out.push_back(re({"binv", "g", "b", "g"}));
      break;
    case Space::heisenberg_K:
      out.push_back(re({"K"}));
      out.push_back(im({"K", "K", "Kdag"}));
      out.push_back(re({"Kinv", "K", "Kdag", "Kinv"}));
      out.push_back(im({"Kinv"}));
      break;
    default: break;
  }
  return out;
}

// ---- finite differences ---------------------------------------------------------

PhasePoint move_along(const PhasePoint& p, const FlavorSpec& spec, const MatC& x, double t) {
  PhasePoint q = p;
  MatC& c = q[spec.component];
  switch (spec.side) {
    case Side::left: c = mat_exp(x * cplx(t)) * c; break;
    case Side::right: c = c * mat_exp(x * cplx(t)); break;
    case Side::additive: c = c + x * cplx(t); break;
  }
  return q;
}

double fd_derivative(const Observable& f, const PhasePoint& p, Flavor fl, const MatC& x, double step) {
  const FlavorSpec spec = flavor_spec(p.space, fl);
  double h = step > 0 ? step : (f.fd_step() > 0 ? f.fd_step() : tolerances().fd_step);
  auto central = [&](double hh) { return (f(move_along(p, spec, x, hh)) - f(move_along(p, spec, x, -hh))) / (2 * hh); };
  const double d1 = central(h), d2 = central(h / 2);
  return (4.0 * d2 - d1) / 3.0;
}

MatC fd_gradient(const Observable& f, const PhasePoint& p, Flavor fl, double step) {
  const FlavorSpec spec = flavor_spec(p.space, fl);
  const std::size_t n = p.n();
  const auto dir = subspace_basis(n, spec.direction, p.variant);
  const auto tgt = subspace_basis(n, spec.target, p.variant);
  const std::size_t d = dir.size();
  if (tgt.size() != d) throw Error(ErrorCode::ContractViolation, "fd_gradient: dimension mismatch");
  MatC gram(d), rhs(d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b)
      gram(a, b) = spec.imaginary_form ? form_I(dir[a], tgt[b]) : form_G(dir[a], tgt[b]);
    rhs(a, 0) = fd_derivative(f, p, fl, dir[a], step);
  }
  const MatC coef = inverse(gram) * rhs;
  MatC y(n);
  for (std::size_t b = 0; b < d; ++b) y += tgt[b] * cplx(coef(b, 0).real());
  return y;
}

MatC derivative(const Observable& f, const PhasePoint& p, Flavor fl) {
  if (f.has_analytic()) return f.analytic(p, fl);
  return fd_gradient(f, p, fl);
}

double fd_validation_error(const Observable& f, const PhasePoint& p, Flavor fl) {
  const MatC a = f.analytic(p, fl);
  const MatC b = fd_gradient(f, p, fl);
  return dist_fro(a, b) / std::max(1.0, a.norm_fro());
}

double invariance_defect(const Observable& f, const PhasePoint& p0) {
  const PhasePoint p = lift(p0);
  switch (p.space) {
    case Space::cotangent: {
      const MatC n1 = derivative(f, p, Flavor::nabla1);
      const MatC d2 = derivative(f, p, Flavor::d2);
      return (p[0].adjoint() * n1 * p[0] - n1 - commutator(p[1], d2)).norm_fro();
    }
    case Space::heisenberg_GB: {
      const MatC d1 = derivative(f, p, Flavor::D1), d1p = derivative(f, p, Flavor::D1p);
      const MatC d2p = derivative(f, p, Flavor::D2p);
      return (d1 - d1p + proj_B(p[1] * d2p * inverse(p[1]))).norm_fro();
    }
    case Space::quasi:
      return (derivative(f, p, Flavor::nabla1) - derivative(f, p, Flavor::nabla1p) + derivative(f, p, Flavor::nabla2) -
              derivative(f, p, Flavor::nabla2p))
          .norm_fro();
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "invariance_defect: unsupported space");
}

}  // namespace dsim
