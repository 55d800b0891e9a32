#include "pterm/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pterm/ast.hpp"
#include "pterm/errors.hpp"
#include "pterm/lowering.hpp"

namespace pterm::io {

using Json = nlohmann::ordered_json;

namespace {

std::string ptr(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string ptr(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

const Json& field(const Json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw FormatError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(ptr(at, key), "missing field");
  return *it;
}

Rational rational(const Json& j, const std::string& at) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(at, std::string("malformed rational: ") + e.what());
  }
  throw FormatError(at, "expected a rational string \"p/q\"");
}

std::optional<Rational> rational_or_null(const Json& j, const std::string& at) {
  if (j.is_null()) return std::nullopt;
  return rational(j, at);
}

std::string string_field(const Json& j, const std::string& key, const std::string& at) {
  const Json& v = field(j, key, at);
  if (!v.is_string()) throw FormatError(ptr(at, key), "expected a string");
  return v.get<std::string>();
}

const Json& array_field(const Json& j, const std::string& key, const std::string& at) {
  const Json& v = field(j, key, at);
  if (!v.is_array()) throw FormatError(ptr(at, key), "expected an array");
  return v;
}

Json rational_json(const Rational& r) { return r.to_string(); }

Json nullable(const std::optional<Rational>& r) { return r ? Json(r->to_string()) : Json(nullptr); }

// ---- names ----

LocId location(const PCFG& p, const Json& j, const std::string& at) {
  if (!j.is_string()) throw FormatError(at, "expected a location name");
  auto l = p.location(j.get<std::string>());
  if (!l) throw FormatError(at, "unknown location '" + j.get<std::string>() + "'");
  return *l;
}

// ---- linear expressions ----

LinExpr linexpr(const Json& j, std::span<const std::string> vars, const std::string& at) {
  if (!j.is_object()) throw FormatError(at, "expected a linear expression object");
  LinExpr e;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Rational c = rational(it.value(), ptr(at, it.key()));
    if (it.key() == "const") {
      e.set_constant(c);
      continue;
    }
    auto v = std::find(vars.begin(), vars.end(), it.key());
    if (v == vars.end()) throw FormatError(ptr(at, it.key()), "unknown variable '" + it.key() + "'");
    e.add_term(static_cast<VarId>(v - vars.begin()), c);
  }
  return e;
}

Json linexpr_json(const LinExpr& e, std::span<const std::string> vars) {
  Json j = Json::object();
  for (const auto& [v, c] : e.coeffs()) j[vars[static_cast<std::size_t>(v)]] = rational_json(c);
  j["const"] = rational_json(e.constant());
  return j;
}

const char* rel_name(Rel r) { return r == Rel::Le ? "<=" : (r == Rel::Lt ? "<" : "=="); }

LinConstraint constraint(const Json& j, std::span<const std::string> vars, const std::string& at) {
  const std::string rel = string_field(j, "rel", at);
  Rel r;
  if (rel == "<=")
    r = Rel::Le;
  else if (rel == "<")
    r = Rel::Lt;
  else if (rel == "==")
    r = Rel::Eq;
  else
    throw FormatError(ptr(at, "rel"), "relation must be one of <=, <, ==");
  return {linexpr(field(j, "lhs", at), vars, ptr(at, "lhs")), r};
}

Json constraint_json(const LinConstraint& c, std::span<const std::string> vars) {
  return Json{{"lhs", linexpr_json(c.lhs, vars)}, {"rel", rel_name(c.rel)}};
}

Predicate predicate(const Json& j, std::span<const std::string> vars, const std::string& at) {
  if (!j.is_array() || j.empty()) throw FormatError(at, "guard must be a nonempty array of disjuncts");
  std::vector<Polyhedron> ds;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string dat = ptr(at, i);
    if (!j[i].is_array()) throw FormatError(dat, "disjunct must be an array of constraints");
    Polyhedron poly;
    for (std::size_t k = 0; k < j[i].size(); ++k) poly.constraints.push_back(constraint(j[i][k], vars, ptr(dat, k)));
    ds.push_back(std::move(poly));
  }
  return Predicate(std::move(ds));
}

Json predicate_json(const Predicate& p, std::span<const std::string> vars) {
  Json j = Json::array();
  for (const auto& d : p.disjuncts()) {
    Json poly = Json::array();
    for (const auto& c : d.constraints) poly.push_back(constraint_json(c, vars));
    j.push_back(std::move(poly));
  }
  return j;
}

// ---- distributions ----

DistributionSpec distribution(const Json& j, const std::string& at) {
  const std::string kind = string_field(j, "kind", at);
  const Json& params = field(j, "params", at);
  const std::string pat = ptr(at, "params");
  const Rational mean = rational(field(j, "mean", at), ptr(at, "mean"));
  const Json& support = array_field(j, "support", at);
  if (support.size() != 2) throw FormatError(ptr(at, "support"), "support must be [lo, hi]");
  const auto lo = rational_or_null(support[0], ptr(ptr(at, "support"), 0));
  const auto hi = rational_or_null(support[1], ptr(ptr(at, "support"), 1));

  DistributionSpec d;
  if (kind == "normal") {
    d = DistributionSpec::normal(rational(field(params, "mean", pat), ptr(pat, "mean")),
                                 rational(field(params, "stddev", pat), ptr(pat, "stddev")));
  } else if (kind == "uniform") {
    d = DistributionSpec::uniform(rational(field(params, "lo", pat), ptr(pat, "lo")),
                                  rational(field(params, "hi", pat), ptr(pat, "hi")));
  } else if (kind == "bernoulli") {
    d = DistributionSpec::bernoulli(rational(field(params, "p", pat), ptr(pat, "p")));
  } else if (kind == "discrete") {
    const Json& outs = array_field(params, "outcomes", pat);
    std::vector<std::pair<Rational, Rational>> o;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string oat = ptr(ptr(pat, "outcomes"), i);
      if (!outs[i].is_array() || outs[i].size() != 2) throw FormatError(oat, "outcome must be [value, probability]");
      o.emplace_back(rational(outs[i][0], ptr(oat, 0)), rational(outs[i][1], ptr(oat, 1)));
    }
    d = DistributionSpec::discrete(std::move(o));
  } else if (kind == "custom") {
    d = DistributionSpec::custom(string_field(params, "sampler", pat), mean, lo, hi);
  } else {
    throw FormatError(ptr(at, "kind"), "unknown distribution kind '" + kind + "'");
  }
  d.mean = mean;
  d.support_lo = lo;
  d.support_hi = hi;
  if (auto problems = d.problems(); !problems.empty()) throw FormatError(at, problems.front());
  return d;
}

Json distribution_json(const DistributionSpec& d) {
  Json params = std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NormalParams>) {
          return Json{{"mean", rational_json(p.mean)}, {"stddev", rational_json(p.stddev)}};
        } else if constexpr (std::is_same_v<T, UniformParams>) {
          return Json{{"lo", rational_json(p.lo)}, {"hi", rational_json(p.hi)}};
        } else if constexpr (std::is_same_v<T, DiscreteParams>) {
          Json outs = Json::array();
          for (const auto& [v, q] : p.outcomes) outs.push_back(Json::array({rational_json(v), rational_json(q)}));
          return Json{{"outcomes", outs}};
        } else if constexpr (std::is_same_v<T, BernoulliParams>) {
          return Json{{"p", rational_json(p.p)}};
        } else {
          return Json{{"sampler", p.sampler_id}};
        }
      },
      d.params);
  return Json{{"kind", kind_name(d.kind())},
              {"params", params},
              {"mean", rational_json(d.mean)},
              {"support", Json::array({nullable(d.support_lo), nullable(d.support_hi)})}};
}

// ---- updates and transitions ----

VarId variable(const PCFG& p, const Json& j, const std::string& at) {
  if (!j.is_string()) throw FormatError(at, "expected a variable name");
  auto v = p.variable(j.get<std::string>());
  if (!v) throw FormatError(at, "unknown variable '" + j.get<std::string>() + "'");
  return *v;
}

UpdateElement update(const PCFG& p, const Json& j, const std::string& at) {
  const std::string kind = string_field(j, "kind", at);
  if (kind == "none") return NoUpdate{};
  if (kind == "assign") {
    ExprUpdate u{variable(p, field(j, "target", at), ptr(at, "target")),
                 linexpr(field(j, "expr", at), p.variables, ptr(at, "expr")),
                 std::nullopt};
    if (auto it = j.find("sample"); it != j.end() && !it->is_null()) {
      const std::string sat = ptr(at, "sample");
      u.sample = SampleTerm{rational(field(*it, "coeff", sat), ptr(sat, "coeff")),
                            distribution(field(*it, "dist", sat), ptr(sat, "dist"))};
    }
    return u;
  }
  if (kind == "nondet")
    return NondetUpdate{variable(p, field(j, "target", at), ptr(at, "target")),
                        rational(field(j, "lo", at), ptr(at, "lo")), rational(field(j, "hi", at), ptr(at, "hi"))};
  throw FormatError(ptr(at, "kind"), "update kind must be none, assign or nondet");
}

Json update_json(const UpdateElement& u, const PCFG& p) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoUpdate>) {
          return Json{{"kind", "none"}};
        } else if constexpr (std::is_same_v<T, ExprUpdate>) {
          Json j{{"kind", "assign"}, {"target", p.variables[static_cast<std::size_t>(x.target)]},
                 {"expr", linexpr_json(x.base, p.variables)}};
          if (x.sample)
            j["sample"] = Json{{"coeff", rational_json(x.sample->coefficient)}, {"dist", distribution_json(x.sample->dist)}};
          return j;
        } else {
          return Json{{"kind", "nondet"}, {"target", p.variables[static_cast<std::size_t>(x.target)]},
                      {"lo", rational_json(x.lo)}, {"hi", rational_json(x.hi)}};
        }
      },
      u);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("", std::string("invalid JSON: ") + e.what());
  }
}

std::vector<std::string> names(const Json& j, const std::string& key) {
  const Json& a = array_field(j, key, "");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_string()) throw FormatError(ptr(ptr("", key), i), "expected a string");
    out.push_back(a[i].get<std::string>());
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

PCFG pcfg_from_json(std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw FormatError("", "expected an object");
  PCFG p;
  p.variables = names(j, "variables");
  p.locations = names(j, "locations");
  for (const auto& v : p.variables)
    if (v == "const") throw FormatError("/variables", "'const' is reserved and cannot name a variable");
  p.init = location(p, field(j, "init", ""), "/init");
  p.terminal = location(p, field(j, "terminal", ""), "/terminal");
  const Json& ts = array_field(j, "transitions", "");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string at = ptr("/transitions", i);
    const Json& t = ts[i];
    Transition tr;
    tr.id = string_field(t, "id", at);
    tr.source = location(p, field(t, "source", at), ptr(at, "source"));
    const std::string kind = string_field(t, "kind", at);
    if (kind == "pb") {
      tr.kind = ProbBranch{location(p, field(t, "dest1", at), ptr(at, "dest1")), rational(field(t, "p1", at), ptr(at, "p1")),
                           location(p, field(t, "dest2", at), ptr(at, "dest2")), rational(field(t, "p2", at), ptr(at, "p2"))};
    } else if (kind == "npb") {
      tr.kind = GuardedStep{location(p, field(t, "dest", at), ptr(at, "dest")),
                            predicate(field(t, "guard", at), p.variables, ptr(at, "guard")),
                            update(p, field(t, "update", at), ptr(at, "update"))};
    } else {
      throw FormatError(ptr(at, "kind"), "transition kind must be pb or npb");
    }
    p.transitions.push_back(std::move(tr));
  }
  return p;
}

std::string pcfg_to_json(const PCFG& p) {
  Json ts = Json::array();
  auto loc = [&](LocId l) { return p.locations[static_cast<std::size_t>(l)]; };
  for (const auto& t : p.transitions) {
    Json j{{"id", t.id}, {"source", loc(t.source)}};
    if (t.is_pb()) {
      const auto& b = t.pb();
      j["kind"] = "pb";
      j["dest1"] = loc(b.dest1);
      j["p1"] = rational_json(b.p1);
      j["dest2"] = loc(b.dest2);
      j["p2"] = rational_json(b.p2);
    } else {
      const auto& s = t.step();
      j["kind"] = "npb";
      j["dest"] = loc(s.dest);
      j["guard"] = predicate_json(s.guard, p.variables);
      j["update"] = update_json(s.update, p);
    }
    ts.push_back(std::move(j));
  }
  return dump(Json{{"variables", p.variables},
                   {"locations", p.locations},
                   {"init", loc(p.init)},
                   {"terminal", loc(p.terminal)},
                   {"transitions", ts}});
}

Invariant invariant_from_json(std::string_view text, const PCFG& p) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw FormatError("", "expected an object keyed by location");
  Invariant inv = Invariant::trivial(p);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string at = ptr("", it.key());
    const LocId l = location(p, Json(it.key()), at);
    if (!it->is_array()) throw FormatError(at, "expected an array of constraints");
    Polyhedron& poly = inv.at[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& c = (*it)[i];
      if (c.is_string()) {
        try {
          const Polyhedron parsed = frontend::parse_polyhedron(c.get<std::string>(), p.variables);
          poly.constraints.insert(poly.constraints.end(), parsed.constraints.begin(), parsed.constraints.end());
        } catch (const frontend::ParseError& e) {
          throw FormatError(ptr(at, i), e.what());
        }
      } else {
        poly.constraints.push_back(constraint(c, p.variables, ptr(at, i)));
      }
    }
  }
  return inv;
}

std::string invariant_to_json(const Invariant& inv, const PCFG& p) {
  Json j = Json::object();
  for (LocId l = 0; l < p.num_locations(); ++l) {
    const Polyhedron& poly = inv[l];
    if (poly.constraints.empty()) continue;
    Json a = Json::array();
    for (const auto& c : poly.constraints) a.push_back(to_string(c, p.variables));
    j[p.locations[static_cast<std::size_t>(l)]] = std::move(a);
  }
  return dump(j);
}

Certificate certificate_from_json(std::string_view text, const PCFG& p) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw FormatError("", "expected an object");
  Certificate c;
  const Json& dim = field(j, "dimension", "");
  if (!dim.is_number_integer() || dim.get<int>() < 0) throw FormatError("/dimension", "expected a nonnegative integer");
  c.lem.dimension = dim.get<int>();
  c.lem.components.assign(static_cast<std::size_t>(p.num_locations()), {});
  const Json& comps = field(j, "components", "");
  if (!comps.is_object()) throw FormatError("/components", "expected an object keyed by location");
  std::vector<bool> seen(static_cast<std::size_t>(p.num_locations()), false);
  for (auto it = comps.begin(); it != comps.end(); ++it) {
    const std::string at = ptr("/components", it.key());
    const LocId l = location(p, Json(it.key()), at);
    if (!it->is_array()) throw FormatError(at, "expected an array of linear expressions");
    auto& vec = c.lem.components[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < it->size(); ++i) vec.push_back(linexpr((*it)[i], p.variables, ptr(at, i)));
    seen[static_cast<std::size_t>(l)] = true;
  }
  for (LocId l = 0; l < p.num_locations(); ++l)
    if (!seen[static_cast<std::size_t>(l)])
      throw FormatError(ptr("/components", p.locations[static_cast<std::size_t>(l)]), "missing location");
  const Json& levels = field(j, "levels", "");
  if (!levels.is_object()) throw FormatError("/levels", "expected an object keyed by transition id");
  for (auto it = levels.begin(); it != levels.end(); ++it) {
    if (!it->is_number_integer()) throw FormatError(ptr("/levels", it.key()), "expected an integer level");
    c.levels[it.key()] = it->get<int>();
  }
  c.shift = rational(field(j, "shift", ""), "/shift");
  if (c.shift.sign() < 0) throw FormatError("/shift", "shift must be nonnegative");
  const std::string mode = string_field(j, "mode", "");
  if (mode == mode_name(CertificateMode::BSPComplete))
    c.mode = CertificateMode::BSPComplete;
  else if (mode == mode_name(CertificateMode::GeneralSound))
    c.mode = CertificateMode::GeneralSound;
  else
    throw FormatError("/mode", "unknown mode '" + mode + "'");
  return c;
}

std::string certificate_to_json(const Certificate& c, const PCFG& p) {
  Json comps = Json::object();
  for (LocId l = 0; l < p.num_locations(); ++l) {
    Json a = Json::array();
    if (static_cast<std::size_t>(l) < c.lem.components.size())
      for (const auto& e : c.lem.components[static_cast<std::size_t>(l)]) a.push_back(linexpr_json(e, p.variables));
    comps[p.locations[static_cast<std::size_t>(l)]] = std::move(a);
  }
  Json levels = Json::object();
  for (const auto& t : p.transitions)
    if (auto it = c.levels.find(t.id); it != c.levels.end()) levels[t.id] = it->second;
  for (const auto& [id, lev] : c.levels)
    if (!levels.contains(id)) levels[id] = lev;
  return dump(Json{{"dimension", c.lem.dimension},
                   {"components", comps},
                   {"levels", levels},
                   {"shift", rational_json(c.shift)},
                   {"mode", mode_name(c.mode)}});
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
}

PCFG load_pcfg(const std::filesystem::path& path) { return pcfg_from_json(read_file(path)); }
void dump_pcfg(const PCFG& p, const std::filesystem::path& path) { write_file(path, pcfg_to_json(p)); }
Invariant load_invariant(const std::filesystem::path& path, const PCFG& p) { return invariant_from_json(read_file(path), p); }
Certificate load_certificate(const std::filesystem::path& path, const PCFG& p) {
  return certificate_from_json(read_file(path), p);
}
void dump_certificate(const Certificate& c, const PCFG& p, const std::filesystem::path& path) {
  write_file(path, certificate_to_json(c, p));
}

PCFG load_program(const std::filesystem::path& path) {
  if (path.extension() == ".json") return load_pcfg(path);
  return frontend::compile_program(read_file(path));
}

}  // namespace pterm::io
