#include "pterm/dot.hpp"

#include <sstream>

namespace pterm::io {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string update_label(const UpdateElement& u, const PCFG& p) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoUpdate>) {
          return "";
        } else if constexpr (std::is_same_v<T, ExprUpdate>) {
          std::string s = p.variables[static_cast<std::size_t>(x.target)] + " := " + to_string(x.base, p.variables);
          if (x.sample)
            s += " + " + x.sample->coefficient.to_string() + "*" + kind_name(x.sample->dist.kind()) + "(mean " +
                 x.sample->dist.mean.to_string() + ")";
          return s;
        } else {
          return p.variables[static_cast<std::size_t>(x.target)] + " := ndet[" + x.lo.to_string() + ", " +
                 x.hi.to_string() + "]";
        }
      },
      u);
}

}  // namespace

std::string to_dot(const PCFG& p) {
  std::ostringstream os;
  os << "digraph pcfg {\n  rankdir=TB;\n";
  for (LocId l = 0; l < p.num_locations(); ++l) {
    os << "  n" << l << " [label=\"" << escape(p.locations[static_cast<std::size_t>(l)]) << "\"";
    if (l == p.terminal) os << ", shape=doublecircle";
    if (l == p.init) os << ", style=bold";
    os << "];\n";
  }
  for (const auto& t : p.transitions) {
    if (t.is_pb()) {
      const auto& b = t.pb();
      os << "  n" << t.source << " -> n" << b.dest1 << " [label=\"" << t.id << ": " << b.p1 << "\", style=dashed];\n";
      os << "  n" << t.source << " -> n" << b.dest2 << " [label=\"" << t.id << ": " << b.p2 << "\", style=dashed];\n";
      continue;
    }
    const auto& s = t.step();
    os << "  n" << t.source << " -> n" << s.dest << " [label=\"" << escape(t.id + ": " + to_string(s.guard, p.variables));
    if (auto u = update_label(s.update, p); !u.empty()) os << "\\n" << escape(u);
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pterm::io
