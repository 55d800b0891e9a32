#include "pterm/lowering.hpp"

#include <algorithm>

namespace pterm::frontend {

namespace {

/// Control-flow edge whose target is not known yet. `path` records the
/// branch choices that led here and fixes the final transition order.
struct OpenEdge {
  LocId source = 0;
  Predicate guard;
  UpdateElement update = NoUpdate{};
  std::vector<int> path;

  bool has_update() const { return !std::holds_alternative<NoUpdate>(update); }
  bool trivial() const { return guard.is_true() && !has_update(); }
};

using Open = std::vector<OpenEdge>;

struct PendingTransition {
  LocId source;
  std::vector<int> path;
  std::variant<ProbBranch, GuardedStep> kind;
};

class Lowering {
 public:
  explicit Lowering(LoweringInfo* info) : info_(info) {}

  PCFG run(const SourceProgram& prog) {
    const LocId init = fresh();
    Open open{{init, Predicate::True(), NoUpdate{}, {}}};
    open = block(prog.body, std::move(open));
    const LocId out = fresh();
    for (auto& e : open) close(e, out);
    pending_.push_back({out, {}, GuardedStep{out, Predicate::True(), NoUpdate{}}});

    PCFG p;
    p.variables = prog.variables;
    for (LocId l = 0; l < num_locations_; ++l) p.locations.push_back(l == out ? "lout" : "l" + std::to_string(l));
    p.init = init;
    p.terminal = out;
    std::stable_sort(pending_.begin(), pending_.end(), [](const auto& a, const auto& b) {
      return a.source != b.source ? a.source < b.source : a.path < b.path;
    });
    for (std::size_t i = 0; i < pending_.size(); ++i)
      p.transitions.push_back({"t" + std::to_string(i), pending_[i].source, std::move(pending_[i].kind)});
    return p;
  }

 private:
  LocId fresh() {
    has_transitions_.push_back(false);
    return num_locations_++;
  }

  void emit(LocId source, std::vector<int> path, std::variant<ProbBranch, GuardedStep> kind) {
    has_transitions_[static_cast<std::size_t>(source)] = true;
    pending_.push_back({source, std::move(path), std::move(kind)});
  }

  /// One transition per guard disjunct; unsatisfiable disjuncts vanish.
  void close(const OpenEdge& e, LocId dest) {
    if (e.guard.is_false()) return;
    for (const auto& d : e.guard.disjuncts()) emit(e.source, e.path, GuardedStep{dest, Predicate(d), e.update});
  }

  /// Turns the open edges into a single program point. Reuses the source
  /// when control already sits at an untouched location.
  std::pair<LocId, std::vector<int>> materialize(Open& open) {
    if (open.size() == 1 && open.front().trivial() && !has_transitions_[static_cast<std::size_t>(open.front().source)])
      return {open.front().source, open.front().path};
    const LocId l = fresh();
    for (auto& e : open) close(e, l);
    return {l, {}};
  }

  static std::vector<int> extend(std::vector<int> path, int branch) {
    path.push_back(branch);
    return path;
  }

  static Open restrict(const Open& open, const Predicate& cond, int branch) {
    Open out;
    for (const auto& e : open) {
      Predicate g = conjoin(e.guard, cond);
      if (g.is_false()) continue;
      out.push_back({e.source, std::move(g), e.update, extend(e.path, branch)});
    }
    return out;
  }

  static Open concat(Open a, Open b) {
    for (auto& e : b) a.push_back(std::move(e));
    return a;
  }

  Open block(const Block& b, Open open) {
    for (const auto& s : b) open = statement(s, std::move(open));
    return open;
  }

  Open assign(Open open, UpdateElement u) {
    const bool clash = std::any_of(open.begin(), open.end(), [](const auto& e) { return e.has_update(); });
    if (clash) {
      auto [l, path] = materialize(open);
      return {{l, Predicate::True(), std::move(u), std::move(path)}};
    }
    for (auto& e : open) e.update = u;
    return open;
  }

  Open statement(const Stmt& s, Open open) {
    return std::visit(
        [&](const auto& n) -> Open {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Skip>) {
            return open;
          } else if constexpr (std::is_same_v<T, Assign>) {
            return assign(std::move(open), ExprUpdate{n.target, n.base, n.sample});
          } else if constexpr (std::is_same_v<T, AssignNondet>) {
            return assign(std::move(open), NondetUpdate{n.target, n.lo, n.hi});
          } else if constexpr (std::is_same_v<T, While>) {
            auto [head, path] = materialize(open);
            if (info_) info_->loop_heads.push_back(head);
            Open at_head{{head, Predicate::True(), NoUpdate{}, path}};
            Open body = block(n.body, restrict(at_head, n.cond, 0));
            for (auto& e : body) close(e, head);
            const std::vector<Predicate> c{n.cond};
            return restrict(at_head, negate_guards_to_dnf(c), 1);
          } else if constexpr (std::is_same_v<T, IfCond>) {
            if (std::any_of(open.begin(), open.end(), [](const auto& e) { return e.has_update(); })) {
              auto [l, path] = materialize(open);
              open = {{l, Predicate::True(), NoUpdate{}, std::move(path)}};
            }
            const std::vector<Predicate> c{n.cond};
            Open t = block(n.then_branch, restrict(open, n.cond, 0));
            Open e = block(n.else_branch, restrict(open, negate_guards_to_dnf(c), 1));
            return concat(std::move(t), std::move(e));
          } else if constexpr (std::is_same_v<T, IfStar>) {
            Open t = open, e = open;
            for (auto& x : t) x.path.push_back(0);
            for (auto& x : e) x.path.push_back(1);
            return concat(block(n.then_branch, std::move(t)), block(n.else_branch, std::move(e)));
          } else {
            auto [l, path] = materialize(open);
            const LocId d1 = fresh(), d2 = fresh();
            emit(l, path, ProbBranch{d1, n.p, d2, Rational(1) - n.p});
            Open t = block(n.then_branch, {{d1, Predicate::True(), NoUpdate{}, {}}});
            Open e = block(n.else_branch, {{d2, Predicate::True(), NoUpdate{}, {}}});
            return concat(std::move(t), std::move(e));
          }
        },
        s.node);
  }

  LoweringInfo* info_;
  LocId num_locations_ = 0;
  std::vector<bool> has_transitions_;
  std::vector<PendingTransition> pending_;
};

}  // namespace

PCFG lower_to_pcfg(const SourceProgram& program, LoweringInfo* info) {
  if (info) info->loop_heads.clear();
  return Lowering(info).run(program);
}

PCFG compile_program(std::string_view text, LoweringInfo* info) { return lower_to_pcfg(parse_program(text), info); }

}  // namespace pterm::frontend
