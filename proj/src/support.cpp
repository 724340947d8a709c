#include "minfind/support.hpp"

#include <deque>

#include "minfind/error.hpp"
#include "minfind/hom.hpp"
#include "minfind/sentences.hpp"

namespace minfind {

std::string_view to_string(MinimizeMode m) {
  switch (m) {
    case MinimizeMode::None: return "none";
    case MinimizeMode::I: return "i";
    case MinimizeMode::A: return "a";
    case MinimizeMode::Both: return "both";
  }
  return "unknown";
}

std::string_view to_string(StreamStatus s) {
  switch (s) {
    case StreamStatus::Exhausted: return "exhausted";
    case StreamStatus::Truncated: return "truncated";
    case StreamStatus::Incomplete: return "incomplete";
  }
  return "unknown";
}

namespace {

bool emit(SupportStream& out, const StreamOptions& options, MinimizationReport report) {
  out.avoid.push_back(avoid_sentence(report.output));
  if (options.on_model) options.on_model(report);
  out.models.push_back(std::move(report));
  if (options.max_models && out.models.size() >= *options.max_models) {
    out.status = StreamStatus::Truncated;
    return false;
  }
  return true;
}

}  // namespace

SupportStream set_of_support(const Theory& t, const Profile& p, const SolverConfig& config,
                             const StreamOptions& options) {
  auto bounded = bound_theory(t, p);
  auto session = open_bounded_session(bounded, config);
  BoundedContext ctx{session, std::make_shared<const Signature>(bounded.user_signature()), nullptr};
  ctx.read = bounding_reader(bounded, ctx.user_signature);

  SupportStream out;
  for (;;) {
    auto verdict = session.check_sat();
    if (verdict == SatResult::Unsat) break;
    if (verdict == SatResult::Unknown) {
      out.status = StreamStatus::Incomplete;
      break;
    }
    const auto before = session.check_sat_calls() - 1;
    auto found = ctx.read(session);
    MinimizationReport report;
    switch (options.mode) {
      case MinimizeMode::None:
        report.input = found;
        report.output = found;
        break;
      case MinimizeMode::I: report = i_minimize(ctx, found); break;
      case MinimizeMode::A: report = a_minimize(ctx, found); break;
      case MinimizeMode::Both: report = minimize_both(ctx, found); break;
    }
    report.check_sat_calls = session.check_sat_calls() - before;
    if (report.claim == Claim::PossiblyNonMinimal) {
      emit(out, options, std::move(report));
      out.status = StreamStatus::Incomplete;
      break;
    }
    if (!emit(out, options, std::move(report))) break;
    session.assert_formula(out.avoid.back());
  }
  out.check_sat_calls = session.check_sat_calls();
  return out;
}

// --------------------------------------------------------------------- ET

namespace {

struct Incomplete {};

class EnumeratedTypes {
 public:
  EnumeratedTypes(const Theory& t, const Profile& p, const SolverConfig& config)
      : bounded_(bound_theory(t, p)),
        config_(config),
        user_(std::make_shared<const Signature>(bounded_.user_signature())),
        base_(open_bounded_session(bounded_, config)) {}

  // A model of T plus `extra` from an enumerated-sort session, i-minimized
  // there; nullopt when T plus `extra` is unsatisfiable.
  std::optional<FiniteModel> first(const std::vector<Formula>& extra) {
    std::map<std::string, int> sizes;
    bool sat = false;
    base_.push();
    base_.assert_formulas(extra);
    auto r = base_.check_sat();
    if (r == SatResult::Unknown) throw Incomplete{};
    if (r == SatResult::Sat) {
      sat = true;
      sizes = scrape_domain_sizes(base_, {bounded_.bounding.begin(), bounded_.bounding.end()});
    }
    base_.pop();
    if (!sat) return std::nullopt;

    std::map<std::string, std::vector<std::string>> values;
    for (const auto& [sort, n] : sizes)
      for (int i = 1; i <= n; ++i) values[sort].push_back(enum_value_name(sort, i));
    SolverSession session(config_, Signature{});
    for (const auto& sort : bounded_.signature.sorts())
      if (values.count(sort) != 0) session.declare_enum_sort(sort, values.at(sort));
    session.declare(bounded_.signature);
    for (const auto& [sort, names] : values) session.close_sort(sort, names);
    session.assert_formulas(bounded_.formulas());
    session.assert_formulas(extra);
    auto verdict = session.check_sat();
    calls_ += session.check_sat_calls();
    if (verdict == SatResult::Unknown) throw Incomplete{};
    if (verdict == SatResult::Unsat)
      throw ModelError("the theory with enumerated sorts is unsatisfiable although the uninterpreted one is not");

    BoundedContext ctx{session, user_, [this, values](SolverSession& s) { return read_enumerated(s, values); }};
    auto found = ctx.read(session);
    const auto before = session.check_sat_calls();
    auto report = i_minimize(ctx, found);
    calls_ += session.check_sat_calls() - before;
    if (report.claim == Claim::PossiblyNonMinimal) throw Incomplete{};
    return adopt_inventory(report.output, {bounded_.bounding.begin(), bounded_.bounding.end()});
  }

  // Avoid-cone descent from `worklist`; returns the final head.
  FiniteModel last(const std::vector<Formula>& emitted, std::deque<FiniteModel> worklist, std::size_t& steps) {
    for (;;) {
      auto extra = emitted;
      for (const auto& m : worklist) extra.push_back(avoid_sentence(m));
      auto next = first(extra);
      if (!next) return worklist.front();
      ++steps;
      std::deque<FiniteModel> kept{*next};
      for (const auto& m : worklist)
        if (!find_hom(*next, m)) kept.push_back(m);
      worklist = std::move(kept);
    }
  }

  std::size_t calls() const { return calls_ + base_.check_sat_calls(); }

 private:
  FiniteModel read_enumerated(SolverSession& s, const std::map<std::string, std::vector<std::string>>& values) {
    FiniteModel m(user_, [&] {
      std::map<std::string, int> sizes;
      for (const auto& [sort, v] : values) sizes[sort] = static_cast<int>(v.size());
      return sizes;
    }());
    for (const auto& [sort, v] : values) m.set_element_names(sort, v);
    auto element_of = [&](const std::string& sort, const std::string& value) {
      const auto& v = values.at(sort);
      auto it = std::find(v.begin(), v.end(), value);
      if (it == v.end()) throw ModelError("solver returned " + value + ", not a value of " + sort);
      return static_cast<Element>(it - v.begin());
    };
    for (const auto& d : user_->symbols()) {
      auto tuples = m.tuples(d.args);
      std::vector<Term> terms;
      std::vector<Formula> atoms;
      for (const auto& t : tuples) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < t.size(); ++i) args.push_back(Term::constant(values.at(d.args[i])[t[i]], d.args[i]));
        if (d.is_predicate()) {
          atoms.push_back(Formula::pred(d.name, std::move(args)));
        } else {
          terms.push_back(Term::app(d.name, std::move(args), d.result));
        }
      }
      if (d.is_predicate()) {
        auto answers = s.get_values_bool(atoms);
        for (std::size_t k = 0; k < tuples.size(); ++k) m.set_predicate(d.name, tuples[k], answers[k]);
      } else {
        auto answers = s.get_values(terms);
        for (std::size_t k = 0; k < tuples.size(); ++k) m.set_function(d.name, tuples[k], element_of(d.result, answers[k]));
      }
    }
    return m;
  }

  Theory bounded_;
  SolverConfig config_;
  std::shared_ptr<const Signature> user_;
  SolverSession base_;
  std::size_t calls_ = 0;
};

}  // namespace

SupportStream et_stream(const Theory& t, const Profile& p, const SolverConfig& config, const StreamOptions& options) {
  EnumeratedTypes et(t, p, config);
  SupportStream out;
  try {
    for (;;) {
      const auto before = et.calls();
      auto m = et.first(out.avoid);
      if (!m) break;
      MinimizationReport report;
      report.input = *m;
      report.output = et.last(out.avoid, {*m}, report.iterations);
      report.claim = Claim::AMinimal;
      report.check_sat_calls = et.calls() - before;
      if (!emit(out, options, std::move(report))) break;
    }
  } catch (const Incomplete&) {
    out.status = StreamStatus::Incomplete;
  }
  out.check_sat_calls = et.calls();
  return out;
}

}  // namespace minfind
