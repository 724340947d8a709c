#include "minfind/minimize.hpp"

#include <set>

#include "minfind/diagram.hpp"
#include "minfind/error.hpp"
#include "minfind/sentences.hpp"

namespace minfind {

std::string_view to_string(Claim c) {
  switch (c) {
    case Claim::Unminimized: return "unminimized";
    case Claim::IMinimal: return "i-minimal";
    case Claim::AMinimal: return "a-minimal";
    case Claim::AThenI: return "a-then-i";
    case Claim::Core: return "core";
    case Claim::PossiblyNonMinimal: return "possibly-non-minimal";
  }
  return "unknown";
}

namespace {

// Runs `step` inside a push frame; the frame is popped unless the solver died.
template <typename Step>
auto in_frame(SolverSession& session, Step step) {
  session.push();
  struct Popper {
    SolverSession& s;
    ~Popper() {
      if (s.alive() && s.depth() > 0) s.pop();
    }
  } popper{session};
  return step();
}

// Generic descent: while `attempt` finds a model, adopt it.
template <typename Build>
MinimizationReport descend(BoundedContext& ctx, const FiniteModel& start, Claim success, Build build) {
  MinimizationReport report;
  report.input = start;
  report.output = start;
  const auto calls_before = ctx.session.check_sat_calls();
  for (;;) {
    auto verdict = in_frame(ctx.session, [&] {
      auto [extension, sentences] = build(report.output);
      ctx.session.declare(extension);
      ctx.session.assert_formulas(sentences);
      auto r = ctx.session.check_sat();
      if (r == SatResult::Sat) report.output = ctx.read(ctx.session);
      return r;
    });
    if (verdict == SatResult::Unknown) {
      report.claim = Claim::PossiblyNonMinimal;
      break;
    }
    if (verdict == SatResult::Unsat) {
      report.claim = success;
      break;
    }
    ++report.iterations;
  }
  report.check_sat_calls = ctx.session.check_sat_calls() - calls_before;
  return report;
}

std::shared_ptr<const Signature> user_signature_of(const Theory& bounded) {
  return std::make_shared<const Signature>(bounded.user_signature());
}

void require_bounded(const Theory& t) {
  if (!t.is_bounded()) throw LogicError("minimization needs a bounded theory");
}

}  // namespace

SolverSession open_bounded_session(const Theory& bounded, const SolverConfig& config) {
  SolverSession session(config, bounded.signature);
  for (const auto& a : bounded.axioms)
    if (a.provenance == Provenance::Bounding) session.assert_formula(a.formula);
  for (const auto& [sort, constants] : bounded.bounding) session.close_sort(sort, constants);
  for (const auto& a : bounded.axioms)
    if (a.provenance != Provenance::Bounding) session.assert_formula(a.formula);
  return session;
}

ModelReader bounding_reader(const Theory& bounded, std::shared_ptr<const Signature> user_signature) {
  ConstantInventory inventory(bounded.bounding.begin(), bounded.bounding.end());
  return [inventory, user_signature](SolverSession& s) { return scrape_model(s, user_signature, inventory); };
}

FiniteModel prepare_model(const Theory& bounded, const FiniteModel& m) {
  require_bounded(bounded);
  auto user = bounded.user_signature();
  if (!(m.signature().user_part() == user)) throw ModelError("model signature differs from the theory's");
  ConstantInventory inventory(bounded.bounding.begin(), bounded.bounding.end());
  auto adopted = adopt_inventory(m, inventory);
  for (const auto& a : bounded.axioms)
    if (!eval(adopted, a.formula)) throw ModelError("model does not satisfy axiom " + std::string(to_string(a.provenance)) +
                                                    " #" + std::to_string(&a - bounded.axioms.data() + 1));
  return adopted;
}

MinimizationReport i_minimize(BoundedContext& ctx, const FiniteModel& m) {
  return descend(ctx, m, Claim::IMinimal, [](const FiniteModel& p) {
    return std::pair{flip_signature(p), std::vector<Formula>{flip_sentence(p)}};
  });
}

MinimizationReport a_minimize(BoundedContext& ctx, const FiniteModel& m) {
  return descend(ctx, m, Claim::AMinimal, [](const FiniteModel& p) {
    auto to = hom_to_sentence(p);
    return std::pair{to.extension, std::vector<Formula>{to.sentence, avoid_sentence(p)}};
  });
}

MinimizationReport minimize_both(BoundedContext& ctx, const FiniteModel& m) {
  auto a = a_minimize(ctx, m);
  if (a.claim == Claim::PossiblyNonMinimal) return a;
  auto i = i_minimize(ctx, a.output);
  i.input = m;
  i.iterations += a.iterations;
  i.check_sat_calls += a.check_sat_calls;
  if (i.claim == Claim::IMinimal) i.claim = Claim::AThenI;
  return i;
}

namespace {

template <typename Run>
MinimizationReport standalone(const Theory& bounded, const FiniteModel& m, const SolverConfig& config, Run run) {
  auto start = prepare_model(bounded, m);
  auto session = open_bounded_session(bounded, config);
  BoundedContext ctx{session, user_signature_of(bounded), nullptr};
  ctx.read = bounding_reader(bounded, ctx.user_signature);
  auto report = run(ctx, start);
  report.input = m;
  return report;
}

}  // namespace

MinimizationReport i_minimize(const Theory& bounded, const FiniteModel& m, const SolverConfig& config) {
  return standalone(bounded, m, config, [](BoundedContext& c, const FiniteModel& s) { return i_minimize(c, s); });
}

MinimizationReport a_minimize(const Theory& bounded, const FiniteModel& m, const SolverConfig& config) {
  return standalone(bounded, m, config, [](BoundedContext& c, const FiniteModel& s) { return a_minimize(c, s); });
}

MinimizationReport minimize_both(const Theory& bounded, const FiniteModel& m, const SolverConfig& config) {
  return standalone(bounded, m, config, [](BoundedContext& c, const FiniteModel& s) { return minimize_both(c, s); });
}

// ------------------------------------------------------------------- core

MinimizationReport compute_core(const FiniteModel& m, const SolverConfig& config) {
  ConstantInventory inventory;
  for (const auto& s : m.sorts())
    for (int i = 1; i <= m.size(s); ++i) inventory[s].push_back(fresh_constant_name(s, i));
  FiniteModel p = adopt_inventory(m, inventory);

  Signature sig = m.signature();
  sig.merge(naming_signature(p));
  sig.merge(endo_signature(p));
  SolverSession session(config, sig);

  MinimizationReport report;
  report.input = m;
  for (;;) {
    std::optional<std::map<std::string, std::vector<Element>>> image;
    auto verdict = in_frame(session, [&] {
      if (config.expand_quantifiers) {
        std::map<std::string, std::vector<std::string>> domains;
        for (const auto& s : p.sorts()) domains[s] = p.element_names(s);
        session.assert_formula(closed_diagram(p));
        session.assert_formula(expand_quantifiers(ehom_sentence(p), domains));
      } else {
        session.assert_formula(ehom_sentence(p));
      }
      auto r = session.check_sat();
      if (r != SatResult::Sat) return r;
      std::map<std::string, std::vector<Element>> img;
      for (const auto& s : p.sorts()) {
        std::vector<Formula> queries;
        for (Element a = 0; a < p.size(s); ++a)
          for (Element b = 0; b < p.size(s); ++b)
            queries.push_back(Formula::eq(Term::app(hom_symbol_name(s), {Term::constant(p.element_name(s, a), s)}, s),
                                          Term::constant(p.element_name(s, b), s)));
        auto answers = session.get_values_bool(queries);
        std::set<Element> targets;
        for (Element a = 0; a < p.size(s); ++a) {
          int hits = 0;
          for (Element b = 0; b < p.size(s); ++b)
            if (answers[static_cast<std::size_t>(a * p.size(s) + b)]) {
              targets.insert(b);
              ++hits;
            }
          if (hits != 1) throw ModelError("endomorphism value of " + p.element_name(s, a) + " is not unique");
        }
        img[s].assign(targets.begin(), targets.end());
      }
      image = std::move(img);
      return r;
    });
    if (verdict == SatResult::Unknown) {
      report.claim = Claim::PossiblyNonMinimal;
      break;
    }
    if (verdict == SatResult::Unsat) {
      report.claim = Claim::Core;
      break;
    }
    auto next = induced_submodel(p, *image);
    if (next.total_size() >= p.total_size()) throw ModelError("endomorphism image did not shrink the model");
    p = std::move(next);
    ++report.iterations;
  }
  report.output = p;
  report.check_sat_calls = session.check_sat_calls();
  return report;
}

}  // namespace minfind
