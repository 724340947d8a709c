#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "minfind/error.hpp"
#include "minfind/hom.hpp"
#include "minfind/logic.hpp"
#include "minfind/minimize.hpp"
#include "minfind/model_io.hpp"
#include "minfind/solver.hpp"
#include "minfind/support.hpp"
#include "minfind/syntax.hpp"

using namespace minfind;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

enum class Format { Text, Json };
enum class Algorithm { Us, Et };

struct RunConfig {
  std::string theory_path;
  std::vector<std::string> bounds;
  std::string solver;
  long timeout_ms = 60000;
  Algorithm algorithm = Algorithm::Us;
  MinimizeMode mode = MinimizeMode::Both;
  std::optional<std::size_t> max_models;
  Format format = Format::Text;
  std::string transcript_path;
  std::string model_path;
  std::string format_name = "text";
  std::string mode_name = "both";
  std::string algorithm_name = "us";

  void resolve() {
    format = format_name == "json" ? Format::Json : Format::Text;
    algorithm = algorithm_name == "et" ? Algorithm::Et : Algorithm::Us;
    static const std::map<std::string, MinimizeMode> modes{
        {"none", MinimizeMode::None}, {"i", MinimizeMode::I}, {"a", MinimizeMode::A}, {"both", MinimizeMode::Both}};
    mode = modes.at(mode_name);
  }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_input(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

int parse_bound_value(const std::string& text) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n < 1) throw UsageError("bad bound " + text);
  return n;
}

// "; bound: N" or "; bound: S=N T=M" in the theory file.
std::vector<std::string> header_bounds(const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto at = line.find("; bound:");
    if (at == std::string::npos) continue;
    std::istringstream words(line.substr(at + 8));
    std::vector<std::string> out;
    for (std::string w; words >> w;) out.push_back(w);
    return out;
  }
  return {};
}

Profile make_profile(const std::vector<std::string>& bounds, const Signature& sig) {
  if (bounds.empty()) throw UsageError("no bound given; use --bound N or --bound SORT=N");
  Profile p;
  for (const auto& b : bounds) {
    auto eq = b.find('=');
    if (eq != std::string::npos) continue;
    p = Profile::uniform(sig, parse_bound_value(b));
  }
  for (const auto& b : bounds) {
    auto eq = b.find('=');
    if (eq == std::string::npos) continue;
    auto sort = b.substr(0, eq);
    if (!sig.is_uninterpreted(sort)) throw UsageError("--bound names unknown sort " + sort);
    p.set(sort, parse_bound_value(b.substr(eq + 1)));
  }
  return p;
}

SolverConfig make_solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  std::string command = cfg.solver;
  if (command.empty())
    if (const char* env = std::getenv("MINFIND_SOLVER"); env != nullptr && *env != '\0') command = env;
  if (!command.empty()) sc.command = SolverConfig::split_command(command);
  if (cfg.timeout_ms < 1) throw UsageError("--timeout must be at least 1 ms");
  sc.timeout = std::chrono::milliseconds(cfg.timeout_ms);
  if (!cfg.transcript_path.empty()) sc.transcript = std::make_shared<Transcript>();
  sc.validate();
  return sc;
}

struct Loaded {
  Theory theory;
  Profile profile;
  Theory bounded;
  SolverConfig solver;
};

Loaded load(const RunConfig& cfg) {
  auto text = read_input(cfg.theory_path);
  Loaded l;
  l.theory = parse_theory(text);
  auto bounds = cfg.bounds.empty() ? header_bounds(text) : cfg.bounds;
  l.profile = make_profile(bounds, l.theory.signature);
  l.bounded = bound_theory(l.theory, l.profile);
  l.solver = make_solver_config(cfg);
  return l;
}

void save_transcript(const RunConfig& cfg, const SolverConfig& sc) {
  if (sc.transcript && !cfg.transcript_path.empty()) sc.transcript->write(cfg.transcript_path);
}

json report_json(const MinimizationReport& r) {
  json j;
  j["claim"] = std::string(to_string(r.claim));
  j["iterations"] = r.iterations;
  j["check_sat_calls"] = r.check_sat_calls;
  return j;
}

void print_report_text(const MinimizationReport& r) {
  std::cout << "claim: " << to_string(r.claim) << "\n"
            << "iterations: " << r.iterations << "\n"
            << "check-sat calls: " << r.check_sat_calls << "\n";
}

// ------------------------------------------------------------------ check

int cmd_check(const RunConfig& cfg) {
  auto l = load(cfg);
  SatResult verdict = SatResult::Unknown;
  std::size_t calls = 0;
  {
    auto session = open_bounded_session(l.bounded, l.solver);
    verdict = session.check_sat();
    calls = session.check_sat_calls();
  }
  save_transcript(cfg, l.solver);
  if (cfg.format == Format::Json) {
    json j;
    j["verdict"] = std::string(to_string(verdict));
    j["check_sat_calls"] = calls;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(verdict) << "\n"
              << "check-sat calls: " << calls << "\n";
  }
  if (verdict == SatResult::Sat) return kExitOk;
  return verdict == SatResult::Unsat ? kExitEmpty : kExitUnknown;
}

// ----------------------------------------------------------------- models

int cmd_models(const RunConfig& cfg) {
  auto l = load(cfg);
  std::size_t index = 0;
  StreamOptions options;
  options.mode = cfg.mode;
  options.max_models = cfg.max_models;
  options.on_model = [&](const MinimizationReport& r) {
    ++index;
    if (cfg.format == Format::Json) {
      json j;
      j["index"] = index;
      j["report"] = report_json(r);
      j["model"] = model_to_json(r.output);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "model " << index << "\n";
      print_report_text(r);
      std::cout << model_to_text(r.output) << "\n";
    }
    std::cout.flush();
  };
  auto stream = cfg.algorithm == Algorithm::Us ? set_of_support(l.theory, l.profile, l.solver, options)
                                               : et_stream(l.theory, l.profile, l.solver, options);
  save_transcript(cfg, l.solver);
  if (cfg.format == Format::Json) {
    json j;
    j["status"] = std::string(to_string(stream.status));
    j["models"] = stream.models.size();
    j["check_sat_calls"] = stream.check_sat_calls;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(stream.status) << ": " << stream.models.size() << " models, " << stream.check_sat_calls
              << " check-sat calls\n";
  }
  if (stream.status == StreamStatus::Incomplete) return kExitUnknown;
  return stream.models.empty() ? kExitEmpty : kExitOk;
}

// ------------------------------------------------------- minimize and core

FiniteModel load_model(const RunConfig& cfg, const Theory& t) {
  auto text = read_input(cfg.model_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model file is not JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("model")) j = j["model"];
  return model_from_json(j, std::make_shared<const Signature>(t.user_signature()));
}

void print_minimization(const RunConfig& cfg, const MinimizationReport& r) {
  if (cfg.format == Format::Json) {
    json j = report_json(r);
    j["input"] = model_to_json(r.input);
    j["output"] = model_to_json(r.output);
    std::cout << j.dump() << "\n";
    return;
  }
  print_report_text(r);
  std::cout << "input:\n" << model_to_text(r.input) << "output:\n" << model_to_text(r.output);
}

int exit_for(const MinimizationReport& r) { return r.claim == Claim::PossiblyNonMinimal ? kExitUnknown : kExitOk; }

MinimizationReport unminimized(const FiniteModel& m) {
  MinimizationReport r{m, m};
  r.claim = Claim::Unminimized;
  return r;
}

int cmd_minimize(const RunConfig& cfg) {
  auto l = load(cfg);
  std::optional<MinimizationReport> report;
  int code = kExitOk;
  if (!cfg.model_path.empty()) {
    auto m = load_model(cfg, l.theory);
    switch (cfg.mode) {
      case MinimizeMode::None: report = unminimized(prepare_model(l.bounded, m)); break;
      case MinimizeMode::I: report = i_minimize(l.bounded, m, l.solver); break;
      case MinimizeMode::A: report = a_minimize(l.bounded, m, l.solver); break;
      case MinimizeMode::Both: report = minimize_both(l.bounded, m, l.solver); break;
    }
  } else {
    auto session = open_bounded_session(l.bounded, l.solver);
    auto verdict = session.check_sat();
    if (verdict != SatResult::Sat) {
      code = verdict == SatResult::Unsat ? kExitEmpty : kExitUnknown;
      std::cout << to_string(verdict) << "\n";
    } else {
      BoundedContext ctx{session, std::make_shared<const Signature>(l.theory.user_signature()), nullptr};
      ctx.read = bounding_reader(l.bounded, ctx.user_signature);
      auto found = ctx.read(session);
      switch (cfg.mode) {
        case MinimizeMode::None: report = unminimized(found); break;
        case MinimizeMode::I: report = i_minimize(ctx, found); break;
        case MinimizeMode::A: report = a_minimize(ctx, found); break;
        case MinimizeMode::Both: report = minimize_both(ctx, found); break;
      }
      report->check_sat_calls = session.check_sat_calls();
    }
  }
  save_transcript(cfg, l.solver);
  if (!report) return code;
  print_minimization(cfg, *report);
  return exit_for(*report);
}

int cmd_core(const RunConfig& cfg) {
  auto l = load(cfg);
  FiniteModel m;
  if (!cfg.model_path.empty()) {
    m = prepare_model(l.bounded, load_model(cfg, l.theory));
  } else {
    auto session = open_bounded_session(l.bounded, l.solver);
    auto verdict = session.check_sat();
    if (verdict != SatResult::Sat) {
      save_transcript(cfg, l.solver);
      std::cout << to_string(verdict) << "\n";
      return verdict == SatResult::Unsat ? kExitEmpty : kExitUnknown;
    }
    m = bounding_reader(l.bounded, std::make_shared<const Signature>(l.theory.user_signature()))(session);
  }
  auto report = compute_core(m, l.solver);
  save_transcript(cfg, l.solver);
  print_minimization(cfg, report);
  return exit_for(report);
}

// ----------------------------------------------------------------- corpus

int cmd_corpus(const RunConfig& cfg, const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(dir))
    if (f.path().extension() == ".smt2") files.push_back(f.path());
  if (files.empty()) throw UsageError("no .smt2 files in " + dir);
  std::sort(files.begin(), files.end());
  bool all_matched = true;
  bool incomplete = false;
  json rows = json::array();
  for (const auto& path : files) {
    RunConfig one = cfg;
    one.theory_path = path.string();
    one.transcript_path.clear();
    auto l = load(one);
    StreamOptions options;
    options.mode = cfg.mode;
    auto us = set_of_support(l.theory, l.profile, l.solver, options);
    auto et = et_stream(l.theory, l.profile, l.solver, options);
    bool matched = us.models.size() == et.models.size();
    for (const auto& u : us.models) {
      bool found = false;
      for (const auto& e : et.models) found = found || hom_equivalent(u.output, e.output);
      matched = matched && found;
    }
    incomplete = incomplete || us.status == StreamStatus::Incomplete || et.status == StreamStatus::Incomplete;
    all_matched = all_matched && matched;
    json row;
    row["theory"] = path.stem().string();
    row["us"] = {{"status", std::string(to_string(us.status))}, {"models", us.models.size()},
                 {"check_sat_calls", us.check_sat_calls}};
    row["et"] = {{"status", std::string(to_string(et.status))}, {"models", et.models.size()},
                 {"check_sat_calls", et.check_sat_calls}};
    row["matched"] = matched;
    if (cfg.format == Format::Json) {
      std::cout << row.dump() << "\n";
    } else {
      std::cout << path.stem().string() << ": us " << us.models.size() << " models, " << us.check_sat_calls
                << " checks (" << to_string(us.status) << "); et " << et.models.size() << " models, "
                << et.check_sat_calls << " checks (" << to_string(et.status) << "); "
                << (matched ? "matched" : "MISMATCH") << "\n";
    }
  }
  if (incomplete) return kExitUnknown;
  return all_matched ? kExitOk : kExitEmpty;
}

// ------------------------------------------------------------------ flags

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_theory = true) {
  if (needs_theory) cmd->add_option("theory", cfg.theory_path, "SMT-LIB theory file, or - for stdin")->required();
  cmd->add_option("--bound,-b", cfg.bounds, "N for every sort, or SORT=N; repeatable")->take_all();
  cmd->add_option("--solver", cfg.solver, "solver command line (default: $MINFIND_SOLVER or \"z3 -in -smt2\")");
  cmd->add_option("--timeout", cfg.timeout_ms, "wall-clock limit per check-sat in milliseconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", cfg.format_name, "text or json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--transcript", cfg.transcript_path, "write the solver dialogue to this file");
}

void add_mode(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--mode", cfg.mode_name, "minimization: i, a, both or none")
      ->check(CLI::IsMember({"i", "a", "both", "none"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finds homomorphism-minimal finite models of bounded many-sorted theories."};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string corpus_dir;

  auto* check = app.add_subcommand("check", "bound the theory and run one satisfiability check");
  add_common(check, cfg);

  auto* models = app.add_subcommand("models", "stream a covering set of minimal models");
  add_common(models, cfg);
  add_mode(models, cfg);
  models->add_option("--alg", cfg.algorithm_name, "us (set of support) or et (enumerated types)")
      ->check(CLI::IsMember({"us", "et"}));
  models->add_option("--max-models", cfg.max_models, "stop after this many models")->check(CLI::PositiveNumber);

  auto* minimize = app.add_subcommand("minimize", "minimize a model of the theory");
  add_common(minimize, cfg);
  add_mode(minimize, cfg);
  minimize->add_option("--model", cfg.model_path, "JSON model to start from (default: ask the solver)");

  auto* core = app.add_subcommand("core", "compute the core of a model of the theory");
  add_common(core, cfg);
  core->add_option("--model", cfg.model_path, "JSON model to start from (default: ask the solver)");

  auto* corpus = app.add_subcommand("corpus", "compare both streams on every .smt2 file of a directory");
  add_common(corpus, cfg, false);
  add_mode(corpus, cfg);
  corpus->add_option("dir", corpus_dir, "directory of theories with \"; bound:\" headers")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : std::max(code, kExitInput);
  }
  cfg.resolve();

  try {
    if (*check) return cmd_check(cfg);
    if (*models) return cmd_models(cfg);
    if (*minimize) return cmd_minimize(cfg);
    if (*core) return cmd_core(cfg);
    if (*corpus) return cmd_corpus(cfg, corpus_dir);
  } catch (const UsageError& e) {
    std::cerr << "minfind: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "minfind: solver: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "minfind: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "minfind: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
