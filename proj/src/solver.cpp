#include "minfind/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "minfind/error.hpp"
#include "minfind/syntax.hpp"

namespace minfind {

// --------------------------------------------------------------- Transcript

void Transcript::command(std::string_view text) { lines_.emplace_back(text); }

void Transcript::reply(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  std::string line = "; ";
  for (char c : text) {
    if (c == '\n') {
      lines_.push_back(line);
      line = "; ";
    } else {
      line += c;
    }
  }
  lines_.push_back(line);
}

void Transcript::note(std::string_view text) { lines_.push_back("; " + std::string(text)); }

std::string Transcript::text() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

std::size_t Transcript::count_check_sat() const {
  std::size_t n = 0;
  for (const auto& l : lines_)
    if (l == "(check-sat)") ++n;
  return n;
}

void Transcript::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write transcript to " + path);
  out << text();
}

// ------------------------------------------------------------- SolverConfig

std::vector<std::string> SolverConfig::split_command(std::string_view command) {
  std::vector<std::string> out;
  std::istringstream in{std::string(command)};
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

void SolverConfig::validate() const {
  if (command.empty()) throw SolverError("empty solver command");
  if (timeout.count() <= 0) throw SolverError("solver timeout must be positive");
}

std::string_view to_string(SatResult r) {
  switch (r) {
    case SatResult::Sat:
      return "sat";
    case SatResult::Unsat:
      return "unsat";
    case SatResult::Unknown:
      return "unknown";
  }
  return "unknown";
}

// ------------------------------------------------------------ SolverSession

namespace {

constexpr std::chrono::milliseconds kCommandLimit{30000};

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("write to solver failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

SolverSession::SolverSession(const SolverConfig& config, const Signature& sig)
    : timeout_(config.timeout), transcript_(config.transcript), expand_(config.expand_quantifiers) {
  config.validate();
  frames_.emplace_back();

  int in_pipe[2];
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0)
    throw SolverError(std::string("pipe failed: ") + std::strerror(errno));

  std::vector<char*> argv;
  for (const auto& a : config.command) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw SolverError(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::execvp(argv[0], argv.data());
    int e = errno;
    (void)!::write(err_pipe[1], &e, sizeof e);
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int child_errno = 0;
  ssize_t got = ::read(err_pipe[0], &child_errno, sizeof child_errno);
  ::close(err_pipe[0]);
  if (got == static_cast<ssize_t>(sizeof child_errno)) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::waitpid(pid, nullptr, 0);
    throw SolverError("cannot start solver '" + config.command[0] + "': " + std::strerror(child_errno));
  }
  pid_ = pid;
  to_solver_ = in_pipe[1];
  from_solver_ = out_pipe[0];
  ::signal(SIGPIPE, SIG_IGN);

  if (transcript_) transcript_->note("session start: " + config.command[0]);
  expect_success("(set-option :print-success true)");
  expect_success("(set-option :produce-models true)");
  if (!config.logic.empty()) expect_success("(set-logic " + config.logic + ")");
  declare(sig);
}

SolverSession::~SolverSession() { close(); }

SolverSession::SolverSession(SolverSession&& other) noexcept
    : pid_(std::exchange(other.pid_, -1)),
      to_solver_(std::exchange(other.to_solver_, -1)),
      from_solver_(std::exchange(other.from_solver_, -1)),
      buffer_(std::move(other.buffer_)),
      timeout_(other.timeout_),
      transcript_(std::move(other.transcript_)),
      frames_(std::move(other.frames_)),
      check_sat_calls_(other.check_sat_calls_),
      get_value_calls_(other.get_value_calls_),
      model_available_(other.model_available_),
      timed_out_(other.timed_out_),
      expand_(other.expand_),
      domains_(std::move(other.domains_)) {}

SolverSession& SolverSession::operator=(SolverSession&& other) noexcept {
  if (this != &other) {
    close();
    pid_ = std::exchange(other.pid_, -1);
    to_solver_ = std::exchange(other.to_solver_, -1);
    from_solver_ = std::exchange(other.from_solver_, -1);
    buffer_ = std::move(other.buffer_);
    timeout_ = other.timeout_;
    transcript_ = std::move(other.transcript_);
    frames_ = std::move(other.frames_);
    check_sat_calls_ = other.check_sat_calls_;
    get_value_calls_ = other.get_value_calls_;
    model_available_ = other.model_available_;
    timed_out_ = other.timed_out_;
    expand_ = other.expand_;
    domains_ = std::move(other.domains_);
  }
  return *this;
}

void SolverSession::close() {
  if (pid_ <= 0) return;
  std::string bye = "(exit)\n";
  ssize_t ignored = ::write(to_solver_, bye.data(), bye.size());
  (void)ignored;
  ::close(to_solver_);
  ::close(from_solver_);
  // Give the solver a moment to exit on its own before forcing it.
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    ::usleep(2000);
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

void SolverSession::kill() {
  if (pid_ <= 0) return;
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  ::close(to_solver_);
  ::close(from_solver_);
  pid_ = -1;
}

SExpr SolverSession::send(const std::string& command, std::chrono::milliseconds limit) {
  if (pid_ <= 0) throw SolverError("solver session is closed");
  if (transcript_) transcript_->command(command);
  write_all(to_solver_, command + "\n");
  auto deadline = std::chrono::steady_clock::now() + limit;
  while (true) {
    SExpr reply;
    std::size_t used = 0;
    if (try_read_sexpr(buffer_, reply, used)) {
      if (transcript_) transcript_->reply(buffer_.substr(0, used));
      buffer_.erase(0, used);
      return reply;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      kill();
      timed_out_ = true;
      throw SolverError("solver did not answer within " + std::to_string(limit.count()) + " ms");
    }
    pollfd pfd{from_solver_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    ssize_t n = ::read(from_solver_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("read from solver failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      kill();
      throw SolverError("solver process exited unexpectedly");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void SolverSession::expect_success(const std::string& command) {
  auto reply = send(command, kCommandLimit);
  if (reply.is_symbol("success")) return;
  if (reply.is_list() && !reply.items.empty() && reply.items[0].is_symbol("error")) {
    std::string message = reply.items.size() > 1 ? reply.items[1].text : reply.to_string();
    throw SolverError("solver rejected " + command + ": " + message);
  }
  throw SolverError("unexpected solver reply to " + command + ": " + reply.to_string());
}

void SolverSession::declare_sort(const std::string& name) {
  expect_success("(declare-sort " + quote_symbol(name) + " 0)");
  frames_.back().add_sort(name, !name.empty() && name.front() == kReservedPrefix);
  model_available_ = false;
}

void SolverSession::declare_symbol(const SymbolDecl& decl) {
  std::string text = "(declare-fun " + quote_symbol(decl.name) + " (";
  for (std::size_t i = 0; i < decl.args.size(); ++i) {
    if (i) text += ' ';
    text += quote_symbol(decl.args[i]);
  }
  text += ") " + quote_symbol(decl.result) + ")";
  expect_success(text);
  frames_.back().add_symbol(decl);
  model_available_ = false;
}

void SolverSession::declare(const Signature& extra) {
  for (const auto& s : extra.sorts())
    if (!frames_.back().is_uninterpreted(s)) declare_sort(s);
  for (const auto& d : extra.symbols()) {
    const auto* have = frames_.back().find(d.name);
    if (have == nullptr) {
      declare_symbol(d);
    } else if (have->args != d.args || have->result != d.result) {
      throw SolverError("symbol " + d.name + " already declared with a different rank");
    }
  }
}

void SolverSession::declare_enum_sort(const std::string& name, const std::vector<std::string>& values) {
  if (values.empty()) throw SolverError("enumerated sort " + name + " needs at least one value");
  std::string text = "(declare-datatypes ((" + quote_symbol(name) + " 0)) ((";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text += ' ';
    text += "(" + quote_symbol(values[i]) + ")";
  }
  text += ")))";
  expect_success(text);
  frames_.back().add_sort(name);
  for (const auto& v : values) frames_.back().add_function(v, {}, name, true);
  model_available_ = false;
}

void SolverSession::close_sort(const std::string& sort, std::vector<std::string> constants) {
  if (!expand_) return;
  if (constants.empty()) throw SolverError("sort " + sort + " cannot be closed over no constants");
  domains_.insert_or_assign(sort, std::move(constants));
}

void SolverSession::assert_formula(const Formula& f) {
  expect_success("(assert " + print_formula(domains_.empty() ? f : expand_quantifiers(f, domains_)) + ")");
  model_available_ = false;
}

void SolverSession::assert_formulas(std::span<const Formula> fs) {
  for (const auto& f : fs) assert_formula(f);
}

void SolverSession::push() {
  expect_success("(push 1)");
  frames_.push_back(frames_.back());
  model_available_ = false;
}

void SolverSession::pop() {
  if (depth() == 0) throw SolverError("pop at assertion-stack depth 0");
  expect_success("(pop 1)");
  frames_.pop_back();
  model_available_ = false;
}

SatResult SolverSession::check_sat() {
  ++check_sat_calls_;
  model_available_ = false;
  timed_out_ = false;
  SExpr reply;
  try {
    reply = send("(check-sat)", timeout_);
  } catch (const SolverError&) {
    if (timed_out_) {
      if (transcript_) transcript_->note("timeout");
      return SatResult::Unknown;
    }
    throw;
  }
  if (reply.is_symbol("sat")) {
    model_available_ = true;
    return SatResult::Sat;
  }
  if (reply.is_symbol("unsat")) return SatResult::Unsat;
  if (reply.is_symbol("unknown")) return SatResult::Unknown;
  throw SolverError("unexpected reply to check-sat: " + reply.to_string());
}

void SolverSession::require_model() const {
  if (!model_available_) throw SolverError("get-value requires a preceding sat check-sat");
}

std::vector<SExpr> SolverSession::value_pairs(const std::string& terms, std::size_t expected) {
  require_model();
  ++get_value_calls_;
  auto reply = send("(get-value (" + terms + "))", kCommandLimit);
  if (reply.is_list() && !reply.items.empty() && reply.items[0].is_symbol("error"))
    throw SolverError("solver error on get-value: " + (reply.items.size() > 1 ? reply.items[1].text : reply.to_string()));
  if (!reply.is_list() || reply.items.size() != expected) throw SolverError("malformed get-value reply: " + reply.to_string());
  std::vector<SExpr> values;
  for (auto& pair : reply.items) {
    if (!pair.is_list() || pair.items.size() != 2) throw SolverError("malformed get-value pair: " + pair.to_string());
    values.push_back(std::move(pair.items[1]));
  }
  return values;
}

bool SolverSession::get_value_bool(const Formula& atom) {
  return get_values_bool(std::span<const Formula>(&atom, 1)).front();
}

std::vector<bool> SolverSession::get_values_bool(std::span<const Formula> atoms) {
  if (atoms.empty()) return {};
  std::string terms;
  for (const auto& a : atoms) {
    if (!terms.empty()) terms += ' ';
    terms += print_formula(a);
  }
  auto values = value_pairs(terms, atoms.size());
  std::vector<bool> out;
  for (const auto& v : values) {
    if (v.is_symbol("true")) {
      out.push_back(true);
    } else if (v.is_symbol("false")) {
      out.push_back(false);
    } else {
      throw SolverError("non-boolean value " + v.to_string());
    }
  }
  return out;
}

std::vector<std::string> SolverSession::get_values(std::span<const Term> terms) {
  if (terms.empty()) return {};
  std::string text;
  for (const auto& t : terms) {
    if (!text.empty()) text += ' ';
    text += print_term(t);
  }
  auto values = value_pairs(text, terms.size());
  std::vector<std::string> out;
  for (const auto& v : values) {
    if (!v.is_symbol()) throw SolverError("value is not a symbol: " + v.to_string());
    out.push_back(v.text);
  }
  return out;
}

}  // namespace minfind
