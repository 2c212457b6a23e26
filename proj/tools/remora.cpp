#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "remora/erase.hpp"
#include "remora/eval.hpp"
#include "remora/index.hpp"
#include "remora/prims.hpp"
#include "remora/types.hpp"

using namespace remora;

namespace {

// Exit statuses. 64 and 66 follow sysexits; 65 is its data-error code.
enum Exit : int {
  kOk = 0,
  kTypeError = 1,
  kMisapplied = 2,
  kOutOfFuel = 3,
  kUsage = 64,
  kSyntax = 65,
  kNoInput = 66,
  kInternal = 70,
};

struct Options {
  std::string path;
  std::size_t fuel = kDefaultFuel;
  bool trace = false;
  bool canonical = false;
  bool annotations = false;
};

std::optional<std::string> slurp(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

std::string show(const ExprPtr& e, const Options& o) {
  ExprPtr t = o.canonical ? map_indices(e, normalize_index) : e;
  return print(t, PrintOptions{o.annotations});
}

int check(const Elaborated& el) {
  std::cout << print(normalize_type(el.type)) << "\n";
  return kOk;
}

int eval(const Elaborated& el, const Options& o) {
  EvalResult r = evaluate(el.term, o.fuel, o.trace);
  if (o.trace)
    for (std::size_t i = 0; i < r.trace.size(); ++i)
      std::cout << "[" << i + 1 << "] " << to_string(r.trace[i].first) << "  " << show(r.trace[i].second, o) << "\n";
  switch (r.status) {
    case EvalResult::Status::Value:
      std::cout << show(r.term, o) << "\n";
      return kOk;
    case EvalResult::Status::OutOfFuel:
      std::cout << "out of fuel\n";
      return kOutOfFuel;
    case EvalResult::Status::Stuck:
      if (r.reason == StuckReason::Misapplied) {
        std::cout << "stuck: misapplied " << r.detail << "\n";
        return kMisapplied;
      }
      std::cerr << "stuck: " << r.detail << "\n";
      return kInternal;
  }
  return kInternal;
}

int bisim(const Elaborated& el, const Options& o) {
  BisimReport rep = bisim_run(el.term, o.fuel, o.trace);
  for (std::size_t i = 0; i < rep.trace.size(); ++i) {
    const BisimStep& s = rep.trace[i];
    std::cout << "[" << i + 1 << "] " << to_string(s.typed_rule) << "/" << to_string(s.erased_rule) << "\n"
              << "  typed:  " << show(s.typed, o) << "\n"
              << "  erased: " << print(s.erased) << "\n";
  }
  std::cout << to_string(rep.outcome) << " steps=" << rep.steps;
  if (!rep.detail.empty()) std::cout << " (" << rep.detail << ")";
  std::cout << "\n";
  if (rep.outcome != BisimReport::Outcome::Mismatch) return kOk;
  std::cerr << "at step " << rep.mismatch_step << "\n  erased typed: " << print(erase_term(rep.typed))
            << "\n  erased state: " << print(rep.erased) << "\n";
  return kInternal;
}

int run(const std::string& command, const Options& o) {
  auto text = slurp(o.path);
  if (!text) {
    std::cerr << "cannot read " << o.path << "\n";
    return kNoInput;
  }
  try {
    ExprPtr term = parse_term(*text, o.path);
    if (command == "fmt" && !o.annotations) {
      std::cout << show(term, o) << "\n";
      return kOk;
    }
    Elaborated el = elaborate({}, default_signature(), term);
    if (command == "check") return check(el);
    if (command == "eval") return eval(el, o);
    if (command == "erase") {
      std::cout << print(erase_term(o.canonical ? map_indices(el.term, normalize_index) : el.term)) << "\n";
      return kOk;
    }
    if (command == "bisim") return bisim(el, o);
    std::cout << show(el.term, o) << "\n";
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kSyntax;
  } catch (const TypeError& e) {
    std::cerr << to_string(e.loc) << ": type error: " << to_string(e.kind) << ": " << e.detail << "\n";
    return kTypeError;
  }
}

void list_prims() {
  const Signature& sig = default_signature();
  for (const auto& name : primitive_names()) std::cout << name << " : " << print(sig.at(name)) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Core Remora: type checker, evaluator and erasure harness"};
  app.require_subcommand(0, 1);
  bool prims = false;
  app.add_flag("--list-prims", prims, "Print the primitive operators and their types");

  Options o;
  auto file_arg = [&](CLI::App* sub) { sub->add_option("path", o.path, "Source file, or - for stdin")->required(); };
  auto fuel_opt = [&](CLI::App* sub) {
    sub->add_option("--fuel", o.fuel, "Maximum number of reduction steps")->check(CLI::PositiveNumber);
  };

  CLI::App* check_cmd = app.add_subcommand("check", "Print the type of a program");
  file_arg(check_cmd);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a program");
  file_arg(eval_cmd);
  fuel_opt(eval_cmd);
  eval_cmd->add_flag("--trace", o.trace, "Print every step with its rule");
  eval_cmd->add_flag("--annotations", o.annotations, "Print type annotations");
  eval_cmd->add_flag("--canonical", o.canonical, "Print indices in canonical form");

  CLI::App* erase_cmd = app.add_subcommand("erase", "Print the erased program");
  file_arg(erase_cmd);
  erase_cmd->add_flag("--canonical", o.canonical, "Print indices in canonical form");

  CLI::App* bisim_cmd = app.add_subcommand("bisim", "Run typed and erased evaluation in lockstep");
  file_arg(bisim_cmd);
  fuel_opt(bisim_cmd);
  bisim_cmd->add_flag("--trace", o.trace, "Print both states after every step");

  CLI::App* fmt_cmd = app.add_subcommand("fmt", "Pretty-print a program");
  file_arg(fmt_cmd);
  fmt_cmd->add_flag("--canonical", o.canonical, "Print indices in canonical form");
  fmt_cmd->add_flag("--annotations", o.annotations, "Elaborate and print every annotation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (prims) {
    list_prims();
    return kOk;
  }
  for (CLI::App* sub : {check_cmd, eval_cmd, erase_cmd, bisim_cmd, fmt_cmd})
    if (*sub) return run(sub->get_name(), o);
  std::cerr << app.help();
  return kUsage;
}
