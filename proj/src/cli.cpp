#include "dyadic/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dyadic/dsl.hpp"
#include "dyadic/engine.hpp"
#include "dyadic/perception.hpp"
#include "dyadic/policy.hpp"
#include "dyadic/profile.hpp"

namespace dyadic {

namespace {

struct FileOutcome {
  int code = kExitOk;
  std::string out;
  std::string err;
};

// 2 > 1 > 3 > 0
int rank(int code) {
  switch (code) {
    case kExitIo: return 3;
    case kExitInput: return 2;
    case kExitConflicts: return 1;
    default: return 0;
  }
}

int combine(int a, int b) { return rank(a) >= rank(b) ? a : b; }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

void print_errors(std::ostream& err, const std::string& path, const std::vector<ParseError>& errors) {
  for (const auto& e : errors) err << path << ":" << format_error(e) << "\n";
}

void print_violations(std::ostream& err, const std::string& path, const ValidationReport& report) {
  for (const auto& v : report) err << path << ": " << v.invariant << " [" << v.id << "]: " << v.message << "\n";
}

// Loads the profile once; the result is shared read-only across workers.
struct ProfileLoad {
  int code = kExitOk;
  CultureProfile profile;
};

ProfileLoad load_profile_file(const std::string& path, std::ostream& err) {
  ProfileLoad result;
  if (path.empty()) return result;
  auto text = read_file(path);
  if (!text) {
    err << path << ": cannot read profile\n";
    result.code = kExitIo;
    return result;
  }
  auto parsed = load_profile(*text);
  if (!parsed) {
    print_errors(err, path, parsed.errors());
    result.code = kExitInput;
    return result;
  }
  result.profile = std::move(*parsed);
  return result;
}

using FileTask = std::function<FileOutcome(const std::string& path, const std::string& text)>;

FileOutcome run_file(const std::string& path, const FileTask& task) {
  auto text = read_file(path);
  if (!text) return {kExitIo, "", path + ": cannot read scenario\n"};
  return task(path, *text);
}

// Evaluates files on up to `jobs` threads; outputs are emitted in argument order.
int run_files(const std::vector<std::string>& paths, int jobs, const FileTask& task, std::ostream& out,
              std::ostream& err) {
  std::vector<FileOutcome> outcomes(paths.size());
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1 || paths.size() < 2) {
    for (std::size_t i = 0; i < paths.size(); ++i) outcomes[i] = run_file(paths[i], task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, paths.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) outcomes[i] = run_file(paths[i], task);
      });
    }
    for (auto& t : pool) t.join();
  }
  int code = kExitOk;
  for (const auto& o : outcomes) {
    out << o.out;
    err << o.err;
    code = combine(code, o.code);
  }
  return code;
}

ExportFormat parse_format(const std::string& text) { return text == "json" ? ExportFormat::json : ExportFormat::text; }

struct Options {
  std::string profile_path;
  std::string format = "text";
  bool trace = false;
  int jobs = 1;
  std::vector<std::string> files;
  std::string description;
  std::string context;
};

FileOutcome judge_task(const std::string& path, const std::string& text, const CultureProfile& profile,
                       const Options& opt, bool explain_only) {
  FileOutcome o;
  auto parsed = parse_scenario(text);
  std::ostringstream err;
  if (!parsed) {
    print_errors(err, path, parsed.errors());
    return {kExitInput, "", err.str()};
  }
  try {
    auto judgment = judge(*parsed, profile);
    if (explain_only) {
      o.out = explain(judgment);
    } else {
      o.out = export_judgment(judgment, {parse_format(opt.format), false});
      if (opt.trace) o.out += explain(judgment);
    }
  } catch (const ValidationError& e) {
    print_violations(err, path, e.report());
    return {kExitInput, "", err.str()};
  }
  return o;
}

FileOutcome lint_task(const std::string& path, const std::string& text, const CultureProfile& profile,
                      const Options& opt) {
  auto parsed = parse_scenario(text);
  std::ostringstream err;
  if (!parsed) {
    print_errors(err, path, parsed.errors());
    return {kExitInput, "", err.str()};
  }
  try {
    auto reports = detect_conflicts(parsed->obligations, *parsed, profile);
    return {reports.empty() ? kExitOk : kExitConflicts, export_conflicts(reports, parse_format(opt.format)), ""};
  } catch (const ValidationError& e) {
    print_violations(err, path, e.report());
    return {kExitInput, "", err.str()};
  }
}

void add_profile_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--profile", opt.profile_path, "Culture profile file")->envname(kProfileEnv);
  cmd->add_option("--format", opt.format, "Export format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--jobs,-j", opt.jobs, "Files evaluated in parallel")->check(CLI::Range(1, 64));
  cmd->add_option("files", opt.files, "Scenario files")->required();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dyadic moral judgment engine"};
  app.name("dyadic");
  app.require_subcommand(1);

  Options opt;
  auto* judge_cmd = app.add_subcommand("judge", "Score scenarios and print the judgment export");
  add_profile_flags(judge_cmd, opt);
  judge_cmd->add_flag("--trace", opt.trace, "Append the explanation report");

  auto* explain_cmd = app.add_subcommand("explain", "Print the step-by-step explanation of a judgment");
  add_profile_flags(explain_cmd, opt);

  auto* lint_cmd = app.add_subcommand("lint", "Detect obligation conflicts");
  add_profile_flags(lint_cmd, opt);

  auto* check_cmd = app.add_subcommand("profile-check", "Validate a profile and dump it with defaults");
  check_cmd->add_option("profile", opt.profile_path, "Culture profile file")->required();

  auto* perceive_cmd = app.add_subcommand("perceive", "Look up intentionality and vulnerability for a description");
  perceive_cmd->add_option("description", opt.description, "Entity description")->required();
  perceive_cmd->add_option("--context", opt.context, "Persona or community context");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dyadic: " << e.what() << "\n";
    return kExitInput;
  }

  if (check_cmd->parsed()) {
    auto text = read_file(opt.profile_path);
    if (!text) {
      err << opt.profile_path << ": cannot read profile\n";
      return kExitIo;
    }
    auto parsed = load_profile(*text);
    if (!parsed) {
      print_errors(err, opt.profile_path, parsed.errors());
      return kExitInput;
    }
    out << dump_profile(*parsed);
    return kExitOk;
  }

  if (perceive_cmd->parsed()) {
    std::optional<std::string> context;
    if (!opt.context.empty()) context = opt.context;
    const auto p = fixture_perceive(opt.description, context);
    out << "intentionality=" << format_scalar(p.intentionality) << " vulnerability=" << format_scalar(p.vulnerability)
        << "\n";
    return kExitOk;
  }

  auto loaded = load_profile_file(opt.profile_path, err);
  if (loaded.code != kExitOk) return loaded.code;
  const CultureProfile& profile = loaded.profile;

  if (lint_cmd->parsed()) {
    return run_files(
        opt.files, opt.jobs,
        [&](const std::string& path, const std::string& text) { return lint_task(path, text, profile, opt); }, out,
        err);
  }
  const bool explain_only = explain_cmd->parsed();
  return run_files(
      opt.files, opt.jobs,
      [&](const std::string& path, const std::string& text) {
        return judge_task(path, text, profile, opt, explain_only);
      },
      out, err);
}

}  // namespace dyadic
