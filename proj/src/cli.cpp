#include "qverify/cli.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "qverify/errors.hpp"
#include "qverify/identities.hpp"

namespace qv {

namespace {

using Job = std::function<VerificationReport()>;

void configure(CLI::App& app, RunConfig& c, int& order, int& trials, std::string& format, std::string& pair,
               std::string& mutation) {
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--order,-N", order, "truncation order (default 40, 60 for qgauss/qwatson)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "first sampler seed");
  app.add_option("--trials", trials, "environments per identity")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs,-j", c.jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--timing", c.timing, "report wall time per check");

  app.add_subcommand("list", "list identities and WP-Bailey pairs");
  auto* verify_cmd = app.add_subcommand("verify", "verify one identity");
  verify_cmd->add_option("identity", c.identity, "identity name, e.g. qgauss or main[unit]")->required();
  verify_cmd->add_option("--pair", pair, "WP-Bailey pair for wpbt1, wpbt2, main");
  verify_cmd->add_option("--param", c.params, "pin a symbol, e.g. a=9/4@2")->allow_extra_args(false);
  verify_cmd->add_option("--mutation", mutation, "apply a registered corruption (negative control)");
  app.add_subcommand("verify-all", "verify every registered identity");
  auto* pairs_cmd = app.add_subcommand("pairs", "check the WP-Bailey relation for the nine pairs");
  pairs_cmd->add_option("--nmax", c.nmax, "largest n checked")->check(CLI::NonNegativeNumber);
  app.add_subcommand("cross-checks", "remark specializations");
}

void finish(CLI::App& app, RunConfig& c, int order, int trials, const std::string& format, const std::string& pair,
            const std::string& mutation) {
  c.command = app.get_subcommands().front()->get_name();
  if (app.count("--order") > 0) c.order = order;
  if (app.count("--trials") > 0) c.trials = trials;
  c.format = format == "json" ? Format::Json : Format::Text;
  if (!pair.empty()) c.pair = pair;
  if (!mutation.empty()) c.mutation = mutation;
}

ParamEnv pinned_params(const std::vector<std::string>& assignments) {
  ParamEnv env;
  for (const auto& s : assignments) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected name=c@e, got '" + s + "'");
    env.set(s.substr(0, eq), parse_monomial(s.substr(eq + 1)));
  }
  return env;
}

VerificationReport failed_setup(const std::string& name, std::uint64_t seed, int order, const Error& e) {
  VerificationReport r;
  r.name = name;
  r.seed = seed;
  r.order = order;
  r.outcome = dynamic_cast<const NonTruncating*>(&e) != nullptr ? Outcome::NonTruncating : Outcome::Rejected;
  r.detail = e.what();
  return r;
}

/// Verifies `id` at each trial seed.  Pinned symbols skip the sampler when
/// they cover every parameter.
void add_identity_jobs(std::vector<Job>& jobs, const IdentityDef& id, const RunConfig& c, int trials,
                       const ParamEnv& pinned) {
  const int order = c.order.value_or(id.default_order);
  const std::string mutation = c.mutation.value_or("");
  const bool complete = !pinned.values().empty() && std::all_of(id.params.begin(), id.params.end(), [&](const auto& s) {
    return pinned.has(s.name);
  });
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
    jobs.push_back([id, order, seed, mutation, pinned, complete]() {
      try {
        const ParamEnv env = complete ? pinned : sample_env(id, seed, pinned);
        VerificationReport r = verify(id, env, order, mutation);
        r.seed = seed;
        return r;
      } catch (const Error& e) {
        return failed_setup(id.name, seed, order, e);
      }
    });
  }
}

std::vector<VerificationReport> run_jobs(const std::vector<Job>& jobs, int workers) {
  std::vector<std::optional<VerificationReport>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) slots[i] = jobs[i]();
  };
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  std::vector<VerificationReport> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.name, x.seed) < std::tie(y.name, y.seed);
  });
  return out;
}

std::string list_text() {
  std::ostringstream os;
  for (const auto& id : registry()) {
    os << id.name << "  (" << id.n_sides << " sides, N=" << id.default_order << ")  " << id.summary << "\n";
  }
  os << "pairs:";
  for (const auto& p : pair_names()) os << " " << p;
  os << "\n";
  return os.str();
}

std::string list_json() {
  nlohmann::ordered_json ids = nlohmann::ordered_json::array();
  for (const auto& id : registry()) {
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const auto& s : id.params) params.push_back(s.name);
    ids.push_back({{"name", id.name},
                   {"sides", id.n_sides},
                   {"default_order", id.default_order},
                   {"params", params},
                   {"mutations", id.mutations},
                   {"summary", id.summary}});
  }
  nlohmann::ordered_json j{{"identities", ids}, {"pairs", pair_names()}};
  return j.dump(2) + "\n";
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  int order = 40;
  int trials = 3;
  std::string format = "text";
  std::string pair;
  std::string mutation;
  CLI::App app{"exact verification of q-series identities", "qverify"};
  configure(app, c, order, trials, format, pair, mutation);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }
  finish(app, c, order, trials, format, pair, mutation);
  return c;
}

std::string emit_report(const std::vector<VerificationReport>& reports, Format format, bool timing) {
  if (format == Format::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json env = nlohmann::ordered_json::object();
      for (const auto& [k, v] : r.env) env[k] = v;
      nlohmann::ordered_json o;
      o["name"] = r.name;
      o["seed"] = r.seed;
      o["order"] = r.order;
      o["outcome"] = to_string(r.outcome);
      o["mismatch_index"] = r.mismatch_index ? nlohmann::ordered_json(*r.mismatch_index) : nullptr;
      o["env"] = env;
      o["elapsed_ms"] = timing ? nlohmann::ordered_json(r.elapsed_ms) : nullptr;
      o["lhs_coeff"] = r.mismatch_index ? nlohmann::ordered_json(r.lhs_coeff) : nullptr;
      o["rhs_coeff"] = r.mismatch_index ? nlohmann::ordered_json(r.rhs_coeff) : nullptr;
      o["detail"] = r.detail;
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& r : reports) {
    os << (r.passed() ? "PASS " : "FAIL ") << r.name << " seed=" << r.seed << " N=" << r.order;
    if (r.mismatch_index) os << " [" << *r.mismatch_index << "]";
    if (timing) os << " " << static_cast<long long>(r.elapsed_ms) << "ms";
    if (!r.passed()) {
      os << " " << to_string(r.outcome);
      if (r.mismatch_index) os << " lhs=" << r.lhs_coeff << " rhs=" << r.rhs_coeff;
      if (!r.detail.empty()) os << " (" << r.detail << ")";
      for (const auto& [k, v] : r.env) os << " " << k << "=" << v;
    }
    os << "\n";
  }
  return os.str();
}

int run(const RunConfig& c, std::ostream& out) {
  if (c.command == "list") {
    out << (c.format == Format::Json ? list_json() : list_text());
    return 0;
  }
  const int trials = c.trials.value_or(c.command == "pairs" ? 1 : 3);
  if (trials < 1) throw ParseError("--trials must be at least 1");
  if (c.order && *c.order < 1) throw ParseError("--order must be at least 1");
  std::vector<Job> jobs;
  if (c.command == "verify") {
    const IdentityDef id = find_identity(c.identity, c.pair);
    if (c.mutation && std::find(id.mutations.begin(), id.mutations.end(), *c.mutation) == id.mutations.end()) {
      throw ParseError("identity '" + id.name + "' has no mutation '" + *c.mutation + "'");
    }
    add_identity_jobs(jobs, id, c, trials, pinned_params(c.params));
  } else if (c.command == "verify-all") {
    for (const auto& id : registry()) add_identity_jobs(jobs, id, c, trials, {});
  } else if (c.command == "pairs") {
    const int order = c.order.value_or(40);
    for (const auto& pair : builtin_pairs()) {
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
        jobs.push_back([pair, seed, order, nmax = c.nmax]() {
          try {
            VerificationReport r = verify_wp_relation(pair, sample_pair_env(pair, seed), nmax, order);
            r.seed = seed;
            return r;
          } catch (const Error& e) {
            return failed_setup(pair.name, seed, order, e);
          }
        });
      }
    }
  } else if (c.command == "cross-checks") {
    const int order = c.order.value_or(40);
    std::vector<std::function<std::vector<VerificationReport>()>> groups;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
      groups.emplace_back([seed, order]() { return cross_checks(seed, order); });
    }
    std::vector<VerificationReport> reports;
    for (auto& g : groups) {
      try {
        for (auto& r : g()) reports.push_back(std::move(r));
      } catch (const Error& e) {
        reports.push_back(failed_setup("cross-checks", c.seed, order, e));
      }
    }
    std::stable_sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) {
      return std::tie(x.name, x.seed) < std::tie(y.name, y.seed);
    });
    out << emit_report(reports, c.format, c.timing);
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); }) ? 0 : 1;
  } else {
    throw ParseError("unknown command '" + c.command + "'");
  }
  const std::vector<VerificationReport> reports = run_jobs(jobs, c.jobs);
  out << emit_report(reports, c.format, c.timing);
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); }) ? 0 : 1;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  int order = 40;
  int trials = 3;
  std::string format = "text";
  std::string pair;
  std::string mutation;
  CLI::App app{"exact verification of q-series identities", "qverify"};
  configure(app, c, order, trials, format, pair, mutation);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  finish(app, c, order, trials, format, pair, mutation);
  try {
    return run(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qv
