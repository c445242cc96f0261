// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "pendulab/app/commands.hpp"
#include "pendulab/core.hpp"
#include "pendulab/elliptic.hpp"
#include "pendulab/ode.hpp"

using namespace pendulab;
using namespace pendulab::app;
namespace fs = std::filesystem;

namespace {

constexpr double kConservationSeconds = 5.0;
constexpr double kFractionalSeconds = 30.0;
constexpr double kStochasticSeconds = 120.0;
constexpr double kPeriodRelTol = 1e-3;

struct Outcome {
  bool pass = true;
  std::string detail;

  void add(bool ok, const std::string& text) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + text;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string bound_text(const nlohmann::json& b) {
  if (b.is_array()) return "[" + num(b[0].get<double>()) + ", " + num(b[1].get<double>()) + "]";
  return num(b.get<double>());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Runs verify suites, appending each check and (optionally) a runtime limit.
void suites(Outcome& o, const std::vector<std::string>& names, double time_limit = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<CheckResult> all;
  for (const auto& n : names) {
    auto r = run_verify(n);
    all.insert(all.end(), r.begin(), r.end());
  }
  const double elapsed = seconds_since(start);
  for (const auto& c : all) o.add(c.pass, c.check + " " + num(c.observed) + " vs " + bound_text(c.bound));
  if (time_limit > 0.0) o.add(elapsed < time_limit, "runtime " + num(elapsed) + " s < " + num(time_limit) + " s");
}

double period_from_crossings(const Trajectory& traj, std::size_t c, double level) {
  std::vector<double> ups;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double a = traj.state(i - 1)[c] - level, b = traj.state(i)[c] - level;
    if (a < 0.0 && b >= 0.0) ups.push_back(traj.time(i - 1) + (traj.time(i) - traj.time(i - 1)) * (-a) / (b - a));
  }
  if (ups.size() < 2) return std::nan("");
  return (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
}

/// Periods as stated: 4·K(k)/(H√2) for x1 and 2·K(k)/(H√2) for x3, k = √(H/K).
void stated_periods(Outcome& o) {
  const double H = 1.0, K = 2.0;
  const std::vector<double> ic{H * std::numbers::sqrt2, 0.0, K * std::numbers::sqrt2};
  const Trajectory traj = integrate(euler_top_field(), ic, GridSpec{0.0, 20.0, 1e-3});
  const double quarter = complete_K(Modulus(std::sqrt(H / K)));
  const double stated1 = 4.0 * quarter / (H * std::numbers::sqrt2);
  const double stated3 = 2.0 * quarter / (H * std::numbers::sqrt2);
  const auto col = traj.component(2);
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  const double p1 = period_from_crossings(traj, 0, 0.0);
  const double p3 = period_from_crossings(traj, 2, 0.5 * (*lo + *hi));
  const double e1 = std::abs(p1 - stated1) / stated1, e3 = std::abs(p3 - stated3) / stated3;
  o.add(e1 <= kPeriodRelTol, "x1 period " + num(p1) + " vs stated " + num(stated1) + " (rel " + num(e1) + ")");
  o.add(e3 <= kPeriodRelTol, "x3 period " + num(p3) + " vs stated " + num(stated3) + " (rel " + num(e3) + ")");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs the CLI with `args`, stdout into `out`; returns the exit status.
int cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(PENDULAB_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / "pendulab_acceptance";
  fs::create_directories(dir);
  struct Case {
    std::string label;
    std::vector<std::string> runs;
  };
  const std::vector<Case> cases{
      {"simulate euler-top", {"simulate --system euler-top --t1 20"}},
      {"simulate pendulum-dde-h", {"simulate --system pendulum-dde-h --t1 10"}},
      {"simulate pendulum-frac-h", {"simulate --system pendulum-frac-h --t1 10 --dt 0.01"}},
      {"simulate euler-top-sde-b", {"simulate --system euler-top-sde-b --seed 5"}},
      {"ensemble pendulum-sde",
       {"ensemble --system pendulum-sde --paths 400 --threads 1", "ensemble --system pendulum-sde --paths 400 --threads 4",
        "ensemble --system pendulum-sde --paths 400"}},
      {"verify stochastic", {"verify stochastic"}},
  };
  for (const Case& c : cases) {
    std::vector<std::string> outputs;
    bool ran = true;
    for (int repeat = 0; repeat < 2; ++repeat)
      for (const auto& args : c.runs) {
        const fs::path f = dir / ("out" + std::to_string(outputs.size()));
        ran = ran && cli(args, f) == 0;
        outputs.push_back(slurp(f));
      }
    bool same = ran && !outputs.front().empty();
    for (const auto& s : outputs) same = same && s == outputs.front();
    o.add(same, c.label + " x" + std::to_string(outputs.size()) + (same ? " identical" : " differ or failed"));
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "conservation", [](Outcome& o) { suites(o, {"conservation"}, kConservationSeconds); }},
      {2, "analytic equivalence",
       [](Outcome& o) {
         suites(o, {"analytic"});
         stated_periods(o);
       }},
      {3, "correspondence", [](Outcome& o) { suites(o, {"correspondence"}); }},
      {4, "delay", [](Outcome& o) { suites(o, {"delay"}); }},
      {5, "fractional", [](Outcome& o) { suites(o, {"fractional"}, kFractionalSeconds); }},
      {6, "stochastic", [](Outcome& o) { suites(o, {"sde-convergence", "stochastic"}, kStochasticSeconds); }},
      {7, "determinism", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.add(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d %s: %s: %s\n", c.number, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
