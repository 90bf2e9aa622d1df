// Acceptance runner: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number; the CLI path for the determinism check comes
// from the build.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "stable_extrema/verify.hpp"

#ifndef STABLE_EXTREMA_CLI
#define STABLE_EXTREMA_CLI "stable-extrema"
#endif

using namespace stable_extrema;

namespace {

struct Outcome {
  std::vector<SuiteReport> suites;
  std::string extra_failure;  // for criteria that are not residual checks
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

Parameters rat(long m, long n, double rho) { return make_params(RationalAlpha::make(m, n), rho); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the CLI twice with the same arguments and compares the output files.
std::string same_bytes(const std::string& args, const std::string& stem) {
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    const std::string out = stem + "." + std::to_string(rep);
    std::remove(out.c_str());
    const std::string cmd = std::string(STABLE_EXTREMA_CLI) + " " + args + " --output " + out + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) != 0) return "`" + cmd + "` exited with " + std::to_string(rc);
    const std::string body = slurp(out);
    if (body.empty()) return "empty output from `" + cmd + "`";
    if (rep == 0) first = body;
    else if (body != first) return "outputs differ for `" + args + "`";
  }
  return "";
}

std::vector<Criterion> criteria() {
  const double s2 = std::sqrt(2.0);
  std::vector<Criterion> c;
  c.push_back({1, "phi agrees across evaluation methods (1e-8 relative)", 30, [=] {
                 Outcome o;
                 for (const auto& p : {rat(3, 2, 2.0 / 3.0), rat(3, 2, 1.0 / 3.0), rat(3, 2, 0.55), rat(4, 5, 0.5), make_params(s2, 0.45)}) {
                   o.suites.push_back(verify_phi_methods(p, {0.3, 0.7, 1.0, 2.0}));
                 }
                 return o;
               }});
  c.push_back({2, "functional equations on 100 random points and quasi-periodicity (1e-9)", 60, [=] {
                 Outcome o;
                 o.suites.push_back(verify_functional_equations_random(100, 2024));
                 for (const auto& p : {make_params(1.5, 0.55), make_params(0.8, 0.3), make_params(s2, 0.45), make_params(0.45, 0.7)}) {
                   o.suites.push_back(verify_quasi_periodicity(p));
                 }
                 return o;
               }});
  c.push_back({3, "F(z; tau) identities and rational closed form (1e-10)", 30, [] {
                 return Outcome{{verify_f_identities()}, ""};
               }});
  c.push_back({4, "Mellin anchors: M(1) = 1, Brownian and C_{0,1} closed forms", 30, [] {
                 return Outcome{{verify_mellin_anchors(std::nullopt)}, ""};
               }});
  c.push_back({5, "numerical residues match closed-form coefficients (1e-6)", 60, [=] {
                 return Outcome{{verify_residues(make_params(s2, 0.45)), verify_residues(rat(3, 2, 1.0 / 3.0))}, ""};
               }});
  c.push_back({6, "density series vs inversion (1e-6), mass and first moment (1e-5)", 300, [] {
                 return Outcome{{verify_density(rat(3, 2, 2.0 / 3.0), {0, 1, true}), verify_density(rat(3, 2, 1.0 / 3.0), {1, 2, true})}, ""};
               }});
  c.push_back({7, "Brownian supremum density by inversion (1e-7)", 30, [] { return Outcome{{verify_brownian_density()}, ""}; }});
  c.push_back({8, "decay of |M(1 + i y)| at y = 200 within 15%", 30, [=] {
                 Outcome o;
                 for (const auto& p : {make_params(1.5, 0.5), make_params(2.0, 0.5), make_params(s2, 0.45)}) o.suites.push_back(verify_decay(p));
                 return o;
               }});
  // 10 minutes on four cores, scaled by the cores actually available
  const double cores = std::max(1u, std::thread::hardware_concurrency());
  c.push_back({9, "Monte-Carlo KS checks at 1e5 paths x 2^14 steps (< 0.02)", 600.0 * 4.0 / std::min(cores, 4.0), [] {
                 return Outcome{{verify_monte_carlo({})}, ""};
               }});
  c.push_back({10, "verify and simulate are byte-identical across runs", 120, [] {
                 Outcome o;
                 o.extra_failure = same_bytes("verify --suite functional-equations --alpha 1.4142135 --rho 0.45 --format json", "det_verify");
                 if (o.extra_failure.empty()) {
                   o.extra_failure = same_bytes("simulate --alpha 3/2 --rho 2/3 --paths 2000 --steps 256 --seed 7 --format csv", "det_simulate");
                 }
                 return o;
               }});
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& cr : criteria()) {
    if (!only.empty() && !only.count(cr.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o.extra_failure = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = o.extra_failure.empty() && secs < cr.budget_s;
    double worst = 0.0;
    long n_checks = 0;
    for (const auto& s : o.suites) {
      ok = ok && s.passed();
      worst = std::max(worst, s.max_residual());
      n_checks += static_cast<long>(s.checks.size());
    }
    std::printf("criterion %2d: %s  %s  [%ld checks, max residual %.3g, %.1f s of %.0f s]\n", cr.id, ok ? "PASS" : "FAIL",
                cr.title.c_str(), n_checks, worst, secs, cr.budget_s);
    if (!ok) {
      ++failed;
      if (!o.extra_failure.empty()) std::printf("    %s\n", o.extra_failure.c_str());
      for (const auto& s : o.suites) {
        for (const auto& ch : s.checks) {
          if (ch.passed) continue;
          std::printf("    [%s] %s: residual %.3g, tolerance %.3g %s\n", s.name.c_str(), ch.label.c_str(), ch.residual, ch.tolerance,
                      ch.note.c_str());
        }
      }
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
