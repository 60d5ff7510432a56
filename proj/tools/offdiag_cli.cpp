// offdiag: command-line front end.
//
//   offdiag analyze <matrix.json> [--json|--text] [--tol-rank X] [--tol-gap X] [--tol-geom X] [--seed S]
//   offdiag witness <matrix.json> [--mode det|search] [--rank K] [--budget RxS] [--seed S]
//   offdiag check [--suite schur|moebius|corners|all] [--instances N] [--seed S]
//   offdiag plot <matrix.json> --out file.svg [--what spectrum|numrange|both]
//
// Exit codes: 0 success / Holds, 1 Fails or no witness or a suite violation,
// 2 bad input or flags, 3 undecided (non-normal matrix with no witness found).

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <string>

#include "offdiag/classify.hpp"
#include "offdiag/io.hpp"
#include "offdiag/suites.hpp"
#include "offdiag/svg.hpp"

namespace {

using namespace offdiag;
using offdiag::io::json;

constexpr int kExitOk = 0;
constexpr int kExitFails = 1;
constexpr int kExitInput = 2;
constexpr int kExitUnknown = 3;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string complex_text(cplx z) {
  std::string s = fixed(z.real());
  s += z.imag() < 0 ? " - " : " + ";
  s += fixed(std::abs(z.imag())) + "i";
  return s;
}

CMatrix load_square(const std::string& path) {
  CMatrix m = io::read_matrix_file(path);
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0) throw Error(ErrorCode::InvalidArgument, "matrix is empty");
  return m;
}

std::string report_text(const ClassificationReport& r, std::uint64_t seed) {
  std::ostringstream out;
  out << "n: " << r.n << "\n";
  out << "normal: " << (r.normal ? "yes" : "no") << "\n";
  out << "spectrum:\n";
  for (const cplx& z : r.spectrum) out << "  " << complex_text(z) << "\n";
  out << "circline: " << io::to_string(r.circline.kind);
  if (r.circline.kind == CirclineKind::Line) {
    out << " (anchor " << complex_text(r.circline.line.anchor) << ", direction "
        << complex_text(r.circline.line.direction) << ")";
  } else if (r.circline.kind == CirclineKind::Circle) {
    out << " (center " << complex_text(r.circline.circle.center) << ", radius " << fixed(r.circline.circle.radius)
        << ")";
  }
  out << ", max residual " << sci(r.circline.max_residual) << " vs threshold " << sci(r.circline.threshold) << "\n";
  out << "common norm (CN): " << to_string(r.verdict_cn) << "\n";
  out << "common rank (CR): " << to_string(r.verdict_cr) << "\n";
  out << "path: " << r.path << "\n";
  if (r.canonical) {
    const CanonicalForm& f = *r.canonical;
    out << "canonical: T = " << complex_text(f.lambda) << " I + (" << complex_text(f.mu) << ") A, A "
        << (f.kind == CanonicalKind::Hermitian ? "Hermitian" : "unitary") << ", residual "
        << sci(f.reconstruction_residual) << "\n";
  }
  if (r.witness) {
    const Witness& w = *r.witness;
    out << "witness (" << w.origin << ", rank " << w.projection.rank() << "): rank NE " << w.rank_ne << " vs SW "
        << w.rank_sw << "; norm NE " << fixed(w.norm_ne) << " vs SW " << fixed(w.norm_sw) << " (gap "
        << sci(w.norm_gap()) << ")\n";
  }
  const Tolerances& t = r.tolerances;
  out << "tolerances: tol_normal " << sci(t.tol_normal) << ", tol_rank " << sci(t.tol_rank) << ", tol_geom "
      << sci(t.tol_geom) << ", tol_gap " << sci(t.tol_gap) << "\n";
  out << "seed: " << seed << "\n";
  return out.str();
}

SearchBudget parse_budget(const std::string& text) {
  static const std::regex pattern(R"((\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw Error(ErrorCode::InvalidArgument, "--budget must look like RxS, e.g. 32x200");
  }
  SearchBudget b{std::stoi(m[1]), std::stoi(m[2])};
  if (b.restarts < 1 || b.steps < 0) throw Error(ErrorCode::InvalidArgument, "--budget needs at least one restart");
  return b;
}

struct AnalyzeArgs {
  std::string input;
  Tolerances tols;
  std::uint64_t seed = 0;
  bool json_out = false;
  bool text_out = false;
};

int run_analyze(const AnalyzeArgs& a) {
  a.tols.validate();
  const CMatrix t = load_square(a.input);
  const ClassificationReport r = classify(t, a.tols, ClassifyOptions{SearchBudget{}, a.seed});
  if (a.text_out) {
    std::cout << report_text(r, a.seed);
  } else {
    std::cout << io::report_to_json(r, a.seed).dump(2) << "\n";
  }
  if (r.verdict_cn == Verdict::Fails || r.verdict_cr == Verdict::Fails) return kExitFails;
  if (r.verdict_cn == Verdict::Unknown || r.verdict_cr == Verdict::Unknown) return kExitUnknown;
  return kExitOk;
}

struct WitnessArgs {
  std::string input;
  std::string mode = "det";
  Index rank = 0;  // 0: n / 2
  std::string budget = "32x200";
  std::uint64_t seed = 0;
};

int run_witness(const WitnessArgs& a) {
  const Tolerances tols;
  const SearchBudget budget = parse_budget(a.budget);
  const CMatrix t = load_square(a.input);
  const Index n = t.rows();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "witness: need n >= 2");

  std::optional<Witness> w;
  if (a.mode == "det") {
    w = is_normal(t, tols) ? falsify_deterministic(t, tols) : falsify_schur(t, tols);
  } else {
    const Index k = a.rank == 0 ? n / 2 : a.rank;
    if (k < 1 || k >= n) throw Error(ErrorCode::InvalidArgument, "--rank must satisfy 1 <= k < n");
    w = falsify_search(t, k, budget, a.seed, tols);
  }

  json out{{"tool", io::kToolName},
           {"version", io::kToolVersion},
           {"mode", a.mode},
           {"seed", a.seed},
           {"n", n},
           {"found", w.has_value()}};
  if (!w) {
    out["witness"] = nullptr;
    std::cout << out.dump(2) << "\n";
    std::cerr << "offdiag: no witness found\n";
    return kExitFails;
  }

  // Re-verify from the serialized text, not from the in-memory projection.
  const std::string emitted = io::to_json(*w).dump();
  const Witness parsed = io::witness_from_json(io::parse_text(emitted));
  const CornerReport fresh = corner_pair(t, parsed.projection, tols);
  const bool verified = reverify(t, parsed, tols);
  out["witness"] = io::parse_text(emitted);
  out["reverification"] = json{{"rank_ne", fresh.rank_ne},
                               {"rank_sw", fresh.rank_sw},
                               {"norm_ne", fresh.norm_ne},
                               {"norm_sw", fresh.norm_sw},
                               {"norm_gap", fresh.norm_gap()},
                               {"verified", verified}};
  std::cout << out.dump(2) << "\n";
  return verified ? kExitOk : kExitFails;
}

struct CheckArgs {
  std::string suite = "all";
  Index instances = 1000;
  std::uint64_t seed = 0;
};

int run_check(const CheckArgs& a) {
  if (a.instances < 1) throw Error(ErrorCode::InvalidArgument, "--instances must be >= 1");
  std::vector<SuiteResult> results;
  if (a.suite == "schur" || a.suite == "all") results.push_back(run_schur_suite(a.instances, a.seed));
  if (a.suite == "moebius" || a.suite == "all") results.push_back(run_moebius_suite(a.instances, a.seed));
  if (a.suite == "corners" || a.suite == "all") results.push_back(run_corners_suite(a.instances, a.seed));

  bool ok = true;
  for (const SuiteResult& r : results) {
    std::cout << r.name << ": instances " << r.instances << ", max residual " << sci(r.max_residual)
              << ", tolerance " << sci(r.tolerance) << ", " << (r.passed() ? "PASS" : "FAIL") << "\n";
    if (r.violation) {
      std::cout << "  violation at instance " << r.violation->instance << " (seed " << a.seed << ", instance seed "
                << r.violation->seed << "): " << r.violation->detail << "\n";
    }
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitFails;
}

struct PlotArgs {
  std::string input;
  std::string out;
  std::string what = "both";
};

int run_plot(const PlotArgs& a) {
  static const std::map<std::string, svg::PlotWhat> kinds{
      {"spectrum", svg::PlotWhat::Spectrum}, {"numrange", svg::PlotWhat::NumericalRange}, {"both", svg::PlotWhat::Both}};
  const CMatrix t = load_square(a.input);
  svg::PlotOptions opts;
  opts.what = kinds.at(a.what);
  io::write_text_file(a.out, svg::render_plot(t, opts));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-diagonal corner analysis of complex matrices"};
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Decide the common-norm and common-rank properties");
  cmd_analyze->add_option("input", analyze.input, "Matrix JSON file")->required();
  cmd_analyze->add_option("--tol-rank", analyze.tols.tol_rank, "Relative singular-value cutoff for ranks");
  cmd_analyze->add_option("--tol-gap", analyze.tols.tol_gap, "Corner norm gap counted as a difference");
  cmd_analyze->add_option("--tol-geom", analyze.tols.tol_geom, "Circline fit threshold, relative to the diameter");
  cmd_analyze->add_option("--seed", analyze.seed, "Seed for the search on non-normal input");
  auto* json_flag = cmd_analyze->add_flag("--json", analyze.json_out, "JSON report (default)");
  auto* text_flag = cmd_analyze->add_flag("--text", analyze.text_out, "Human-readable report");
  json_flag->excludes(text_flag);

  WitnessArgs witness;
  auto* cmd_witness = app.add_subcommand("witness", "Construct a projection with unequal corners");
  cmd_witness->add_option("input", witness.input, "Matrix JSON file")->required();
  cmd_witness->add_option("--mode", witness.mode, "det or search")->check(CLI::IsMember({"det", "search"}));
  cmd_witness->add_option("--rank", witness.rank, "Projection rank for search mode (default n/2)");
  cmd_witness->add_option("--budget", witness.budget, "Search budget RESTARTSxSTEPS");
  cmd_witness->add_option("--seed", witness.seed, "Search seed");

  CheckArgs check;
  auto* cmd_check = app.add_subcommand("check", "Run the seeded identity suites");
  cmd_check->add_option("--suite", check.suite, "schur, moebius, corners or all")
      ->check(CLI::IsMember({"schur", "moebius", "corners", "all"}));
  cmd_check->add_option("--instances", check.instances, "Instances per suite");
  cmd_check->add_option("--seed", check.seed, "Base seed");

  PlotArgs plot;
  auto* cmd_plot = app.add_subcommand("plot", "Write an SVG of the spectrum and numerical range");
  cmd_plot->add_option("input", plot.input, "Matrix JSON file")->required();
  cmd_plot->add_option("--out", plot.out, "Output SVG path")->required();
  cmd_plot->add_option("--what", plot.what, "spectrum, numrange or both")
      ->check(CLI::IsMember({"spectrum", "numrange", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*cmd_analyze) return run_analyze(analyze);
    if (*cmd_witness) return run_witness(witness);
    if (*cmd_check) return run_check(check);
    if (*cmd_plot) return run_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "offdiag: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
