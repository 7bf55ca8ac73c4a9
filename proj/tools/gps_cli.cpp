// gps: command-line front end for the structure analyzer.
#include "gps/embedded_fixtures.hpp"
#include "gps/fixture_set.hpp"
#include "gps/suite.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kFixtureFailure = 1;
constexpr int kValidation = 2;
constexpr int kUnsupported = 3;

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string vec_str(const gps::Vec& v, size_t n) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    std::string c = v[i].str();
    std::string name = gps::frame_name(n, i);
    std::string term = c == "1" ? name : c == "-1" ? "-" + name : "(" + c + ")*" + name;
    s += s.empty() ? term : (term[0] == '-' ? " - " + term.substr(1) : " + " + term);
  }
  return s.empty() ? "0" : s;
}

void print_human(const gps::AnalysisReport& r) {
  std::cout << "structure " << r.name << " (dim " << r.dim << ")\n";
  std::cout << "minimal polynomial: " << r.minpoly_text << "\n";
  std::cout << "spectrum:\n";
  for (const auto& e : r.spectrum)
    std::cout << "  lambda = " << std::setw(8) << std::left << e.lambda << " multiplicity " << e.multiplicity
              << "  rank " << e.rank << "\n";
  std::cout << "blocks: " << r.block_type << "\n";
  std::cout << "torsions (orders 1.." << r.torsion_max << "):\n";
  for (const auto& t : r.torsions) {
    std::cout << "  n = " << t.order << ": T " << (t.t_vanishes ? "= 0" : "!= 0") << ", S "
              << (t.s_vanishes ? "= 0" : "!= 0");
    if (!t.t_witness.empty()) {
      const auto& w = t.t_witness[0];
      std::cout << "  [T entry " << w.indices[0] << w.indices[1] << w.indices[2] << " = " << w.value << "]";
    }
    std::cout << "\n";
  }
  std::cout << "Courant tensor: " << (r.minimal_torsion.empty() ? "zero" : std::to_string(r.minimal_torsion.size()) + " nonzero entries")
            << "; routes agree: " << yes_no(r.routes_agree) << "\n";
  const auto& v = r.verdicts;
  std::cout << "verdicts:\n";
  std::cout << "  minimal: " << yes_no(v.minimal);
  if (!v.courant_witness.empty())
    std::cout << "  (witness " << v.courant_witness[0] << " " << v.courant_witness[1] << " " << v.courant_witness[2] << ")";
  std::cout << "\n  non-resonant: " << yes_no(v.non_resonant);
  if (!v.resonance_witness.empty())
    std::cout << "  (witness " << v.resonance_witness[0] << ", " << v.resonance_witness[1] << ", " << v.resonance_witness[2] << ")";
  std::cout << "\n  semisimple part weak Nijenhuis: " << yes_no(v.weak_nijenhuis);
  if (!v.weak_witness.empty())
    std::cout << "  (fails for mu = " << v.weak_witness[0].mu << ", nu = " << v.weak_witness[0].nu << ")";
  std::cout << "\n  generalized Nijenhuis: " << yes_no(v.generalized_nijenhuis) << "\n";
  std::cout << "d_lambda criterion:";
  for (const auto& d : r.dlambda) std::cout << "  " << d.lambda << ": " << (d.criterion ? "holds" : "fails");
  std::cout << "\n  sum of d_lambda is d: " << yes_no(r.dlambda_sum_is_d) << "\n";
  for (const auto& f : r.spectral_failures) std::cout << "warning: " << f << "\n";
  for (const auto& f : r.block_failures) std::cout << "warning: " << f << "\n";
}

int cmd_analyze(const std::string& path, bool json, std::optional<unsigned> torsion_max) {
  auto doc = gps::load_document(path);
  auto a = gps::analyze_structure(doc.g, doc.phi, torsion_max);
  auto report = gps::make_report(doc, a);
  if (json)
    std::cout << gps::print_report(report);
  else
    print_human(report);
  return kOk;
}

int cmd_blocks(const std::string& path) {
  auto doc = gps::load_document(path);
  gps::require_skew(doc.phi);
  auto sd = gps::analyze(doc.phi);
  auto bd = gps::block_decompose(doc.phi, sd);
  std::cout << "minimal polynomial: " << sd.minpoly.str() << "\n";
  std::cout << "blocks: " << bd.type_string() << "\n";
  for (size_t i = 0; i < bd.blocks.size(); ++i) {
    const auto& b = bd.blocks[i];
    std::cout << "block " << i + 1 << ": " << b.label() << "  signature (" << b.signature.first << ","
              << b.signature.second << ")\n";
    for (size_t c = 0; c < b.chains.size(); ++c) {
      std::cout << "  chain " << c + 1 << ":";
      for (const auto& v : b.chains[c]) std::cout << "  [" << vec_str(v, doc.dim) << "]";
      std::cout << "\n";
    }
  }
  for (const auto& f : bd.failures) std::cout << "warning: " << f << "\n";
  return kOk;
}

int cmd_dlambda(const std::string& path) {
  auto doc = gps::load_document(path);
  auto a = gps::analyze_structure(doc.g, doc.phi, 1);
  std::cout << "minimal polynomial: " << a.spectral.minpoly.str() << "\n";
  for (const auto& d : a.dlambda) {
    std::cout << "d_" << d.lambda.str() << ": multiplicity " << d.mult << ", degree shifts {";
    auto shifts = d.d.degree_shifts();
    for (size_t k = 0; k < shifts.size(); ++k) std::cout << (k ? "," : "") << shifts[k];
    std::cout << "}, (ad - lambda)^" << d.mult << " d_lambda is a generalized vector: " << yes_no(d.criterion) << "\n";
  }
  std::cout << "sum of d_lambda is d: " << yes_no(a.dlambda_sums_to_d) << "\n";
  if (a.verdicts.minimal && a.verdicts.non_resonant) {
    auto bad = gps::d_lambda_membership_failures(a.spectral, a.dlambda);
    std::cout << "bracket memberships: " << (bad.empty() ? "hold" : std::to_string(bad.size()) + " failures") << "\n";
    for (const auto& gc : gps::d_lambda_grading_checks(a.g, a.spectral, a.dlambda)) {
      std::cout << "grading " << gc.grading.str() << ": " << (gc.whole ? "d" : "d_" + gc.lambda.str()) << " degrees {";
      for (size_t k = 0; k < gc.degrees.size(); ++k) std::cout << (k ? "," : "") << gc.degrees[k];
      std::cout << "} " << (gc.ok() ? "ok" : "unexpected") << "\n";
    }
  }
  return kOk;
}

int cmd_fixtures(const std::string& filter, const std::string& dir, bool verbose) {
  std::vector<std::string> errors;
  auto docs = gps::parse_fixture_texts(dir.empty() ? gps::embedded_fixtures() : gps::read_fixture_dir(dir), &errors);
  for (const auto& e : errors) std::cout << "fixture error: " << e << "\n";
  gps::AcceptanceSuite suite(std::move(docs), filter);
  auto results = suite.run();
  size_t failed = 0;
  for (const auto& a : results) {
    if (!a.pass) ++failed;
    if (!a.pass || verbose)
      std::cout << (a.pass ? "ok   " : "FAIL ") << "[" << a.criterion << "] " << a.subject << " :: " << a.name
                << (a.detail.empty() || (a.pass && !verbose) ? "" : " :: " + a.detail) << "\n";
  }
  for (const auto& line : gps::AcceptanceSuite::summarize(results, true))
    std::cout << (line.pass() ? "PASS " : "FAIL ") << (line.id ? "criterion " + std::to_string(line.id) : std::string("expectations"))
              << " (" << line.passed << "/" << line.total << ") " << line.title << "\n";
  std::cout << results.size() - failed << "/" << results.size() << " assertions pass\n";
  return failed || !errors.empty() || results.empty() ? kFixtureFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyzer for invariant generalized polynomial structures on Lie algebras"};
  app.require_subcommand(1);

  std::string file, filter, dir;
  bool json = false, verbose = false;
  std::optional<unsigned> torsion_max;

  auto* analyze = app.add_subcommand("analyze", "full analysis of an input document");
  analyze->add_option("file", file, "input JSON document")->required();
  analyze->add_flag("--json", json, "emit the JSON report");
  analyze->add_option("--torsion-max", torsion_max, "highest torsion order (default: deg P + 2)")->check(CLI::Range(0u, 64u));

  auto* fixtures = app.add_subcommand("fixtures", "run the built-in fixture suite");
  fixtures->add_option("--filter", filter, "only subjects whose name contains this string");
  fixtures->add_option("--fixture-dir", dir, "read fixtures from a directory instead of the embedded set");
  fixtures->add_flag("--verbose", verbose, "list passing assertions too");

  auto* blocks = app.add_subcommand("blocks", "block decomposition with normal chains");
  blocks->add_option("file", file, "input JSON document")->required();

  auto* dlambda = app.add_subcommand("dlambda", "d_lambda decomposition of the differential");
  dlambda->add_option("file", file, "input JSON document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*analyze) return cmd_analyze(file, json, torsion_max);
    if (*fixtures) return cmd_fixtures(filter, dir, verbose);
    if (*blocks) return cmd_blocks(file);
    if (*dlambda) return cmd_dlambda(file);
  } catch (const gps::UnsupportedSpectrum& e) {
    std::cerr << "unsupported spectrum: " << e.what() << "\n";
    return kUnsupported;
  } catch (const gps::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const gps::NotSkew& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const gps::ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
