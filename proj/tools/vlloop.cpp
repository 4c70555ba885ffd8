// Command-line front end for the loop toolkit.
//
// Exit codes: 0 success or "yes", 1 "no" (or failed checks), 2 error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vl/fnspace.hpp"
#include "vl/rewriter.hpp"
#include "vl/smp.hpp"
#include "vl/termlang.hpp"
#include "vl/verify.hpp"

namespace {

constexpr int kError = 2;

vl::Tuple parse_assignment(const std::string& text) {
  vl::Tuple out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 0 || v >= vl::kOrder)
      throw std::invalid_argument("bad assignment entry '" + item + "'");
    out.emplace_back(v);
  }
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for the 12-element nilpotent loop L"};
  app.require_subcommand(1);

  std::string term_text, term2_text, assignment, path, suite, format = "plain";
  int k = 0;
  bool witness = false;
  vl::RunConfig cfg;

  auto* eval = app.add_subcommand("eval", "Evaluate a term at a point");
  eval->add_option("term", term_text, "term s-expression")->required();
  eval->add_option("assignment", assignment, "comma-separated residues x1,x2,...")->required();

  auto* tab = app.add_subcommand("table", "Print the function table of a term");
  tab->add_option("term", term_text)->required();
  tab->add_option("--k", k, "arity (default: largest variable index)");

  auto* norm = app.add_subcommand("normalize", "Print the term normal form");
  norm->add_option("term", term_text)->required();
  norm->add_option("k", k, "arity")->required();

  auto* eq = app.add_subcommand("eq", "Decide equality of two terms in L (exit 0 equal, 1 different)");
  eq->add_option("term1", term_text)->required();
  eq->add_option("term2", term2_text)->required();
  eq->add_option("k", k, "arity")->required();

  auto* member = app.add_subcommand("clone-member", "Decide whether a table file is a term function");
  member->add_option("file", path)->required();

  auto* smp = app.add_subcommand("smp", "Decide a subpower membership instance");
  smp->add_option("file", path)->required();
  smp->add_flag("--witness", witness, "print a witness term for members");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite)->required();
  verify->add_option("--k", cfg.max_arity, "arity cap (0 = suite default)");
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--samples", cfg.samples);
  verify->add_option("--format", format)->check(CLI::IsMember({"plain", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*eval) {
      const vl::Tuple x = parse_assignment(assignment);
      std::cout << vl::evaluate(vl::parse(term_text), x).value() << '\n';
      return 0;
    }
    if (*tab) {
      const vl::Term t = vl::parse(term_text);
      vl::write_table(std::cout, vl::table(t, k ? k : std::max(t.max_var(), 1)));
      return 0;
    }
    if (*norm) {
      std::cout << vl::to_text(vl::normalize(vl::parse(term_text), k));
      return 0;
    }
    if (*eq) {
      const bool same = vl::terms_equal(vl::parse(term_text), vl::parse(term2_text), k);
      std::cout << (same ? "equal" : "different") << '\n';
      return same ? 0 : 1;
    }
    if (*member) {
      auto in = open_input(path);
      const vl::FunctionTable h = vl::read_table(in);
      const auto nf = vl::decompose(h);
      if (!nf) {
        std::cout << "not a term function\n";
        return 1;
      }
      std::cout << vl::to_string(*nf);
      return 0;
    }
    if (*smp) {
      auto in = open_input(path);
      const vl::SmpInstance inst = vl::read_instance(in);
      const vl::SmpResult res = vl::smp_decide(inst);
      std::cout << (res.member ? "member" : "non-member") << '\n';
      if (res.member && witness) std::cout << vl::print(vl::witness_term(inst, res)) << '\n';
      return res.member ? 0 : 1;
    }
    if (*verify) {
      const auto known = vl::suite_names();
      if (std::find(known.begin(), known.end(), suite) == known.end()) {
        std::cerr << "unknown suite '" << suite << "'; known suites:";
        for (const auto& s : known) std::cerr << ' ' << s;
        std::cerr << '\n';
        return kError;
      }
      cfg.format = format == "machine" ? vl::OutputFormat::machine : vl::OutputFormat::plain;
      const vl::SuiteReport report = vl::run_suite(suite, cfg);
      vl::print_report(std::cout, report, cfg.format);
      return report.passed() ? 0 : 1;
    }
  } catch (const vl::ParseError& e) {
    std::cerr << "parse error at position " << e.position() << ": " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
