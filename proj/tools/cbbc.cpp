// Command-line front end: synthesize, check, simulate, lift, emit-sos.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "cbbc/driver.hpp"

using namespace cbbc;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

uint64_t default_seed() {
  if (const char* env = std::getenv("CBBC_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

json report_json(const CheckReport& rep) {
  json j;
  j["mode"] = rep.mode;
  j["verdict"] = verdict_name(rep.verdict);
  j["tolerance"] = rat_string(rep.tolerance);
  j["conditions"] = json::array();
  for (const auto& m : rep.margins) {
    json jm;
    jm["condition"] = m.condition;
    jm["points"] = m.points;
    if (m.worst) {
      jm["worst_margin"] = rat_decimal(*m.worst);
      jm["worst_margin_exact"] = rat_string(*m.worst);
    }
    jm["proven"] = m.proven;
    j["conditions"].push_back(jm);
  }
  j["counterexamples"] = json::array();
  for (const auto& c : rep.counterexamples) {
    json jc;
    jc["condition"] = c.condition;
    std::vector<std::string> pt;
    for (const auto& v : c.point) pt.push_back(rat_string(v));
    jc["point"] = pt;
    jc["margin"] = rat_decimal(c.margin);
    jc["margin_exact"] = rat_string(c.margin);
    if (!c.detail.empty()) jc["at"] = c.detail;
    j["counterexamples"].push_back(jc);
  }
  j["warnings"] = rep.warnings;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-Buchi barrier certificate toolkit"};
  app.require_subcommand(1);

  unsigned threads = default_threads();
  uint64_t seed = default_seed();
  bool machine = false;
  app.add_option("--threads", threads, "worker threads (output is thread-count independent)");
  app.add_option("--seed", seed, "base random seed (default: CBBC_SEED or 1)");
  app.add_flag("--machine", machine, "emit machine-readable JSON instead of text");

  std::string problem_path, cert_path, out_path, report_path, mode_str = "sampled";
  std::string tolerance_str = "0", x0_str;
  unsigned degree = 2, mult_degree = 0;
  bool have_degree_flag = false;
  long k_max_flag = -1;
  size_t horizon = 10;
  bool anywhere = false, strict_domain = false;

  auto* synth = app.add_subcommand("synthesize", "search for a certificate with the CEGIS loop");
  synth->add_option("problem", problem_path)->required();
  synth->add_option("--degree", degree)->each([&](const std::string&) { have_degree_flag = true; });
  synth->add_option("--k-max", k_max_flag, "escalation bound for UCA/NBA problems");
  synth->add_option("--out", out_path, "write the certificate file here");
  synth->add_option("--report", report_path, "write the synthesis report here");

  auto* check = app.add_subcommand("check", "check a certificate against the problem conditions");
  check->add_option("problem", problem_path)->required();
  check->add_option("certificate", cert_path)->required();
  check->add_option("--mode", mode_str)->check(CLI::IsMember({"sampled", "certified"}));
  check->add_option("--tolerance", tolerance_str);

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate a trajectory and report visit counts");
  simulate_cmd->add_option("problem", problem_path)->required();
  simulate_cmd->add_option("--x0", x0_str)->required();
  simulate_cmd->add_option("--horizon", horizon);
  simulate_cmd->add_flag("--anywhere", anywhere, "allow x0 outside the initial set");
  simulate_cmd->add_flag("--strict-domain", strict_domain, "error when f leaves the state set");

  auto* lift_cmd = app.add_subcommand("lift", "state-triplet pipeline and lifted certificate");
  lift_cmd->add_option("problem", problem_path)->required();
  lift_cmd->add_option("--degree", degree);
  lift_cmd->add_option("--out", out_path, "write the lifted certificate file here");

  auto* emit = app.add_subcommand("emit-sos", "emit the sum-of-squares program document");
  emit->add_option("problem", problem_path)->required();
  emit->add_option("--degree", degree);
  emit->add_option("--multiplier-degree", mult_degree);
  emit->add_option("--out", out_path, "write the .sosp document here");

  CLI11_PARSE(app, argc, argv);

  try {
    Problem problem = parse_problem(read_file(problem_path));
    problem.cegis.seed = seed;
    problem.cegis.threads = threads;
    if (k_max_flag >= 0) problem.cegis.k_max = static_cast<unsigned>(k_max_flag);
    unsigned use_degree = have_degree_flag ? degree : problem.degree.value_or(degree);

    if (synth->parsed()) {
      SynthesizeOutcome out = run_synthesize(problem, use_degree, problem.cegis);
      std::string cert_text;
      if (out.certificate) {
        std::string note = "synthesized (mode " + out.mode +
                           (out.k_used ? ", k=" + std::to_string(*out.k_used) : "") +
                           ", seed " + std::to_string(seed) + ")";
        CertificateCandidate c = *out.certificate;
        c.note = note;
        cert_text = write_certificate(
            c, problem.has_automaton() ? &*problem.automaton : nullptr, problem.name);
        if (!out_path.empty()) write_file(out_path, cert_text);
      }
      if (!report_path.empty()) write_file(report_path, out.result.str());
      if (machine) {
        json j;
        j["status"] = out.exit_code == 0 ? "success" : "inconclusive";
        j["mode"] = out.mode;
        if (out.k_used) j["k"] = *out.k_used;
        j["rounds"] = out.result.rounds;
        j["samples"] = out.result.samples;
        if (!out.result.detail.empty()) j["detail"] = out.result.detail;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << out.result.str();
        if (out.k_used) std::cout << "k: " << *out.k_used << "\n";
        if (out.mode == "nba" && out.exit_code == 0)
          std::cout << "conclusion: no trace of the system is in the language of "
                       "the NBA\n";
        if (!cert_text.empty()) std::cout << cert_text;
      }
      return out.exit_code;
    }

    if (check->parsed()) {
      CertificateCandidate cand = parse_certificate(
          read_file(cert_path), problem.has_automaton() ? &*problem.automaton : nullptr);
      CheckOptions opt = problem.cegis.check_options(seed);
      CheckOutcome out =
          run_check(problem, cand,
                    mode_str == "certified" ? CheckMode::Certified : CheckMode::Sampled,
                    parse_rat(tolerance_str), opt);
      if (machine)
        std::cout << report_json(out.report).dump(2) << "\n";
      else
        std::cout << out.report.str();
      return out.exit_code;
    }

    if (simulate_cmd->parsed()) {
      std::vector<Rat> x0;
      for (const auto& piece : problem_detail::split_list(x0_str))
        x0.push_back(parse_rat(piece));
      if (x0.size() != problem.system.vars.size())
        throw InputError("--x0 needs one value per state variable");
      SimulateOutcome out =
          run_simulate(problem, x0, horizon, anywhere,
                       strict_domain ? DomainPolicy::Strict : DomainPolicy::Warn);
      if (machine) {
        json j;
        j["visits"] = out.visits;
        if (out.respects_k) j["prefix_respects_k"] = *out.respects_k;
        json tr = json::array();
        for (const auto& s : out.trace) {
          std::vector<std::string> pt;
          for (const auto& v : s) pt.push_back(rat_string(v));
          tr.push_back(pt);
        }
        j["trace"] = tr;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << out.report;
      }
      return out.exit_code;
    }

    if (lift_cmd->parsed()) {
      LiftOutcome out = run_lift(problem, use_degree, problem.cegis);
      if (machine) {
        json j;
        j["status"] = out.exit_code == 0 ? "lifted" : "inconclusive";
        j["log"] = out.report.log;
        j["uncut"] = out.report.uncut;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << out.report.str();
      }
      if (out.exit_code == 0 && !out_path.empty() && out.report.lifted)
        write_file(out_path,
                   write_certificate(out.report.lifted->candidate,
                                     &out.report.unrolled, problem.name + "-lifted"));
      return out.exit_code;
    }

    if (emit->parsed()) {
      unsigned md = mult_degree == 0 ? use_degree : mult_degree;
      SosProgram prog = run_emit_sos(problem, use_degree, md);
      if (!out_path.empty())
        write_file(out_path, prog.text);
      else
        std::cout << prog.text;
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const LiftError& e) {
    std::cerr << "lift error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
