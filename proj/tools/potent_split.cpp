// Command-line front end: decompose matrices over finite fields into a
// p-potent part plus a nilpotent part, verify certificates, and run the
// exhaustive study commands.
//
// Exit codes: 0 success, 1 verification or claim failure, 2 parse or input
// error, 3 trace outside the prime subfield, 4 not nonderogatory.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "potent/potent.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw potent::Error("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& out_path, const std::string& payload) {
  std::string body = payload;
  if (body.empty() || body.back() != '\n') body += "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw potent::Error("cannot open output file '" + out_path + "'");
  out << body;
}

std::string matrix_rows(const potent::Matrix& m) {
  std::string s;
  for (uint32_t i = 0; i < m.rows(); ++i) {
    for (uint32_t j = 0; j < m.cols(); ++j) {
      if (j) s += " ";
      s += potent::to_string(m.at(i, j));
    }
    s += "\n";
  }
  return s;
}

potent::Field make_field(uint32_t p, uint32_t m, const std::string& modulus) {
  std::string header = "field: p=" + std::to_string(p) + " m=" + std::to_string(m);
  if (!modulus.empty()) header += " modulus=" + modulus;
  return potent::parse_field_header(header);
}

uint32_t default_threads() {
  if (const char* env = std::getenv("POTENT_SPLIT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 256) return static_cast<uint32_t>(v);
    std::cerr << "warning: ignoring bad POTENT_SPLIT_THREADS='" << env << "'\n";
  }
  return 1;
}

int cmd_decompose(const std::string& in, const std::string& out, bool json) {
  potent::Matrix a = potent::parse_matrix_text(slurp(in));
  potent::Decomposition d = potent::decompose(a);
  if (json) {
    emit(out, potent::decomposition_to_json(d).dump(2));
    return 0;
  }
  std::string s = potent::render_field_header(a.field()) + "\n";
  s += "n: " + std::to_string(a.rows()) + "\n";
  s += "route: " + std::string(potent::route_tag_name(d.route.tag)) + " (" +
       d.route.detail + ")\n";
  s += "params: k=" + std::to_string(d.params.k) + " a=" + std::to_string(d.params.a) +
       " l=" + std::to_string(d.params.l) + " t=" + std::to_string(d.params.t) + "\n";
  s += "checks: sum_ok=" + std::to_string(d.checks.sum_ok) +
       " p_potent_ok=" + std::to_string(d.checks.p_potent_ok) +
       " nil_index=" + std::to_string(d.checks.nil_index) + "\n";
  s += "E:\n" + matrix_rows(d.e);
  s += "V:\n" + matrix_rows(d.v);
  emit(out, s);
  return 0;
}

int cmd_verify(const std::string& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(in));
  } catch (const nlohmann::json::exception& e) {
    throw potent::ParseError(e.what(), 1, 1);
  }
  std::optional<potent::Decomposition> d;
  try {
    d = potent::decomposition_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw potent::ParseError(e.what(), 1, 1);
  } catch (const potent::ParseError&) {
    throw;
  } catch (const potent::Error& e) {
    throw potent::ParseError(e.what(), 1, 1);
  }
  potent::Checks fresh = potent::compute_checks(d->a, d->e, d->v);
  bool ok = potent::verify_decomposition(*d) && fresh.sum_ok == d->checks.sum_ok &&
            fresh.p_potent_ok == d->checks.p_potent_ok &&
            fresh.nil_index == d->checks.nil_index;
  if (!ok) {
    std::cerr << "certificate rejected: sum_ok=" << fresh.sum_ok
              << " p_potent_ok=" << fresh.p_potent_ok
              << " nil_index=" << fresh.nil_index << "\n";
    return 1;
  }
  std::cout << "certificate ok: route=" << potent::route_tag_name(d->route.tag)
            << " nil_index=" << fresh.nil_index << "\n";
  return 0;
}

int cmd_companion(const std::string& in, const std::string& out, bool json) {
  potent::Matrix a = potent::parse_matrix_text(slurp(in));
  auto [c, w] = potent::companion_form(a);
  if (json) {
    nlohmann::json j;
    j["field"] = potent::field_to_json(a.field());
    j["n"] = c.size();
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& e : c.coeffs()) coeffs.push_back(potent::to_string(e));
    j["coeffs"] = coeffs;
    j["p"] = potent::matrix_to_json(w.p);
    j["p_inv"] = potent::matrix_to_json(w.p_inv);
    emit(out, j.dump(2));
    return 0;
  }
  std::string s = "coeffs:";
  for (const auto& e : c.coeffs()) s += " " + potent::to_string(e);
  s += "\nP:\n" + matrix_rows(w.p);
  emit(out, s);
  return 0;
}

int cmd_check_trace(const std::string& in, const std::string& out, bool json) {
  potent::Matrix a = potent::parse_matrix_text(slurp(in));
  auto t = potent::check_trace_condition(a);
  if (!t)
    throw potent::TraceNotPrimeSubfield("trace " + potent::to_string(a.trace()) +
                                        " is not an integer multiple of unity");
  if (json)
    emit(out, nlohmann::json{{"t", *t}}.dump(2));
  else
    emit(out, "t: " + std::to_string(*t));
  return 0;
}

int cmd_sweep(uint32_t p, uint32_t m, const std::string& modulus, uint32_t n,
              uint32_t threads, const std::string& out, bool json) {
  potent::Field f = make_field(p, m, modulus);
  potent::SweepReport r = potent::exhaustive_sweep(f, n, threads);
  if (json) {
    emit(out, potent::sweep_report_to_json(r).dump(2));
  } else {
    std::string s = "total: " + std::to_string(r.total) + "\n";
    s += "succeeded: " + std::to_string(r.succeeded) + "\n";
    s += "trace_rejected: " + std::to_string(r.trace_rejected) + "\n";
    s += "failed: " + std::to_string(r.failed) + "\n";
    s += "elapsed_ms: " + std::to_string(r.elapsed_ms) + "\n";
    s += "histogram:\n";
    for (const auto& [tag, count] : r.histogram)
      s += "  " + std::string(potent::route_tag_name(tag)) + ": " +
           std::to_string(count) + "\n";
    for (const auto& fe : r.failure_examples) s += "failure: " + fe + "\n";
    emit(out, s);
  }
  return r.failed == 0 ? 0 : 1;
}

int cmd_sharpness(const std::string& out, bool json) {
  potent::SharpnessReport r = potent::sharpness_scan();
  if (json) {
    emit(out, potent::sharpness_report_to_json(r).dump(2));
  } else {
    std::string s;
    for (const auto& c : r.cases) {
      s += "coeffs:";
      for (const auto& e : c.coeffs) s += " " + e;
      s += " smaller_index_impossible=" + std::to_string(c.smaller_index_impossible);
      s += " nil_index=" + std::to_string(c.certificate.checks.nil_index) + "\n";
    }
    s += "all_sharp: " + std::to_string(r.all_sharp) + "\n";
    emit(out, s);
  }
  return r.all_sharp ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-potent plus nilpotent decomposition over finite fields"};
  app.require_subcommand(1);

  std::string in = "-";
  std::string out = "-";
  bool json = false;
  uint32_t p = 3;
  uint32_t m = 1;
  std::string modulus;
  uint32_t n = 1;
  uint32_t threads = default_threads();

  auto* dec = app.add_subcommand("decompose", "decompose a matrix read from a file");
  dec->add_option("--in", in, "matrix file ('-' for stdin)");
  dec->add_option("--out", out, "output file ('-' for stdout)");
  dec->add_flag("--json", json, "emit the certificate as JSON");

  auto* ver = app.add_subcommand("verify", "re-verify a JSON certificate");
  ver->add_option("--in", in, "certificate file ('-' for stdin)");

  auto* comp = app.add_subcommand("companion", "companion form and witness");
  comp->add_option("--in", in, "matrix file ('-' for stdin)");
  comp->add_option("--out", out, "output file ('-' for stdout)");
  comp->add_flag("--json", json, "emit JSON");

  auto* tr = app.add_subcommand("check-trace", "trace membership in the prime subfield");
  tr->add_option("--in", in, "matrix file ('-' for stdin)");
  tr->add_option("--out", out, "output file ('-' for stdout)");
  tr->add_flag("--json", json, "emit JSON");

  auto* sw = app.add_subcommand("sweep", "decompose every companion of size n");
  sw->add_option("--p", p, "field characteristic")->required();
  sw->add_option("--m", m, "extension degree");
  sw->add_option("--modulus", modulus, "extension modulus, e.g. [1,0,1]");
  sw->add_option("--n", n, "matrix size")->required();
  sw->add_option("--threads", threads, "worker threads (default POTENT_SPLIT_THREADS or 1)");
  sw->add_option("--out", out, "output file ('-' for stdout)");
  sw->add_flag("--json", json, "emit JSON");

  auto* sh = app.add_subcommand("sharpness", "nilpotency-index sharpness study");
  sh->add_option("--out", out, "output file ('-' for stdout)");
  sh->add_flag("--json", json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dec->parsed()) return cmd_decompose(in, out, json);
    if (ver->parsed()) return cmd_verify(in);
    if (comp->parsed()) return cmd_companion(in, out, json);
    if (tr->parsed()) return cmd_check_trace(in, out, json);
    if (sw->parsed()) return cmd_sweep(p, m, modulus, n, threads, out, json);
    if (sh->parsed()) return cmd_sharpness(out, json);
  } catch (const potent::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const potent::TraceNotPrimeSubfield& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const potent::NotNonderogatory& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const potent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
