#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ttperm/serialize.hpp"

using namespace ttperm;

namespace {

struct Options {
  std::string group;
  std::string subgroup;
  std::string ring = "Z";
  std::string format;
  std::string file;
  int max_twist = 4;
  std::optional<int> shift_min;
  std::optional<int> shift_max;
  int jobs = 1;
  int seed_bound = 0;
  bool verify = false;
};

// Exit 2 with a report on stdout.
struct Failure {
  std::string kind;
  std::string message;
  Json detail;
};

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

void checked_verify(const Json& cert) {
  auto r = verify_certificate(cert);
  if (!r.ok()) throw Failure{"verification-failure", r.failures.front(), Json{{"failures", r.failures}}};
}

int run_kos(const Options& o) {
  auto g = parse_group(o.group);
  auto h = parse_subgroup(g, o.subgroup.empty() ? "1" : o.subgroup);
  auto k = koszul_object(g, h, Ring::parse(o.ring));
  Json cert = koszul_certificate(k);
  if (o.verify) checked_verify(cert);
  if (!k.check.ok()) throw Failure{"theory-check-failure", k.check.failures.front(), cert};
  if (o.format == "text") {
    std::cout << "kos(" << g->name() << ", " << h.describe() << ") over " << o.ring << "\n"
              << k.complex->summary() << "\n";
    for (const auto& [key, v] : cert["checks"].items())
      if (v.is_boolean()) std::cout << "  " << key << ": " << (v.get<bool>() ? "yes" : "no") << "\n";
    if (o.verify) std::cout << "certificate verified\n";
  } else {
    if (o.verify) cert["verified"] = true;
    print(cert);
  }
  return 0;
}

int run_twisted(const Options& o) {
  auto g = parse_group(o.group);
  TwistedCohomology tc(g, Ring::parse(o.ring));
  int smin = o.shift_min.value_or(-tc.two_prime() * o.max_twist - 1);
  int smax = o.shift_max.value_or(0);
  auto t = twisted_table(tc, o.max_twist, smin, smax, o.jobs);
  Json cert = twisted_certificate(tc, t);
  if (o.verify) checked_verify(cert);
  if (o.format == "text") {
    std::cout << "H^{s,q}(" << g->name() << "; " << o.ring << "), case " << to_string(tc.twist_case()) << "\n";
    for (const auto& line : twisted_grid(tc, t)) std::cout << line << "\n";
    if (cert.contains("relations")) {
      std::cout << "relations:\n";
      for (const auto& r : cert["relations"]) std::cout << "  " << r.get<std::string>() << "\n";
      for (const auto& n : cert["notes"]) std::cout << "note: " << n.get<std::string>() << "\n";
    }
  } else {
    print(cert);
  }
  if (cert.contains("presentation_error")) {
    if (o.format == "text") std::cerr << cert["presentation_error"].get<std::string>() << "\n";
    return 2;
  }
  return 0;
}

int run_spectrum(const Options& o) {
  auto g = parse_group(o.group);
  std::vector<int> split;
  for (int q = 2; q <= o.seed_bound; ++q)
    if (is_prime(q) && g->order() % q != 0) split.push_back(q);
  auto x = orbit_colimit(g, split);
  auto v = validate(x);
  if (!v.ok()) throw Failure{"validation-failure", v.violations.front(), Json{{"violations", v.violations}}};
  if (o.verify) checked_verify(spectrum_certificate(g, x));
  if (o.format == "dot") {
    std::cout << export_dot(x);
  } else if (o.format == "text") {
    for (const auto& p : x.points) std::cout << p.name << "  " << p.label() << "\n";
    for (auto [a, b] : x.covers()) std::cout << x.points[a].name << " ~> " << x.points[b].name << "\n";
  } else {
    print(spectrum_certificate(g, x));
  }
  return 0;
}

int run_invert(const Options& o) {
  auto g = parse_group(o.group);
  Ring ring = Ring::parse(o.ring);
  std::vector<Subgroup> ns;
  if (o.subgroup.empty()) {
    TwistedCohomology tc(g, ring);
    ns = tc.normals();
  } else {
    ns.push_back(parse_subgroup(g, o.subgroup));
  }
  Json out = Json::array();
  for (const auto& n : ns) {
    auto u = u_complex(n, ring);
    auto r = find_homotopy_equivalence(tensor(*u, *dual(*u)), unit_complex(g, ring));
    std::string claim = "u_N (x) u_N^* ~ 1 for N = " + n.describe();
    if (r.status != EquivalenceResult::Status::Equivalent)
      throw Failure{"theory-check-failure", claim + " fails: " + r.reason, Json()};
    Json cert = equivalence_certificate(*r.equivalence, claim);
    if (o.verify) checked_verify(cert);
    if (o.format == "text")
      std::cout << claim << ": equivalent" << (o.verify ? ", certificate verified" : "") << "\n";
    out.push_back(cert);
  }
  if (o.format != "text") print(out.size() == 1 ? out[0] : out);
  return 0;
}

int run_verify(const Options& o) {
  std::stringstream buf;
  if (o.file == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(o.file);
    if (!in) throw PreconditionError("cannot open " + o.file);
    buf << in.rdbuf();
  }
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Failure{"verification-failure", std::string("not JSON: ") + e.what(), Json()};
  }
  std::vector<Json> certs = j.is_array() ? std::vector<Json>(j.begin(), j.end()) : std::vector<Json>{j};
  Json report = Json::array();
  bool ok = true;
  for (const auto& c : certs) {
    auto r = verify_certificate(c);
    ok = ok && r.ok();
    report.push_back({{"kind", r.kind}, {"ok", r.ok()}, {"failures", r.failures}});
  }
  if (o.format == "text") {
    for (const auto& r : report)
      std::cout << r["kind"].get<std::string>() << ": " << (r["ok"].get<bool>() ? "ok" : "FAILED") << "\n";
  } else {
    print(Json{{"status", ok ? "ok" : "verification-failure"}, {"certificates", report}});
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-module homotopy categories of small finite groups"};
  app.require_subcommand(1);
  Options o;
  auto formats = CLI::IsMember({"json", "text", "dot"});
  auto common = [&](CLI::App* sub, bool subgroup) {
    sub->add_option("--group", o.group, "C<n>, products such as C2xC2, or a JSON table file")->required();
    if (subgroup) sub->add_option("--subgroup", o.subgroup, "1, G, a structure name or an element list {a,b}");
    sub->add_option("--ring", o.ring, "Z, Q or F<p>");
    sub->add_flag("--verify", o.verify, "re-check the emitted certificate");
  };

  auto* kos = app.add_subcommand("kos", "Koszul object kos(G, H) with its postconditions");
  common(kos, true);
  kos->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));

  auto* tw = app.add_subcommand("twisted", "twisted cohomology table and ring presentation");
  common(tw, false);
  tw->add_option("--max-twist", o.max_twist)->check(CLI::NonNegativeNumber);
  tw->add_option("--shift-min", o.shift_min);
  tw->add_option("--shift-max", o.shift_max);
  tw->add_option("--jobs", o.jobs, "threads for the hom groups")->check(CLI::PositiveNumber);
  tw->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));

  auto* sp = app.add_subcommand("spectrum", "spectrum of K(G, Z) for cyclic G");
  sp->add_option("--group", o.group)->required();
  sp->add_option("--format", o.format)->check(formats);
  sp->add_option("--seed-bound", o.seed_bound, "give ordinary primes up to this bound their own point");
  sp->add_flag("--verify", o.verify);

  auto* inv = app.add_subcommand("invert", "u_N (x) u_N^* ~ 1 with an explicit equivalence");
  common(inv, true);
  inv->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));

  auto* ver = app.add_subcommand("verify", "re-check a JSON certificate file");
  ver->add_option("file", o.file, "certificate, or - for stdin")->required();
  ver->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*kos) return run_kos(o);
    if (*tw) return run_twisted(o);
    if (*sp) return run_spectrum(o);
    if (*inv) return run_invert(o);
    return run_verify(o);
  } catch (const Failure& f) {
    print(Json{{"status", f.kind}, {"message", f.message}, {"detail", f.detail}});
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const TheoryCheckFailure& e) {
    print(Json{{"status", "theory-check-failure"}, {"message", e.what()}});
    return 2;
  } catch (const BoundExceeded& e) {
    print(Json{{"status", "bound-exceeded"}, {"message", e.what()}});
    return 2;
  } catch (const Error& e) {
    print(Json{{"status", "error"}, {"message", e.what()}});
    return 2;
  }
}
