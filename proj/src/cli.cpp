// Copyright 2026 <project authors>
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvlat/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cvlat/compiler.hpp"
#include "cvlat/duality.hpp"
#include "cvlat/model_io.hpp"
#include "cvlat/partition.hpp"
#include "cvlat/reducer.hpp"
#include "cvlat/states.hpp"

namespace cvlat {

const char* const kCsvHeader = "M,delta,method,convention,re,im,residual";

namespace {

const std::set<std::string> kCommands{"partition", "duality-check", "surgery-check", "stabilizers",
                                      "compile",   "reduce",        "u1"};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(Complex z) { return fmt(z.real()) + " " + fmt(z.imag()); }

double relative(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

// Input problems that are not parse errors.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Runner {
 public:
  explicit Runner(const RunConfig& c) : cfg_(c) {}

  RunOutcome go() {
    out_.report.add("command", cfg_.command);
    if (cfg_.command == "partition")
      partition();
    else if (cfg_.command == "duality-check")
      duality();
    else if (cfg_.command == "surgery-check")
      surgery();
    else if (cfg_.command == "stabilizers")
      stabilizers();
    else if (cfg_.command == "compile")
      compile();
    else if (cfg_.command == "reduce")
      reduce();
    else
      u1();
    out_.report.add("residual", worst_);
    out_.report.add("tolerance", cfg_.tolerance);
    const bool ok = worst_ <= cfg_.tolerance && !failed_;
    out_.report.add("status", ok ? "pass" : "fail");
    out_.exit_code = ok ? kExitOk : kExitResidual;
    return std::move(out_);
  }

 private:
  Report& rep() { return out_.report; }

  void gate(double residual) {
    if (!(residual <= cfg_.tolerance)) failed_ = true;
    if (std::isnan(residual))
      worst_ = residual;
    else if (!std::isnan(worst_))
      worst_ = std::max(worst_, residual);
  }

  void row(const ModeSpace& ms, const std::string& method, Convention c, Complex z, double residual) {
    out_.rows.push_back({ms.size(), ms.spacing(), method, convention_name(c), z.real(), z.imag(), residual});
  }

  ModelFile load() {
    if (cfg_.model_path.empty()) throw InputError("--model is required for " + cfg_.command);
    ModelFile f = load_model(cfg_.model_path);
    if (cfg_.convention) f.model.convention = *cfg_.convention == "real" ? Convention::Real : Convention::Imaginary;
    if (cfg_.gauge) f.model.gauge = *cfg_.gauge;
    rep().add("model", cfg_.model_path);
    return f;
  }

  Model graph_model() {
    ModelFile f = load();
    if (f.model.graph.vertex_count() == 0) throw InputError("model file has no graph");
    try {
      f.model.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    faces_ = f.faces;
    rep().add("vertices", f.model.graph.vertex_count());
    rep().add("edges", f.model.graph.edge_count());
    rep().add("convention", convention_name(f.model.convention));
    rep().add("gauge", f.model.gauge);
    return f.model;
  }

  // Small models for the seeded corpus: 1-4 vertices, mixed potentials.
  Model random_model(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nv(1, 4), kind(0, 3), coin(0, 1);
    std::uniform_real_distribution<double> u(0.2, 1.2);
    const int n = nv(rng);
    std::vector<Edge> es;
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int ne = std::uniform_int_distribution<int>(1, n + 1)(rng);
    for (int k = 0; k < ne; ++k) {
      int a = pick(rng), b = pick(rng);
      if (a == b && n > 1) b = (a + 1) % n;
      es.push_back({a, b});
    }
    Model m;
    m.graph = DecoratedGraph(n, es);
    auto pot = [&]() {
      switch (kind(rng)) {
        case 0: return Potential::quadratic(u(rng));
        case 1: return Potential::polynomial(0, u(rng) / 2, 0, u(rng) / 4);
        case 2: return Potential::cosine(u(rng), 1.0);
        default: return Potential::polynomial(0.1 * u(rng), u(rng) / 2, 0.05 * u(rng), 0.1 * u(rng));
      }
    };
    for (int k = 0; k < ne; ++k) m.edge_potentials.push_back(pot());
    if (coin(rng)) {
      for (int v = 0; v < n; ++v) m.site_potentials.push_back(Potential::polynomial(0, u(rng) / 2, 0, 0));
    }
    m.convention = coin(rng) ? Convention::Real : Convention::Imaginary;
    return m;
  }

  // Every method that fits, compared against the first that ran.
  void partition_one(const Model& model, const std::string& prefix) {
    for (int mval : cfg_.ms) {
      const ModeSpace ms(mval);
      const std::string p = prefix + "M" + std::to_string(mval) + ".";
      rep().add(p + "delta", ms.spacing());
      std::vector<std::pair<std::string, Complex>> got;
      using Fn = PartitionResult (*)(const Model&, const ModeSpace&);
      const std::pair<const char*, Fn> methods[] = {{"bruteforce", partition_bruteforce},
                                                    {"quantum", partition_quantum},
                                                    {"network", partition_network}};
      for (const auto& [name, fn] : methods) {
        try {
          got.emplace_back(name, fn(model, ms).value);
          rep().add(p + name, fmt(got.back().second));
        } catch (const CapExceeded& e) {
          rep().add(p + name, std::string("skipped (") + e.what() + ")");
        }
      }
      if (got.empty()) throw CapExceeded("no partition method fits the dense cap at M=" + std::to_string(mval));
      double worst = 0;
      for (const auto& [name, z] : got) {
        const double r = relative(z, got.front().second);
        worst = std::max(worst, r);
        row(ms, name, model.convention, z, r);
      }
      rep().add(p + "residual", worst);
      gate(worst);
      if (model.convention == Convention::Real && model.gauge && !model.has_sites()) {
        try {
          // the gauge-fixed sum tends to |V| times the continuum value
          const Complex cont = gaussian_oracle(model) * model.graph.vertex_count();
          const double r = relative(got.front().second, cont);
          rep().add(p + "continuum", fmt(cont));
          rep().add(p + "continuum_residual", r);
          row(ms, "continuum", model.convention, cont, r);
        } catch (const std::invalid_argument&) {
        }
      }
    }
  }

  void partition() {
    if (cfg_.model_path.empty() && cfg_.samples > 0) {
      rep().add("seed", static_cast<long long>(cfg_.seed));
      rep().add("samples", cfg_.samples);
      std::mt19937_64 rng(cfg_.seed);
      for (int s = 0; s < cfg_.samples; ++s) {
        const Model m = random_model(rng);
        rep().add("sample" + std::to_string(s) + ".shape",
                  std::to_string(m.graph.vertex_count()) + "v " + std::to_string(m.graph.edge_count()) + "e " +
                      convention_name(m.convention));
        partition_one(m, "sample" + std::to_string(s) + ".");
      }
      return;
    }
    partition_one(graph_model(), "");
  }

  void duality() {
    Model model = graph_model();
    const DecoratedGraph dd = dual(dual(model.graph));
    const bool reversal = same_embedding(dd, model.graph, true);
    rep().add("dual_of_dual_is_reversal", reversal);
    if (!reversal) failed_ = true;
    for (int mval : cfg_.ms) {
      const ModeSpace ms(mval);
      const std::string p = "M" + std::to_string(mval) + ".";
      DualityReport r;
      try {
        r = duality_check(model, ms);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      rep().add("genus", r.genus);
      rep().add(p + "primal", fmt(r.primal));
      rep().add(p + "dual_plain", fmt(r.dual_plain));
      rep().add(p + "dual_sectors", fmt(r.dual_sectors));
      rep().add(p + "plain_residual", r.plain_residual);
      rep().add(p + "sector_residual", r.sector_residual);
      // the plain relation is only claimed on the sphere
      const double gated = r.genus == 0 ? std::max(r.plain_residual, r.sector_residual) : r.sector_residual;
      rep().add(p + "residual", gated);
      gate(gated);
      row(ms, "primal", model.convention, r.primal, 0);
      row(ms, "dual", model.convention, r.dual_plain, r.plain_residual);
      row(ms, "dual-sectors", model.convention, r.dual_sectors, r.sector_residual);
      if (!cfg_.out_path.empty()) {
        for (int e = 0; e < model.graph.edge_count(); ++e) {
          const std::string path =
              cfg_.out_path + ".M" + std::to_string(mval) + "." + model.graph.edge_name(e) + ".csv";
          std::ofstream os(path);
          if (!os) throw std::runtime_error("cannot write " + path);
          write_dual_csv(os, dual_potential(model.edge_potentials[e], ms, model.convention), ms);
        }
      }
    }
  }

  void surgery() {
    Model model = graph_model();
    const DecoratedGraph& g = model.graph;
    for (int mval : cfg_.ms) {
      const ModeSpace ms(mval);
      for (int e = 0; e < g.edge_count(); ++e) {
        const std::string p = "M" + std::to_string(mval) + ".edge." + g.edge_name(e) + ".";
        const double del = surgery_state_check(g, e, SurgeryBasis::Momentum, ms);
        rep().add(p + "delete", del);
        gate(del);
        if (g.edge(e).tail == g.edge(e).head) {
          rep().add(p + "merge", "skipped (self-loop)");
          continue;
        }
        const double mer = surgery_state_check(g, e, SurgeryBasis::Coordinate, ms);
        rep().add(p + "merge", mer);
        gate(mer);
      }
    }
    // 4x4 torus patch: alternate vertical edges
    const DecoratedGraph square = square_lattice(4, 4, true);
    std::vector<int> brick = brick_edges(4, 4);
    std::sort(brick.rbegin(), brick.rend());
    DecoratedGraph hex = square, tri = square;
    for (int e : brick) hex = delete_edge(hex, e);
    for (int e : brick) tri = merge_edge(tri, e);
    const ShapeSummary hs = shape_summary(hex), ts = shape_summary(tri);
    const bool hex_ok = hs.face_sizes.size() == 1 && hs.face_sizes.count(6) && hs.degrees.size() == 1 &&
                        hs.degrees.count(3) && hs.simple;
    // on a 4x4 torus the triangular quotient has wrap-around parallel edges
    const bool tri_ok = ts.face_sizes.size() == 1 && ts.face_sizes.count(3) && ts.degrees.size() == 1 &&
                        ts.degrees.count(6);
    rep().add("lattice.delete_gives_hexagonal", hex_ok);
    rep().add("lattice.merge_gives_triangular", tri_ok);
    if (!hex_ok || !tri_ok) failed_ = true;
  }

  // B_f<k> gets the label of a declared face with the same edge set.
  std::string face_label(const Generator& gen, const NullifierTableau& tab) const {
    if (gen.name.rfind("B_f", 0) != 0) return gen.name;
    std::set<int> support;
    for (std::size_t k = 0; k < tab.modes.size(); ++k)
      if (gen.z[k] != 0 && tab.modes[k].kind == ModeTag::Kind::Edge) support.insert(tab.modes[k].index);
    for (const auto& f : faces_)
      if (std::set<int>(f.edges.begin(), f.edges.end()) == support) return "B_" + f.name;
    return gen.name;
  }

  void verify_family(const std::string& family, const LatticeState& state, const NullifierTableau& tab,
                     const DecoratedGraph* g, const ModeSpace& ms) {
    const std::string p = "M" + std::to_string(ms.size()) + "." + family + ".";
    for (const Generator& gen : tab.generators) {
      double worst = 0;
      for (int a : {1, -1, 2}) worst = std::max(worst, verify_stabilizer(state, tab, gen, a));
      rep().add(p + face_label(gen, tab), describe(gen, tab, g) + " ; residual " + fmt(worst));
      gate(worst);
    }
  }

  // A family whose dense state does not fit at this M is skipped, not fatal.
  template <class F>
  void family(const std::string& name, const ModeSpace& ms, F&& verify) {
    if (cfg_.family != name && cfg_.family != "all") return;
    try {
      verify();
      ++verified_;
    } catch (const CapExceeded& e) {
      rep().add("M" + std::to_string(ms.size()) + "." + name, std::string("skipped: ") + e.what());
      last_cap_ = e.what();
    }
  }

  void stabilizers_for(const DecoratedGraph& g, bool gauge, const ModeSpace& ms) {
    family("kitaev", ms, [&] {
      const LatticeState s = gauge ? gauge_fixed_kitaev(g, ms) : kitaev_state(g, ms);
      verify_family("kitaev", s, kitaev_nullifiers(g), &g, ms);
    });
    family("extended", ms, [&] {
      verify_family("extended", extended_kitaev_state(g, ms, gauge), extended_nullifiers(g), &g, ms);
    });
    family("weighted", ms, [&] {
      WeightedGraph wg{g.vertex_count(), {}};
      for (const Edge& e : g.edges())
        if (e.tail != e.head) wg.edges.push_back({e.tail, e.head, 1.0});
      verify_family("weighted", weighted_graph_state(wg, ms), weighted_nullifiers(wg), nullptr, ms);
    });
  }

  void stabilizers() {
    if (cfg_.model_path.empty() && cfg_.samples > 0) {
      rep().add("seed", static_cast<long long>(cfg_.seed));
      rep().add("samples", cfg_.samples);
      std::mt19937_64 rng(cfg_.seed);
      for (int s = 0; s < cfg_.samples; ++s) {
        const Model m = random_model(rng);
        for (int mval : cfg_.ms) {
          Report saved = std::move(out_.report);
          out_.report = Report();
          stabilizers_for(m.graph, false, ModeSpace(mval));
          for (const auto& [k, v] : out_.report.entries()) saved.add("sample" + std::to_string(s) + "." + k, v);
          out_.report = std::move(saved);
        }
      }
      return;
    }
    const Model model = graph_model();
    for (int mval : cfg_.ms) stabilizers_for(model.graph, model.gauge, ModeSpace(mval));
    if (verified_ == 0 && !last_cap_.empty()) throw CapExceeded(last_cap_);
  }

  void compile() {
    Potential target;
    if (!cfg_.potential.empty()) {
      try {
        target = parse_potential(cfg_.potential);
      } catch (const ParseError& e) {
        throw InputError(std::string("--potential: ") + e.what());
      }
      rep().add("potential", cfg_.potential);
    } else {
      const Model model = graph_model();
      if (model.edge_potentials.empty()) throw InputError("model has no edges to compile");
      target = model.edge_potentials.front();
    }
    for (int mval : cfg_.ms) {
      const ModeSpace ms(mval);
      const std::string p = "M" + std::to_string(mval) + ".";
      CompileOptions opts;
      opts.window = cfg_.window;
      opts.steps = cfg_.steps;
      opts.strict = false;
      CompileResult res;
      try {
        res = compile_diagonal(target, cfg_.epsilon, ms, opts);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      const CompileReport& r = res.report;
      const auto c = r.counts;
      rep().add(p + "steps", r.steps);
      rep().add(p + "window", r.window);
      rep().add(p + "gates", std::to_string(c[0]) + " had, " + std::to_string(c[1]) + " lin, " +
                                 std::to_string(c[2]) + " quad, " + std::to_string(c[3]) + " quart");
      rep().add(p + "trotter_error", r.trotter_error);
      rep().add(p + "approximation_error", r.approximation_error);
      rep().add(p + "declared_error", r.declared_error);
      rep().add(p + "measured_error", r.measured_error);
      rep().add(p + "reached", r.reached);
      if (!r.reached) failed_ = true;

      // pattern against the sequence on a fixed probe vector
      Vec probe(mval);
      for (int j = 0; j < mval; ++j) probe(j) = Complex(std::cos(0.7 * j), std::sin(0.3 * j * j));
      const Vec direct = apply_sequence(res.sequence, ms, probe);
      const Vec via = simulate_pattern(emit_pattern(res.sequence, ms), probe, ms);
      const double pr = (direct - via).norm() / direct.norm();
      rep().add(p + "pattern_residual", pr);
      gate(pr);
      row(ms, "compile", Convention::Imaginary, Complex(r.measured_error, 0), r.measured_error);
      if (!cfg_.out_path.empty()) {
        const std::string base = cfg_.out_path + ".M" + std::to_string(mval);
        std::ofstream seq(base + ".gates"), pat(base + ".pattern");
        if (!seq || !pat) throw std::runtime_error("cannot write " + base + ".*");
        write_sequence(seq, res.sequence);
        write_pattern(pat, emit_pattern(res.sequence, ms).pattern);
      }
    }
  }

  void certificate_report(const ReductionCertificate& cert, Complex direct, const ModeSpace& ms,
                          const std::string& p) {
    const PartitionResult z = evaluate_certificate(cert, ms);
    const double abs_err = std::abs(z.value - direct);
    const double rel = std::abs(direct) > 0 ? abs_err / std::abs(direct) : abs_err;
    rep().add(p + "lattice", std::to_string(cert.lattice.width) + "x" + std::to_string(cert.lattice.height));
    rep().add(p + "kept_edges", cert.plan.kept_count());
    rep().add(p + "gadgets", static_cast<int>(cert.gadgets.size()));
    rep().add(p + "well_formed", certificate_well_formed(cert));
    rep().add(p + "direct", fmt(direct));
    rep().add(p + "certificate", fmt(z.value));
    rep().add(p + "absolute_error", abs_err);
    rep().add(p + "relative_error", rel);
    rep().add(p + "declared_error", cert.declared_error);
    rep().add(p + "within_epsilon", cert.within_epsilon);
    // the certificate vouches for its own bound
    if (!certificate_well_formed(cert) || !(abs_err <= cert.declared_error * (1 + 1e-9) + 1e-12 * std::abs(direct)))
      failed_ = true;
    row(ms, "certificate", Convention::Imaginary, z.value, rel);
    row(ms, "direct", Convention::Imaginary, direct, 0);
    if (!cfg_.out_path.empty()) {
      const std::string path = cfg_.out_path + ".M" + std::to_string(ms.size()) + ".cert";
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot write " + path);
      write_certificate(os, cert);
    }
  }

  void reduce() {
    const Model model = graph_model();
    rep().add("epsilon", cfg_.epsilon);
    for (int mval : cfg_.ms) {
      const ModeSpace ms(mval);
      ReductionCertificate cert;
      try {
        cert = reduce_to_phi4(model, cfg_.epsilon, ms);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      certificate_report(cert, partition_network(model, ms).value, ms, "M" + std::to_string(mval) + ".");
    }
  }

  void u1() {
    ModelFile f = load();
    if (!f.u1) throw InputError("model file declares no plaquettes");
    const U1Model& u = *f.u1;
    rep().add("links", u.variables);
    rep().add("plaquettes", static_cast<int>(u.plaquettes.size()));
    rep().add("epsilon", cfg_.epsilon);
    for (int mval : cfg_.ms) {
      const ModeSpace ms(mval);
      const std::string p = "M" + std::to_string(mval) + ".";
      const Complex direct = u1_partition_direct(u, ms).value;
      rep().add(p + "direct", fmt(direct));
      row(ms, "direct", Convention::Imaginary, direct, 0);
      try {
        const Complex state = u1_partition_state(u, ms).value;
        const double r = relative(state, direct);
        rep().add(p + "state", fmt(state));
        rep().add(p + "state_residual", r);
        gate(r);
        row(ms, "state", Convention::Imaginary, state, r);
      } catch (const CapExceeded& e) {
        rep().add(p + "state", std::string("skipped (") + e.what() + ")");
      }
      const ReductionCertificate cert = reduce_to_phi4(u.reducible(), cfg_.epsilon, ms);
      certificate_report(cert, direct, ms, p + "reduction.");
    }
  }

  const RunConfig& cfg_;
  RunOutcome out_;
  std::vector<NamedFace> faces_;
  double worst_ = 0;
  bool failed_ = false;
  int verified_ = 0;
  std::string last_cap_;
};

}  // namespace

void Report::add(const std::string& key, const std::string& value) {
  std::string v = value;
  std::replace(v.begin(), v.end(), '\n', ' ');
  entries_.emplace_back(key, v);
}
void Report::add(const std::string& key, double value) { add(key, fmt(value)); }
void Report::add(const std::string& key, long long value) { add(key, std::to_string(value)); }

std::string Report::str() const {
  std::string s;
  for (const auto& [k, v] : entries_) s += k + " = " + v + "\n";
  return s;
}

std::optional<std::string> Report::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

void validate(const RunConfig& c) {
  if (!kCommands.count(c.command)) throw ConfigError("unknown command '" + c.command + "'");
  if (c.ms.empty()) throw ConfigError("at least one M is needed");
  for (int m : c.ms)
    if (m < 2 || m % 2 != 0 || m > 1 << 16) throw ConfigError("M must be even and in [2, 65536], got " + std::to_string(m));
  if (c.convention && *c.convention != "real" && *c.convention != "imaginary")
    throw ConfigError("convention must be 'real' or 'imaginary'");
  if (!(c.epsilon > 0) || !std::isfinite(c.epsilon)) throw ConfigError("epsilon must be positive");
  if (!(c.tolerance >= 0) || !std::isfinite(c.tolerance)) throw ConfigError("tolerance must be non-negative");
  if (c.samples < 0 || c.samples > 10000) throw ConfigError("samples out of range");
  if (c.steps < 0 || c.window < 0) throw ConfigError("steps and window must be non-negative");
  const std::set<std::string> families{"all", "kitaev", "extended", "weighted"};
  if (!families.count(c.family)) throw ConfigError("family must be all, kitaev, extended or weighted");
  const bool corpus = c.samples > 0 && (c.command == "partition" || c.command == "stabilizers");
  const bool potential = c.command == "compile" && !c.potential.empty();
  if (c.model_path.empty() && !corpus && !potential) throw ConfigError("--model is required for " + c.command);
}

RunOutcome run(const RunConfig& config) {
  RunOutcome fail;
  fail.exit_code = kExitInput;
  fail.report.add("command", config.command);
  try {
    validate(config);
    return Runner(config).go();
  } catch (const ParseError& e) {
    fail.report.add("error", e.what());
    fail.report.add("line", e.line());
    fail.report.add("column", e.column());
  } catch (const CapExceeded& e) {
    fail.report.add("error", std::string("cap exceeded: ") + e.what());
  } catch (const ConfigError& e) {
    fail.report.add("error", e.what());
  } catch (const InputError& e) {
    fail.report.add("error", e.what());
  } catch (const std::invalid_argument& e) {
    fail.report.add("error", e.what());
  }
  fail.report.add("status", "error");
  return fail;
}

void write_csv_rows(std::ostream& os, const std::vector<CsvRow>& rows) {
  for (const auto& r : rows)
    os << r.m << ',' << fmt(r.delta) << ',' << r.method << ',' << r.convention << ',' << fmt(r.re) << ','
       << fmt(r.im) << ',' << fmt(r.residual) << '\n';
}

void export_csv(const std::string& path, const std::vector<CsvRow>& rows) {
  bool fresh = true;
  {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (in && in.tellg() > 0) fresh = false;
  }
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  if (fresh) os << kCsvHeader << '\n';
  write_csv_rows(os, rows);
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Discretized scalar field partition functions as stabilizer-state overlaps"};
  app.add_option("command", cfg.command, "partition | duality-check | surgery-check | stabilizers | compile | reduce | u1")
      ->required();
  app.add_option("-m,--model", cfg.model_path, "model file");
  app.add_option("-M,--modes", cfg.ms, "grid sizes, e.g. -M 8 16 32")->delimiter(',');
  std::string convention, gauge;
  app.add_option("--convention", convention, "imaginary | real (overrides the model file)");
  app.add_option("--gauge", gauge, "on | off (overrides the model file)");
  app.add_option("--epsilon", cfg.epsilon, "compiler / reduction target error");
  app.add_option("--tolerance", cfg.tolerance, "residual threshold for exit code 1");
  app.add_option("--report", cfg.report_path, "report file (default stdout)");
  app.add_option("--csv", cfg.csv_path, "CSV file, appended");
  app.add_option("--out", cfg.out_path, "prefix for artifacts (gates, patterns, certificates, dual tables)");
  app.add_option("--seed", cfg.seed, "seed for the random corpus");
  app.add_option("--samples", cfg.samples, "random corpus size when no model is given");
  app.add_option("--family", cfg.family, "stabilizer family: all | kitaev | extended | weighted");
  app.add_option("--potential", cfg.potential, "compile target, e.g. 'poly 0 0 1'");
  app.add_option("--steps", cfg.steps, "force commutator steps for cubic terms");
  app.add_option("--window", cfg.window, "labels checked by the compiler (0: M/2)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (!convention.empty()) cfg.convention = convention;
  if (!gauge.empty()) {
    if (gauge != "on" && gauge != "off") {
      err << "error: --gauge must be on or off\n";
      return kExitInput;
    }
    cfg.gauge = gauge == "on";
  }

  const RunOutcome res = run(cfg);
  if (res.exit_code == kExitInput) {
    if (auto e = res.report.find("error")) err << "error: " << *e << "\n";
  }
  try {
    if (cfg.report_path.empty()) {
      out << res.report.str();
    } else {
      std::ofstream os(cfg.report_path);
      if (!os) throw std::runtime_error("cannot write " + cfg.report_path);
      os << res.report.str();
    }
    if (!cfg.csv_path.empty() && res.exit_code != kExitInput) export_csv(cfg.csv_path, res.rows);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return res.exit_code;
}

}  // namespace cvlat
