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

#include "cvlat/model_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>

namespace cvlat {

ParseError::ParseError(const std::string& source, int line, int column, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  int column = 0;  // 1-based
};

std::vector<Token> tokenize(const std::string& line, int offset = 0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ':' || c == '|') {
      out.push_back({std::string(1, c), static_cast<int>(i) + 1 + offset});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ':' && line[i] != '|' &&
           line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1 + offset});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::string source, int line, std::vector<Token> tokens, int end_column)
      : source_(std::move(source)), line_(line), tokens_(std::move(tokens)), end_(end_column) {}

  [[noreturn]] void fail(const std::string& what) const {
    const int col = pos_ < tokens_.size() ? tokens_[pos_].column : end_;
    throw ParseError(source_, line_, col, what);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& what) const {
    throw ParseError(source_, line_, t.column, what);
  }
  bool done() const { return pos_ >= tokens_.size(); }
  const Token& peek() const {
    if (done()) fail("unexpected end of line");
    return tokens_[pos_];
  }
  Token next() {
    const Token t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& s) {
    if (done() || tokens_[pos_].text != s) fail("expected '" + s + "'");
    ++pos_;
  }
  bool accept(const std::string& s) {
    if (!done() && tokens_[pos_].text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  double number() {
    const Token t = next();
    double v = 0;
    const auto* end = t.text.data() + t.text.size();
    auto [p, ec] = std::from_chars(t.text.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) fail_at(t, "expected a number, got '" + t.text + "'");
    return v;
  }
  int integer() {
    const Token t = next();
    int v = 0;
    const auto* end = t.text.data() + t.text.size();
    auto [p, ec] = std::from_chars(t.text.data(), end, v);
    if (ec != std::errc() || p != end) fail_at(t, "expected an integer, got '" + t.text + "'");
    return v;
  }
  void finish() {
    if (!done()) fail("unexpected '" + tokens_[pos_].text + "'");
  }

  Potential potential() {
    Potential p;
    bool any = false;
    do {
      const Token kind = next();
      if (kind.text == "poly") {
        std::vector<double> c{0};
        while (!done() && peek().text != "|") {
          if (c.size() == 5) fail("at most four polynomial coefficients (x to x^4)");
          c.push_back(number());
        }
        if (c.size() == 1) fail_at(kind, "poly needs at least one coefficient");
        c.resize(5, 0.0);
        p = p + Potential{c, {}, {}};
      } else if (kind.text == "cos") {
        const double a = number();
        const double w = number();
        p.cosines.push_back({a, w});
      } else if (kind.text == "quad") {
        p = p + Potential::quadratic(number());
      } else if (kind.text == "zero") {
      } else {
        fail_at(kind, "unknown potential term '" + kind.text + "' (poly, cos, quad, zero)");
      }
      any = true;
    } while (accept("|"));
    if (!any) fail("empty potential");
    return p;
  }

 private:
  std::string source_;
  int line_;
  std::vector<Token> tokens_;
  int end_;
  std::size_t pos_ = 0;
};

}  // namespace

Potential parse_potential(const std::string& text) {
  LineParser lp("<potential>", 1, tokenize(text), static_cast<int>(text.size()) + 1);
  Potential p = lp.potential();
  lp.finish();
  return p;
}

ModelFile parse_model(std::istream& is, const std::string& source) {
  struct PendingEdge {
    int tail, head;
    std::string name;
    Potential potential;
  };
  struct PendingDart {
    Token token;
    int line;
  };
  ModelFile out;
  std::vector<std::string> vnames;
  bool have_vertices = false;
  std::vector<PendingEdge> edges;
  std::map<int, Potential> sites;
  std::map<int, std::pair<double, double>> coords;
  std::map<int, std::vector<PendingDart>> rotation;
  std::vector<std::pair<NamedFace, std::vector<PendingDart>>> faces;
  int links = -1;
  std::vector<std::pair<std::array<int, 4>, double>> plaquettes;

  std::string raw;
  int lineno = 0;
  auto vertex_index = [&](LineParser& lp, const Token& t) {
    if (!have_vertices) lp.fail_at(t, "'vertices' must come first");
    for (std::size_t k = 0; k < vnames.size(); ++k)
      if (vnames[k] == t.text) return static_cast<int>(k);
    lp.fail_at(t, "unknown vertex '" + t.text + "'");
  };

  while (std::getline(is, raw)) {
    ++lineno;
    LineParser lp(source, lineno, tokenize(raw), static_cast<int>(raw.size()) + 1);
    if (lp.done()) continue;
    const Token key = lp.next();
    if (key.text == "vertices") {
      if (have_vertices) lp.fail_at(key, "vertices declared twice");
      const Token first = lp.next();
      bool numeric = lp.done() && std::all_of(first.text.begin(), first.text.end(), ::isdigit);
      if (numeric) {
        const int n = std::stoi(first.text);
        if (n <= 0 || n > 4096) lp.fail_at(first, "vertex count out of range");
        for (int v = 0; v < n; ++v) vnames.push_back(std::to_string(v));
      } else {
        vnames.push_back(first.text);
        while (!lp.done()) {
          const Token t = lp.next();
          if (std::find(vnames.begin(), vnames.end(), t.text) != vnames.end())
            lp.fail_at(t, "duplicate vertex '" + t.text + "'");
          vnames.push_back(t.text);
        }
      }
      have_vertices = true;
    } else if (key.text == "convention") {
      const Token t = lp.next();
      if (t.text == "imaginary")
        out.model.convention = Convention::Imaginary;
      else if (t.text == "real")
        out.model.convention = Convention::Real;
      else
        lp.fail_at(t, "convention is 'imaginary' or 'real'");
      lp.finish();
    } else if (key.text == "gauge") {
      const Token t = lp.next();
      if (t.text != "on" && t.text != "off") lp.fail_at(t, "gauge is 'on' or 'off'");
      out.model.gauge = t.text == "on";
      lp.finish();
    } else if (key.text == "edge") {
      PendingEdge e;
      e.tail = vertex_index(lp, lp.next());
      e.head = vertex_index(lp, lp.next());
      if (lp.accept("as")) e.name = lp.next().text;
      if (e.name.empty()) e.name = std::to_string(edges.size());
      for (const auto& other : edges)
        if (other.name == e.name) lp.fail("duplicate edge name '" + e.name + "'");
      lp.expect(":");
      e.potential = lp.potential();
      lp.finish();
      edges.push_back(std::move(e));
    } else if (key.text == "site") {
      const Token vt = lp.next();
      const int v = vertex_index(lp, vt);
      if (sites.count(v)) lp.fail_at(vt, "site potential given twice");
      lp.expect(":");
      sites[v] = lp.potential();
      lp.finish();
    } else if (key.text == "coords") {
      const Token vt = lp.next();
      const int v = vertex_index(lp, vt);
      lp.expect(":");
      const double x = lp.number();
      const double y = lp.number();
      lp.finish();
      coords[v] = {x, y};
    } else if (key.text == "rotation") {
      const Token vt = lp.next();
      const int v = vertex_index(lp, vt);
      lp.expect(":");
      while (!lp.done()) rotation[v].push_back({lp.next(), lineno});
    } else if (key.text == "face") {
      NamedFace f;
      f.name = lp.next().text;
      lp.expect(":");
      std::vector<PendingDart> refs;
      while (!lp.done()) refs.push_back({lp.next(), lineno});
      faces.push_back({f, refs});
    } else if (key.text == "links") {
      links = lp.integer();
      if (links <= 0) lp.fail("link count must be positive");
      lp.finish();
    } else if (key.text == "plaquette") {
      if (links < 0) lp.fail_at(key, "'links' must come before plaquettes");
      std::array<int, 4> v{};
      for (int k = 0; k < 4; ++k) {
        const Token t = lp.peek();
        v[k] = lp.integer();
        if (v[k] < 0 || v[k] >= links) lp.fail_at(t, "link index out of range");
      }
      lp.expect(":");
      const double j = lp.number();
      lp.finish();
      plaquettes.push_back({v, j});
    } else {
      lp.fail_at(key, "unknown keyword '" + key.text + "'");
    }
  }

  if (!plaquettes.empty() || links > 0) {
    std::vector<std::array<int, 4>> ps;
    std::vector<double> js;
    for (auto& [v, j] : plaquettes) {
      ps.push_back(v);
      js.push_back(j);
    }
    U1Model u = build_u1_model(ps, js);
    u.variables = links;
    out.u1 = u;
    if (!have_vertices) return out;
  }
  if (!have_vertices) throw ParseError(source, lineno, 1, "missing 'vertices'");

  auto edge_by_name = [&](const PendingDart& d, int& index, bool& at_tail, bool need_side) {
    std::string t = d.token.text;
    at_tail = true;
    if (need_side) {
      if (t.size() < 2 || (t.back() != '+' && t.back() != '-'))
        throw ParseError(source, d.line, d.token.column, "dart needs a '+' (tail) or '-' (head) suffix");
      at_tail = t.back() == '+';
      t.pop_back();
    }
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (edges[k].name == t) {
        index = static_cast<int>(k);
        return;
      }
    throw ParseError(source, d.line, d.token.column, "unknown edge '" + t + "'");
  };

  std::vector<Edge> es;
  std::vector<std::string> enames;
  for (const auto& e : edges) {
    es.push_back({e.tail, e.head});
    enames.push_back(e.name);
    out.model.edge_potentials.push_back(e.potential);
  }
  const int n = static_cast<int>(vnames.size());
  try {
    if (!coords.empty()) {
      if (static_cast<int>(coords.size()) != n) throw ParseError(source, lineno, 1, "coords must cover every vertex");
      std::vector<std::pair<double, double>> xy;
      for (int v = 0; v < n; ++v) xy.push_back(coords[v]);
      out.model.graph = DecoratedGraph::from_coordinates(xy, es);
    } else if (!rotation.empty()) {
      std::vector<std::vector<Dart>> rot(n);
      for (auto& [v, darts] : rotation)
        for (const auto& d : darts) {
          int e = 0;
          bool tail = true;
          edge_by_name(d, e, tail, true);
          rot[v].push_back({e, tail});
        }
      out.model.graph = DecoratedGraph(n, es, rot);
    } else {
      out.model.graph = DecoratedGraph(n, es);
    }
  } catch (const std::invalid_argument& ex) {
    throw ParseError(source, lineno, 1, std::string("inconsistent graph: ") + ex.what());
  }
  out.model.graph.set_vertex_names(vnames);
  out.model.graph.set_edge_names(enames);
  if (!sites.empty()) {
    out.model.site_potentials.assign(n, Potential::zero());
    for (auto& [v, p] : sites) out.model.site_potentials[v] = p;
  }
  for (auto& [f, refs] : faces) {
    for (const auto& r : refs) {
      int e = 0;
      bool tail = true;
      edge_by_name(r, e, tail, false);
      f.edges.push_back(e);
    }
    out.faces.push_back(f);
  }
  return out;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return parse_model(in, path);
}

void write_model(std::ostream& os, const Model& m) {
  os << std::setprecision(17);
  const auto& g = m.graph;
  // default names go out as a count; "vertices 0" would read back as zero vertices
  bool default_names = true;
  for (int v = 0; v < g.vertex_count(); ++v) default_names = default_names && g.vertex_name(v) == std::to_string(v);
  os << "vertices";
  if (default_names)
    os << ' ' << g.vertex_count();
  else
    for (int v = 0; v < g.vertex_count(); ++v) os << ' ' << g.vertex_name(v);
  os << "\nconvention " << convention_name(m.convention) << "\ngauge " << (m.gauge ? "on" : "off") << '\n';
  auto pot = [&](const Potential& p) {
    if (p.is_tabulated()) throw std::invalid_argument("tabulated potentials have no text form");
    os << "poly";
    for (int k = 1; k <= 4; ++k) os << ' ' << p.coefficient(k);
    for (const auto& c : p.cosines) os << " | cos " << c.amplitude << ' ' << c.frequency;
  };
  for (int e = 0; e < g.edge_count(); ++e) {
    os << "edge " << g.vertex_name(g.edge(e).tail) << ' ' << g.vertex_name(g.edge(e).head) << " as " << g.edge_name(e)
       << ": ";
    pot(m.edge_potentials[e]);
    os << '\n';
  }
  for (std::size_t v = 0; v < m.site_potentials.size(); ++v) {
    if (m.site_potentials[v].is_zero()) continue;
    os << "site " << g.vertex_name(static_cast<int>(v)) << ": ";
    pot(m.site_potentials[v]);
    os << '\n';
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    os << "rotation " << g.vertex_name(v) << ':';
    for (const Dart& d : g.rotation(v)) os << ' ' << g.edge_name(d.edge) << (d.at_tail ? '+' : '-');
    os << '\n';
  }
}

}  // namespace cvlat
