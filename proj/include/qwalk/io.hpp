#pragma once

// JSON input documents and model assembly for the command-line tool.
//
// Graph document:      {"vertices": [...], "edges": [[u, v], ...],
//                       "tessellations": [[[...], ...], [[...], ...]]}
// Bipartite document:  {"x": [...], "y": [...], "edges": [[x, y], ...]}
// Hypergraph document: {"vertices": [...], "hyperedges": [[...], ...]}
// Torus document:      {"torus": [N1, ..., Nd]}
// CMV document:        {"verblunsky": [g0, [re, im], ...]}
// Partition document:  {"omega": [...], "pi1": [[...], ...], "pi2": [[...], ...]}
//
// Schema errors carry a JSON pointer to the offending key.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qwalk/graph_ops.hpp"
#include "qwalk/models/bipartite.hpp"
#include "qwalk/models/coined.hpp"
#include "qwalk/models/lattice.hpp"
#include "qwalk/models/staggered.hpp"
#include "qwalk/random.hpp"

namespace qwalk::io {

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& pointer, const std::string& msg) { throw Error(msg, pointer); }

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail(path + ": byte " + std::to_string(e.byte), "malformed JSON");
  }
}

inline const json& member(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) fail(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ptr + "/" + key, "missing key");
  return *it;
}

inline const json& array(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array");
  return j;
}

/// A vertex or element id: a string or an integer.
inline std::string name_of(const json& j, const std::string& ptr) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(ptr, "expected a string or integer id");
}

inline std::vector<std::string> names_of(const json& j, const std::string& ptr) {
  std::vector<std::string> out;
  const auto& a = array(j, ptr);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(name_of(a[i], ptr + "/" + std::to_string(i)));
  return out;
}

inline double number_of(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

inline std::size_t lookup(const std::map<std::string, std::size_t>& idx, const std::string& name,
                          const std::string& ptr) {
  auto it = idx.find(name);
  if (it == idx.end()) fail(ptr, "unknown id '" + name + "'");
  return it->second;
}

inline std::map<std::string, std::size_t> index_of(const std::vector<std::string>& names, const std::string& ptr) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!idx.emplace(names[i], i).second) fail(ptr + "/" + std::to_string(i), "duplicate id '" + names[i] + "'");
  return idx;
}

/// Runs `f`, re-labelling library errors with the JSON pointer `ptr`.
template <class F>
auto at_pointer(const std::string& ptr, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.where().rfind("/", 0) == 0) throw;
    fail(ptr, e.what());
  }
}

inline MultiGraph read_graph(const json& j) {
  auto names = names_of(member(j, "vertices", ""), "/vertices");
  auto idx = index_of(names, "/vertices");
  const auto& es = array(member(j, "edges", ""), "/edges");
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < es.size(); ++e) {
    const std::string p = "/edges/" + std::to_string(e);
    const auto& pair = array(es[e], p);
    if (pair.size() != 2) fail(p, "an edge needs exactly two endpoints");
    edges.push_back({lookup(idx, name_of(pair[0], p + "/0"), p + "/0"), lookup(idx, name_of(pair[1], p + "/1"), p + "/1")});
  }
  return at_pointer("/edges", [&] { return MultiGraph(std::move(names), std::move(edges)); });
}

inline Partition read_classes(const json& j, const std::map<std::string, std::size_t>& idx, std::size_t n,
                              const std::string& ptr) {
  const auto& a = array(j, ptr);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const std::string p = ptr + "/" + std::to_string(c);
    std::vector<std::size_t> cls;
    const auto& members = array(a[c], p);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const std::string q = p + "/" + std::to_string(k);
      cls.push_back(lookup(idx, name_of(members[k], q), q));
    }
    classes.push_back(std::move(cls));
  }
  return at_pointer(ptr, [&] { return Partition::from_classes(n, std::move(classes)); });
}

inline TessellationCover read_tessellation_cover(const json& j) {
  auto g = read_graph(j);
  const auto& ts = array(member(j, "tessellations", ""), "/tessellations");
  if (ts.size() != 2) fail("/tessellations", "expected exactly two tessellations");
  std::map<std::string, std::size_t> idx;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) idx[g.name(v)] = v;
  auto t1 = read_classes(ts[0], idx, g.num_vertices(), "/tessellations/0");
  auto t2 = read_classes(ts[1], idx, g.num_vertices(), "/tessellations/1");
  return TessellationCover{std::move(g), std::move(t1), std::move(t2)};
}

inline BipartiteMultiGraph read_bipartite(const json& j) {
  auto xs = names_of(member(j, "x", ""), "/x");
  auto ys = names_of(member(j, "y", ""), "/y");
  auto xi = index_of(xs, "/x");
  auto yi = index_of(ys, "/y");
  const auto& es = array(member(j, "edges", ""), "/edges");
  std::vector<BipartiteEdge> edges;
  for (std::size_t e = 0; e < es.size(); ++e) {
    const std::string p = "/edges/" + std::to_string(e);
    const auto& pair = array(es[e], p);
    if (pair.size() != 2) fail(p, "a bipartite edge is [x, y]");
    edges.push_back({lookup(xi, name_of(pair[0], p + "/0"), p + "/0"), lookup(yi, name_of(pair[1], p + "/1"), p + "/1")});
  }
  return BipartiteMultiGraph(std::move(xs), std::move(ys), std::move(edges));
}

inline Hypergraph read_hypergraph(const json& j) {
  auto names = names_of(member(j, "vertices", ""), "/vertices");
  auto idx = index_of(names, "/vertices");
  const auto& hs = array(member(j, "hyperedges", ""), "/hyperedges");
  std::vector<std::vector<VertexIndex>> hes;
  for (std::size_t e = 0; e < hs.size(); ++e) {
    const std::string p = "/hyperedges/" + std::to_string(e);
    std::vector<VertexIndex> he;
    const auto& members = array(hs[e], p);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const std::string q = p + "/" + std::to_string(k);
      he.push_back(lookup(idx, name_of(members[k], q), q));
    }
    hes.push_back(std::move(he));
  }
  return at_pointer("/hyperedges", [&] { return Hypergraph(std::move(names), std::move(hes)); });
}

inline PartitionPair read_partitions(const json& j) {
  auto omega = names_of(member(j, "omega", ""), "/omega");
  auto idx = index_of(omega, "/omega");
  auto p1 = read_classes(member(j, "pi1", ""), idx, omega.size(), "/pi1");
  auto p2 = read_classes(member(j, "pi2", ""), idx, omega.size(), "/pi2");
  return PartitionPair::make(std::move(omega), std::move(p1), std::move(p2));
}

inline Torus read_torus(const json& j) {
  const auto& a = array(member(j, "torus", ""), "/torus");
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_number_integer() || a[k].get<long long>() < 1) fail("/torus/" + std::to_string(k), "expected a positive integer");
    dims.push_back(static_cast<std::size_t>(a[k].get<long long>()));
  }
  return at_pointer("/torus", [&] { return Torus(std::move(dims)); });
}

inline std::vector<cplx> read_verblunsky(const json& j) {
  const auto& a = array(member(j, "verblunsky", ""), "/verblunsky");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::string p = "/verblunsky/" + std::to_string(k);
    if (a[k].is_array()) {
      if (a[k].size() != 2) fail(p, "a complex number is [re, im]");
      out.emplace_back(number_of(a[k][0], p + "/0"), number_of(a[k][1], p + "/1"));
    } else {
      out.emplace_back(number_of(a[k], p), 0.0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Models

enum class Family { two_partition, bipartite, szegedy, coined, staggered, hypergraph, lattice, cmv };

inline Family parse_family(const std::string& s) {
  static const std::map<std::string, Family> m{
      {"two_partition", Family::two_partition}, {"partition", Family::two_partition},
      {"bipartite", Family::bipartite},         {"szegedy", Family::szegedy},
      {"coined", Family::coined},               {"staggered", Family::staggered},
      {"hypergraph", Family::hypergraph},       {"lattice", Family::lattice},
      {"cmv", Family::cmv}};
  auto it = m.find(s);
  if (it == m.end()) fail("--family", "unknown family '" + s + "'");
  return it->second;
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::two_partition: return "two_partition";
    case Family::bipartite: return "bipartite";
    case Family::szegedy: return "szegedy";
    case Family::coined: return "coined";
    case Family::staggered: return "staggered";
    case Family::hypergraph: return "hypergraph";
    case Family::lattice: return "lattice";
    case Family::cmv: return "cmv";
  }
  return "?";
}

struct ModelConfig {
  Family family = Family::coined;
  std::optional<json> graph;       // --graph document
  std::optional<json> partitions;  // --partitions document
  std::string coin = "grover";
  double theta1 = pi / 4;
  double theta2 = pi / 4;
  std::vector<std::string> marked;
  std::uint64_t seed = 0;
};

struct Model {
  Family family;
  std::variant<std::monostate, TwoPartitionWalk, BipartiteWalk, SzegedyWalk, CoinedWalk, StaggeredWalk, LatticeWalk,
               CmvWalk>
      data;
  WalkOperator walk;
  std::vector<std::pair<std::string, Partition>> locality;  // partitions the factors respect
  Partition classes;
  std::vector<std::string> class_labels;
  StateVector initial;
  std::vector<std::size_t> target;
  std::optional<MultiGraph> graph;  // underlying graph when there is one
};

namespace detail {

inline const json& need(const std::optional<json>& doc, const char* flag) {
  if (!doc) fail(flag, std::string("this family needs ") + flag);
  return *doc;
}

inline std::vector<Mat> blocks_for(const Partition& p, const std::string& coin, Rng& rng) {
  std::vector<Mat> out;
  for (const auto& c : p.classes()) {
    if (coin == "grover") out.push_back(grover_block(c.size()));
    else if (coin == "random") out.push_back(random_unitary(c.size(), rng));
    else if (coin == "identity") out.push_back(Mat::Identity(static_cast<Eigen::Index>(c.size()), static_cast<Eigen::Index>(c.size())));
    else fail("--coin", "unsupported coin '" + coin + "' (grover, random, identity)");
  }
  return out;
}

inline std::vector<VertexIndex> resolve_marked(const std::vector<std::string>& marked,
                                               const std::vector<std::string>& names) {
  std::vector<VertexIndex> out;
  for (const auto& m : marked) {
    auto it = std::find(names.begin(), names.end(), m);
    if (it == names.end()) fail("--marked", "unknown vertex '" + m + "'");
    out.push_back(static_cast<VertexIndex>(it - names.begin()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline bool contains(const std::vector<VertexIndex>& v, VertexIndex x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

inline std::vector<std::string> numbered_labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

}  // namespace detail

inline Model build_model(const ModelConfig& cfg) {
  Rng rng(cfg.seed);
  Model m{cfg.family, std::monostate{}, {}, {}, {}, {}, {}, {}, std::nullopt};
  switch (cfg.family) {
    case Family::two_partition: {
      auto pp = read_partitions(detail::need(cfg.partitions, "--partitions"));
      if (!cfg.marked.empty()) fail("--marked", "two-partition walks have no marked form");
      auto e = detail::blocks_for(pp.pi1, cfg.coin, rng);
      auto f = detail::blocks_for(pp.pi2, cfg.coin, rng);
      auto w = build_two_partition(std::move(pp), std::move(e), std::move(f));
      m.walk = w.u;
      m.locality = {{"pi1", w.omega.pi1}, {"pi2", w.omega.pi2}};
      m.classes = w.omega.pi1;
      m.class_labels = detail::numbered_labels("C", w.omega.pi1.num_classes());
      m.data = std::move(w);
      break;
    }
    case Family::hypergraph: {
      auto h = read_hypergraph(detail::need(cfg.graph, "--graph"));
      auto inc = hypergraph_incidence(h);
      auto e = detail::blocks_for(inc.partitions.pi1, cfg.coin, rng);
      auto f = detail::blocks_for(inc.partitions.pi2, cfg.coin, rng);
      auto w = build_hypergraph_walk(h, std::move(e), std::move(f));
      const auto marked = detail::resolve_marked(cfg.marked, h.names());
      for (std::size_t k = 0; k < inc.pairs.size(); ++k)
        if (detail::contains(marked, inc.pairs[k].second)) m.target.push_back(k);
      m.walk = w.u;
      m.locality = {{"pi1", w.omega.pi1}, {"pi2", w.omega.pi2}};
      m.classes = w.omega.pi1;
      for (auto v : inc.vertex_of_class) m.class_labels.push_back(h.names()[v]);
      m.data = std::move(w);
      break;
    }
    case Family::bipartite: {
      auto g = read_bipartite(detail::need(cfg.graph, "--graph"));
      auto xp = g.x_partition();
      auto yp = g.y_partition();
      auto rx = detail::blocks_for(xp, cfg.coin, rng);
      auto ry = detail::blocks_for(yp, cfg.coin, rng);
      auto w = build_bipartite(g, std::move(rx), std::move(ry));
      const auto marked = detail::resolve_marked(cfg.marked, g.x_names());
      for (EdgeIndex e = 0; e < g.num_edges(); ++e)
        if (detail::contains(marked, g.x_end(e))) m.target.push_back(e);
      m.walk = w.w;
      m.locality = {{"x", w.rx.partition}, {"y", w.ry.partition}};
      m.classes = w.rx.partition;
      for (auto x : w.x_of_class) m.class_labels.push_back(g.x_names()[x]);
      m.graph = g.as_multigraph();
      m.data = std::move(w);
      break;
    }
    case Family::szegedy: {
      auto h = read_graph(detail::need(cfg.graph, "--graph"));
      const auto marked = detail::resolve_marked(cfg.marked, h.names());
      auto s = at_pointer("--graph", [&] { return build_szegedy_search(h, {}, std::nullopt, marked); });
      for (EdgeIndex e = 0; e < s.graph_m.num_edges(); ++e)
        if (detail::contains(s.marked, s.graph_m.x_end(e))) m.target.push_back(e);
      m.walk = s.full.w;
      m.locality = {{"x", s.full.rx.partition}, {"y", s.full.ry.partition}};
      m.classes = s.full.rx.partition;
      for (auto x : s.full.x_of_class) m.class_labels.push_back(h.name(x));
      m.initial = s.initial;
      m.graph = h;
      m.data = std::move(s);
      break;
    }
    case Family::coined: {
      auto g = read_graph(detail::need(cfg.graph, "--graph"));
      const auto marked = detail::resolve_marked(cfg.marked, g.names());
      CoinedWalk w;
      if (cfg.coin == "cut" || cfg.coin == "flip" || (!marked.empty() && cfg.coin == "grover")) {
        w = build_coined_search(g, uniform_coin_vectors(g), marked,
                                cfg.coin == "flip" ? SearchCase::sign_flip : SearchCase::reflection_cut);
      } else {
        w = build_coined(g, detail::blocks_for(coin_partition(g, nullptr), cfg.coin, rng));
        if (!marked.empty()) fail("--marked", "marked vertices need --coin grover, cut or flip");
      }
      for (ArcIndex a = 0; a < w.arcs.size(); ++a)
        if (detail::contains(marked, w.arcs.terminus(a))) m.target.push_back(a);
      m.walk = w.gamma;
      m.locality = {{"coin", w.coin.partition}, {"shift", w.shift.partition}};
      m.classes = w.coin.partition;
      for (auto v : w.vertex_of_class) m.class_labels.push_back(g.name(v));
      m.graph = g;
      m.data = std::move(w);
      break;
    }
    case Family::staggered: {
      auto cover = read_tessellation_cover(detail::need(cfg.graph, "--graph"));
      const auto marked = detail::resolve_marked(cfg.marked, cover.graph.names());
      HamiltonianForm form = HamiltonianForm::adjacency;
      if (cfg.coin == "reflection") form = HamiltonianForm::reflection;
      else if (cfg.coin != "grover" && cfg.coin != "adjacency")
        fail("--coin", "staggered walks take --coin adjacency or reflection");
      auto w = at_pointer("/tessellations", [&] {
        return build_staggered(cover, form, cfg.theta1, cfg.theta2,
                               marked.empty() ? StaggeredSearch::none : StaggeredSearch::query, marked);
      });
      m.target = marked;
      m.walk = w.u;
      m.locality = {{"T1", w.cover.tess1}, {"T2", w.cover.tess2}};
      m.classes = w.cover.tess1;
      m.class_labels = detail::numbered_labels("T1.", w.cover.tess1.num_classes());
      m.graph = w.cover.graph;
      m.data = std::move(w);
      break;
    }
    case Family::lattice: {
      auto t = read_torus(detail::need(cfg.graph, "--graph"));
      const std::size_t k = 2 * t.dim();
      std::vector<Mat> coins;
      if (cfg.coin == "grover") coins = {grover_block(k)};
      else if (cfg.coin == "random")
        for (std::size_t x = 0; x < t.num_vertices(); ++x) coins.push_back(random_unitary(k, rng));
      else fail("--coin", "lattice walks take --coin grover or random");
      auto w = build_lattice(t, std::move(coins));
      std::vector<std::string> names;
      for (std::size_t x = 0; x < t.num_vertices(); ++x) names.push_back(t.name(x));
      const auto marked = detail::resolve_marked(cfg.marked, names);
      std::vector<std::size_t> keys;
      for (std::size_t s = 0; s < w.basis.size(); ++s) {
        keys.push_back(s / k);
        if (detail::contains(marked, s / k)) m.target.push_back(s);
      }
      m.walk = w.u;
      m.classes = Partition::from_keys<std::size_t>(keys);
      m.locality = {{"vertex", m.classes}};
      m.class_labels = names;
      m.graph = t.graph();
      m.data = std::move(w);
      break;
    }
    case Family::cmv: {
      auto c = at_pointer("/verblunsky", [&] { return build_cmv(read_verblunsky(detail::need(cfg.graph, "--graph"))); });
      if (!cfg.marked.empty()) fail("--marked", "CMV walks have no marked form");
      m.walk = WalkOperator::make(c.basis, to_sparse(c.cmv), "cmv");
      std::vector<std::size_t> keys;
      for (std::size_t s = 0; s < c.basis.size(); ++s) keys.push_back((s + 1) / 2);
      m.classes = Partition::from_keys<std::size_t>(keys);
      for (std::size_t i = 0; i < m.classes.num_classes(); ++i) m.class_labels.push_back(std::to_string(i));
      m.data = std::move(c);
      break;
    }
  }
  if (m.initial.basis.size() == 0) m.initial = StateVector::uniform(m.walk.basis);
  return m;
}

}  // namespace qwalk::io
